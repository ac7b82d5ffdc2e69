//! Draw a floorplan with every staircase of its tree.

use mscut::cut::Params;
use mscut::floorplan::{generate_floorplan, GenSpec};
use mscut::report::{render_svg, render_tree_svg, Staircase, SvgOptions};
use mscut::search::SearchMode;
use mscut::tree::{build_msc_tree, TreeOptions};

fn main() -> mscut::Result<()> {
    let fp = generate_floorplan(&GenSpec::new(30, 0, 8))?;
    let tree = build_msc_tree(&fp, &TreeOptions::new(Params::new(0.4, 0.3)?, SearchMode::Dfs, 0))?;
    std::fs::write("tree.svg", render_tree_svg(&fp, &tree, &SvgOptions::default()))?;

    let root = Staircase {
        boundary: &tree.cut.boundary,
        stype: tree.stype,
        label: "root".into(),
    };
    let opts = SvgOptions {
        width: 400.0,
        show_names: false,
        ..SvgOptions::default()
    };
    std::fs::write("root.svg", render_svg(&fp, &[root], &opts))?;
    println!("wrote tree.svg and root.svg");
    Ok(())
}
