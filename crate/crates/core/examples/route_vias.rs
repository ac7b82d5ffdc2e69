//! Route nets along the tree and count vias and regional congestion.

use mscut::cut::Params;
use mscut::floorplan::{generate_floorplan, GenSpec};
use mscut::route::{congestion_csv, route_nets, via_summary, RouteModel};
use mscut::search::SearchMode;
use mscut::tree::{build_msc_tree, TreeOptions};

fn main() -> mscut::Result<()> {
    let fp = generate_floorplan(&GenSpec::new(100, 300, 2))?;
    let model = RouteModel::default();
    for beta in [0.0, 0.3] {
        let tree = build_msc_tree(&fp, &TreeOptions::new(Params::new(0.4, beta)?, SearchMode::Bfs, 0))?;
        let (routed, cong) = route_nets(&tree, &fp, &model)?;
        let s = via_summary(&routed);
        println!(
            "beta {beta}: {} nets, {} vias, {} bends, {} staircase bends crossed, length {:.1}, congestion avg {:.3} max {:.3}",
            s.nets_routed, s.total_vias, s.total_bends, s.crossed_bends, s.total_length, cong.average, cong.max
        );
        if beta == 0.0 {
            print!("{}", congestion_csv(&cong)?.lines().take(6).collect::<Vec<_>>().join("\n"));
            println!();
        }
    }
    Ok(())
}
