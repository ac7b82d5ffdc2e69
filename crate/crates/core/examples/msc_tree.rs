//! Recursive bipartition tree, per-level metrics and net routing order.

use mscut::cut::Params;
use mscut::floorplan::{generate_floorplan, GenSpec};
use mscut::search::SearchMode;
use mscut::tree::{build_msc_tree, routing_order, tree_metrics, TreeOptions};

fn main() -> mscut::Result<()> {
    let fp = generate_floorplan(&GenSpec::new(64, 150, 9))?;
    let tree = build_msc_tree(&fp, &TreeOptions::new(Params::new(0.4, 0.1)?, SearchMode::Bfs, 0))?;
    let m = tree_metrics(&tree);
    println!("height {} nodes {} mean gain {:.4}", m.height, m.node_count, m.mean_gain);
    for l in &m.levels {
        println!(
            "level {:>2}: {:>3} nodes balr {:.3} bends {:.3} netcut {:.3}",
            l.level, l.nodes, l.mean_balr, l.mean_bend_ratio, l.mean_netcut_ratio
        );
    }

    for node in tree.nodes().into_iter().take(7) {
        println!(
            "{:<6} {} {:>2} blocks -> {:>2}/{:<2} z={}",
            node.display_path(),
            node.stype.name(),
            node.blocks.len(),
            node.cut.left.len(),
            node.blocks.len() - node.cut.left.len(),
            node.cut.z
        );
    }

    let order = routing_order(&tree);
    for e in order.iter().take(10) {
        println!("{:>5} at {:<6} level {}", fp.nets()[e.net.0].name, e.path, e.level);
    }
    println!("{} nets ordered", order.len());
    Ok(())
}
