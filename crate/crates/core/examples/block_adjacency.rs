//! Block adjacency graphs in both staircase directions, as DOT.

use mscut::bag::{build_bag, check_structure, AdjacencyMode, StairDirection};
use mscut::floorplan::{generate_floorplan, load_floorplan, GenSpec};

fn main() -> mscut::Result<()> {
    let fp = load_floorplan(include_str!("../data/f4.json"))?;
    for dir in [StairDirection::Mis, StairDirection::Mds] {
        let bag = build_bag(&fp, dir, AdjacencyMode::Mosaic)?;
        let name = |i: usize| fp.blocks()[i].name.as_str();
        let edges: Vec<String> = bag.edge_pairs().iter().map(|&(a, b)| format!("{}->{}", name(a), name(b))).collect();
        println!(
            "{}: source {} sink {} edges {}",
            dir.name(),
            fp.block(bag.source()).name,
            fp.block(bag.sink()).name,
            edges.join(" ")
        );
        print!("{}", bag.to_dot(&fp));
    }

    // A packed floorplan with a hole needs virtual source/sink edges.
    let holed = generate_floorplan(&GenSpec::new(12, 0, 3))?.without_blocks(&["b0"])?;
    let bag = build_bag(&holed, StairDirection::Mis, AdjacencyMode::Packed { eps: 0 })?;
    let rep = check_structure(&bag);
    println!(
        "packed: {} edges ({} virtual), acyclic={} unique source/sink={}",
        rep.edge_count,
        bag.virtual_edge_count(),
        rep.acyclic,
        rep.unique_source_sink
    );
    Ok(())
}
