//! Score every staircase of a small floorplan.

use mscut::bag::{build_bag, AdjacencyMode, StairDirection};
use mscut::cut::{evaluate_cut, partition_nets, BalanceType, Params};
use mscut::floorplan::load_floorplan;
use mscut::oracle::enumerate_staircases;

fn main() -> mscut::Result<()> {
    let fp = load_floorplan(include_str!("../data/f4.json"))?;
    let bag = build_bag(&fp, StairDirection::Mis, AdjacencyMode::Mosaic)?;
    let area = Params::new(0.4, 0.3)?;
    let number = area.with_baltype(BalanceType::Number);

    for left in enumerate_staircases(&bag, 20)?.ideals() {
        let names: Vec<&str> = left.iter().map(|b| fp.block(*b).name.as_str()).collect();
        let e = evaluate_cut(&fp, &bag, &left, &area)?;
        let split = partition_nets(fp.nets(), &left);
        println!(
            "{{{}}}: balr {:.4} k_c {}/{} z {}/{} segments {} gain {:.6} (by count {:.6}), sub-nets {}+{}",
            names.join(","),
            e.balr,
            e.k_c,
            e.k,
            e.z,
            e.z_max,
            e.segments,
            e.gain,
            evaluate_cut(&fp, &bag, &left, &number)?.gain,
            split.left.len(),
            split.right.len()
        );
    }
    Ok(())
}
