//! Load a floorplan, validate it and write it back.
//!
//! ```text
//! cargo run --example floorplan_io -- data/f4.json
//! ```

use mscut::floorplan::{load_floorplan, save_floorplan, stats, validate, ValidationMode};

fn main() -> mscut::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/f4.json").into());
    let fp = load_floorplan(&std::fs::read_to_string(&path)?)?;
    let s = stats(&fp);
    println!("{path}: {} blocks, {} nets, average degree {:.3}", s.n, s.k, s.avg_net_degree);

    for mode in [ValidationMode::Mosaic, ValidationMode::Packed] {
        let r = validate(&fp, mode);
        println!("{mode:?}: ok={} uncovered={}", r.ok, r.uncovered_area);
    }

    let holed = fp.without_blocks(&["D"])?;
    let r = validate(&holed, ValidationMode::Mosaic);
    println!("without D, mosaic: ok={} uncovered={}", r.ok, r.uncovered_area);

    let text = save_floorplan(&fp);
    assert_eq!(load_floorplan(&text)?, fp);
    println!("{text}");
    Ok(())
}
