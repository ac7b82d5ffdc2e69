//! Random slicing mosaics with a configurable net-degree distribution.

use mscut::floorplan::{generate_floorplan, stats, validate, GenSpec, ValidationMode};

fn main() -> mscut::Result<()> {
    for (n, k) in [(10, 20), (100, 400), (300, 1632)] {
        let fp = generate_floorplan(&GenSpec::new(n, k, 42))?;
        let s = stats(&fp);
        let v = validate(&fp, ValidationMode::Mosaic);
        println!("n={:<4} k={:<5} avg degree {:.3} mosaic={}", s.n, s.k, s.avg_net_degree, v.ok);
    }

    let mut spec = GenSpec::new(8, 6, 1);
    spec.aspect_range = (0.45, 0.55);
    spec.degree.max = 3;
    let fp = generate_floorplan(&spec)?;
    for b in fp.blocks() {
        println!("{:>3} {:?}", b.name, b.rect);
    }
    Ok(())
}
