//! BFS, DFS and randomized chain searches side by side.

use mscut::bag::{build_bag, AdjacencyMode, StairDirection};
use mscut::cut::Params;
use mscut::floorplan::{generate_floorplan, GenSpec};
use mscut::search::{search, SearchMode, DEFAULT_TRIALS};

fn main() -> mscut::Result<()> {
    let fp = generate_floorplan(&GenSpec::new(40, 120, 5))?;
    let bag = build_bag(&fp, StairDirection::Mis, AdjacencyMode::Mosaic)?;
    let params = Params::new(0.4, 0.2)?;

    for mode in SearchMode::ALL {
        let r = search(&bag, &fp, &params, mode, 11, DEFAULT_TRIALS)?;
        println!(
            "{:<4} chains {} explored {:>3} best |L|={:<3} balr {:.3} k_c {:<3} z {:<2} gain {:.5}",
            mode.name(),
            r.chains.len(),
            r.explored.len(),
            r.best.left.len(),
            r.best.balr,
            r.best.k_c,
            r.best.z,
            r.best.gain
        );
    }
    Ok(())
}
