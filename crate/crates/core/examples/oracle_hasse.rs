//! Exhaustive staircase enumeration and the Hasse diagram of the cut lattice.
//!
//! ```text
//! cargo run --example oracle_hasse > hasse.dot
//! ```

use mscut::bag::{build_bag, AdjacencyMode, StairDirection};
use mscut::cut::Params;
use mscut::floorplan::{generate_floorplan, GenSpec};
use mscut::oracle::{build_hasse, enumerate_staircases, oracle_best, verify_chain};
use mscut::search::{search, SearchMode};

fn main() -> mscut::Result<()> {
    let fp = generate_floorplan(&GenSpec::new(9, 12, 4))?;
    let bag = build_bag(&fp, StairDirection::Mis, AdjacencyMode::Mosaic)?;
    let set = enumerate_staircases(&bag, 20)?;
    let hasse = build_hasse(&set);
    let params = Params::new(0.4, 0.3)?;
    let best = oracle_best(&set, &fp, &bag, &params)?;
    eprintln!("{} staircases, {} covering edges, optimum {:.6}", set.count(), hasse.edges.len(), best.gain);

    let bfs = search(&bag, &fp, &params, SearchMode::Bfs, 0, 1)?;
    let rand = search(&bag, &fp, &params, SearchMode::Rand, 7, 1)?;
    let a = bfs.chains[0].left_sets();
    let b = rand.chains[0].left_sets();
    eprintln!(
        "BFS {:.6} (chain ok {}), RAND {:.6} (chain ok {})",
        bfs.best.gain,
        verify_chain(&a, &hasse),
        rand.best.gain,
        verify_chain(&b, &hasse)
    );
    print!("{}", hasse.to_dot(&fp, &[(&a, "red"), (&b, "blue")]));
    Ok(())
}
