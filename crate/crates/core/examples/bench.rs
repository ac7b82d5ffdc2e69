//! Tree construction time per search mode, normalized to BFS.
//!
//! ```text
//! cargo run --release --example bench
//! ```

use mscut::cut::Params;
use mscut::floorplan::GenSpec;
use mscut::report::{bench, BenchConfig, InputSpec};

fn main() -> mscut::Result<()> {
    let inputs = [(100, 400), (300, 1632)]
        .into_iter()
        .map(|(n, k)| InputSpec::Generate {
            name: format!("n{n}"),
            spec: GenSpec::new(n, k, 1),
        })
        .collect();
    let mut cfg = BenchConfig::new(inputs, Params::new(0.4, 0.1)?);
    cfg.repeats = 3;
    let table = bench(&cfg)?;
    print!("{}", table.to_csv()?);
    Ok(())
}
