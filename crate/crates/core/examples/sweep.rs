//! A small gamma/beta sweep written to a directory.
//!
//! ```text
//! cargo run --release --example sweep -- out/
//! ```

use mscut::floorplan::GenSpec;
use mscut::report::{run_sweep, InputSpec, SweepConfig};

fn main() -> mscut::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "sweep-out".into());
    let mut cfg = SweepConfig::new(vec![InputSpec::Generate {
        name: "n50".into(),
        spec: GenSpec::new(50, 120, 100),
    }]);
    cfg.instances_per_circuit = 2;
    cfg.gamma_grid = vec![0.2, 0.4, 0.6];
    cfg.beta_grid = vec![0.0, 0.2];

    let report = run_sweep(&cfg)?;
    report.write(out.as_ref())?;
    for s in report.summary() {
        println!(
            "{} {:<4} rows {:>2} gain {:.4} vias {:.1}",
            s.circuit,
            s.mode.name(),
            s.rows,
            s.gain_mean,
            s.vias_mean.unwrap_or(f64::NAN)
        );
    }
    for c in report.via_curves() {
        println!("{} {} beta={}: {:?}", c.circuit, c.mode.name(), c.beta, c.points);
    }
    println!("wrote {}", out);
    Ok(())
}
