use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::InputSpec;
use crate::cut::Params;
use crate::error::{Error, Result};
use crate::floorplan::stats;
use crate::search::{SearchMode, DEFAULT_TRIALS};
use crate::tree::{build_msc_tree, TreeOptions};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub inputs: Vec<InputSpec>,
    #[serde(default = "all_modes")]
    pub modes: Vec<SearchMode>,
    pub params: Params,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "trials")]
    pub trials: usize,
    /// Runs per cell; the minimum time is kept.
    #[serde(default = "one")]
    pub repeats: usize,
}

fn all_modes() -> Vec<SearchMode> {
    SearchMode::ALL.to_vec()
}
fn trials() -> usize {
    DEFAULT_TRIALS
}
fn one() -> usize {
    1
}

impl BenchConfig {
    pub fn new(inputs: Vec<InputSpec>, params: Params) -> Self {
        BenchConfig {
            inputs,
            modes: all_modes(),
            params,
            seed: 0,
            trials: DEFAULT_TRIALS,
            repeats: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub circuit: String,
    pub n: usize,
    pub k: usize,
    pub mode: SearchMode,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchTable {
    pub rows: Vec<BenchRow>,
    /// Geometric mean over circuits of each mode's time divided by the BFS
    /// time on the same circuit.
    pub normalized_geomean: Vec<(SearchMode, f64)>,
}

impl BenchTable {
    pub fn seconds(&self, circuit: &str, mode: SearchMode) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.circuit == circuit && r.mode == mode)
            .map(|r| r.seconds)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(r)?;
        }
        for (mode, g) in &self.normalized_geomean {
            w.serialize(("normalized geomean", "", "", mode, g))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }
}

/// Times tree construction per `(circuit, mode)`. Loading and generating
/// floorplans is not timed.
pub fn bench(cfg: &BenchConfig) -> Result<BenchTable> {
    cfg.params.check()?;
    let mut rows = Vec::new();
    for input in &cfg.inputs {
        let fp = input.load(0)?;
        let s = stats(&fp);
        for &mode in &cfg.modes {
            let opts = TreeOptions {
                params: cfg.params,
                mode,
                seed: cfg.seed,
                trials: cfg.trials,
            };
            let mut best = f64::INFINITY;
            for _ in 0..cfg.repeats.max(1) {
                let t0 = Instant::now();
                let tree = build_msc_tree(&fp, &opts)?;
                best = best.min(t0.elapsed().as_secs_f64());
                drop(tree);
            }
            rows.push(BenchRow {
                circuit: input.name(),
                n: s.n,
                k: s.k,
                mode,
                seconds: best,
            });
        }
    }
    let mut normalized = Vec::new();
    if cfg.modes.contains(&SearchMode::Bfs) {
        for &mode in &cfg.modes {
            let logs: Vec<f64> = cfg
                .inputs
                .iter()
                .filter_map(|i| {
                    let name = i.name();
                    let base = rows.iter().find(|r| r.circuit == name && r.mode == SearchMode::Bfs)?;
                    let t = rows.iter().find(|r| r.circuit == name && r.mode == mode)?;
                    Some((t.seconds / base.seconds.max(1e-12)).ln())
                })
                .collect();
            if !logs.is_empty() {
                normalized.push((mode, (logs.iter().sum::<f64>() / logs.len() as f64).exp()));
            }
        }
    }
    Ok(BenchTable {
        rows,
        normalized_geomean: normalized,
    })
}
