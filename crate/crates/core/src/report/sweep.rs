use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::svg::{render_tree_svg, SvgOptions};
use super::InputSpec;
use crate::cut::{BalanceType, Params};
use crate::error::{Error, Result};
use crate::floorplan::{stats, Floorplan};
use crate::rng::{derive_seed, RNG_ALGORITHM};
use crate::route::{route_nets, via_summary, RouteModel, ROUTER_LABEL};
use crate::search::{SearchMode, DEFAULT_TRIALS};
use crate::tree::{build_msc_tree, tree_metrics, MscNode, TreeOptions};

pub fn default_gamma_grid() -> Vec<f64> {
    (1..=7).map(|i| i as f64 / 10.0).collect()
}

pub fn default_beta_grid() -> Vec<f64> {
    (0..=3).map(|i| i as f64 / 10.0).collect()
}

fn default_instances() -> usize {
    4
}
fn default_modes() -> Vec<SearchMode> {
    SearchMode::ALL.to_vec()
}
fn default_trials() -> usize {
    DEFAULT_TRIALS
}
fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub inputs: Vec<InputSpec>,
    /// Instances per generated circuit; file inputs always give one.
    #[serde(default = "default_instances")]
    pub instances_per_circuit: usize,
    #[serde(default = "default_gamma_grid")]
    pub gamma_grid: Vec<f64>,
    #[serde(default = "default_beta_grid")]
    pub beta_grid: Vec<f64>,
    #[serde(default = "default_modes")]
    pub modes: Vec<SearchMode>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub baltype: BalanceType,
    #[serde(default = "yes")]
    pub route: bool,
    #[serde(default)]
    pub model: RouteModel,
    /// Render one SVG per instance (first mode, first grid point).
    #[serde(default = "yes")]
    pub svg: bool,
}

impl SweepConfig {
    pub fn new(inputs: Vec<InputSpec>) -> Self {
        SweepConfig {
            inputs,
            instances_per_circuit: default_instances(),
            gamma_grid: default_gamma_grid(),
            beta_grid: default_beta_grid(),
            modes: default_modes(),
            seed: 0,
            trials: DEFAULT_TRIALS,
            baltype: BalanceType::Area,
            route: true,
            model: RouteModel::default(),
            svg: true,
        }
    }

    /// Reads a JSON config; relative input paths resolve against the
    /// config's directory.
    pub fn from_file(path: &Path) -> Result<Self> {
        let mut cfg: SweepConfig = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        let base = path.parent().unwrap_or(Path::new("."));
        for i in &mut cfg.inputs {
            i.rebase(base);
        }
        Ok(cfg)
    }

    pub fn check(&self) -> Result<()> {
        for g in self.gamma_grid.iter().chain(&self.beta_grid) {
            if !(0.0..=1.0).contains(g) {
                return Err(Error::Config(format!("grid value {g} outside [0, 1]")));
            }
        }
        self.model.check()
    }

    /// Grid points with `gamma + beta <= 1`, gamma-major.
    pub fn grid(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for &g in &self.gamma_grid {
            for &b in &self.beta_grid {
                if g + b <= 1.0 + 1e-12 {
                    out.push((g, b));
                }
            }
        }
        out
    }
}

/// One `(circuit, instance, mode, gamma, beta)` cell. Means are taken over
/// the nodes of the tree.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub circuit: String,
    pub instance: usize,
    pub n: usize,
    pub k: usize,
    pub mode: SearchMode,
    pub gamma: f64,
    pub beta: f64,
    pub baltype: BalanceType,
    pub balr_mean: f64,
    pub bend_ratio_mean: f64,
    pub netcut_ratio_mean: f64,
    pub gain_mean: f64,
    pub root_gain: f64,
    pub tree_height: usize,
    pub node_count: usize,
    pub total_vias: Option<usize>,
    pub total_bends: Option<usize>,
    pub crossed_bends: Option<usize>,
    pub total_length: Option<f64>,
    pub avg_congestion: Option<f64>,
    pub max_congestion: Option<f64>,
    pub router: Option<&'static str>,
    pub rng: &'static str,
    pub seed: u64,
    pub error: Option<String>,
    /// Seconds spent building the tree; JSON only, so that CSV output is
    /// reproducible byte for byte.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<f64>,
}

impl SweepRow {
    fn empty(circuit: &str, instance: usize, mode: SearchMode, gamma: f64, beta: f64, baltype: BalanceType, seed: u64) -> Self {
        SweepRow {
            circuit: circuit.to_string(),
            instance,
            n: 0,
            k: 0,
            mode,
            gamma,
            beta,
            baltype,
            balr_mean: 0.0,
            bend_ratio_mean: 0.0,
            netcut_ratio_mean: 0.0,
            gain_mean: 0.0,
            root_gain: 0.0,
            tree_height: 0,
            node_count: 0,
            total_vias: None,
            total_bends: None,
            crossed_bends: None,
            total_length: None,
            avg_congestion: None,
            max_congestion: None,
            router: None,
            rng: RNG_ALGORITHM,
            seed,
            error: None,
            wall_time: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    /// `(file name, svg text)` per rendered instance.
    #[serde(skip)]
    pub renders: Vec<(String, String)>,
}

/// Per `(circuit, mode)` means over instances and grid points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepSummary {
    pub circuit: String,
    pub mode: SearchMode,
    pub rows: usize,
    pub balr_mean: f64,
    pub bend_ratio_mean: f64,
    pub netcut_ratio_mean: f64,
    pub gain_mean: f64,
    pub vias_mean: Option<f64>,
}

/// Mean total vias against gamma for one `(circuit, mode, beta)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Curve {
    pub circuit: String,
    pub mode: SearchMode,
    pub beta: f64,
    pub points: Vec<(f64, f64)>,
}

impl SweepReport {
    pub fn has_errors(&self) -> bool {
        self.rows.iter().any(|r| r.error.is_some())
    }

    /// CSV with one header line; `wall_time` is omitted.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(SweepRow {
                wall_time: None,
                ..r.clone()
            })?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn summary(&self) -> Vec<SweepSummary> {
        let mut groups: BTreeMap<(String, SearchMode), Vec<&SweepRow>> = BTreeMap::new();
        for r in self.rows.iter().filter(|r| r.error.is_none()) {
            groups.entry((r.circuit.clone(), r.mode)).or_default().push(r);
        }
        groups
            .into_iter()
            .map(|((circuit, mode), rows)| {
                let m = |f: fn(&SweepRow) -> f64| rows.iter().map(|r| f(r)).sum::<f64>() / rows.len() as f64;
                let vias: Vec<f64> = rows.iter().filter_map(|r| r.total_vias).map(|v| v as f64).collect();
                SweepSummary {
                    circuit,
                    mode,
                    rows: rows.len(),
                    balr_mean: m(|r| r.balr_mean),
                    bend_ratio_mean: m(|r| r.bend_ratio_mean),
                    netcut_ratio_mean: m(|r| r.netcut_ratio_mean),
                    gain_mean: m(|r| r.gain_mean),
                    vias_mean: (!vias.is_empty()).then(|| vias.iter().sum::<f64>() / vias.len() as f64),
                }
            })
            .collect()
    }

    /// Via-count curves over gamma, averaged over instances.
    pub fn via_curves(&self) -> Vec<Curve> {
        let mut acc: BTreeMap<(String, SearchMode, u64), BTreeMap<u64, (f64, usize)>> = BTreeMap::new();
        for r in &self.rows {
            if let (None, Some(v)) = (&r.error, r.total_vias) {
                let e = acc
                    .entry((r.circuit.clone(), r.mode, r.beta.to_bits()))
                    .or_default()
                    .entry(r.gamma.to_bits())
                    .or_insert((0.0, 0));
                e.0 += v as f64;
                e.1 += 1;
            }
        }
        let mut curves: Vec<Curve> = acc
            .into_iter()
            .map(|((circuit, mode, beta), pts)| {
                let mut points: Vec<(f64, f64)> = pts
                    .into_iter()
                    .map(|(g, (s, c))| (f64::from_bits(g), s / c as f64))
                    .collect();
                points.sort_by(|a, b| a.0.total_cmp(&b.0));
                Curve {
                    circuit,
                    mode,
                    beta: f64::from_bits(beta),
                    points,
                }
            })
            .collect();
        curves.sort_by(|a, b| (&a.circuit, a.mode).cmp(&(&b.circuit, b.mode)).then(a.beta.total_cmp(&b.beta)));
        curves
    }

    /// Writes `report.csv`, `report.json` and the rendered SVGs into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.csv"), self.to_csv()?)?;
        std::fs::write(dir.join("report.json"), self.to_json())?;
        for (name, svg) in &self.renders {
            std::fs::write(dir.join(name), svg)?;
        }
        Ok(())
    }
}

struct Cell<'a> {
    circuit: &'a str,
    instance: usize,
    fp: &'a Floorplan,
    mode: SearchMode,
    gamma: f64,
    beta: f64,
    seed: u64,
    render: bool,
}

fn run_cell(cfg: &SweepConfig, c: &Cell) -> (SweepRow, Option<MscNode>) {
    let mut row = SweepRow::empty(c.circuit, c.instance, c.mode, c.gamma, c.beta, cfg.baltype, c.seed);
    let s = stats(c.fp);
    row.n = s.n;
    row.k = s.k;
    let result = (|| -> Result<MscNode> {
        let params = Params::new(c.gamma, c.beta)?.with_baltype(cfg.baltype);
        let opts = TreeOptions {
            params,
            mode: c.mode,
            seed: c.seed,
            trials: cfg.trials,
        };
        let t0 = Instant::now();
        let tree = build_msc_tree(c.fp, &opts)?;
        row.wall_time = Some(t0.elapsed().as_secs_f64());
        let m = tree_metrics(&tree);
        row.balr_mean = m.mean_balr;
        row.bend_ratio_mean = m.mean_bend_ratio;
        row.netcut_ratio_mean = m.mean_netcut_ratio;
        row.gain_mean = m.mean_gain;
        row.root_gain = tree.cut.gain;
        row.tree_height = m.height;
        row.node_count = m.node_count;
        if cfg.route {
            let (routed, cong) = route_nets(&tree, c.fp, &cfg.model)?;
            let v = via_summary(&routed);
            row.total_vias = Some(v.total_vias);
            row.total_bends = Some(v.total_bends);
            row.crossed_bends = Some(v.crossed_bends);
            row.total_length = Some(v.total_length);
            row.avg_congestion = Some(cong.average);
            row.max_congestion = Some(cong.max);
            row.router = Some(ROUTER_LABEL);
        }
        Ok(tree)
    })();
    match result {
        Ok(tree) => (row, c.render.then_some(tree)),
        Err(e) => {
            row.error = Some(e.to_string());
            (row, None)
        }
    }
}

fn file_stem(circuit: &str, instance: usize) -> String {
    let clean: String = circuit
        .chars()
        .map(|ch| if ch.is_ascii_alphanumeric() || ch == '-' || ch == '_' { ch } else { '_' })
        .collect();
    format!("{clean}_{instance}.svg")
}

/// Runs every cell of the sweep. Cells run in parallel; rows come back in
/// circuit, instance, mode, gamma, beta order regardless of scheduling.
/// Failing inputs and cells produce rows with `error` set.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    cfg.check()?;
    let grid = cfg.grid();
    let mut loaded: Vec<(String, usize, Result<Floorplan>)> = Vec::new();
    for input in &cfg.inputs {
        let name = input.name();
        for i in 0..input.instances(cfg.instances_per_circuit) {
            loaded.push((name.clone(), i, input.load(i)));
        }
    }

    let mut cells = Vec::new();
    let mut slots: Vec<std::result::Result<usize, SweepRow>> = Vec::new();
    for (ci, (name, instance, fp)) in loaded.iter().enumerate() {
        let seed = derive_seed(cfg.seed, ci as u64);
        for (mi, &mode) in cfg.modes.iter().enumerate() {
            for (gi, &(gamma, beta)) in grid.iter().enumerate() {
                match fp {
                    Ok(fp) => {
                        slots.push(Ok(cells.len()));
                        cells.push(Cell {
                            circuit: name,
                            instance: *instance,
                            fp,
                            mode,
                            gamma,
                            beta,
                            seed,
                            render: cfg.svg && mi == 0 && gi == 0,
                        });
                    }
                    Err(e) => {
                        let mut row = SweepRow::empty(name, *instance, mode, gamma, beta, cfg.baltype, seed);
                        row.error = Some(e.to_string());
                        slots.push(Err(row));
                    }
                }
            }
        }
    }

    let mut results: Vec<Option<(SweepRow, Option<MscNode>)>> =
        cells.par_iter().map(|c| Some(run_cell(cfg, c))).collect();
    let mut rows = Vec::with_capacity(slots.len());
    let mut renders = Vec::new();
    for slot in slots {
        match slot {
            Ok(i) => {
                let (row, tree) = results[i].take().expect("each cell is used once");
                if let Some(tree) = tree {
                    let c = &cells[i];
                    let svg = render_tree_svg(c.fp, &tree, &SvgOptions::default());
                    renders.push((file_stem(c.circuit, c.instance), svg));
                }
                rows.push(row);
            }
            Err(row) => rows.push(row),
        }
    }
    Ok(SweepReport { rows, renders })
}
