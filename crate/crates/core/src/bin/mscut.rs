use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mscut::bag::{build_bag, AdjacencyMode, StairDirection};
use mscut::floorplan::{generate_floorplan, load_floorplan, save_floorplan, validate, GenSpec, ValidationMode};
use mscut::oracle::{build_hasse, enumerate_staircases, oracle_best, verify_chain};
use mscut::report::{bench, render_svg, render_tree_svg, run_sweep, BenchConfig, InputSpec, Staircase, SvgOptions, SweepConfig};
use mscut::search::{search, SearchMode};
use mscut::tree::{build_msc_tree, TreeOptions};
use mscut::{Error, Params, Result};

#[derive(Parser)]
#[command(name = "mscut", version, about = "Minimal-bend monotone staircase bipartitioning of floorplans")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a random mosaic floorplan with nets
    Gen {
        #[arg(long)]
        blocks: usize,
        #[arg(long, default_value_t = 0)]
        nets: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file (stdout when absent)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a (gamma, beta) sweep and write report.csv, report.json and SVGs
    Sweep {
        /// JSON sweep configuration
        #[arg(long, conflicts_with = "input")]
        config: Option<PathBuf>,
        /// Single floorplan instead of a config
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Comma-separated subset of BFS,DFS,RAND
        #[arg(long, value_delimiter = ',')]
        modes: Option<Vec<SearchMode>>,
        #[arg(long, value_delimiter = ',')]
        gammas: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        betas: Option<Vec<f64>>,
    },
    /// Render a floorplan with its staircase tree (or root cut) as SVG
    Render {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        /// Draw only the root cut
        #[arg(long)]
        root_only: bool,
    },
    /// Time tree construction per circuit and mode
    Bench {
        #[arg(long, conflicts_with = "input")]
        config: Option<PathBuf>,
        #[arg(long)]
        input: Vec<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_delimiter = ',')]
        modes: Option<Vec<SearchMode>>,
        #[arg(long, default_value_t = 1)]
        repeats: usize,
    },
    /// Enumerate all staircases of a small floorplan and compare with the searches
    Oracle {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        /// Staircase direction (MIS or MDS)
        #[arg(long, default_value = "MIS")]
        dir: String,
        #[arg(long, default_value_t = mscut::oracle::DEFAULT_CAP)]
        cap: usize,
        /// Write the Hasse diagram with the BFS and RAND chains highlighted
        #[arg(long)]
        dot: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 0.4)]
    gamma: f64,
    #[arg(long, default_value_t = 0.3)]
    beta: f64,
    #[arg(long, default_value = "BFS")]
    mode: SearchMode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl RunArgs {
    fn tree_options(&self) -> Result<TreeOptions> {
        Ok(TreeOptions::new(Params::new(self.gamma, self.beta)?, self.mode, self.seed))
    }
}

fn read_fp(path: &Path) -> Result<mscut::Floorplan> {
    load_floorplan(&std::fs::read_to_string(path)?)
}

fn json_input(path: &Path) -> InputSpec {
    InputSpec::Json {
        name: None,
        path: path.to_path_buf(),
    }
}

fn run(cmd: Cmd) -> Result<bool> {
    match cmd {
        Cmd::Gen { blocks, nets, seed, out } => {
            let text = save_floorplan(&generate_floorplan(&GenSpec::new(blocks, nets, seed))?);
            match out {
                Some(p) => std::fs::write(p, text)?,
                None => print!("{text}"),
            }
        }
        Cmd::Sweep {
            config,
            input,
            out,
            seed,
            modes,
            gammas,
            betas,
        } => {
            let mut cfg = match (config, input) {
                (Some(c), _) => SweepConfig::from_file(&c)?,
                (None, Some(i)) => SweepConfig::new(vec![json_input(&i)]),
                (None, None) => return Err(Error::Config("sweep needs --config or --input".into())),
            };
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(m) = modes {
                cfg.modes = m;
            }
            if let Some(g) = gammas {
                cfg.gamma_grid = g;
            }
            if let Some(b) = betas {
                cfg.beta_grid = b;
            }
            let report = run_sweep(&cfg)?;
            report.write(&out)?;
            for r in report.rows.iter().filter(|r| r.error.is_some()) {
                eprintln!("{} #{} {}: {}", r.circuit, r.instance, r.mode.name(), r.error.as_deref().unwrap_or(""));
            }
            println!("{} rows written to {}", report.rows.len(), out.display());
            return Ok(!report.has_errors());
        }
        Cmd::Render {
            input,
            out,
            run,
            root_only,
        } => {
            let fp = read_fp(&input)?;
            let tree = build_msc_tree(&fp, &run.tree_options()?)?;
            let svg = if root_only {
                let st = Staircase {
                    boundary: &tree.cut.boundary,
                    stype: tree.stype,
                    label: "root".into(),
                };
                render_svg(&fp, &[st], &SvgOptions::default())
            } else {
                render_tree_svg(&fp, &tree, &SvgOptions::default())
            };
            std::fs::write(out, svg)?;
        }
        Cmd::Bench {
            config,
            input,
            run,
            modes,
            repeats,
        } => {
            let mut cfg = match config {
                Some(c) => serde_json::from_str(&std::fs::read_to_string(c)?)?,
                None => BenchConfig::new(
                    input.iter().map(|p| json_input(p)).collect(),
                    Params::new(run.gamma, run.beta)?,
                ),
            };
            if let Some(m) = modes {
                cfg.modes = m;
            }
            cfg.repeats = cfg.repeats.max(repeats);
            print!("{}", bench(&cfg)?.to_csv()?);
        }
        Cmd::Oracle {
            input,
            run,
            dir,
            cap,
            dot,
        } => {
            let fp = read_fp(&input)?;
            let dir = match dir.to_ascii_uppercase().as_str() {
                "MIS" => StairDirection::Mis,
                "MDS" => StairDirection::Mds,
                _ => return Err(Error::Config(format!("unknown direction `{dir}`"))),
            };
            let mode = if validate(&fp, ValidationMode::Mosaic).ok {
                AdjacencyMode::Mosaic
            } else {
                AdjacencyMode::Packed { eps: 0 }
            };
            let bag = build_bag(&fp, dir, mode)?;
            let set = enumerate_staircases(&bag, cap)?;
            let hasse = build_hasse(&set);
            let params = Params::new(run.gamma, run.beta)?;
            let best = oracle_best(&set, &fp, &bag, &params)?;
            let names = |ids: &[mscut::BlockId]| -> String {
                let v: Vec<&str> = ids.iter().map(|b| fp.block(*b).name.as_str()).collect();
                format!("{{{}}}", v.join(","))
            };
            println!("staircases: {}", set.count());
            println!("hasse edges: {}", hasse.edges.len());
            println!("oracle best: {} gain {:.6}", names(&best.left), best.gain);
            let mut chains = Vec::new();
            for mode in SearchMode::ALL {
                let r = search(&bag, &fp, &params, mode, run.seed, mscut::search::DEFAULT_TRIALS)?;
                let valid = r.chains.iter().all(|c| verify_chain(&c.left_sets(), &hasse));
                println!(
                    "{}: best {} gain {:.6}, explored {}, chains valid: {valid}",
                    mode.name(),
                    names(&r.best.left),
                    r.best.gain,
                    r.explored.len()
                );
                if mode != SearchMode::Dfs {
                    chains.extend(r.chains.iter().map(|c| (c.left_sets(), mode)));
                }
            }
            if let Some(path) = dot {
                let colours = ["red", "blue", "darkgreen", "orange"];
                let hl: Vec<(&[Vec<mscut::BlockId>], &str)> = chains
                    .iter()
                    .enumerate()
                    .map(|(i, (c, _))| (c.as_slice(), colours[i % colours.len()]))
                    .collect();
                std::fs::write(path, hasse.to_dot(&fp, &hl))?;
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
