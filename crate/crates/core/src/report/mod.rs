//! Experiment drivers: parameter sweeps, timing tables and SVG rendering.

mod bench;
mod svg;
mod sweep;

pub use bench::{bench, BenchConfig, BenchRow, BenchTable};
pub use svg::{render_svg, render_tree_svg, tree_staircases, Staircase, SvgOptions};
pub use sweep::{default_beta_grid, default_gamma_grid, run_sweep, Curve, SweepConfig, SweepReport, SweepRow, SweepSummary};

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::floorplan::{generate_floorplan, import_bookshelf, load_floorplan, BookshelfOptions, Floorplan, GenSpec};
use crate::geom::Coord;

/// Where the floorplans of one circuit come from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum InputSpec {
    /// Random mosaics; instance `i` uses seed `spec.seed + i`.
    Generate { name: String, spec: GenSpec },
    /// Native JSON file (one instance).
    Json { name: Option<String>, path: PathBuf },
    /// GSRC bookshelf triple (one instance).
    Bookshelf {
        name: String,
        blocks: PathBuf,
        pl: PathBuf,
        nets: PathBuf,
        #[serde(default)]
        grid: Option<Coord>,
    },
    /// Already loaded floorplan (one instance); not available from files.
    #[serde(skip)]
    Loaded { name: String, floorplan: Box<Floorplan> },
}

impl InputSpec {
    pub fn name(&self) -> String {
        match self {
            InputSpec::Generate { name, .. } | InputSpec::Bookshelf { name, .. } | InputSpec::Loaded { name, .. } => {
                name.clone()
            }
            InputSpec::Json { name, path } => name.clone().unwrap_or_else(|| {
                path.file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| path.display().to_string())
            }),
        }
    }

    pub fn loaded(name: impl Into<String>, fp: Floorplan) -> Self {
        InputSpec::Loaded {
            name: name.into(),
            floorplan: Box::new(fp),
        }
    }

    pub fn instances(&self, per_circuit: usize) -> usize {
        match self {
            InputSpec::Generate { .. } => per_circuit,
            _ => 1,
        }
    }

    /// Makes relative file paths relative to `base`.
    pub fn rebase(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        match self {
            InputSpec::Json { path, .. } => fix(path),
            InputSpec::Bookshelf { blocks, pl, nets, .. } => {
                fix(blocks);
                fix(pl);
                fix(nets);
            }
            _ => {}
        }
    }

    pub fn load(&self, instance: usize) -> Result<Floorplan> {
        match self {
            InputSpec::Generate { spec, .. } => generate_floorplan(&spec.with_seed(spec.seed.wrapping_add(instance as u64))),
            InputSpec::Json { path, .. } => load_floorplan(&std::fs::read_to_string(path)?),
            InputSpec::Bookshelf {
                blocks, pl, nets, grid, ..
            } => {
                let mut opts = BookshelfOptions::default();
                if let Some(g) = grid {
                    opts.grid = *g;
                }
                import_bookshelf(
                    &std::fs::read_to_string(blocks)?,
                    &std::fs::read_to_string(pl)?,
                    &std::fs::read_to_string(nets)?,
                    opts,
                )
            }
            InputSpec::Loaded { floorplan, .. } => Ok((**floorplan).clone()),
        }
    }
}
