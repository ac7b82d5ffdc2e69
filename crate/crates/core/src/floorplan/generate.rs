//! Random slicing-tree mosaics with spatially local nets.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{BlockSpec, Floorplan, NetSpec};
use crate::error::{Error, Result};
use crate::geom::{Coord, Rect};
use crate::rng::{derive_seed, rng, Rng};

/// Net degree law: `min` plus a geometric number of extra pins, truncated
/// at `max`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegreeDist {
    pub min: usize,
    pub max: usize,
    pub mean: f64,
}

impl Default for DegreeDist {
    fn default() -> Self {
        DegreeDist {
            min: 2,
            max: 12,
            mean: 2.16,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenSpec {
    pub n_blocks: usize,
    #[serde(default)]
    pub seed: u64,
    /// Bounds on the split ratio of every slicing cut.
    #[serde(default = "default_aspect")]
    pub aspect_range: (f64, f64),
    #[serde(default)]
    pub n_nets: usize,
    #[serde(default)]
    pub degree: DegreeDist,
    /// Probability that a new net member is drawn from the neighbours of the
    /// members chosen so far instead of uniformly.
    #[serde(default = "default_locality")]
    pub locality: f64,
    /// Side of the square bounding box in layout units.
    #[serde(default = "default_side")]
    pub side: Coord,
    /// Grid steps per layout unit.
    #[serde(default = "default_unit")]
    pub unit: Coord,
}

fn default_aspect() -> (f64, f64) {
    (0.3, 0.7)
}
fn default_locality() -> f64 {
    0.8
}
fn default_side() -> Coord {
    1000
}
fn default_unit() -> Coord {
    1000
}

impl GenSpec {
    pub fn new(n_blocks: usize, n_nets: usize, seed: u64) -> Self {
        GenSpec {
            n_blocks,
            seed,
            aspect_range: default_aspect(),
            n_nets,
            degree: DegreeDist::default(),
            locality: default_locality(),
            side: default_side(),
            unit: default_unit(),
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        GenSpec { seed, ..self.clone() }
    }

    pub fn check(&self) -> Result<()> {
        let (lo, hi) = self.aspect_range;
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.n_blocks < 2 {
            return bad("n_blocks must be at least 2");
        }
        if !(lo > 0.0 && hi < 1.0 && lo <= hi) {
            return bad("aspect_range must satisfy 0 < min <= max < 1");
        }
        if self.degree.min < 2 || self.degree.max < self.degree.min || self.degree.mean < self.degree.min as f64 {
            return bad("degree distribution needs 2 <= min <= mean and min <= max");
        }
        if !(0.0..=1.0).contains(&self.locality) {
            return bad("locality must lie in [0, 1]");
        }
        if self.side <= 0 || self.unit <= 0 {
            return bad("side and unit must be positive");
        }
        Ok(())
    }
}

struct Slicer<'a> {
    rng: &'a mut Rng,
    range: (f64, f64),
    out: Vec<Rect>,
}

impl Slicer<'_> {
    fn split(&mut self, r: Rect, count: usize, depth: usize) -> Result<()> {
        if count == 1 {
            self.out.push(r);
            return Ok(());
        }
        let (w, h) = (r.width(), r.height());
        let mut vertical = depth % 2 == 0;
        if w >= 2 * h {
            vertical = true;
        } else if h >= 2 * w {
            vertical = false;
        }
        if vertical && w < 2 {
            vertical = false;
        }
        if !vertical && h < 2 {
            if w < 2 {
                return Err(Error::Config("grid too coarse for the requested block count".into()));
            }
            vertical = true;
        }
        let ratio = self.rng.gen_range(self.range.0..=self.range.1);
        let left = ((count as f64 * ratio).round() as usize).clamp(1, count - 1);
        let (a, b) = if vertical {
            let cut = (r.x0 + (w as f64 * ratio).round() as Coord).clamp(r.x0 + 1, r.x1 - 1);
            (Rect { x1: cut, ..r }, Rect { x0: cut, ..r })
        } else {
            let cut = (r.y0 + (h as f64 * ratio).round() as Coord).clamp(r.y0 + 1, r.y1 - 1);
            (Rect { y1: cut, ..r }, Rect { y0: cut, ..r })
        };
        self.split(a, left, depth + 1)?;
        self.split(b, count - left, depth + 1)
    }
}

/// Generates an exact mosaic from a random slicing tree, then samples nets.
/// Identical specs give identical floorplans.
pub fn generate_floorplan(spec: &GenSpec) -> Result<Floorplan> {
    spec.check()?;
    let side = spec.side * spec.unit;
    let bbox = Rect::new(0, 0, side, side);
    let mut geo_rng = rng(derive_seed(spec.seed, 0));
    let mut slicer = Slicer {
        rng: &mut geo_rng,
        range: spec.aspect_range,
        out: Vec::with_capacity(spec.n_blocks),
    };
    slicer.split(bbox, spec.n_blocks, 0)?;
    let mut rects = slicer.out;
    // top-left first, so block 0 is the MIS source
    rects.sort_by_key(|r| (-r.y1, r.x0));
    let blocks: Vec<BlockSpec> = rects
        .iter()
        .enumerate()
        .map(|(i, r)| BlockSpec::new(format!("b{i}"), *r))
        .collect();
    let shell = Floorplan::new(spec.unit, bbox, blocks.clone(), vec![])?;

    let n = spec.n_blocks;
    let mut neighbours = vec![Vec::new(); n];
    for (a, b, _, _) in shell.adjacencies(0) {
        neighbours[a.0].push(b.0);
        neighbours[b.0].push(a.0);
    }
    let mut net_rng = rng(derive_seed(spec.seed, 1));
    let extra_mean = spec.degree.mean - spec.degree.min as f64;
    let q = extra_mean / (1.0 + extra_mean);
    let max_deg = spec.degree.max.min(n);
    let mut nets = Vec::with_capacity(spec.n_nets);
    let mut in_net = vec![false; n];
    for i in 0..spec.n_nets {
        let mut deg = spec.degree.min.min(n);
        while deg < max_deg && net_rng.gen::<f64>() < q {
            deg += 1;
        }
        let mut members = vec![net_rng.gen_range(0..n)];
        in_net[members[0]] = true;
        while members.len() < deg {
            let mut pick = None;
            if net_rng.gen::<f64>() < spec.locality {
                let cands: Vec<usize> = members
                    .iter()
                    .flat_map(|&m| neighbours[m].iter().copied())
                    .filter(|&c| !in_net[c])
                    .collect();
                if !cands.is_empty() {
                    pick = Some(cands[net_rng.gen_range(0..cands.len())]);
                }
            }
            let p = match pick {
                Some(p) => p,
                None => loop {
                    let c = net_rng.gen_range(0..n);
                    if !in_net[c] {
                        break c;
                    }
                },
            };
            in_net[p] = true;
            members.push(p);
        }
        for &m in &members {
            in_net[m] = false;
        }
        nets.push(NetSpec::new(format!("n{i}"), members.iter().map(|&m| format!("b{m}"))));
    }
    Floorplan::new(spec.unit, bbox, blocks, nets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floorplan::{stats, validate, ValidationMode};

    #[test]
    fn two_blocks_tile_exactly() {
        let fp = generate_floorplan(&GenSpec::new(2, 0, 1)).unwrap();
        assert_eq!(fp.len(), 2);
        assert!(validate(&fp, ValidationMode::Mosaic).ok);
    }

    #[test]
    fn large_instance_is_a_mosaic() {
        let fp = generate_floorplan(&GenSpec::new(300, 1632, 7)).unwrap();
        let s = stats(&fp);
        assert_eq!((s.n, s.k), (300, 1632));
        let total: i128 = fp.blocks().iter().map(|b| b.area()).sum();
        assert_eq!(total, fp.bbox().area());
        let r = validate(&fp, ValidationMode::Mosaic);
        assert!(r.ok, "{r:?}");
        assert!((s.avg_net_degree - 2.16).abs() < 0.1, "{}", s.avg_net_degree);
    }

    #[test]
    fn deterministic() {
        let spec = GenSpec::new(40, 100, 9);
        assert_eq!(generate_floorplan(&spec).unwrap(), generate_floorplan(&spec).unwrap());
        assert_ne!(generate_floorplan(&spec).unwrap(), generate_floorplan(&spec.with_seed(10)).unwrap());
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(generate_floorplan(&GenSpec::new(1, 0, 0)).is_err());
        let mut s = GenSpec::new(4, 0, 0);
        s.aspect_range = (0.0, 0.5);
        assert!(generate_floorplan(&s).is_err());
    }
}
