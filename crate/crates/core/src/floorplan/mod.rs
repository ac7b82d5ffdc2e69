//! Floorplan and block-level netlist.
//!
//! A [`Floorplan`] is a set of non-overlapping rectangular blocks inside a
//! bounding box plus a list of nets. A net pin is simply membership of a
//! block, so a net is a set of at least two distinct blocks.

mod bookshelf;
mod generate;
mod json;

pub use bookshelf::{import_bookshelf, BookshelfOptions};
pub use generate::{generate_floorplan, DegreeDist, GenSpec};
pub use json::{load_floorplan, save_floorplan};

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{shared_boundary, Coord, Rect, Segment, Side};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct BlockId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct NetId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    pub id: BlockId,
    pub name: String,
    pub rect: Rect,
}

impl Block {
    pub fn area(&self) -> i128 {
        self.rect.area()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Net {
    pub id: NetId,
    pub name: String,
    /// Sorted, distinct member blocks.
    pub members: Vec<BlockId>,
}

/// Block description used to build a floorplan by name.
#[derive(Clone, Debug)]
pub struct BlockSpec {
    pub name: String,
    pub rect: Rect,
}

impl BlockSpec {
    pub fn new(name: impl Into<String>, rect: Rect) -> Self {
        BlockSpec {
            name: name.into(),
            rect,
        }
    }
}

#[derive(Clone, Debug)]
pub struct NetSpec {
    pub name: String,
    pub blocks: Vec<String>,
}

impl NetSpec {
    pub fn new<S: Into<String>>(name: impl Into<String>, blocks: impl IntoIterator<Item = S>) -> Self {
        NetSpec {
            name: name.into(),
            blocks: blocks.into_iter().map(Into::into).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Floorplan {
    unit: Coord,
    bbox: Rect,
    blocks: Vec<Block>,
    nets: Vec<Net>,
}

impl Floorplan {
    /// Builds a floorplan, assigning ids in the given order.
    ///
    /// Checks entity-level invariants only (positive sizes, unique block
    /// names, net members exist, net degree >= 2). Geometric checks live in
    /// [`validate`].
    pub fn new(unit: Coord, bbox: Rect, blocks: Vec<BlockSpec>, nets: Vec<NetSpec>) -> Result<Self> {
        if unit <= 0 {
            return Err(Error::Config(format!("unit must be positive, got {unit}")));
        }
        if bbox.width() <= 0 || bbox.height() <= 0 {
            return Err(Error::Config("bounding box must have positive size".into()));
        }
        let mut by_name = HashMap::with_capacity(blocks.len());
        let mut out = Vec::with_capacity(blocks.len());
        for (i, b) in blocks.into_iter().enumerate() {
            if b.rect.width() <= 0 || b.rect.height() <= 0 {
                return Err(Error::InvalidGeometry {
                    block: b.name,
                    reason: "width and height must be positive".into(),
                });
            }
            if by_name.insert(b.name.clone(), BlockId(i)).is_some() {
                return Err(Error::DuplicateBlock(b.name));
            }
            out.push(Block {
                id: BlockId(i),
                name: b.name,
                rect: b.rect,
            });
        }
        let mut out_nets = Vec::with_capacity(nets.len());
        for (i, n) in nets.into_iter().enumerate() {
            let mut members = Vec::with_capacity(n.blocks.len());
            for name in &n.blocks {
                match by_name.get(name) {
                    Some(&id) => members.push(id),
                    None => {
                        return Err(Error::UnknownBlock {
                            net: n.name,
                            block: name.clone(),
                        })
                    }
                }
            }
            members.sort_unstable();
            members.dedup();
            if members.len() < 2 {
                return Err(Error::NetDegree {
                    net: n.name,
                    degree: members.len(),
                });
            }
            out_nets.push(Net {
                id: NetId(i),
                name: n.name,
                members,
            });
        }
        Ok(Floorplan {
            unit,
            bbox,
            blocks: out,
            nets: out_nets,
        })
    }

    /// Sub-floorplan over `blocks` (ids of `self`, sorted) with the given
    /// nets expressed in ids of `self`. Block order is preserved, the bounding
    /// box shrinks to the blocks.
    pub(crate) fn subset(&self, blocks: &[BlockId], nets: &[(String, Vec<BlockId>)]) -> Floorplan {
        let mut local = vec![usize::MAX; self.blocks.len()];
        let mut out = Vec::with_capacity(blocks.len());
        for (i, &b) in blocks.iter().enumerate() {
            local[b.0] = i;
            let src = &self.blocks[b.0];
            out.push(Block {
                id: BlockId(i),
                name: src.name.clone(),
                rect: src.rect,
            });
        }
        let bbox = Rect::bounding(out.iter().map(|b| &b.rect)).expect("non-empty subset");
        let out_nets = nets
            .iter()
            .enumerate()
            .map(|(i, (name, members))| {
                let mut m: Vec<BlockId> = members.iter().map(|b| BlockId(local[b.0])).collect();
                m.sort_unstable();
                Net {
                    id: NetId(i),
                    name: name.clone(),
                    members: m,
                }
            })
            .collect();
        Floorplan {
            unit: self.unit,
            bbox,
            blocks: out,
            nets: out_nets,
        }
    }

    /// Grid units per layout unit.
    pub fn unit(&self) -> Coord {
        self.unit
    }

    pub fn bbox(&self) -> Rect {
        self.bbox
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn nets(&self) -> &[Net] {
        &self.nets
    }

    pub fn block(&self, id: BlockId) -> &Block {
        &self.blocks[id.0]
    }

    pub fn block_by_name(&self, name: &str) -> Option<&Block> {
        self.blocks.iter().find(|b| b.name == name)
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Converts a grid length to layout units.
    pub fn to_units(&self, v: Coord) -> f64 {
        v as f64 / self.unit as f64
    }

    /// Returns a copy without the named blocks. Nets touching them are
    /// dropped.
    pub fn without_blocks(&self, names: &[&str]) -> Result<Floorplan> {
        let blocks = self
            .blocks
            .iter()
            .filter(|b| !names.contains(&b.name.as_str()))
            .map(|b| BlockSpec::new(b.name.clone(), b.rect))
            .collect();
        let nets = self
            .nets
            .iter()
            .filter(|n| n.members.iter().all(|m| !names.contains(&self.blocks[m.0].name.as_str())))
            .map(|n| self.net_spec(n))
            .collect();
        Floorplan::new(self.unit, self.bbox, blocks, nets)
    }

    /// Mirrors the floorplan about the horizontal center line of its bbox.
    pub fn mirrored_vertically(&self) -> Floorplan {
        let (lo, hi) = (self.bbox.y0, self.bbox.y1);
        let mut fp = self.clone();
        for b in &mut fp.blocks {
            let r = b.rect;
            b.rect = Rect {
                x0: r.x0,
                x1: r.x1,
                y0: lo + hi - r.y1,
                y1: lo + hi - r.y0,
            };
        }
        fp
    }

    /// Multiplies every coordinate by `k`.
    pub fn scaled(&self, k: Coord) -> Floorplan {
        let s = |r: Rect| Rect {
            x0: r.x0 * k,
            y0: r.y0 * k,
            x1: r.x1 * k,
            y1: r.y1 * k,
        };
        let mut fp = self.clone();
        fp.bbox = s(fp.bbox);
        for b in &mut fp.blocks {
            b.rect = s(b.rect);
        }
        fp
    }

    pub(crate) fn net_spec(&self, n: &Net) -> NetSpec {
        NetSpec::new(n.name.clone(), n.members.iter().map(|m| self.blocks[m.0].name.clone()))
    }

    /// All abutting block pairs `(i, j, side of i, shared segment)` with
    /// `i < j`.
    pub fn adjacencies(&self, eps: Coord) -> Vec<(BlockId, BlockId, Side, Segment)> {
        let mut order: Vec<usize> = (0..self.blocks.len()).collect();
        order.sort_by_key(|&i| self.blocks[i].rect.x0);
        let mut out = Vec::new();
        // Sweep by x so only blocks whose x-ranges touch are compared.
        for (pos, &i) in order.iter().enumerate() {
            let a = &self.blocks[i].rect;
            for &j in &order[pos + 1..] {
                let b = &self.blocks[j].rect;
                if b.x0 > a.x1 + eps {
                    break;
                }
                let (lo, hi) = if i < j { (i, j) } else { (j, i) };
                let (ra, rb) = (&self.blocks[lo].rect, &self.blocks[hi].rect);
                if let Some((side, seg)) = shared_boundary(ra, rb, eps) {
                    out.push((BlockId(lo), BlockId(hi), side, seg));
                }
            }
        }
        out.sort_by_key(|&(a, b, _, _)| (a, b));
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ValidationMode {
    /// Exact dissection: blocks cover the bounding box without holes.
    Mosaic,
    /// Holes allowed.
    Packed,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub mode: ValidationMode,
    pub ok: bool,
    pub overlaps: Vec<(String, String)>,
    pub out_of_bbox: Vec<String>,
    /// Bounding-box area not covered by any block, in squared layout units.
    pub uncovered_area: f64,
}

pub fn validate(fp: &Floorplan, mode: ValidationMode) -> ValidationReport {
    let blocks = fp.blocks();
    let mut overlaps = Vec::new();
    let mut order: Vec<usize> = (0..blocks.len()).collect();
    order.sort_by_key(|&i| blocks[i].rect.x0);
    for (pos, &i) in order.iter().enumerate() {
        for &j in &order[pos + 1..] {
            if blocks[j].rect.x0 >= blocks[i].rect.x1 {
                break;
            }
            if blocks[i].rect.overlaps(&blocks[j].rect) {
                let (a, b) = if i < j { (i, j) } else { (j, i) };
                overlaps.push((blocks[a].name.clone(), blocks[b].name.clone()));
            }
        }
    }
    overlaps.sort();
    let out_of_bbox: Vec<String> = blocks
        .iter()
        .filter(|b| !fp.bbox().contains_rect(&b.rect))
        .map(|b| b.name.clone())
        .collect();
    let covered = union_area(fp.bbox(), blocks.iter().map(|b| b.rect));
    let uncovered = fp.bbox().area() - covered;
    let u = fp.unit() as f64;
    let uncovered_area = uncovered as f64 / (u * u);
    let mut ok = overlaps.is_empty() && out_of_bbox.is_empty();
    if mode == ValidationMode::Mosaic {
        ok &= uncovered == 0;
    }
    ValidationReport {
        mode,
        ok,
        overlaps,
        out_of_bbox,
        uncovered_area,
    }
}

/// Area of the union of `rects` clipped to `clip`.
fn union_area(clip: Rect, rects: impl Iterator<Item = Rect>) -> i128 {
    let rects: Vec<Rect> = rects
        .filter_map(|r| {
            let c = Rect {
                x0: r.x0.max(clip.x0),
                y0: r.y0.max(clip.y0),
                x1: r.x1.min(clip.x1),
                y1: r.y1.min(clip.y1),
            };
            (c.width() > 0 && c.height() > 0).then_some(c)
        })
        .collect();
    let mut xs: Vec<Coord> = rects.iter().flat_map(|r| [r.x0, r.x1]).collect();
    xs.sort_unstable();
    xs.dedup();
    let mut total = 0i128;
    let mut spans = Vec::new();
    for w in xs.windows(2) {
        let (xa, xb) = (w[0], w[1]);
        spans.clear();
        spans.extend(rects.iter().filter(|r| r.x0 <= xa && r.x1 >= xb).map(|r| (r.y0, r.y1)));
        spans.sort_unstable();
        let mut covered = 0i128;
        let mut cur: Option<(Coord, Coord)> = None;
        for &(a, b) in &spans {
            cur = match cur {
                Some((c0, c1)) if a <= c1 => Some((c0, c1.max(b))),
                Some((c0, c1)) => {
                    covered += (c1 - c0) as i128;
                    Some((a, b))
                }
                None => Some((a, b)),
            };
        }
        if let Some((c0, c1)) = cur {
            covered += (c1 - c0) as i128;
        }
        total += covered * (xb - xa) as i128;
    }
    total
}

/// Errors on the first overlap or out-of-bbox block.
pub(crate) fn check_geometry(fp: &Floorplan) -> Result<()> {
    let report = validate(fp, ValidationMode::Packed);
    if let Some((a, b)) = report.overlaps.into_iter().next() {
        return Err(Error::Overlap { a, b });
    }
    if let Some(b) = report.out_of_bbox.into_iter().next() {
        return Err(Error::OutOfBounds(b));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Stats {
    pub n: usize,
    pub k: usize,
    pub avg_net_degree: f64,
}

pub fn stats(fp: &Floorplan) -> Stats {
    let k = fp.nets().len();
    let pins: usize = fp.nets().iter().map(|n| n.members.len()).sum();
    Stats {
        n: fp.len(),
        k,
        avg_net_degree: if k == 0 { 0.0 } else { pins as f64 / k as f64 },
    }
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;

    pub fn f2() -> Floorplan {
        Floorplan::new(
            1,
            Rect::new(0, 0, 2, 1),
            vec![BlockSpec::new("A", Rect::new(0, 0, 1, 1)), BlockSpec::new("B", Rect::new(1, 0, 1, 1))],
            vec![],
        )
        .unwrap()
    }

    pub fn f4() -> Floorplan {
        Floorplan::new(
            1,
            Rect::new(0, 0, 2, 2),
            vec![
                BlockSpec::new("A", Rect::new(0, 1, 1, 1)),
                BlockSpec::new("B", Rect::new(1, 1, 1, 1)),
                BlockSpec::new("C", Rect::new(0, 0, 1, 1)),
                BlockSpec::new("D", Rect::new(1, 0, 1, 1)),
            ],
            vec![NetSpec::new("n1", ["A", "D"]), NetSpec::new("n2", ["C", "D"])],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::testutil::*;
    use super::*;

    #[test]
    fn f4_mosaic_ok() {
        let r = validate(&f4(), ValidationMode::Mosaic);
        assert!(r.ok);
        assert_eq!(r.uncovered_area, 0.0);
    }

    #[test]
    fn hole_detected_only_in_mosaic_mode() {
        let fp = f4().without_blocks(&["D"]).unwrap();
        let m = validate(&fp, ValidationMode::Mosaic);
        assert!(!m.ok);
        assert_eq!(m.uncovered_area, 1.0);
        assert!(validate(&fp, ValidationMode::Packed).ok);
    }

    #[test]
    fn overlap_and_bbox_findings() {
        let fp = Floorplan::new(
            2,
            Rect::new(0, 0, 4, 2),
            vec![BlockSpec::new("A", Rect::new(0, 0, 2, 2)), BlockSpec::new("B", Rect::new(1, 0, 4, 2))],
            vec![],
        )
        .unwrap();
        let r = validate(&fp, ValidationMode::Packed);
        assert!(!r.ok);
        assert_eq!(r.overlaps, vec![("A".to_string(), "B".to_string())]);
        assert_eq!(r.out_of_bbox, vec!["B".to_string()]);
        assert!(matches!(check_geometry(&fp), Err(Error::Overlap { .. })));
    }

    #[test]
    fn net_errors() {
        let bbox = Rect::new(0, 0, 2, 1);
        let blocks = || vec![BlockSpec::new("A", Rect::new(0, 0, 1, 1)), BlockSpec::new("B", Rect::new(1, 0, 1, 1))];
        let e = Floorplan::new(1, bbox, blocks(), vec![NetSpec::new("n3", ["A"])]).unwrap_err();
        assert!(matches!(e, Error::NetDegree { ref net, degree: 1 } if net == "n3"));
        let e = Floorplan::new(1, bbox, blocks(), vec![NetSpec::new("n", ["A", "A"])]).unwrap_err();
        assert!(matches!(e, Error::NetDegree { degree: 1, .. }));
        let e = Floorplan::new(1, bbox, blocks(), vec![NetSpec::new("n", ["A", "zz"])]).unwrap_err();
        assert!(matches!(e, Error::UnknownBlock { ref block, .. } if block == "zz"));
    }

    #[test]
    fn stats_conventions() {
        let s = stats(&f4());
        assert_eq!((s.n, s.k, s.avg_net_degree), (4, 2, 2.0));
        let s = stats(&f2());
        assert_eq!((s.n, s.k, s.avg_net_degree), (2, 0, 0.0));
    }

    #[test]
    fn adjacency_of_f4() {
        let adj = f4().adjacencies(0);
        let pairs: Vec<(usize, usize)> = adj.iter().map(|(a, b, _, _)| (a.0, b.0)).collect();
        assert_eq!(pairs, vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
    }
}
