//! Evaluation of a single monotone staircase bipartition.
//!
//! A cut is given by its left set `L` (which holds the source and not the
//! sink). Gains are computed exactly over rationals and compared exactly;
//! the `f64` value is the correctly rounded image of the exact gain.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::bag::{Bag, StairDirection};
use crate::error::{Error, Result};
use crate::floorplan::{BlockId, Floorplan, Net, NetId};
use crate::geom::{Coord, Orientation, Point, Segment};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BalanceType {
    /// Ratio of summed block areas.
    #[default]
    Area,
    /// Ratio of block counts.
    Number,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Params {
    /// Weight of the balance term.
    pub gamma: f64,
    /// Weight of the bend term. The net-cut term gets `1 - gamma - beta`.
    pub beta: f64,
    #[serde(default)]
    pub baltype: BalanceType,
}

impl Params {
    pub fn new(gamma: f64, beta: f64) -> Result<Self> {
        let p = Params {
            gamma,
            beta,
            baltype: BalanceType::Area,
        };
        p.check()?;
        Ok(p)
    }

    pub fn with_baltype(self, baltype: BalanceType) -> Self {
        Params { baltype, ..self }
    }

    pub fn check(&self) -> Result<()> {
        let unit = 0.0..=1.0;
        if !unit.contains(&self.gamma) || !unit.contains(&self.beta) {
            return Err(Error::InvalidParams(format!(
                "gamma = {} and beta = {} must lie in [0, 1]",
                self.gamma, self.beta
            )));
        }
        if self.gamma + self.beta > 1.0 + 1e-12 {
            return Err(Error::InvalidParams(format!(
                "gamma + beta = {} exceeds 1",
                self.gamma + self.beta
            )));
        }
        Ok(())
    }
}

/// Exact weights derived once per search.
#[derive(Clone, Debug)]
pub(crate) struct Weights {
    gamma: BigRational,
    beta: BigRational,
    rest: BigRational,
    pub(crate) baltype: BalanceType,
}

impl Weights {
    pub(crate) fn new(p: &Params) -> Result<Self> {
        p.check()?;
        let conv = |v: f64| BigRational::from_float(v).expect("finite weight");
        let gamma = conv(p.gamma);
        let beta = conv(p.beta);
        let mut rest = BigRational::one() - &gamma - &beta;
        if rest < BigRational::zero() {
            rest = BigRational::zero();
        }
        Ok(Weights {
            gamma,
            beta,
            rest,
            baltype: p.baltype,
        })
    }

    pub(crate) fn gain(&self, balr: &BigRational, k_c: usize, k: usize, z: usize, z_max: usize) -> BigRational {
        let net = if k == 0 {
            BigRational::one()
        } else {
            BigRational::new(BigInt::from(k - k_c), BigInt::from(k))
        };
        let bend = if z_max == 0 {
            BigRational::one()
        } else {
            BigRational::new(BigInt::from(z_max.saturating_sub(z)), BigInt::from(z_max))
        };
        &self.gamma * balr + &self.rest * net + &self.beta * bend
    }
}

pub(crate) fn ratio(a: i128, b: i128) -> BigRational {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    if hi == 0 {
        return BigRational::one();
    }
    BigRational::new(BigInt::from(lo), BigInt::from(hi))
}

pub(crate) fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Weighted objective
/// `gamma * balr + (1 - gamma - beta) * (1 - k_c / k) + beta * (1 - z / z_max)`
/// with the net factor taken as 1 when `k = 0` and the bend factor as 1 when
/// `z_max = 0`.
pub fn gain(params: &Params, balr: f64, k_c: usize, k: usize, z: usize, z_max: usize) -> Result<f64> {
    let w = Weights::new(params)?;
    let balr = BigRational::from_float(balr)
        .filter(|b| *b >= BigRational::zero() && *b <= BigRational::one())
        .ok_or_else(|| Error::InvalidParams(format!("balance ratio {balr} outside [0, 1]")))?;
    if k_c > k || z > z_max {
        return Err(Error::InvalidParams("k_c must not exceed k and z must not exceed z_max".into()));
    }
    Ok(to_f64(&w.gain(&balr, k_c, k, z, z_max)))
}

/// Open rectilinear chain given by its vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Polyline {
    pub points: Vec<Point>,
}

impl Polyline {
    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        self.points.windows(2).map(|w| Segment::new(w[0], w[1]))
    }

    pub fn segment_count(&self) -> usize {
        self.points.len().saturating_sub(1)
    }

    /// Vertices where the orientation changes.
    pub fn bend_points(&self) -> Vec<Point> {
        let segs: Vec<Segment> = self.segments().collect();
        segs.windows(2)
            .filter(|w| w[0].orientation() != w[1].orientation())
            .map(|w| w[0].b)
            .collect()
    }

    pub fn length(&self) -> Coord {
        self.segments().map(|s| s.len()).sum()
    }
}

/// Bends `z` (orientation changes) and the normalizer `z_max`, one fewer
/// than the number of segments.
pub fn count_bends(p: &Polyline) -> (usize, usize) {
    (p.bend_points().len(), p.segment_count().saturating_sub(1))
}

/// Separating boundary of a cut, one polyline per connected piece. Mosaic
/// cuts have exactly one piece; cuts of sub-floorplans with holes may have
/// several.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Boundary {
    pub pieces: Vec<Polyline>,
}

impl Boundary {
    pub fn segments(&self) -> usize {
        self.pieces.iter().map(Polyline::segment_count).sum()
    }

    pub fn bends(&self) -> usize {
        self.pieces.iter().map(|p| count_bends(p).0).sum()
    }

    pub fn z_max(&self) -> usize {
        self.segments().saturating_sub(1)
    }

    pub fn length(&self) -> Coord {
        self.pieces.iter().map(Polyline::length).sum()
    }
}

/// Merges collinear touching segments and chains them into oriented pieces.
/// MIS pieces run from their upper-right end to their lower-left end, MDS
/// pieces from lower-right to upper-left.
pub(crate) fn assemble_boundary(segs: impl IntoIterator<Item = Segment>, dir: StairDirection) -> Result<Boundary> {
    let mut lines: BTreeMap<(u8, Coord), Vec<(Coord, Coord)>> = BTreeMap::new();
    for s in segs {
        if s.is_empty() {
            continue;
        }
        match s.orientation() {
            Orientation::Horizontal => lines
                .entry((0, s.a.y))
                .or_default()
                .push((s.a.x.min(s.b.x), s.a.x.max(s.b.x))),
            Orientation::Vertical => lines
                .entry((1, s.a.x))
                .or_default()
                .push((s.a.y.min(s.b.y), s.a.y.max(s.b.y))),
        }
    }
    let mut merged: Vec<(Point, Point)> = Vec::new();
    for ((kind, c), mut iv) in lines {
        iv.sort_unstable();
        let mut cur = iv[0];
        let mut emit = |(lo, hi): (Coord, Coord)| {
            merged.push(if kind == 0 {
                (Point::new(lo, c), Point::new(hi, c))
            } else {
                (Point::new(c, lo), Point::new(c, hi))
            })
        };
        for &(lo, hi) in &iv[1..] {
            if lo <= cur.1 {
                cur.1 = cur.1.max(hi);
            } else {
                emit(cur);
                cur = (lo, hi);
            }
        }
        emit(cur);
    }

    let mut at: HashMap<Point, Vec<usize>> = HashMap::with_capacity(merged.len() * 2);
    for (i, &(a, b)) in merged.iter().enumerate() {
        at.entry(a).or_default().push(i);
        at.entry(b).or_default().push(i);
    }
    if let Some((p, _)) = at.iter().find(|(_, v)| v.len() > 2) {
        return Err(Error::MalformedBoundary(format!(
            "{} boundary segments meet at ({}, {})",
            at[p].len(),
            p.x,
            p.y
        )));
    }
    let mut ends: Vec<Point> = at.iter().filter(|(_, v)| v.len() == 1).map(|(p, _)| *p).collect();
    ends.sort_unstable();
    let mut used = vec![false; merged.len()];
    let mut pieces = Vec::new();
    for start in ends {
        let first = at[&start][0];
        if used[first] {
            continue;
        }
        let mut points = vec![start];
        let (mut p, mut s) = (start, first);
        loop {
            used[s] = true;
            let (a, b) = merged[s];
            p = if a == p { b } else { a };
            points.push(p);
            match at[&p].iter().find(|&&t| t != s) {
                Some(&t) => s = t,
                None => break,
            }
        }
        let key = |q: &Point| match dir {
            StairDirection::Mis => (q.x + q.y, q.x),
            StairDirection::Mds => (q.x - q.y, q.x),
        };
        if key(&points[0]) < key(points.last().expect("non-empty")) {
            points.reverse();
        }
        pieces.push(Polyline { points });
    }
    if used.iter().any(|u| !u) {
        return Err(Error::MalformedBoundary("boundary contains a closed loop".into()));
    }
    pieces.sort_by(|a, b| a.points.cmp(&b.points));
    Ok(Boundary { pieces })
}

pub(crate) fn mask(n: usize, left: &[BlockId]) -> Result<Vec<bool>> {
    let mut m = vec![false; n];
    for &b in left {
        if b.0 >= n {
            return Err(Error::Precondition(format!("block id {} out of range", b.0)));
        }
        m[b.0] = true;
    }
    Ok(m)
}

fn check_sides(bag: &Bag, m: &[bool]) -> Result<()> {
    if !m[bag.source().0] {
        return Err(Error::Precondition("source must be in the left set".into()));
    }
    if m[bag.sink().0] {
        return Err(Error::Precondition("sink must not be in the left set".into()));
    }
    Ok(())
}

/// True iff no edge leads from the right side into `left`, i.e. `left` is
/// closed under predecessors.
pub fn is_valid_mscut(bag: &Bag, left: &[BlockId]) -> Result<bool> {
    let m = mask(bag.len(), left)?;
    check_sides(bag, &m)?;
    Ok(!bag.edges().iter().any(|e| !m[e.from.0] && m[e.to.0]))
}

/// Geometric boundary between the blocks of `left` and the rest, from
/// pairwise abutment.
pub fn boundary_polyline(fp: &Floorplan, left: &[BlockId], dir: StairDirection) -> Result<Polyline> {
    let m = mask(fp.len(), left)?;
    let segs = fp
        .adjacencies(0)
        .into_iter()
        .filter(|(a, b, _, _)| m[a.0] != m[b.0])
        .map(|(_, _, _, s)| s);
    let mut b = assemble_boundary(segs, dir)?;
    match b.pieces.len() {
        1 => Ok(b.pieces.pop().expect("one piece")),
        k => Err(Error::DisconnectedBoundary(k)),
    }
}

/// A net restricted to one side of a cut.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubNet {
    pub parent: NetId,
    pub members: Vec<BlockId>,
    /// True when the parent net was cut and this is its surviving part.
    pub restricted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NetSplit {
    pub k_c: usize,
    pub k: usize,
    pub cut: Vec<NetId>,
    pub left: Vec<SubNet>,
    pub right: Vec<SubNet>,
}

pub fn partition_nets(nets: &[Net], left: &[BlockId]) -> NetSplit {
    let n = nets
        .iter()
        .flat_map(|x| x.members.iter().map(|b| b.0 + 1))
        .chain(left.iter().map(|b| b.0 + 1))
        .max()
        .unwrap_or(0);
    let mut m = vec![false; n];
    for b in left {
        m[b.0] = true;
    }
    let mut split = NetSplit {
        k_c: 0,
        k: nets.len(),
        cut: Vec::new(),
        left: Vec::new(),
        right: Vec::new(),
    };
    for net in nets {
        let (l, r): (Vec<BlockId>, Vec<BlockId>) = net.members.iter().partition(|b| m[b.0]);
        let restricted = !l.is_empty() && !r.is_empty();
        if restricted {
            split.k_c += 1;
            split.cut.push(net.id);
        }
        for (side, members) in [(&mut split.left, l), (&mut split.right, r)] {
            if members.len() >= 2 {
                side.push(SubNet {
                    parent: net.id,
                    members,
                    restricted,
                });
            }
        }
    }
    split
}

pub(crate) fn balance_exact(fp: &Floorplan, m: &[bool], baltype: BalanceType) -> BigRational {
    match baltype {
        BalanceType::Area => {
            let (mut l, mut r) = (0i128, 0i128);
            for b in fp.blocks() {
                if m[b.id.0] {
                    l += b.area();
                } else {
                    r += b.area();
                }
            }
            ratio(l, r)
        }
        BalanceType::Number => {
            let l = m.iter().filter(|x| **x).count() as i128;
            ratio(l, m.len() as i128 - l)
        }
    }
}

/// `min / max` of the two sides' areas (or block counts).
pub fn balance_ratio(fp: &Floorplan, left: &[BlockId], baltype: BalanceType) -> Result<f64> {
    let m = mask(fp.len(), left)?;
    let l = m.iter().filter(|x| **x).count();
    if l == 0 || l == fp.len() {
        return Err(Error::Precondition("both sides of a cut must be non-empty".into()));
    }
    Ok(to_f64(&balance_exact(fp, &m, baltype)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CutEval {
    /// Sorted left set.
    pub left: Vec<BlockId>,
    pub balr: f64,
    pub k_c: usize,
    pub k: usize,
    pub z: usize,
    pub z_max: usize,
    pub segments: usize,
    pub gain: f64,
    pub boundary: Boundary,
    #[serde(skip)]
    pub(crate) exact: BigRational,
}

impl CutEval {
    pub(crate) fn build(
        left: Vec<BlockId>,
        balr: BigRational,
        k_c: usize,
        k: usize,
        boundary: Boundary,
        w: &Weights,
    ) -> CutEval {
        let z = boundary.bends();
        let z_max = boundary.z_max();
        let exact = w.gain(&balr, k_c, k, z, z_max);
        CutEval {
            left,
            balr: to_f64(&balr),
            k_c,
            k,
            z,
            z_max,
            segments: boundary.segments(),
            gain: to_f64(&exact),
            boundary,
            exact,
        }
    }

    /// Exact gain comparison; ties go to the smaller, then lexicographically
    /// smaller, left set. `Greater` means `self` is preferred.
    pub fn preference(&self, other: &CutEval) -> Ordering {
        self.exact
            .cmp(&other.exact)
            .then_with(|| other.left.len().cmp(&self.left.len()))
            .then_with(|| other.left.cmp(&self.left))
    }

    pub fn bend_ratio(&self) -> f64 {
        if self.z_max == 0 {
            0.0
        } else {
            self.z as f64 / self.z_max as f64
        }
    }

    pub fn netcut_ratio(&self) -> f64 {
        if self.k == 0 {
            0.0
        } else {
            self.k_c as f64 / self.k as f64
        }
    }
}

/// Index of the preferred cut.
pub(crate) fn best_of(cuts: &[CutEval]) -> Option<usize> {
    (0..cuts.len()).max_by(|&a, &b| cuts[a].preference(&cuts[b]))
}

pub(crate) fn crossing_segments<'a>(bag: &'a Bag, m: &'a [bool]) -> impl Iterator<Item = Segment> + 'a {
    bag.edges()
        .iter()
        .filter(|e| m[e.from.0] && !m[e.to.0])
        .filter_map(|e| e.shared)
}

/// Evaluates the cut `left` on the floorplan's own nets.
pub fn evaluate_cut(fp: &Floorplan, bag: &Bag, left: &[BlockId], params: &Params) -> Result<CutEval> {
    let w = Weights::new(params)?;
    if bag.len() != fp.len() {
        return Err(Error::Precondition("graph and floorplan sizes differ".into()));
    }
    let m = mask(fp.len(), left)?;
    check_sides(bag, &m)?;
    if bag.edges().iter().any(|e| !m[e.from.0] && m[e.to.0]) {
        return Err(Error::Precondition("left set is not closed under predecessors".into()));
    }
    let mut sorted: Vec<BlockId> = (0..fp.len()).filter(|&i| m[i]).map(BlockId).collect();
    sorted.dedup();
    let split = partition_nets(fp.nets(), &sorted);
    let boundary = assemble_boundary(crossing_segments(bag, &m), bag.direction())?;
    let balr = balance_exact(fp, &m, w.baltype);
    Ok(CutEval::build(sorted, balr, split.k_c, split.k, boundary, &w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bag::{build_bag, AdjacencyMode};
    use crate::floorplan::testutil::{f2, f4};

    fn ids(v: &[usize]) -> Vec<BlockId> {
        v.iter().map(|&i| BlockId(i)).collect()
    }

    fn mis(fp: &Floorplan) -> Bag {
        build_bag(fp, StairDirection::Mis, AdjacencyMode::Mosaic).unwrap()
    }

    #[test]
    fn validity_on_f4() {
        let bag = mis(&f4());
        assert!(is_valid_mscut(&bag, &ids(&[0, 1])).unwrap());
        assert!(is_valid_mscut(&bag, &ids(&[0, 1, 2])).unwrap());
        assert!(is_valid_mscut(&bag, &ids(&[0, 3])).is_err());
        assert!(is_valid_mscut(&bag, &ids(&[1])).is_err());
        let back = bag.with_edge(BlockId(2), BlockId(1));
        assert!(!is_valid_mscut(&back, &ids(&[0, 1])).unwrap());
    }

    #[test]
    fn boundaries_on_f4() {
        let fp = f4();
        let p = boundary_polyline(&fp, &ids(&[0]), StairDirection::Mis).unwrap();
        assert_eq!(p.points, vec![Point::new(1, 2), Point::new(1, 1), Point::new(0, 1)]);
        assert_eq!(count_bends(&p), (1, 1));
        let p = boundary_polyline(&fp, &ids(&[0, 1]), StairDirection::Mis).unwrap();
        assert_eq!(p.points, vec![Point::new(2, 1), Point::new(0, 1)]);
        assert_eq!(count_bends(&p), (0, 0));
        let p = boundary_polyline(&fp, &ids(&[0, 2]), StairDirection::Mis).unwrap();
        assert_eq!(p.segment_count(), 1);
    }

    #[test]
    fn five_segment_staircase_has_four_bends() {
        let p = Polyline {
            points: vec![
                Point::new(5, 5),
                Point::new(5, 4),
                Point::new(3, 4),
                Point::new(3, 2),
                Point::new(1, 2),
                Point::new(1, 0),
            ],
        };
        assert_eq!(count_bends(&p), (4, 4));
    }

    #[test]
    fn net_partition_on_f4() {
        let fp = f4();
        let s = partition_nets(fp.nets(), &ids(&[0, 1]));
        assert_eq!(s.k_c, 1);
        assert!(s.left.is_empty());
        assert_eq!(s.right.len(), 1);
        assert_eq!(s.right[0].parent, NetId(1));
        let s = partition_nets(fp.nets(), &ids(&[0, 2]));
        assert_eq!(s.k_c, 2);
        assert!(s.left.is_empty() && s.right.is_empty());
        let s = partition_nets(&[], &ids(&[0]));
        assert_eq!((s.k_c, s.k), (0, 0));
    }

    #[test]
    fn balance_on_f4() {
        let fp = f4();
        assert_eq!(balance_ratio(&fp, &ids(&[0, 1]), BalanceType::Area).unwrap(), 1.0);
        assert_eq!(balance_ratio(&fp, &ids(&[0]), BalanceType::Area).unwrap(), 1.0 / 3.0);
        assert_eq!(balance_ratio(&fp, &ids(&[0]), BalanceType::Number).unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn gain_formula() {
        let p = Params::new(0.4, 0.3).unwrap();
        assert!((gain(&p, 1.0, 1, 2, 0, 0).unwrap() - 0.85).abs() < 1e-12);
        assert!((gain(&p, 1.0, 2, 2, 0, 0).unwrap() - 0.70).abs() < 1e-12);
        let p = Params::new(1.0, 0.0).unwrap();
        assert_eq!(gain(&p, 0.25, 3, 4, 2, 5).unwrap(), 0.25);
        assert!(Params::new(0.8, 0.3).is_err());
    }

    #[test]
    fn evaluate_on_fixtures() {
        let fp = f4();
        let bag = mis(&fp);
        let p = Params::new(0.4, 0.3).unwrap();
        let c = evaluate_cut(&fp, &bag, &ids(&[0, 1]), &p).unwrap();
        assert_eq!((c.balr, c.k_c, c.z, c.z_max), (1.0, 1, 0, 0));
        assert!((c.gain - 0.85).abs() < 1e-12);
        let c = evaluate_cut(&fp, &bag, &ids(&[0]), &p).unwrap();
        assert_eq!((c.k_c, c.z, c.z_max), (1, 1, 1));
        assert!((c.gain - (0.4 / 3.0 + 0.15)).abs() < 1e-12);
        let fp = f2();
        let c = evaluate_cut(&fp, &mis(&fp), &ids(&[0]), &Params::new(0.5, 0.5).unwrap()).unwrap();
        assert_eq!(c.gain, 1.0);
    }

    #[test]
    fn tie_break_prefers_smaller_then_lexicographic() {
        let fp = f4();
        let bag = mis(&fp);
        let p = Params::new(1.0, 0.0).unwrap();
        let ab = evaluate_cut(&fp, &bag, &ids(&[0, 1]), &p).unwrap();
        let ac = evaluate_cut(&fp, &bag, &ids(&[0, 2]), &p).unwrap();
        assert_eq!(ab.preference(&ac), Ordering::Greater);
    }
}
