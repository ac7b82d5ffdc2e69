//! Exhaustive enumeration of staircases for small floorplans.
//!
//! Staircases are the order ideals of the adjacency graph that contain the
//! source and miss the sink. They are enumerated by reverse search: the
//! parent of an ideal drops its largest-id maximal non-source block, so each
//! ideal is produced exactly once.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::bag::Bag;
use crate::cut::{evaluate_cut, CutEval, Params};
use crate::error::{Error, Result};
use crate::floorplan::{BlockId, Floorplan};

pub const DEFAULT_CAP: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StaircaseSet {
    pub n: usize,
    pub source: BlockId,
    pub sink: BlockId,
    /// Bit `i` set when block `i` is on the left. Sorted by size, then by the
    /// sorted block list.
    pub masks: Vec<u64>,
}

pub fn mask_to_ids(mask: u64) -> Vec<BlockId> {
    (0..64).filter(|i| mask >> i & 1 == 1).map(BlockId).collect()
}

pub fn ids_to_mask(ids: &[BlockId]) -> Option<u64> {
    ids.iter().try_fold(0u64, |m, b| (b.0 < 64).then(|| m | 1 << b.0))
}

impl StaircaseSet {
    pub fn count(&self) -> usize {
        self.masks.len()
    }

    pub fn ideals(&self) -> Vec<Vec<BlockId>> {
        self.masks.iter().map(|&m| mask_to_ids(m)).collect()
    }
}

pub fn enumerate_staircases(bag: &Bag, cap: usize) -> Result<StaircaseSet> {
    let n = bag.len();
    if n > cap.min(64) {
        return Err(Error::CapExceeded { n, cap: cap.min(64) });
    }
    if n < 2 || bag.source() == bag.sink() {
        return Err(Error::Precondition("a cut needs distinct source and sink".into()));
    }
    let mut pred = vec![0u64; n];
    let mut succ = vec![0u64; n];
    for e in bag.edges() {
        pred[e.to.0] |= 1 << e.from.0;
        succ[e.from.0] |= 1 << e.to.0;
    }
    let (src, sink) = (bag.source().0, bag.sink().0);
    if pred[src] != 0 {
        return Err(Error::Precondition("source has predecessors".into()));
    }
    let mut out = Vec::new();
    let mut stack = vec![1u64 << src];
    while let Some(ideal) = stack.pop() {
        out.push(ideal);
        for v in 0..n {
            let bit = 1u64 << v;
            if v == sink || ideal & bit != 0 || pred[v] & !ideal != 0 {
                continue;
            }
            let child = ideal | bit;
            // v is maximal in the child; it must be the largest such block
            let dominated = (v + 1..n).any(|u| u != src && child >> u & 1 == 1 && succ[u] & child == 0);
            if !dominated {
                stack.push(child);
            }
        }
    }
    out.sort_by_cached_key(|&m| (m.count_ones(), mask_to_ids(m)));
    Ok(StaircaseSet {
        n,
        source: bag.source(),
        sink: bag.sink(),
        masks: out,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HasseDiagram {
    pub masks: Vec<u64>,
    /// Covering pairs `(i, j)`: ideal `j` adds one block to ideal `i`.
    pub edges: Vec<(usize, usize)>,
    /// Index of `{source}`.
    pub start: usize,
    /// Index of all blocks but the sink.
    pub stop: usize,
    #[serde(skip)]
    index: HashMap<u64, usize>,
}

pub fn build_hasse(s: &StaircaseSet) -> HasseDiagram {
    let index: HashMap<u64, usize> = s.masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mut edges = Vec::new();
    for (i, &m) in s.masks.iter().enumerate() {
        for v in 0..s.n {
            if m >> v & 1 == 0 {
                if let Some(&j) = index.get(&(m | 1 << v)) {
                    edges.push((i, j));
                }
            }
        }
    }
    edges.sort_unstable();
    let start = index[&(1u64 << s.source.0)];
    let full = if s.n == 64 { u64::MAX } else { (1u64 << s.n) - 1 };
    let stop = index[&(full & !(1u64 << s.sink.0))];
    HasseDiagram {
        masks: s.masks.clone(),
        edges,
        start,
        stop,
        index,
    }
}

impl HasseDiagram {
    pub fn index_of(&self, ids: &[BlockId]) -> Option<usize> {
        ids_to_mask(ids).and_then(|m| self.index.get(&m).copied())
    }

    pub fn in_degree(&self, i: usize) -> usize {
        self.edges.iter().filter(|e| e.1 == i).count()
    }

    pub fn out_degree(&self, i: usize) -> usize {
        self.edges.iter().filter(|e| e.0 == i).count()
    }

    /// Graphviz rendering; each highlighted chain is drawn in its colour.
    pub fn to_dot(&self, fp: &Floorplan, chains: &[(&[Vec<BlockId>], &str)]) -> String {
        let mut colour: HashMap<(usize, usize), &str> = HashMap::new();
        for (chain, c) in chains {
            let idx: Vec<Option<usize>> = chain.iter().map(|l| self.index_of(l)).collect();
            for w in idx.windows(2) {
                if let (Some(a), Some(b)) = (w[0], w[1]) {
                    colour.entry((a, b)).or_insert(c);
                }
            }
        }
        let mut s = String::from("digraph hasse {\n  rankdir=BT;\n  node [shape=box];\n");
        for (i, &m) in self.masks.iter().enumerate() {
            let names: Vec<&str> = mask_to_ids(m).iter().map(|b| fp.block(*b).name.as_str()).collect();
            let tag = if i == self.start {
                " START"
            } else if i == self.stop {
                " STOP"
            } else {
                ""
            };
            let _ = writeln!(s, "  s{i} [label=\"{{{}}}{tag}\"];", names.join(","));
        }
        for &(a, b) in &self.edges {
            match colour.get(&(a, b)) {
                Some(c) => {
                    let _ = writeln!(s, "  s{a} -> s{b} [color={c}, penwidth=2];");
                }
                None => {
                    let _ = writeln!(s, "  s{a} -> s{b};");
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Globally best staircase under the usual tie-break.
pub fn oracle_best(s: &StaircaseSet, fp: &Floorplan, bag: &Bag, params: &Params) -> Result<CutEval> {
    let mut best: Option<CutEval> = None;
    for ids in s.ideals() {
        let c = evaluate_cut(fp, bag, &ids, params)?;
        if best.as_ref().map_or(true, |b| c.preference(b).is_gt()) {
            best = Some(c);
        }
    }
    best.ok_or_else(|| Error::Precondition("no staircase to evaluate".into()))
}

/// True iff the left sets walk the diagram from START to STOP along covering
/// edges.
pub fn verify_chain(chain: &[Vec<BlockId>], d: &HasseDiagram) -> bool {
    let idx: Option<Vec<usize>> = chain.iter().map(|l| d.index_of(l)).collect();
    let Some(idx) = idx else { return false };
    if idx.first() != Some(&d.start) || idx.last() != Some(&d.stop) {
        return false;
    }
    idx.windows(2).all(|w| d.edges.binary_search(&(w[0], w[1])).is_ok())
}
