//! Single-level staircase search.
//!
//! Each mode grows the left set one block at a time from `{source}` to
//! `V \ {sink}`, admitting a block only once all its predecessors are in. The
//! resulting chain has exactly `n - 1` cuts; the best cut over everything
//! explored is returned.

use std::collections::{BTreeMap, VecDeque};

use num_rational::BigRational;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::bag::{check_structure, Bag};
use crate::cut::{assemble_boundary, crossing_segments, ratio, CutEval, Params, Weights};
use crate::cut::BalanceType;
use crate::error::{Error, Result};
use crate::floorplan::{BlockId, Floorplan};
use crate::rng::{derive_seed, rng, Rng, RNG_ALGORITHM};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SearchMode {
    Bfs,
    Dfs,
    Rand,
}

impl SearchMode {
    pub const ALL: [SearchMode; 3] = [SearchMode::Bfs, SearchMode::Dfs, SearchMode::Rand];

    pub fn name(self) -> &'static str {
        match self {
            SearchMode::Bfs => "BFS",
            SearchMode::Dfs => "DFS",
            SearchMode::Rand => "RAND",
        }
    }
}

impl std::str::FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "BFS" => Ok(SearchMode::Bfs),
            "DFS" => Ok(SearchMode::Dfs),
            "RAND" => Ok(SearchMode::Rand),
            _ => Err(Error::Config(format!("unknown mode `{s}` (expected BFS, DFS or RAND)"))),
        }
    }
}

pub const DEFAULT_TRIALS: usize = 3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Chain {
    pub mode: SearchMode,
    pub trial: usize,
    pub cuts: Vec<CutEval>,
}

impl Chain {
    pub fn left_sets(&self) -> Vec<Vec<BlockId>> {
        self.cuts.iter().map(|c| c.left.clone()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchResult {
    pub mode: SearchMode,
    pub best: CutEval,
    /// Distinct cuts seen, ordered by size then lexicographically.
    pub explored: Vec<CutEval>,
    pub chains: Vec<Chain>,
    /// Largest boundary segment count over `explored`.
    pub max_segments: usize,
    pub seed: Option<u64>,
    pub rng: Option<&'static str>,
}

struct State<'a> {
    fp: &'a Floorplan,
    bag: &'a Bag,
    w: &'a Weights,
    block_nets: &'a [Vec<usize>],
    in_l: Vec<bool>,
    rem: Vec<usize>,
    size: usize,
    area_l: i128,
    area_total: i128,
    net_count: Vec<usize>,
    k_c: usize,
}

impl<'a> State<'a> {
    fn new(fp: &'a Floorplan, bag: &'a Bag, w: &'a Weights, block_nets: &'a [Vec<usize>], area_total: i128) -> Self {
        let n = bag.len();
        let mut st = State {
            fp,
            bag,
            w,
            block_nets,
            in_l: vec![false; n],
            rem: (0..n).map(|i| bag.in_degree(BlockId(i))).collect(),
            size: 0,
            area_l: 0,
            area_total,
            net_count: vec![0; fp.nets().len()],
            k_c: 0,
        };
        st.admit(bag.source());
        st
    }

    fn admissible(&self, v: BlockId) -> bool {
        v != self.bag.sink() && !self.in_l[v.0] && self.rem[v.0] == 0
    }

    fn admit(&mut self, v: BlockId) {
        self.in_l[v.0] = true;
        self.size += 1;
        self.area_l += self.fp.block(v).area();
        for &net in &self.block_nets[v.0] {
            let deg = self.fp.nets()[net].members.len();
            let c = &mut self.net_count[net];
            if *c == 0 {
                self.k_c += 1;
            }
            *c += 1;
            if *c == deg {
                self.k_c -= 1;
            }
        }
        for w in self.bag.successors(v) {
            self.rem[w.0] -= 1;
        }
    }

    fn balance(&self) -> BigRational {
        match self.w.baltype {
            BalanceType::Area => ratio(self.area_l, self.area_total - self.area_l),
            BalanceType::Number => ratio(self.size as i128, (self.bag.len() - self.size) as i128),
        }
    }

    fn left(&self) -> Vec<BlockId> {
        (0..self.in_l.len()).filter(|&i| self.in_l[i]).map(BlockId).collect()
    }
}

struct Recorder {
    explored: BTreeMap<(usize, Vec<BlockId>), CutEval>,
}

impl Recorder {
    fn record(&mut self, st: &State) -> Result<CutEval> {
        let left = st.left();
        let key = (left.len(), left);
        if let Some(c) = self.explored.get(&key) {
            return Ok(c.clone());
        }
        let boundary = assemble_boundary(crossing_segments(st.bag, &st.in_l), st.bag.direction())?;
        let cut = CutEval::build(
            key.1.clone(),
            st.balance(),
            st.k_c,
            st.fp.nets().len(),
            boundary,
            st.w,
        );
        self.explored.insert(key, cut.clone());
        Ok(cut)
    }
}

fn run_bfs(st: &mut State, rec: &mut Recorder, cuts: &mut Vec<CutEval>) -> Result<()> {
    let mut queue = VecDeque::from([st.bag.source()]);
    cuts.push(rec.record(st)?);
    while let Some(u) = queue.pop_front() {
        for w in st.bag.successors(u) {
            if st.admissible(w) {
                st.admit(w);
                cuts.push(rec.record(st)?);
                queue.push_back(w);
            }
        }
    }
    Ok(())
}

fn run_dfs(st: &mut State, rec: &mut Recorder, cuts: &mut Vec<CutEval>) -> Result<()> {
    let mut stack = vec![(st.bag.source(), 0usize)];
    cuts.push(rec.record(st)?);
    while let Some(top) = stack.last_mut() {
        let (v, i) = *top;
        let out = st.bag.out_edges(v);
        if i == out.len() {
            stack.pop();
            continue;
        }
        top.1 += 1;
        let w = st.bag.edge(out[i]).to;
        // a block that is not yet closed is reached again from its last predecessor
        if st.admissible(w) {
            st.admit(w);
            cuts.push(rec.record(st)?);
            stack.push((w, 0));
        }
    }
    Ok(())
}

fn run_rand(st: &mut State, rec: &mut Recorder, cuts: &mut Vec<CutEval>, rng: &mut Rng) -> Result<()> {
    let n = st.bag.len();
    let mut wave = vec![st.bag.source()];
    let mut in_wave = vec![false; n];
    cuts.push(rec.record(st)?);
    while st.size < n - 1 {
        for v in &wave {
            in_wave[v.0] = true;
        }
        let mut targets: Vec<BlockId> = wave
            .iter()
            .flat_map(|&u| st.bag.successors(u))
            .filter(|&w| st.admissible(w))
            .collect();
        let mut next = Vec::new();
        while !targets.is_empty() {
            let w = targets.swap_remove(rng.gen_range(0..targets.len()));
            if st.in_l[w.0] {
                continue;
            }
            st.admit(w);
            cuts.push(rec.record(st)?);
            next.push(w);
            for x in st.bag.successors(w) {
                if st.admissible(x) {
                    targets.extend(st.bag.predecessors(x).filter(|p| in_wave[p.0]).map(|_| x));
                }
            }
        }
        for v in &wave {
            in_wave[v.0] = false;
        }
        if next.is_empty() {
            return Err(Error::Unreachable(n - 1 - st.size));
        }
        wave = next;
    }
    Ok(())
}

fn precheck(bag: &Bag, fp: &Floorplan) -> Result<()> {
    let n = bag.len();
    if n != fp.len() {
        return Err(Error::Precondition("graph and floorplan sizes differ".into()));
    }
    if n < 2 || bag.source() == bag.sink() {
        return Err(Error::Precondition("a cut needs distinct source and sink".into()));
    }
    let r = check_structure(bag);
    if !r.acyclic {
        return Err(Error::Cycle(n - r.topo_order.len()));
    }
    if r.unreachable > 0 {
        return Err(Error::Unreachable(r.unreachable));
    }
    Ok(())
}

/// Runs one search mode. `seed` and `trials` only matter for RAND; trial `t`
/// draws from a stream derived from `(seed, t)`.
pub fn search(
    bag: &Bag,
    fp: &Floorplan,
    params: &Params,
    mode: SearchMode,
    seed: u64,
    trials: usize,
) -> Result<SearchResult> {
    precheck(bag, fp)?;
    let w = Weights::new(params)?;
    let n = bag.len();
    let mut block_nets = vec![Vec::new(); n];
    for (i, net) in fp.nets().iter().enumerate() {
        for m in &net.members {
            block_nets[m.0].push(i);
        }
    }
    let area_total: i128 = fp.blocks().iter().map(|b| b.area()).sum();
    let mut rec = Recorder {
        explored: BTreeMap::new(),
    };
    let runs = if mode == SearchMode::Rand { trials.max(1) } else { 1 };
    let mut chains = Vec::with_capacity(runs);
    for trial in 0..runs {
        let mut st = State::new(fp, bag, &w, &block_nets, area_total);
        let mut cuts = Vec::with_capacity(n - 1);
        match mode {
            SearchMode::Bfs => run_bfs(&mut st, &mut rec, &mut cuts)?,
            SearchMode::Dfs => run_dfs(&mut st, &mut rec, &mut cuts)?,
            SearchMode::Rand => {
                let mut r = rng(derive_seed(seed, trial as u64));
                run_rand(&mut st, &mut rec, &mut cuts, &mut r)?
            }
        }
        if cuts.len() != n - 1 {
            return Err(Error::Unreachable(n - 1 - cuts.len()));
        }
        chains.push(Chain { mode, trial, cuts });
    }
    let explored: Vec<CutEval> = rec.explored.into_values().collect();
    let best = crate::cut::best_of(&explored).map(|i| explored[i].clone()).expect("n >= 2");
    let max_segments = explored.iter().map(|c| c.segments).max().unwrap_or(0);
    let rand = mode == SearchMode::Rand;
    Ok(SearchResult {
        mode,
        best,
        explored,
        chains,
        max_segments,
        seed: rand.then_some(seed),
        rng: rand.then_some(RNG_ALGORITHM),
    })
}

/// Level-order greedy expansion in the graph's canonical adjacency order.
pub fn mscut_bend_bfs(bag: &Bag, fp: &Floorplan, params: &Params) -> Result<SearchResult> {
    search(bag, fp, params, SearchMode::Bfs, 0, 1)
}

/// Depth-first greedy expansion; a block that is not yet closed is deferred
/// until the search returns to it through its last predecessor.
pub fn mscut_bend_dfs(bag: &Bag, fp: &Floorplan, params: &Params) -> Result<SearchResult> {
    search(bag, fp, params, SearchMode::Dfs, 0, 1)
}

/// Randomized wavefront: per round, cut edges leaving the current wavefront
/// towards closed blocks are consumed in uniformly random order; the blocks
/// admitted in a round form the next wavefront.
pub fn mscut_bend_rand(bag: &Bag, fp: &Floorplan, params: &Params, seed: u64, trials: usize) -> Result<SearchResult> {
    search(bag, fp, params, SearchMode::Rand, seed, trials)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PickHistogram {
    /// Out-degree of the vertex.
    pub degree: usize,
    /// `counts[i]` is how often position `i + 1` was drawn.
    pub counts: Vec<u64>,
    pub mean: f64,
}

/// Empirical distribution of uniformly random positions in a vertex's
/// successor list.
pub fn neighbor_pick_distribution(bag: &Bag, vertex: BlockId, samples: u64, seed: u64) -> Result<PickHistogram> {
    if vertex.0 >= bag.len() {
        return Err(Error::Precondition(format!("vertex {} out of range", vertex.0)));
    }
    let p = bag.out_degree(vertex);
    if p == 0 {
        return Err(Error::Precondition("vertex has no successors".into()));
    }
    if samples == 0 {
        return Err(Error::Precondition("at least one sample is required".into()));
    }
    let mut r = rng(seed);
    let mut counts = vec![0u64; p];
    for _ in 0..samples {
        counts[r.gen_range(0..p)] += 1;
    }
    let total: u128 = counts.iter().enumerate().map(|(i, &c)| (i as u128 + 1) * c as u128).sum();
    Ok(PickHistogram {
        degree: p,
        counts,
        mean: total as f64 / samples as f64,
    })
}
