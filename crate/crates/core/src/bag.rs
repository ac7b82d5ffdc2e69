//! Directed block adjacency graphs.
//!
//! For the MIS direction an edge `i -> j` exists when block `i` is left of or
//! above an abutting block `j`; for MDS when `i` is left of or below `j`.
//! Forward cuts of this DAG (sets closed under predecessors) are exactly the
//! monotone staircases of the floorplan.

use std::cmp::Reverse;
use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::floorplan::{BlockId, Floorplan};
use crate::geom::{Coord, Point, Rect, Segment, Side};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum StairDirection {
    Mis,
    Mds,
}

impl StairDirection {
    pub fn for_level(level: usize) -> Self {
        if level % 2 == 0 {
            StairDirection::Mis
        } else {
            StairDirection::Mds
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StairDirection::Mis => "MIS",
            StairDirection::Mds => "MDS",
        }
    }
}

/// How abutment and the source/sink corners are determined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AdjacencyMode {
    /// Exact dissection: blocks abut exactly and each bbox corner lies in
    /// exactly one block.
    Mosaic,
    /// Holes allowed. Facing edges within `eps` abut. Source and sink are the
    /// graph-minimal and graph-maximal blocks closest (L-infinity) to their
    /// corners; remaining minimal (maximal) blocks get a virtual edge from
    /// the source (to the sink).
    Packed { eps: Coord },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BagEdge {
    pub from: BlockId,
    pub to: BlockId,
    /// Shared boundary on `from`'s edge; `None` for virtual edges.
    pub shared: Option<Segment>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bag {
    direction: StairDirection,
    n: usize,
    source: BlockId,
    sink: BlockId,
    edges: Vec<BagEdge>,
    /// Outgoing edge indices per vertex, in canonical order.
    out: Vec<Vec<usize>>,
    /// Incoming edge indices per vertex.
    inc: Vec<Vec<usize>>,
}

fn corner_point(bbox: &Rect, dir: StairDirection, source: bool) -> (Point, &'static str) {
    match (dir, source) {
        (StairDirection::Mis, true) => (bbox.top_left(), "top-left"),
        (StairDirection::Mis, false) => (bbox.bottom_right(), "bottom-right"),
        (StairDirection::Mds, true) => (bbox.bottom_left(), "bottom-left"),
        (StairDirection::Mds, false) => (bbox.top_right(), "top-right"),
    }
}

fn order_key(seg: &Option<Segment>, to: BlockId) -> (u8, Reverse<Coord>, Coord, BlockId) {
    match seg {
        Some(s) => (0, Reverse(s.a.y + s.b.y), s.a.x + s.b.x, to),
        None => (1, Reverse(0), 0, to),
    }
}

pub fn build_bag(fp: &Floorplan, dir: StairDirection, mode: AdjacencyMode) -> Result<Bag> {
    let n = fp.len();
    if n < 2 {
        return Err(Error::Precondition(format!("a staircase needs at least 2 blocks, got {n}")));
    }
    let eps = match mode {
        AdjacencyMode::Mosaic => 0,
        AdjacencyMode::Packed { eps } => eps.max(0),
    };
    let mut edges = Vec::new();
    for (a, b, side, seg) in fp.adjacencies(eps) {
        let a_first = match (side, dir) {
            (Side::Right, _) => true,
            (Side::Left, _) => false,
            (Side::Below, StairDirection::Mis) | (Side::Above, StairDirection::Mds) => true,
            (Side::Above, StairDirection::Mis) | (Side::Below, StairDirection::Mds) => false,
        };
        let (from, to) = if a_first { (a, b) } else { (b, a) };
        edges.push(BagEdge {
            from,
            to,
            shared: Some(seg),
        });
    }

    let mut indeg = vec![0usize; n];
    let mut outdeg = vec![0usize; n];
    for e in &edges {
        outdeg[e.from.0] += 1;
        indeg[e.to.0] += 1;
    }
    let bbox = fp.bbox();
    let (source, sink) = match mode {
        AdjacencyMode::Mosaic => (
            mosaic_corner(fp, dir, true)?,
            mosaic_corner(fp, dir, false)?,
        ),
        AdjacencyMode::Packed { .. } => {
            let nearest = |deg: &[usize], source: bool, avoid: Option<BlockId>| {
                let (p, _) = corner_point(&bbox, dir, source);
                (0..n)
                    .filter(|&i| deg[i] == 0 && Some(BlockId(i)) != avoid)
                    .min_by_key(|&i| (fp.blocks()[i].rect.linf_distance(p), i))
                    .map(BlockId)
            };
            let source = nearest(&indeg, true, None).ok_or(Error::Cycle(n))?;
            let sink = nearest(&outdeg, false, Some(source))
                .ok_or_else(|| Error::Precondition("no block can serve as sink".into()))?;
            for i in 0..n {
                let v = BlockId(i);
                if indeg[i] == 0 && v != source {
                    edges.push(BagEdge {
                        from: source,
                        to: v,
                        shared: None,
                    });
                }
                if outdeg[i] == 0 && v != sink {
                    edges.push(BagEdge {
                        from: v,
                        to: sink,
                        shared: None,
                    });
                }
            }
            (source, sink)
        }
    };
    let bag = Bag::assemble(dir, n, edges, source, sink);
    let report = check_structure(&bag);
    if !report.acyclic {
        return Err(Error::Cycle(n - report.topo_order.len()));
    }
    Ok(bag)
}

fn mosaic_corner(fp: &Floorplan, dir: StairDirection, source: bool) -> Result<BlockId> {
    let (p, name) = corner_point(&fp.bbox(), dir, source);
    let hits: Vec<&crate::floorplan::Block> = fp.blocks().iter().filter(|b| b.rect.contains_point(p)).collect();
    match hits.as_slice() {
        [] => Err(Error::CornerUncovered(name)),
        [b] => Ok(b.id),
        many => Err(Error::CornerConflict {
            corner: name,
            blocks: many.iter().map(|b| b.name.clone()).collect(),
        }),
    }
}

impl Bag {
    /// Graph from explicit edges, without geometry. Structural problems are
    /// not rejected here; see [`check_structure`].
    pub fn from_edges(
        direction: StairDirection,
        n: usize,
        edges: &[(usize, usize)],
        source: usize,
        sink: usize,
    ) -> Bag {
        let edges = edges
            .iter()
            .map(|&(a, b)| BagEdge {
                from: BlockId(a),
                to: BlockId(b),
                shared: None,
            })
            .collect();
        Bag::assemble(direction, n, edges, BlockId(source), BlockId(sink))
    }

    /// Copy of the graph with one extra edge.
    pub fn with_edge(&self, from: BlockId, to: BlockId) -> Bag {
        let mut edges = self.edges.clone();
        edges.push(BagEdge { from, to, shared: None });
        Bag::assemble(self.direction, self.n, edges, self.source, self.sink)
    }

    fn assemble(direction: StairDirection, n: usize, mut edges: Vec<BagEdge>, source: BlockId, sink: BlockId) -> Bag {
        edges.sort_by_key(|e| (e.from, order_key(&e.shared, e.to)));
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            out[e.from.0].push(i);
            inc[e.to.0].push(i);
        }
        Bag {
            direction,
            n,
            source,
            sink,
            edges,
            out,
            inc,
        }
    }

    pub fn direction(&self) -> StairDirection {
        self.direction
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn source(&self) -> BlockId {
        self.source
    }

    pub fn sink(&self) -> BlockId {
        self.sink
    }

    pub fn edges(&self) -> &[BagEdge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &BagEdge {
        &self.edges[i]
    }

    /// Outgoing edge indices of `v` in canonical order (successor boundary
    /// top-to-bottom, then left-to-right; virtual edges last).
    pub fn out_edges(&self, v: BlockId) -> &[usize] {
        &self.out[v.0]
    }

    pub fn in_edges(&self, v: BlockId) -> &[usize] {
        &self.inc[v.0]
    }

    pub fn successors(&self, v: BlockId) -> impl Iterator<Item = BlockId> + '_ {
        self.out[v.0].iter().map(|&e| self.edges[e].to)
    }

    pub fn predecessors(&self, v: BlockId) -> impl Iterator<Item = BlockId> + '_ {
        self.inc[v.0].iter().map(|&e| self.edges[e].from)
    }

    pub fn in_degree(&self, v: BlockId) -> usize {
        self.inc[v.0].len()
    }

    pub fn out_degree(&self, v: BlockId) -> usize {
        self.out[v.0].len()
    }

    /// Edge list as id pairs, sorted.
    pub fn edge_pairs(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> = self.edges.iter().map(|e| (e.from.0, e.to.0)).collect();
        v.sort_unstable();
        v
    }

    pub fn virtual_edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.shared.is_none()).count()
    }

    /// Graphviz rendering; vertices are labelled with block names.
    pub fn to_dot(&self, fp: &Floorplan) -> String {
        let mut s = format!("digraph bag_{} {{\n  rankdir=LR;\n", self.direction.name());
        for i in 0..self.n {
            let v = BlockId(i);
            let name = fp.blocks().get(i).map(|b| b.name.as_str()).unwrap_or("?");
            let role = if v == self.source {
                " (source)\", shape=box"
            } else if v == self.sink {
                " (sink)\", shape=box"
            } else {
                "\""
            };
            let _ = writeln!(s, "  v{i} [label=\"{name}{role}];");
        }
        for e in &self.edges {
            let style = if e.shared.is_none() { " [style=dashed]" } else { "" };
            let _ = writeln!(s, "  v{} -> v{}{style};", e.from.0, e.to.0);
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub acyclic: bool,
    /// Topological order (Kahn, smallest id first); partial when cyclic.
    pub topo_order: Vec<BlockId>,
    pub edge_count: usize,
    pub geometric_edges: usize,
    /// `3n - 6` for `n >= 3`.
    pub planar_bound: Option<usize>,
    pub within_planar_bound: bool,
    pub zero_in_degree: Vec<BlockId>,
    pub zero_out_degree: Vec<BlockId>,
    pub unique_source_sink: bool,
    /// Vertices not reachable from the source.
    pub unreachable: usize,
}

pub fn check_structure(bag: &Bag) -> StructureReport {
    let n = bag.n;
    let mut indeg: Vec<usize> = (0..n).map(|i| bag.inc[i].len()).collect();
    let mut ready: std::collections::BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&i| indeg[i] == 0).map(Reverse).collect();
    let mut topo = Vec::with_capacity(n);
    while let Some(Reverse(v)) = ready.pop() {
        topo.push(BlockId(v));
        for &e in &bag.out[v] {
            let w = bag.edges[e].to.0;
            indeg[w] -= 1;
            if indeg[w] == 0 {
                ready.push(Reverse(w));
            }
        }
    }
    let zero_in: Vec<BlockId> = (0..n).filter(|&i| bag.inc[i].is_empty()).map(BlockId).collect();
    let zero_out: Vec<BlockId> = (0..n).filter(|&i| bag.out[i].is_empty()).map(BlockId).collect();
    let unique = zero_in == [bag.source] && zero_out == [bag.sink];

    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    if bag.source.0 < n {
        seen[bag.source.0] = true;
        queue.push_back(bag.source.0);
    }
    while let Some(v) = queue.pop_front() {
        for &e in &bag.out[v] {
            let w = bag.edges[e].to.0;
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    let geometric = bag.edges.len() - bag.virtual_edge_count();
    let bound = (n >= 3).then(|| 3 * n - 6);
    StructureReport {
        acyclic: topo.len() == n,
        topo_order: topo,
        edge_count: bag.edges.len(),
        geometric_edges: geometric,
        planar_bound: bound,
        within_planar_bound: bound.map_or(true, |b| geometric <= b),
        zero_in_degree: zero_in,
        zero_out_degree: zero_out,
        unique_source_sink: unique,
        unreachable: seen.iter().filter(|s| !**s).count(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floorplan::testutil::{f2, f4};

    #[test]
    fn f4_mis() {
        let bag = build_bag(&f4(), StairDirection::Mis, AdjacencyMode::Mosaic).unwrap();
        assert_eq!(bag.edge_pairs(), vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert_eq!((bag.source(), bag.sink()), (BlockId(0), BlockId(3)));
        let succ: Vec<BlockId> = bag.successors(BlockId(0)).collect();
        assert_eq!(succ, vec![BlockId(1), BlockId(2)]);
    }

    #[test]
    fn f4_mds() {
        let bag = build_bag(&f4(), StairDirection::Mds, AdjacencyMode::Mosaic).unwrap();
        // C->D, C->A, D->B, A->B
        assert_eq!(bag.edge_pairs(), vec![(0, 1), (2, 0), (2, 3), (3, 1)]);
        assert_eq!((bag.source(), bag.sink()), (BlockId(2), BlockId(1)));
    }

    #[test]
    fn f2_single_edge() {
        let bag = build_bag(&f2(), StairDirection::Mis, AdjacencyMode::Mosaic).unwrap();
        assert_eq!(bag.edge_pairs(), vec![(0, 1)]);
        let r = check_structure(&bag);
        assert!(r.acyclic && r.unique_source_sink);
        assert_eq!(r.edge_count, 1);
        assert_eq!(r.planar_bound, None);
    }

    #[test]
    fn structure_of_f4_and_forced_cycle() {
        let bag = build_bag(&f4(), StairDirection::Mis, AdjacencyMode::Mosaic).unwrap();
        let r = check_structure(&bag);
        assert!(r.acyclic && r.unique_source_sink && r.within_planar_bound);
        assert_eq!((r.edge_count, r.planar_bound), (4, Some(6)));
        let cyclic = bag.with_edge(BlockId(3), BlockId(0));
        assert!(!check_structure(&cyclic).acyclic);
    }

    #[test]
    fn hole_at_corner() {
        let fp = f4().without_blocks(&["D"]).unwrap();
        assert!(matches!(
            build_bag(&fp, StairDirection::Mis, AdjacencyMode::Mosaic),
            Err(Error::CornerUncovered("bottom-right"))
        ));
        let bag = build_bag(&fp, StairDirection::Mis, AdjacencyMode::Packed { eps: 0 }).unwrap();
        assert_eq!(bag.source(), BlockId(0));
        // B and C are both maximal; the one nearest the corner becomes sink
        assert!(check_structure(&bag).unique_source_sink);
        assert_eq!(bag.virtual_edge_count(), 1);
    }

    #[test]
    fn dot_mentions_names() {
        let fp = f4();
        let dot = build_bag(&fp, StairDirection::Mis, AdjacencyMode::Mosaic).unwrap().to_dot(&fp);
        assert!(dot.contains("A (source)") && dot.contains("D (sink)"));
        assert_eq!(dot.matches("->").count(), 4);
    }
}
