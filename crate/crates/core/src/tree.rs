//! Recursive staircase bipartitioning.
//!
//! Level `l` cuts with MIS staircases when `l` is even and MDS otherwise.
//! Every node rebuilds the adjacency graph of its own blocks; a side with at
//! least two blocks becomes a child node.

use serde::Serialize;

use crate::bag::{build_bag, AdjacencyMode, StairDirection};
use crate::cut::{partition_nets, CutEval, Params};
use crate::error::{Error, Result};
use crate::floorplan::{validate, BlockId, Floorplan, NetId, ValidationMode};
use crate::rng::derive_seed;
use crate::search::{search, SearchMode, DEFAULT_TRIALS};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TreeOptions {
    pub params: Params,
    pub mode: SearchMode,
    pub seed: u64,
    pub trials: usize,
}

impl TreeOptions {
    pub fn new(params: Params, mode: SearchMode, seed: u64) -> Self {
        TreeOptions {
            params,
            mode,
            seed,
            trials: DEFAULT_TRIALS,
        }
    }
}

/// A net as seen by one node, in global block ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeNet {
    pub origin: NetId,
    pub members: Vec<BlockId>,
    /// True once an ancestor has cut the original net.
    pub restricted: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MscNode {
    /// `""` for the root, then one `L`/`R` per level.
    pub path: String,
    pub level: usize,
    pub stype: StairDirection,
    pub adjacency: AdjacencyMode,
    /// Global block ids, sorted.
    pub blocks: Vec<BlockId>,
    pub nets: Vec<NodeNet>,
    /// Best cut, with `left` in global block ids.
    pub cut: CutEval,
    pub explored: usize,
    pub max_segments: usize,
    pub seed: u64,
    /// Original nets first cut at this node.
    pub assigned_nets: Vec<NetId>,
    pub left: Option<Box<MscNode>>,
    pub right: Option<Box<MscNode>>,
}

impl MscNode {
    pub fn right_blocks(&self) -> Vec<BlockId> {
        self.blocks
            .iter()
            .filter(|b| self.cut.left.binary_search(b).is_err())
            .copied()
            .collect()
    }

    pub fn children(&self) -> impl Iterator<Item = &MscNode> {
        self.left.iter().chain(self.right.iter()).map(|b| b.as_ref())
    }

    /// Nodes in pre-order.
    pub fn nodes(&self) -> Vec<&MscNode> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(n) = stack.pop() {
            out.push(n);
            stack.extend(n.right.iter().map(|b| b.as_ref()));
            stack.extend(n.left.iter().map(|b| b.as_ref()));
        }
        out
    }

    pub fn find(&self, path: &str) -> Option<&MscNode> {
        let mut cur = self;
        for c in path.chars() {
            cur = match c {
                'L' => cur.left.as_deref()?,
                'R' => cur.right.as_deref()?,
                _ => return None,
            };
        }
        Some(cur)
    }

    pub fn display_path(&self) -> &str {
        if self.path.is_empty() {
            "root"
        } else {
            &self.path
        }
    }
}

fn wrap(path: &str, e: Error) -> Error {
    match e {
        Error::Node { .. } => e,
        other => Error::Node {
            path: if path.is_empty() { "root".into() } else { path.into() },
            source: Box::new(other),
        },
    }
}

struct Ctx<'a> {
    fp: &'a Floorplan,
    opts: TreeOptions,
}

impl Ctx<'_> {
    fn node(&self, blocks: Vec<BlockId>, nets: Vec<NodeNet>, level: usize, path: String, seed: u64) -> Result<MscNode> {
        let stype = StairDirection::for_level(level);
        let named: Vec<(String, Vec<BlockId>)> = nets
            .iter()
            .map(|n| (self.fp.nets()[n.origin.0].name.clone(), n.members.clone()))
            .collect();
        let sub = self.fp.subset(&blocks, &named);
        let adjacency = if level == 0 && validate(&sub, ValidationMode::Mosaic).ok {
            AdjacencyMode::Mosaic
        } else {
            AdjacencyMode::Packed { eps: 0 }
        };
        let bag = build_bag(&sub, stype, adjacency).map_err(|e| wrap(&path, e))?;
        let o = &self.opts;
        let res = search(&bag, &sub, &o.params, o.mode, seed, o.trials).map_err(|e| wrap(&path, e))?;
        let split = partition_nets(sub.nets(), &res.best.left);

        let mut in_left = vec![false; blocks.len()];
        for b in &res.best.left {
            in_left[b.0] = true;
        }
        let lb: Vec<BlockId> = (0..blocks.len()).filter(|&i| in_left[i]).map(|i| blocks[i]).collect();
        let rb: Vec<BlockId> = (0..blocks.len()).filter(|&i| !in_left[i]).map(|i| blocks[i]).collect();
        let mut cut = res.best;
        cut.left = lb.clone();
        let mut assigned: Vec<NetId> = split
            .cut
            .iter()
            .map(|id| &nets[id.0])
            .filter(|n| !n.restricted)
            .map(|n| n.origin)
            .collect();
        assigned.sort_unstable();
        let lift = |subs: &[crate::cut::SubNet]| -> Vec<NodeNet> {
            subs.iter()
                .map(|s| {
                    let parent = &nets[s.parent.0];
                    NodeNet {
                        origin: parent.origin,
                        members: s.members.iter().map(|b| blocks[b.0]).collect(),
                        restricted: parent.restricted || s.restricted,
                    }
                })
                .collect()
        };
        let (lnets, rnets) = (lift(&split.left), lift(&split.right));

        let build_child = |side: char, child_blocks: Vec<BlockId>, child_nets: Vec<NodeNet>| -> Result<Option<Box<MscNode>>> {
            if child_blocks.len() < 2 {
                return Ok(None);
            }
            let child_path = format!("{path}{side}");
            let child_seed = derive_seed(seed, side as u64);
            self.node(child_blocks, child_nets, level + 1, child_path, child_seed)
                .map(|n| Some(Box::new(n)))
        };
        let (left, right) = rayon::join(|| build_child('L', lb, lnets), || build_child('R', rb, rnets));
        Ok(MscNode {
            path: path.clone(),
            level,
            stype,
            adjacency,
            blocks: blocks.clone(),
            nets,
            cut,
            explored: res.explored.len(),
            max_segments: res.max_segments,
            seed,
            assigned_nets: assigned,
            left: left?,
            right: right?,
        })
    }
}

/// Builds the full hierarchy. The root uses exact mosaic corners when the
/// floorplan is a mosaic; every other node uses the packed rules since its
/// blocks need not fill their bounding box.
pub fn build_msc_tree(fp: &Floorplan, opts: &TreeOptions) -> Result<MscNode> {
    opts.params.check()?;
    if fp.len() < 2 {
        return Err(Error::Precondition(format!("a tree needs at least 2 blocks, got {}", fp.len())));
    }
    let blocks: Vec<BlockId> = fp.blocks().iter().map(|b| b.id).collect();
    let nets = fp
        .nets()
        .iter()
        .map(|n| NodeNet {
            origin: n.id,
            members: n.members.clone(),
            restricted: false,
        })
        .collect();
    Ctx { fp, opts: *opts }.node(blocks, nets, 0, String::new(), opts.seed)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelStats {
    pub level: usize,
    pub nodes: usize,
    pub mean_balr: f64,
    pub mean_bend_ratio: f64,
    pub mean_netcut_ratio: f64,
    pub mean_gain: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TreeMetrics {
    /// Deepest level plus one.
    pub height: usize,
    pub node_count: usize,
    pub mean_balr: f64,
    /// Mean of `z / z_max` (0 when `z_max = 0`).
    pub mean_bend_ratio: f64,
    /// Mean of `k_c / k` (0 when `k = 0`).
    pub mean_netcut_ratio: f64,
    pub mean_gain: f64,
    pub levels: Vec<LevelStats>,
    /// Block counts of nodes without child nodes.
    pub leaf_block_counts: Vec<usize>,
}

fn means<'a>(nodes: impl Iterator<Item = &'a MscNode>) -> (usize, f64, f64, f64, f64) {
    let (mut c, mut b, mut z, mut k, mut g) = (0usize, 0.0, 0.0, 0.0, 0.0);
    for n in nodes {
        c += 1;
        b += n.cut.balr;
        z += n.cut.bend_ratio();
        k += n.cut.netcut_ratio();
        g += n.cut.gain;
    }
    let d = c.max(1) as f64;
    (c, b / d, z / d, k / d, g / d)
}

pub fn tree_metrics(root: &MscNode) -> TreeMetrics {
    let nodes = root.nodes();
    let height = nodes.iter().map(|n| n.level).max().unwrap_or(0) + 1;
    let (count, balr, bend, netcut, gain) = means(nodes.iter().copied());
    let levels = (0..height)
        .map(|l| {
            let (c, b, z, k, g) = means(nodes.iter().copied().filter(|n| n.level == l));
            LevelStats {
                level: l,
                nodes: c,
                mean_balr: b,
                mean_bend_ratio: z,
                mean_netcut_ratio: k,
                mean_gain: g,
            }
        })
        .collect();
    let mut leaves: Vec<usize> = nodes
        .iter()
        .filter(|n| n.left.is_none() && n.right.is_none())
        .map(|n| n.blocks.len())
        .collect();
    leaves.sort_unstable();
    TreeMetrics {
        height,
        node_count: count,
        mean_balr: balr,
        mean_bend_ratio: bend,
        mean_netcut_ratio: netcut,
        mean_gain: gain,
        levels,
        leaf_block_counts: leaves,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoutingEntry {
    pub net: NetId,
    pub path: String,
    pub level: usize,
}

/// Every net paired with the node where it is first cut, ordered by level,
/// then path, then net id.
pub fn routing_order(root: &MscNode) -> Vec<RoutingEntry> {
    let mut out: Vec<RoutingEntry> = root
        .nodes()
        .into_iter()
        .flat_map(|n| {
            n.assigned_nets.iter().map(|&net| RoutingEntry {
                net,
                path: n.path.clone(),
                level: n.level,
            })
        })
        .collect();
    out.sort_by(|a, b| (a.level, &a.path, a.net).cmp(&(b.level, &b.path, b.net)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floorplan::testutil::{f2, f4};

    fn opts() -> TreeOptions {
        TreeOptions::new(Params::new(0.4, 0.3).unwrap(), SearchMode::Bfs, 0)
    }

    #[test]
    fn f4_tree() {
        let t = build_msc_tree(&f4(), &opts()).unwrap();
        assert_eq!(t.cut.left, vec![BlockId(0), BlockId(1)]);
        assert!((t.cut.gain - 0.85).abs() < 1e-12);
        let l = t.left.as_ref().unwrap();
        let r = t.right.as_ref().unwrap();
        assert_eq!(l.stype, StairDirection::Mds);
        assert_eq!(r.blocks, vec![BlockId(2), BlockId(3)]);
        assert!((l.cut.gain - 1.0).abs() < 1e-12);
        assert!((r.cut.gain - 0.7).abs() < 1e-12);
        let m = tree_metrics(&t);
        assert_eq!((m.height, m.node_count), (2, 3));
        let order = routing_order(&t);
        assert_eq!(
            order,
            vec![
                RoutingEntry {
                    net: NetId(0),
                    path: String::new(),
                    level: 0
                },
                RoutingEntry {
                    net: NetId(1),
                    path: "R".into(),
                    level: 1
                },
            ]
        );
    }

    #[test]
    fn f2_single_node() {
        let t = build_msc_tree(&f2(), &opts()).unwrap();
        assert!(t.left.is_none() && t.right.is_none());
        assert_eq!(tree_metrics(&t).height, 1);
    }
}
