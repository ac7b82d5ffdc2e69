#![allow(dead_code)]

use mscut::bag::Bag;
use mscut::floorplan::{generate_floorplan, load_floorplan, GenSpec};
use mscut::{BlockId, Floorplan};

pub const F2_JSON: &str = include_str!("../../data/f2.json");
pub const F4_JSON: &str = include_str!("../../data/f4.json");

pub fn f2() -> Floorplan {
    load_floorplan(F2_JSON).unwrap()
}

pub fn f4() -> Floorplan {
    load_floorplan(F4_JSON).unwrap()
}

pub fn generate(spec: &GenSpec) -> Floorplan {
    generate_floorplan(spec).unwrap()
}

pub fn id(fp: &Floorplan, name: &str) -> BlockId {
    fp.block_by_name(name).unwrap().id
}

pub fn ids(fp: &Floorplan, names: &[&str]) -> Vec<BlockId> {
    let mut v: Vec<BlockId> = names.iter().map(|n| id(fp, n)).collect();
    v.sort();
    v
}

/// Predecessor-closed test by walking every ancestor of every member.
pub fn closed_under_ancestors(bag: &Bag, mask: u64) -> bool {
    let n = bag.len();
    let mut parents = vec![Vec::new(); n];
    for (a, b) in bag.edge_pairs() {
        parents[b].push(a);
    }
    for v in 0..n {
        if mask >> v & 1 == 0 {
            continue;
        }
        let mut stack = vec![v];
        let mut seen = vec![false; n];
        while let Some(u) = stack.pop() {
            for &w in &parents[u] {
                if mask >> w & 1 == 0 {
                    return false;
                }
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    true
}

/// Every downset holding the source and not the sink, by scanning all
/// subsets.
pub fn brute_force_staircases(bag: &Bag) -> Vec<u64> {
    let n = bag.len();
    let (s, t) = (bag.source().0, bag.sink().0);
    (0u64..1 << n)
        .filter(|m| m >> s & 1 == 1 && m >> t & 1 == 0 && closed_under_ancestors(bag, *m))
        .collect()
}

pub fn mask(ids: &[BlockId]) -> u64 {
    ids.iter().fold(0, |m, b| m | 1 << b.0)
}
