//! Proxy global router for early via estimation.
//!
//! Each net is routed at the tree node where it is first cut. Pins are block
//! centers, ordered along the node's staircase (by `x + y` for MIS, `x - y`
//! for MDS), and consecutive pins are joined by L paths whose corner stays
//! inside the node's blocks where possible.
//! Under a reserved-layer model every bend of the merged net route costs a
//! via, plus one escape via per end of the chain. This is a transparent
//! stand-in for a real staircase router: absolute counts are not meaningful,
//! trends across parameters are.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bag::StairDirection;
use crate::cut::Polyline;
use crate::error::{Error, Result};
use crate::floorplan::{BlockId, Floorplan, NetId};
use crate::geom::{Coord, Point, Rect};
use crate::tree::{routing_order, MscNode};

pub const ROUTER_LABEL: &str = "proxy-router";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RouteModel {
    /// Metal layers; half carry horizontal and half vertical wires.
    pub layers: usize,
    /// Track pitch in layout units.
    pub wire_pitch: f64,
    /// Escape vias per chain end (0 or 1).
    pub escape: usize,
}

impl Default for RouteModel {
    fn default() -> Self {
        RouteModel {
            layers: 8,
            wire_pitch: 1.0,
            escape: 1,
        }
    }
}

impl RouteModel {
    pub fn check(&self) -> Result<()> {
        if self.layers < 2 {
            return Err(Error::Config("a route model needs at least 2 layers".into()));
        }
        if !(self.wire_pitch > 0.0 && self.wire_pitch.is_finite()) {
            return Err(Error::Config("wire pitch must be positive".into()));
        }
        if self.escape > 1 {
            return Err(Error::Config("escape vias per end must be 0 or 1".into()));
        }
        Ok(())
    }

    pub fn layers_per_direction(&self) -> usize {
        self.layers / 2
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoutedNet {
    pub net: NetId,
    pub name: String,
    /// Path of the tree node the net is routed in. Its demand is charged to
    /// that node's region, or to the nearest ancestor region when the node's
    /// staircase has no shared boundary.
    pub path: String,
    /// Merged route in layout units.
    pub points: Vec<[f64; 2]>,
    pub bends: usize,
    pub vias: usize,
    /// Sum of the half-perimeter lengths of the pin-to-pin connections.
    pub length: f64,
    /// Bends of the staircase of the routing node.
    pub region_bends: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionLoad {
    pub region: String,
    pub demand: f64,
    pub capacity: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CongestionReport {
    pub router: &'static str,
    pub regions: Vec<RegionLoad>,
    pub average: f64,
    pub max: f64,
    /// Regions whose demand exceeds capacity.
    pub overloaded: Vec<String>,
}

/// Merged route of a pin chain in doubled grid coordinates, or `None` for
/// fewer than two pins. Consecutive pins are joined horizontal first.
pub fn chain_route(pins: &[Point]) -> Option<Polyline> {
    clipped_chain_route(pins, |_| true)
}

/// Like [`chain_route`], but each L path turns vertical first when only
/// that corner lies `inside` the routing region.
pub fn clipped_chain_route(pins: &[Point], inside: impl Fn(Point) -> bool) -> Option<Polyline> {
    if pins.len() < 2 {
        return None;
    }
    let mut pts: Vec<Point> = vec![pins[0]];
    for w in pins.windows(2) {
        let h = Point::new(w[1].x, w[0].y);
        let v = Point::new(w[0].x, w[1].y);
        pts.push(if inside(h) || !inside(v) { h } else { v });
        pts.push(w[1]);
    }
    pts.dedup();
    let mut merged: Vec<Point> = Vec::with_capacity(pts.len());
    for p in pts {
        if merged.len() >= 2 {
            let (a, b) = (merged[merged.len() - 2], merged[merged.len() - 1]);
            if (a.x == b.x && b.x == p.x) || (a.y == b.y && b.y == p.y) {
                merged.pop();
            }
        }
        merged.push(p);
    }
    if merged.len() == 1 {
        merged.push(merged[0]);
    }
    Some(Polyline { points: merged })
}

fn doubled(r: Rect) -> Rect {
    Rect {
        x0: 2 * r.x0,
        y0: 2 * r.y0,
        x1: 2 * r.x1,
        y1: 2 * r.y1,
    }
}

fn hpwl(a: Point, b: Point) -> Coord {
    (a.x - b.x).abs() + (a.y - b.y).abs()
}

fn order_pins(fp: &Floorplan, members: &[BlockId], dir: StairDirection) -> Vec<Point> {
    let mut pins: Vec<(Coord, BlockId, Point)> = members
        .iter()
        .map(|&b| {
            let c = fp.block(b).rect.center2();
            let key = match dir {
                StairDirection::Mis => c.x + c.y,
                StairDirection::Mds => c.x - c.y,
            };
            (key, b, c)
        })
        .collect();
    pins.sort_unstable_by_key(|&(k, b, _)| (k, b));
    pins.into_iter().map(|(_, _, p)| p).collect()
}

pub fn route_nets(tree: &MscNode, fp: &Floorplan, model: &RouteModel) -> Result<(Vec<RoutedNet>, CongestionReport)> {
    model.check()?;
    let scale = 2.0 * fp.unit() as f64;
    let capacity: BTreeMap<&str, f64> = tree
        .nodes()
        .into_iter()
        .map(|n| {
            let boundary = n.cut.boundary.length() as f64 / fp.unit() as f64;
            (n.path.as_str(), boundary * model.layers_per_direction() as f64 / model.wire_pitch)
        })
        .collect();
    let mut demand: BTreeMap<&str, f64> = BTreeMap::new();
    let mut routed = Vec::new();
    for entry in routing_order(tree) {
        let node = tree
            .find(&entry.path)
            .ok_or_else(|| Error::Precondition(format!("no node at path `{}`", entry.path)))?;
        let net = &fp.nets()[entry.net.0];
        let pins = order_pins(fp, &net.members, node.stype);
        let region: Vec<Rect> = node.blocks.iter().map(|&b| doubled(fp.block(b).rect)).collect();
        let Some(route) = clipped_chain_route(&pins, |p| region.iter().any(|r| r.contains_point(p))) else {
            continue;
        };
        let bends = route.bend_points().len();
        let length = pins.windows(2).map(|w| hpwl(w[0], w[1])).sum::<Coord>() as f64 / scale;
        *demand.entry(charged_region(&node.path, &capacity)?).or_default() += length;
        routed.push(RoutedNet {
            net: net.id,
            name: net.name.clone(),
            path: entry.path.clone(),
            points: route
                .points
                .iter()
                .map(|p| [p.x as f64 / scale, p.y as f64 / scale])
                .collect(),
            bends,
            vias: bends + 2 * model.escape,
            length,
            region_bends: node.cut.z,
        });
    }

    let mut regions = Vec::new();
    for node in tree.nodes() {
        let cap = capacity[node.path.as_str()];
        if cap <= 0.0 {
            continue;
        }
        let d = demand.get(node.path.as_str()).copied().unwrap_or(0.0);
        regions.push(RegionLoad {
            region: node.display_path().to_string(),
            demand: d,
            capacity: cap,
            ratio: d / cap,
        });
    }
    let average = if regions.is_empty() {
        0.0
    } else {
        regions.iter().map(|r| r.ratio).sum::<f64>() / regions.len() as f64
    };
    let max = regions.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let overloaded = regions.iter().filter(|r| r.ratio > 1.0).map(|r| r.region.clone()).collect();
    Ok((
        routed,
        CongestionReport {
            router: ROUTER_LABEL,
            regions,
            average,
            max,
            overloaded,
        },
    ))
}

/// The region a net routed at `path` loads: the node itself, or its nearest
/// ancestor with a positive capacity when the node's two sides share no
/// boundary (they only meet across blocks split off higher up).
fn charged_region<'a>(path: &'a str, capacity: &BTreeMap<&str, f64>) -> Result<&'a str> {
    (0..=path.len())
        .rev()
        .map(|i| &path[..i])
        .find(|p| capacity.get(p).is_some_and(|&c| c > 0.0))
        .ok_or_else(|| Error::ZeroCapacity(if path.is_empty() { "root".into() } else { path.to_string() }))
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ViaSummary {
    pub nets_routed: usize,
    pub total_vias: usize,
    pub total_bends: usize,
    /// Staircase bends of the routing nodes, summed over routed nets.
    pub crossed_bends: usize,
    pub total_length: f64,
    /// Mean vias per routed net (0 when nothing was routed).
    pub vias_per_net: f64,
}

pub fn via_summary(routed: &[RoutedNet]) -> ViaSummary {
    let total_vias: usize = routed.iter().map(|r| r.vias).sum();
    ViaSummary {
        nets_routed: routed.len(),
        total_vias,
        total_bends: routed.iter().map(|r| r.bends).sum(),
        crossed_bends: routed.iter().map(|r| r.region_bends).sum(),
        total_length: routed.iter().map(|r| r.length).sum(),
        vias_per_net: if routed.is_empty() {
            0.0
        } else {
            total_vias as f64 / routed.len() as f64
        },
    }
}

/// Congestion table as CSV (`region,demand,capacity,ratio`).
pub fn congestion_csv(report: &CongestionReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &report.regions {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cut::Params;
    use crate::floorplan::testutil::f4;
    use crate::search::SearchMode;
    use crate::tree::{build_msc_tree, TreeOptions};

    #[test]
    fn f4_vias() {
        let fp = f4();
        let t = build_msc_tree(&fp, &TreeOptions::new(Params::new(0.4, 0.3).unwrap(), SearchMode::Bfs, 0)).unwrap();
        let (routed, cong) = route_nets(&t, &fp, &RouteModel::default()).unwrap();
        assert_eq!(routed.len(), 2);
        assert_eq!((routed[0].name.as_str(), routed[0].bends, routed[0].vias), ("n1", 1, 3));
        assert_eq!((routed[1].name.as_str(), routed[1].bends, routed[1].vias), ("n2", 0, 2));
        assert_eq!(routed[1].path, "R");
        let s = via_summary(&routed);
        assert_eq!(s.total_vias, 5);
        assert_eq!(s.total_length, 3.0);
        assert_eq!(cong.router, ROUTER_LABEL);
        assert!(cong.overloaded.is_empty());
        let csv = congestion_csv(&cong).unwrap();
        assert!(csv.starts_with("region,demand,capacity,ratio\n"));
    }

    #[test]
    fn degenerate_and_empty() {
        assert!(chain_route(&[Point::new(1, 1)]).is_none());
        assert_eq!(via_summary(&[]), ViaSummary::default());
    }

    #[test]
    fn disconnected_node_charges_ancestor() {
        let fp = crate::floorplan::generate_floorplan(&crate::floorplan::GenSpec::new(8, 1, 19)).unwrap();
        let t = build_msc_tree(&fp, &TreeOptions::new(Params::new(0.4, 0.2).unwrap(), SearchMode::Bfs, 0)).unwrap();
        let node = t.find("LLRR").unwrap();
        assert!(node.cut.boundary.pieces.is_empty());
        let (routed, cong) = route_nets(&t, &fp, &RouteModel::default()).unwrap();
        assert_eq!(routed[0].path, "LLRR");
        assert!(cong.regions.iter().all(|r| r.region != "LLRR"));
        let llr = cong.regions.iter().find(|r| r.region == "LLR").unwrap();
        assert_eq!(llr.demand, routed[0].length);
    }
}
