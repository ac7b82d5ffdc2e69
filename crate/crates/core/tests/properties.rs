mod common;

use common::*;
use mscut::bag::{build_bag, check_structure, AdjacencyMode, StairDirection};
use mscut::cut::{balance_ratio, evaluate_cut, gain, is_valid_mscut, BalanceType, Params};
use mscut::floorplan::{load_floorplan, save_floorplan, validate, BlockSpec, GenSpec, NetSpec, ValidationMode};
use mscut::geom::Rect;
use mscut::oracle::{build_hasse, enumerate_staircases, mask_to_ids, verify_chain};
use mscut::route::{route_nets, RouteModel};
use mscut::search::{search, SearchMode};
use mscut::tree::{build_msc_tree, routing_order, MscNode, TreeOptions};
use mscut::{BlockId, Floorplan};
use proptest::prelude::*;

fn spec(n: usize, k: usize, seed: u64) -> GenSpec {
    GenSpec::new(n, k, seed)
}

fn weights() -> impl Strategy<Value = (f64, f64)> {
    (0.0..=1.0f64, 0.0..=1.0f64).prop_map(|(g, b)| (g, b * (1.0 - g)))
}

fn mode() -> impl Strategy<Value = SearchMode> {
    prop_oneof![Just(SearchMode::Bfs), Just(SearchMode::Dfs), Just(SearchMode::Rand)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_floorplans_are_mosaics(n in 2usize..80, k in 0usize..120, seed: u64) {
        let fp = generate(&spec(n, k, seed));
        prop_assert_eq!(fp.len(), n);
        prop_assert_eq!(fp.nets().len(), k);
        let area: i128 = fp.blocks().iter().map(|b| b.rect.area()).sum();
        prop_assert_eq!(area, fp.bbox().area());
        prop_assert!(validate(&fp, ValidationMode::Mosaic).ok);
        prop_assert!(fp.nets().iter().all(|net| net.members.len() >= 2));
    }

    #[test]
    fn json_round_trip(n in 2usize..40, k in 0usize..40, seed: u64) {
        let fp = generate(&spec(n, k, seed));
        prop_assert_eq!(load_floorplan(&save_floorplan(&fp)).unwrap(), fp);
    }

    #[test]
    fn bag_structure(n in 3usize..60, seed: u64, mds: bool) {
        let fp = generate(&spec(n, 0, seed));
        let dir = if mds { StairDirection::Mds } else { StairDirection::Mis };
        let bag = build_bag(&fp, dir, AdjacencyMode::Mosaic).unwrap();
        let r = check_structure(&bag);
        prop_assert!(r.acyclic && r.unique_source_sink && r.within_planar_bound);
        prop_assert!(r.edge_count <= 3 * n - 6);
        for e in bag.edges() {
            let seg = e.shared.expect("mosaic edges are geometric");
            prop_assert!(seg.len() > 0);
            let (a, b) = (fp.block(e.from).rect, fp.block(e.to).rect);
            let touches = |r: Rect| {
                r.contains_point(seg.a) && r.contains_point(seg.b)
            };
            prop_assert!(touches(a) && touches(b));
        }
    }

    #[test]
    fn mirror_duality(n in 2usize..30, seed: u64) {
        let fp = generate(&spec(n, 0, seed));
        let m = fp.mirrored_vertically();
        let a = build_bag(&fp, StairDirection::Mis, AdjacencyMode::Mosaic).unwrap();
        let b = build_bag(&m, StairDirection::Mds, AdjacencyMode::Mosaic).unwrap();
        prop_assert_eq!(a.edge_pairs(), b.edge_pairs());
        prop_assert_eq!((a.source(), a.sink()), (b.source(), b.sink()));
    }

    #[test]
    fn validity_is_ancestor_closure(n in 2usize..11, seed: u64, mds: bool) {
        let fp = generate(&spec(n, 0, seed));
        let dir = if mds { StairDirection::Mds } else { StairDirection::Mis };
        let bag = build_bag(&fp, dir, AdjacencyMode::Mosaic).unwrap();
        let (s, t) = (bag.source().0, bag.sink().0);
        for m in 0u64..1 << n {
            if m >> s & 1 == 0 || m >> t & 1 == 1 {
                continue;
            }
            prop_assert_eq!(is_valid_mscut(&bag, &mask_to_ids(m)).unwrap(), closed_under_ancestors(&bag, m));
        }
    }

    #[test]
    fn gain_in_unit_interval(
        (g, b) in weights(),
        balr in 0.0..=1.0f64,
        k in 0usize..50,
        kc_frac in 0.0..=1.0f64,
        zmax in 0usize..30,
        z_frac in 0.0..=1.0f64,
    ) {
        let params = Params::new(g, b).unwrap();
        let kc = (k as f64 * kc_frac).floor() as usize;
        let z = (zmax as f64 * z_frac).floor() as usize;
        let v = gain(&params, balr, kc, k, z, zmax).unwrap();
        prop_assert!((0.0..=1.0).contains(&v), "{v}");
    }

    #[test]
    fn cut_invariants(n in 3usize..40, k in 0usize..60, seed: u64, (g, b) in weights(), m in mode()) {
        let fp = generate(&spec(n, k, seed));
        let bag = build_bag(&fp, StairDirection::Mis, AdjacencyMode::Mosaic).unwrap();
        let params = Params::new(g, b).unwrap();
        let r = search(&bag, &fp, &params, m, seed, 2).unwrap();
        for e in &r.explored {
            prop_assert!((0.0..=1.0).contains(&e.gain));
            prop_assert!(e.z <= e.z_max);
            prop_assert!(e.balr > 0.0 && e.balr <= 1.0);
            let mask = mask(&e.left);
            let cut_edges = bag
                .edge_pairs()
                .iter()
                .filter(|(a, b)| mask >> a & 1 == 1 && mask >> b & 1 == 0)
                .count();
            prop_assert!(e.z < cut_edges, "z {} cut edges {}", e.z, cut_edges);
            for piece in &e.boundary.pieces {
                // Traversal runs from the upper right towards the lower left.
                for w in piece.points.windows(2) {
                    prop_assert!(w[1].x <= w[0].x && w[1].y <= w[0].y);
                }
            }
        }
        prop_assert!(r.explored.iter().all(|e| e.preference(&r.best).is_le()));
    }

    #[test]
    fn mds_boundaries_are_monotone(n in 3usize..40, seed: u64) {
        let fp = generate(&spec(n, 0, seed));
        let bag = build_bag(&fp, StairDirection::Mds, AdjacencyMode::Mosaic).unwrap();
        let r = search(&bag, &fp, &Params::new(0.4, 0.3).unwrap(), SearchMode::Bfs, 0, 1).unwrap();
        for e in &r.explored {
            for piece in &e.boundary.pieces {
                for w in piece.points.windows(2) {
                    prop_assert!(w[1].x <= w[0].x && w[1].y >= w[0].y);
                }
            }
        }
    }

    #[test]
    fn chains_are_maximal_lattice_paths(n in 2usize..13, seed: u64, m in mode(), mds: bool) {
        let fp = generate(&spec(n, 2 * n, seed));
        let dir = if mds { StairDirection::Mds } else { StairDirection::Mis };
        let bag = build_bag(&fp, dir, AdjacencyMode::Mosaic).unwrap();
        let hasse = build_hasse(&enumerate_staircases(&bag, 20).unwrap());
        let r = search(&bag, &fp, &Params::new(0.4, 0.2).unwrap(), m, seed, 3).unwrap();
        for c in &r.chains {
            prop_assert_eq!(c.cuts.len(), n - 1);
            for (i, cut) in c.cuts.iter().enumerate() {
                prop_assert_eq!(cut.left.len(), i + 1);
                prop_assert!(is_valid_mscut(&bag, &cut.left).unwrap());
            }
            prop_assert!(verify_chain(&c.left_sets(), &hasse));
        }
    }

    #[test]
    fn area_scaling_keeps_best_cut(n in 2usize..30, k in 0usize..40, seed: u64, scale in 2i64..7, (g, b) in weights(), m in mode()) {
        let fp = generate(&spec(n, k, seed));
        let big = fp.scaled(scale);
        let params = Params::new(g, b).unwrap();
        let dir = StairDirection::Mis;
        let a = search(&build_bag(&fp, dir, AdjacencyMode::Mosaic).unwrap(), &fp, &params, m, seed, 3).unwrap();
        let c = search(&build_bag(&big, dir, AdjacencyMode::Mosaic).unwrap(), &big, &params, m, seed, 3).unwrap();
        prop_assert_eq!(a.best.left, c.best.left);
    }

    #[test]
    fn tree_conserves_blocks_and_nets(n in 2usize..60, k in 0usize..90, seed: u64, m in mode(), (g, b) in weights()) {
        let fp = generate(&spec(n, k, seed));
        let tree = build_msc_tree(&fp, &TreeOptions::new(Params::new(g, b).unwrap(), m, seed)).unwrap();
        check_node(&tree)?;
        let order = routing_order(&tree);
        prop_assert_eq!(order.len(), k);
        let mut nets: Vec<_> = order.iter().map(|e| e.net).collect();
        nets.sort();
        nets.dedup();
        prop_assert_eq!(nets.len(), k);
        for e in &order {
            let node = tree.find(&e.path).unwrap();
            let members = &fp.nets()[e.net.0].members;
            prop_assert!(members.iter().all(|b| node.blocks.binary_search(b).is_ok()));
            // Whole copies sit on the path from the root, sub-nets strictly below.
            for other in tree.nodes() {
                for nn in other.nets.iter().filter(|nn| nn.origin == e.net) {
                    if nn.restricted {
                        prop_assert!(other.path.len() > e.path.len() && other.path.starts_with(&e.path));
                    } else {
                        prop_assert!(e.path.starts_with(&other.path));
                    }
                }
            }
        }
    }

    #[test]
    fn two_pin_routes_have_hpwl_length(n in 2usize..40, k in 1usize..60, seed: u64) {
        let fp = generate(&spec(n, k, seed));
        let tree = build_msc_tree(&fp, &TreeOptions::new(Params::new(0.4, 0.2).unwrap(), SearchMode::Bfs, 0)).unwrap();
        let (routed, _) = route_nets(&tree, &fp, &RouteModel::default()).unwrap();
        prop_assert_eq!(routed.len(), k);
        for r in &routed {
            let net = &fp.nets()[r.net.0];
            let poly: f64 = r.points.windows(2).map(|w| (w[0][0] - w[1][0]).abs() + (w[0][1] - w[1][1]).abs()).sum();
            if net.members.len() == 2 {
                let (a, b) = (fp.block(net.members[0]).rect, fp.block(net.members[1]).rect);
                let c = |r: Rect| ((r.x0 + r.x1) as f64 / 2.0, (r.y0 + r.y1) as f64 / 2.0);
                let ((ax, ay), (bx, by)) = (c(a), c(b));
                let hpwl = ((ax - bx).abs() + (ay - by).abs()) / fp.unit() as f64;
                prop_assert!((r.length - hpwl).abs() < 1e-9);
                prop_assert!((poly - hpwl).abs() < 1e-9);
                prop_assert!(r.bends <= 1);
            }
            prop_assert!(poly <= r.length + 1e-9);
            prop_assert_eq!(r.vias, r.bends + 2);
            let node = tree.find(&r.path).unwrap();
            prop_assert_eq!(r.region_bends, node.cut.z);
        }
    }

    #[test]
    fn area_and_count_balance_agree_on_unit_grids(w in 1i64..6, h in 1i64..6, seed: u64) {
        prop_assume!(w * h >= 2);
        let fp = unit_grid(w, h);
        let bag = build_bag(&fp, StairDirection::Mis, AdjacencyMode::Mosaic).unwrap();
        let r = search(&bag, &fp, &Params::new(0.5, 0.2).unwrap(), SearchMode::Rand, seed, 2).unwrap();
        for e in &r.explored {
            let a = balance_ratio(&fp, &e.left, BalanceType::Area).unwrap();
            let c = balance_ratio(&fp, &e.left, BalanceType::Number).unwrap();
            prop_assert!((a - c).abs() < 1e-12);
        }
    }
}

fn check_node(node: &MscNode) -> Result<(), TestCaseError> {
    prop_assert_eq!(node.stype, StairDirection::for_level(node.level));
    let right = node.right_blocks();
    prop_assert!(!node.cut.left.is_empty() && !right.is_empty());
    prop_assert_eq!(node.cut.left.len() + right.len(), node.blocks.len());
    prop_assert_eq!(node.left.is_some(), node.cut.left.len() >= 2);
    prop_assert_eq!(node.right.is_some(), right.len() >= 2);
    if let Some(l) = &node.left {
        prop_assert_eq!(&l.blocks, &node.cut.left);
        prop_assert_eq!(l.level, node.level + 1);
        check_node(l)?;
    }
    if let Some(r) = &node.right {
        prop_assert_eq!(&r.blocks, &right);
        check_node(r)?;
    }
    Ok(())
}

fn unit_grid(w: i64, h: i64) -> Floorplan {
    let mut blocks = Vec::new();
    for y in 0..h {
        for x in 0..w {
            blocks.push(BlockSpec::new(format!("g{x}_{y}"), Rect::new(x, y, 1, 1)));
        }
    }
    let nets = vec![NetSpec::new("a", [blocks[0].name.clone(), blocks[blocks.len() - 1].name.clone()])];
    Floorplan::new(1, Rect::new(0, 0, w, h), blocks, nets).unwrap()
}

#[test]
fn evaluation_matches_hand_formula_on_all_small_ideals() {
    // Recomputes every term from raw geometry and membership.
    for seed in 0..40 {
        let fp = generate(&spec(7, 10, seed));
        let bag = build_bag(&fp, StairDirection::Mis, AdjacencyMode::Mosaic).unwrap();
        let params = Params::new(0.35, 0.25).unwrap();
        for m in brute_force_staircases(&bag) {
            let left: Vec<BlockId> = mask_to_ids(m);
            let e = evaluate_cut(&fp, &bag, &left, &params).unwrap();
            let (mut al, mut ar) = (0i128, 0i128);
            for b in fp.blocks() {
                if m >> b.id.0 & 1 == 1 {
                    al += b.rect.area();
                } else {
                    ar += b.rect.area();
                }
            }
            let balr = al.min(ar) as f64 / al.max(ar) as f64;
            let kc = fp
                .nets()
                .iter()
                .filter(|n| {
                    let inside = n.members.iter().filter(|b| m >> b.0 & 1 == 1).count();
                    inside > 0 && inside < n.members.len()
                })
                .count();
            let k = fp.nets().len();
            let net_term = if k == 0 { 1.0 } else { 1.0 - kc as f64 / k as f64 };
            let bend_term = if e.z_max == 0 { 1.0 } else { 1.0 - e.z as f64 / e.z_max as f64 };
            let want = 0.35 * balr + 0.4 * net_term + 0.25 * bend_term;
            assert_eq!(e.k_c, kc);
            assert!((e.balr - balr).abs() < 1e-12);
            assert!((e.gain - want).abs() < 1e-9, "{} vs {want}", e.gain);
        }
    }
}
