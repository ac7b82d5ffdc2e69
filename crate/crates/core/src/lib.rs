//! Minimal-bend monotone staircase bipartitioning of rectangular floorplans.
//!
//! The crate builds block adjacency graphs ([`bag`]), evaluates staircase
//! cuts ([`cut`]), searches chains of cuts greedily or at random
//! ([`search`]), builds the recursive cut hierarchy ([`tree`]), checks all of
//! it against exhaustive enumeration ([`oracle`]) and estimates routing vias
//! ([`route`]). [`report`] drives parameter sweeps and renders SVG.

pub mod bag;
pub mod cut;
pub mod error;
pub mod floorplan;
pub mod geom;
pub mod oracle;
pub mod report;
pub mod rng;
pub mod route;
pub mod search;
pub mod tree;

pub use bag::{build_bag, check_structure, AdjacencyMode, Bag, StairDirection};
pub use cut::{evaluate_cut, gain, BalanceType, CutEval, Params};
pub use error::{Error, Result};
pub use floorplan::{
    generate_floorplan, import_bookshelf, load_floorplan, save_floorplan, stats, validate, BlockId, Floorplan, GenSpec,
    NetId, ValidationMode,
};
pub use search::{mscut_bend_bfs, mscut_bend_dfs, mscut_bend_rand, SearchMode, SearchResult};
pub use tree::{build_msc_tree, routing_order, tree_metrics, MscNode};
