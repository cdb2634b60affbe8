//! Chain maps, pullbacks and prism homotopies induced by quasi-isometries
//! between finite complexes.
//!
//! Vertices go to their images, edges to breadth-first shortest paths and
//! higher simplices to fillings of the already-mapped boundary, found by
//! exact rational elimination over growing neighbourhoods. Everything is
//! integral, so the chain identities are checked exactly.

mod chain_map;
mod filling;
mod induced;
mod map;
mod prism;
mod relative;

pub use chain_map::{
    build_chain_map, pullback, pullback_bound_report, ChainConstants, ChainMap, PullbackBoundReport,
};
pub use filling::{FillOptions, FillOrder};
pub use induced::{induced_cohomology_map, verify_quasi_isometry, IsoReport};
pub use map::{GraphMetric, QuasiIsometry};
pub use prism::{prism_homotopy, PrismHomotopy};
pub use relative::{relative_pullback_threshold, verify_relative, RelativeReport};
