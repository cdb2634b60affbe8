//! Sampled differential forms on charted Riemannian domains.
//!
//! Forms are stored as coefficient arrays on cell-centred tensor grids,
//! components ordered by increasing index sets. The module provides the
//! exterior derivative, pointwise and `L^φ` norms, the cone and averaged
//! Poincaré homotopies on the unit ball, chart pullbacks and the
//! locally-small / globally-infinite indicator example.

mod algebra;
mod bourdon;
mod domain;
mod form;
mod grid;
mod norm;
mod poincare;
mod pullback;

pub use algebra::{contract, evaluate_on, pullback_linear, Contraction};
pub use bourdon::{bourdon_example, BourdonParams, BourdonReport, Checkpoint};
pub use domain::{ChartedDomain, Model};
pub use form::{AnalyticForm, DiscreteForm, FormField};
pub use grid::{basis, binomial, component_index, Grid};
pub use norm::{euclidean_comass, form_norm, pointwise_norm, pointwise_norms};
pub use poincare::{cone_homotopy, poincare_homotopy, verify_poincare, HomotopyReport, HomotopyValue, PoincareOptions};
pub use pullback::{chart_pullback, pullback_report, AffineChart, ChartMap, PullbackReport};

pub(crate) use poincare::ConeRule;
