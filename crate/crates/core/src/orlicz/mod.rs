//! Young functions, measure spaces and the Luxemburg norm.
//!
//! For a Young function `φ` and a finite weighted measure space `Z`, the
//! Luxemburg norm of `f` is the infimum of the `γ > 0` with
//! `Σ w·φ(f/γ) ≤ 1`. Every other module of the crate measures its cochains
//! and forms through [`luxemburg_norm`] or the weighted shortcut
//! [`luxemburg_weighted`].

mod checks;
mod conjugate;
mod measure;
mod norm;
mod young;

pub use checks::{
    check_norm_equivalence, holder_check, l1_embedding_bound, EquivalenceReport, HolderReport,
    L1Bound,
};
pub use conjugate::{conjugate_eval, ConjugateGrid};
pub use measure::{Atom, MeasureSpace};
pub use norm::{
    luxemburg_by, luxemburg_norm, luxemburg_weighted, modular, truncated_norm, NormResult,
    NormValue, DEFAULT_TOL,
};
pub use young::YoungFunction;

pub(crate) use norm::check_tol;
