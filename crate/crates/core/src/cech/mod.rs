//! The Čech–de Rham double complex of a box cover.
//!
//! Elements of bidegree `(k, ℓ)` carry a `k`-form on every `(ℓ+1)`-fold
//! intersection of the cover. Every intersection is stored on an aligned
//! sub-grid of the global grid with a small halo, so restriction is an
//! exact copy and `d′` commutes with it on the nominal samples. The
//! retractions `H` (per-piece averaged cone homotopy through an affine
//! chart onto `[-1, 1]^n`) and `P` (partition-of-unity contraction) drive
//! the zig-zag between nerve cocycles and closed global forms.

mod checks;
mod cover;
mod element;
mod retract;
mod zigzag;

pub use checks::{
    bicomplex_identity_report, random_trig_form, zigzag_report, BicomplexReport, ClassRoundtrip,
    IdentityResidual, ZigzagReport,
};
pub use cover::{BoxSpec, CoverNerve, CoverSpec, Piece};
pub use element::BicomplexElement;
pub use retract::BicomplexOptions;
pub use zigzag::{project_to_cocycles, StageNorm, ToForm, ToSimplicial};
