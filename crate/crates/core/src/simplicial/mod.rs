//! Finite oriented simplicial complexes and their ℓ^φ cochains.
//!
//! Simplices are stored as sorted vertex tuples; the face obtained by
//! deleting the `i`-th vertex carries the sign `(-1)^i`. Cohomology
//! dimensions are computed exactly (they do not depend on `φ`), while norms
//! go through the Luxemburg solver of [`crate::orlicz`].

mod chain;
mod cochain;
mod cohomology;
mod complex;
mod generators;
mod reduced;
mod relative;

pub use chain::ChainValue;
pub use cochain::{cochain_norm, delta_continuity_report, Cochain, ContinuityReport};
pub use cohomology::{cohomology_dims, euler_characteristic, harmonic_basis, CohomologyBasis};
pub use complex::{ComplexStats, SimplicialComplex};
pub use generators::ComplexSpec;
pub use reduced::{reduced_representative, ReducedOptions, ReducedResult};
pub use relative::{relative_mask, BoundaryPointModel, SimplexMask};
