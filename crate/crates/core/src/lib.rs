//! Desk-scale laboratory for Orlicz cohomology.
//!
//! The crate is split along the objects it computes with:
//!
//! - [`orlicz`]: Young functions, modulars and the Luxemburg-norm solver.
//! - [`simplicial`]: finite simplicial complexes, coboundaries, `ℓ^φ` cochain
//!   norms, cohomology dimensions and norm-minimising representatives.
//! - [`qi`]: chain maps and prism homotopies induced by quasi-isometries.
//! - [`forms`]: sampled differential forms, exterior derivative, the
//!   averaged Poincaré homotopy on the ball and chart pullbacks.
//! - [`cech`]: the Čech–de Rham double complex over a box cover and the
//!   zig-zag between nerve cocycles and global forms.
//! - [`group`]: kernels, convolution and the flow homotopy on the abelian
//!   and affine Lie-group models.

pub mod cech;
pub mod error;
pub mod forms;
pub mod group;
pub mod orlicz;
pub mod qi;
pub mod quadrature;
pub mod simplicial;

pub use error::{Error, Result};
