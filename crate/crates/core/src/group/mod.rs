//! Convolution of forms with kernels on Lie groups and the flow homotopy.
//!
//! Two models: `ℝⁿ` and the affine group of the line realised as the upper
//! half-plane with its left-invariant hyperbolic metric. Kernels are smooth
//! bumps in exponential coordinates, discretised by tensor Gauss–Legendre
//! rules; convolution and homotopy are quadratures over those nodes.

mod checks;
mod conv;
mod kernel;
mod model;

pub use checks::{
    cartan_identity_check, derivative_commutation_check, operator_ratios, pointwise_bound_check,
    relative_preservation, CartanReport, CommutationReport, PointwiseBoundReport, RatioReport,
    RelativeConvolutionReport,
};
pub use conv::{convolve, flow_homotopy, shrink_mask, Sampled};
pub use kernel::Kernel;
pub use model::GroupModel;
