use serde::{Deserialize, Serialize};

use crate::forms::{ChartedDomain, Grid, Model};
use crate::{Error, Result};

/// Lie groups with a left-invariant metric, in global coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GroupModel {
    /// `ℝⁿ` with the flat metric.
    Abelian { dim: usize },
    /// `{(a, b) : b > 0}` with `(a, b)·(x, y) = (a + b x, b y)` and
    /// `g = (da² + db²)/b²`.
    AffineHalfPlane,
}

impl GroupModel {
    pub fn dim(&self) -> usize {
        match self {
            GroupModel::Abelian { dim } => *dim,
            GroupModel::AffineHalfPlane => 2,
        }
    }

    pub fn identity(&self) -> Vec<f64> {
        match self {
            GroupModel::Abelian { dim } => vec![0.0; *dim],
            GroupModel::AffineHalfPlane => vec![0.0, 1.0],
        }
    }

    /// `x · z`.
    #[inline]
    pub fn product(&self, x: &[f64], z: &[f64], out: &mut [f64]) {
        match self {
            GroupModel::Abelian { dim } => (0..*dim).for_each(|a| out[a] = x[a] + z[a]),
            GroupModel::AffineHalfPlane => {
                out[0] = x[0] + x[1] * z[0];
                out[1] = x[1] * z[1];
            }
        }
    }

    /// Jacobian of the right translation `R_z`, row-major (constant in `x`).
    pub fn right_differential(&self, z: &[f64]) -> Vec<f64> {
        match self {
            GroupModel::Abelian { dim } => {
                let n = *dim;
                (0..n * n).map(|i| if i / n == i % n { 1.0 } else { 0.0 }).collect()
            }
            GroupModel::AffineHalfPlane => vec![1.0, z[0], 0.0, z[1]],
        }
    }

    /// `exp(Z)` for a Lie-algebra element in the basis of the coordinate
    /// tangent vectors at the identity.
    pub fn exp(&self, lie: &[f64]) -> Vec<f64> {
        match self {
            GroupModel::Abelian { .. } => lie.to_vec(),
            GroupModel::AffineHalfPlane => {
                let (alpha, beta) = (lie[0], lie[1]);
                vec![alpha * phi1(beta), beta.exp()]
            }
        }
    }

    pub fn log(&self, z: &[f64]) -> Result<Vec<f64>> {
        match self {
            GroupModel::Abelian { .. } => Ok(z.to_vec()),
            GroupModel::AffineHalfPlane => {
                if !(z[1] > 0.0) {
                    return Err(Error::Model(format!("({}, {}) is not in the half-plane", z[0], z[1])));
                }
                let beta = z[1].ln();
                Ok(vec![z[0] / phi1(beta), beta])
            }
        }
    }

    /// The left-invariant field of `Z` at `p`.
    #[inline]
    pub fn field(&self, lie: &[f64], p: &[f64], out: &mut [f64]) {
        match self {
            GroupModel::Abelian { dim } => out[..*dim].copy_from_slice(&lie[..*dim]),
            GroupModel::AffineHalfPlane => {
                out[0] = p[1] * lie[0];
                out[1] = p[1] * lie[1];
            }
        }
    }

    /// Density of the (left) Haar measure in exponential coordinates.
    pub fn haar_density_exp(&self, lie: &[f64]) -> f64 {
        match self {
            GroupModel::Abelian { .. } => 1.0,
            GroupModel::AffineHalfPlane => {
                let beta = lie[1];
                phi1(beta) * (-beta).exp()
            }
        }
    }

    /// Norm of `dR_z : T_x G → T_{xz} G` for the left-invariant metric
    /// (independent of `x`).
    pub fn translation_norm(&self, z: &[f64]) -> f64 {
        match self {
            GroupModel::Abelian { .. } => 1.0,
            GroupModel::AffineHalfPlane => {
                let j = nalgebra::Matrix2::new(1.0, z[0], 0.0, z[1]);
                j.singular_values().max() / z[1]
            }
        }
    }

    /// The charted domain carrying this model's metric on `grid`.
    pub fn domain(&self, grid: &Grid) -> Result<ChartedDomain> {
        if grid.dim() != self.dim() {
            return Err(Error::input("grid and group dimensions differ"));
        }
        match self {
            GroupModel::Abelian { .. } => Ok(ChartedDomain::euclidean_box(grid.clone())),
            GroupModel::AffineHalfPlane => ChartedDomain::new(grid.clone(), Model::HalfPlane),
        }
    }

    /// Largest relative defect `|g_{gx}(dL_g u, dL_g u) − g_x(u, u)|` over
    /// sampled pairs `(g, x)`; both metrics are conformal, so one
    /// direction suffices.
    pub fn left_invariance_residual(&self, samples: &[(Vec<f64>, Vec<f64>)]) -> f64 {
        let n = self.dim();
        let conformal = |p: &[f64]| match self {
            GroupModel::Abelian { .. } => 1.0,
            GroupModel::AffineHalfPlane => 1.0 / (p[1] * p[1]),
        };
        let mut gx = vec![0.0; n];
        samples
            .iter()
            .map(|(g, x)| {
                self.product(g, x, &mut gx);
                // dL_g = g₂·Id on the half-plane, Id on ℝⁿ
                let s = match self {
                    GroupModel::Abelian { .. } => 1.0,
                    GroupModel::AffineHalfPlane => g[1],
                };
                let before = conformal(x);
                (conformal(&gx) * s * s - before).abs() / before
            })
            .fold(0.0, f64::max)
    }
}

/// `(e^β − 1)/β`, continuous at zero.
fn phi1(beta: f64) -> f64 {
    if beta.abs() < 1e-8 {
        1.0 + 0.5 * beta
    } else {
        beta.exp_m1() / beta
    }
}
