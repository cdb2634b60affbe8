use serde::{Deserialize, Serialize};

use super::model::GroupModel;
use crate::quadrature::gauss_legendre_on;
use crate::{Error, Result};

/// Smooth bump `Π exp(−1/(1 − (Z_a/r)²))` in exponential coordinates,
/// normalised to unit mass for the Haar measure, with its tensor
/// Gauss–Legendre discretisation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Kernel {
    pub model: GroupModel,
    pub radius: f64,
    pub nodes_per_axis: usize,
    /// Lie-algebra nodes `Z`.
    pub lie: Vec<Vec<f64>>,
    /// Group nodes `z = exp(Z)`.
    pub points: Vec<Vec<f64>>,
    /// `κ(z)·dz` quadrature weights; they sum to one.
    pub weights: Vec<f64>,
    /// Normalising constant of the continuous bump (from the quadrature).
    pub mass: f64,
}

fn bump(s: f64) -> f64 {
    if s.abs() < 1.0 {
        (-1.0 / (1.0 - s * s)).exp()
    } else {
        0.0
    }
}

fn tensor_rule(model: &GroupModel, radius: f64, nodes: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = model.dim();
    let (x, w) = gauss_legendre_on(nodes, -radius, radius);
    let mut lie = Vec::new();
    let mut weights = Vec::new();
    for flat in 0..nodes.pow(n as u32) {
        let mut rem = flat;
        let mut z = vec![0.0; n];
        let mut wt = 1.0;
        for a in (0..n).rev() {
            let i = rem % nodes;
            rem /= nodes;
            z[a] = x[i];
            wt *= w[i] * bump(x[i] / radius);
        }
        wt *= model.haar_density_exp(&z);
        lie.push(z);
        weights.push(wt);
    }
    (lie, weights)
}

impl Kernel {
    pub fn bump(model: GroupModel, radius: f64, nodes_per_axis: usize) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) || nodes_per_axis < 2 {
            return Err(Error::input("kernel needs a positive radius and at least two nodes"));
        }
        if matches!(model, GroupModel::AffineHalfPlane) && radius > 5.0 {
            return Err(Error::Model("kernel support too large for the affine chart".into()));
        }
        let (lie, mut weights) = tensor_rule(&model, radius, nodes_per_axis);
        let mass: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= mass);
        let points = lie.iter().map(|z| model.exp(z)).collect();
        Ok(Kernel { model, radius, nodes_per_axis, lie, points, weights, mass })
    }

    /// `∫κ dz` of the normalised kernel computed with a finer rule.
    pub fn normalization_check(&self) -> f64 {
        let (_, w) = tensor_rule(&self.model, self.radius, 2 * self.nodes_per_axis);
        w.iter().sum::<f64>() / self.mass
    }

    /// `M = max_z ‖dR_z‖` over the quadrature nodes.
    pub fn translation_bound(&self) -> f64 {
        self.points.iter().map(|z| self.model.translation_norm(z)).fold(0.0, f64::max)
    }

    /// `Σ κ(z) Z dz`, the mean Lie-algebra displacement.
    pub fn mean_displacement(&self) -> Vec<f64> {
        let n = self.model.dim();
        (0..n).map(|a| self.lie.iter().zip(&self.weights).map(|(z, w)| w * z[a]).sum()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernels_have_unit_mass() {
        for model in [GroupModel::Abelian { dim: 2 }, GroupModel::AffineHalfPlane, GroupModel::Abelian { dim: 1 }] {
            let k = Kernel::bump(model, 0.25, 32).unwrap();
            assert!((k.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!((k.normalization_check() - 1.0).abs() < 1e-6, "{model:?} {}", k.normalization_check());
            assert!(k.weights.iter().all(|w| *w >= 0.0));
        }
        let k = Kernel::bump(GroupModel::Abelian { dim: 2 }, 0.25, 8).unwrap();
        assert!(k.mean_displacement().iter().all(|v| v.abs() < 1e-15));
        assert_eq!(k.translation_bound(), 1.0);
    }
}
