use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::{cochain_norm, Cochain, SimplicialComplex};
use crate::orlicz::YoungFunction;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedOptions {
    pub tol: f64,
    pub max_iterations: usize,
}

impl Default for ReducedOptions {
    fn default() -> Self {
        ReducedOptions { tol: 1e-10, max_iterations: 10_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedResult {
    /// The `(k−1)`-cochain `η`.
    pub eta: Cochain,
    /// `‖θ − δη‖_φ`.
    pub residual: f64,
    pub iterations: usize,
}

/// Approximately minimises `‖θ − δη‖_φ` over `η`.
///
/// Warm start: the least-squares solution (exact for `φ = t²`). Then a
/// Polyak subgradient method with an adaptive target level; the gradient of
/// the Luxemburg norm at `r` with `γ = ‖r‖` is
/// `φ'(r/γ) / Σ_j φ'(r_j/γ)(r_j/γ)`.
pub fn reduced_representative(
    phi: &YoungFunction,
    complex: &SimplicialComplex,
    theta: &Cochain,
    options: &ReducedOptions,
) -> Result<ReducedResult> {
    let k = theta.degree;
    let closed = complex.coboundary(theta)?;
    let scale = theta.sup_norm().max(1.0);
    if closed.sup_norm() > 1e-9 * scale {
        return Err(Error::Precondition(format!(
            "θ is not closed: ‖δθ‖_∞ = {:.3e}",
            closed.sup_norm()
        )));
    }
    if k == 0 {
        return Ok(ReducedResult {
            eta: Cochain { degree: 0, values: vec![] },
            residual: cochain_norm(phi, theta, options.tol),
            iterations: 0,
        });
    }
    let d = complex.coboundary_matrix(k - 1);
    let b = DVector::from_vec(theta.values.clone());
    let x0 = d.clone().svd(true, true).solve(&b, 1e-12).map_err(|e| Error::Resolution(e.into()))?;
    let mut eta = Cochain { degree: k - 1, values: x0.iter().copied().collect() };
    let objective = |eta: &Cochain| -> Result<(f64, Cochain)> {
        let r = theta.sub(&complex.coboundary(eta)?);
        Ok((cochain_norm(phi, &r, options.tol), r))
    };
    let (mut f, mut r) = objective(&eta)?;
    let mut best = (f, eta.clone());
    if phi.is_quadratic() || f <= options.tol {
        return Ok(ReducedResult { eta, residual: f, iterations: 0 });
    }
    let mut level_gap = 0.1 * f;
    let mut stall = 0;
    let mut iterations = 0;
    while iterations < options.max_iterations {
        iterations += 1;
        // subgradient of the norm at r
        let gamma = f;
        let scaled: Vec<f64> = r.values.iter().map(|v| v / gamma).collect();
        let denom: f64 = scaled.iter().map(|s| phi.derivative(*s) * s).sum();
        if denom <= 0.0 {
            break;
        }
        let grad_r = Cochain { degree: k, values: scaled.iter().map(|s| phi.derivative(*s) / denom).collect() };
        // chain rule through r = θ − δη
        let g = complex.coboundary_transpose(&grad_r)?.scale(-1.0);
        let gg: f64 = g.values.iter().map(|v| v * v).sum();
        if gg == 0.0 {
            break;
        }
        let target = best.0 - level_gap;
        let step = (f - target) / gg;
        eta = eta.sub(&g.scale(step));
        (f, r) = objective(&eta)?;
        if f < best.0 - 1e-3 * level_gap {
            best = (f, eta.clone());
            stall = 0;
        } else {
            stall += 1;
            if stall >= 20 {
                level_gap *= 0.5;
                stall = 0;
                eta = best.1.clone();
                (f, r) = objective(&eta)?;
            }
        }
        if level_gap <= options.tol * best.0.max(options.tol) {
            break;
        }
    }
    Ok(ReducedResult { eta: best.1, residual: best.0, iterations })
}
