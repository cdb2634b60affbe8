use rand::Rng;
use serde::{Deserialize, Serialize};

use super::SimplicialComplex;
use crate::orlicz::{check_norm_equivalence, luxemburg_weighted, MeasureSpace, YoungFunction};
use crate::{Error, Result};

/// Real values on the `k`-simplices of a complex, in simplex order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cochain {
    pub degree: usize,
    pub values: Vec<f64>,
}

impl Cochain {
    pub fn new(complex: &SimplicialComplex, degree: usize, values: Vec<f64>) -> Result<Self> {
        if degree > complex.dim() {
            return Err(Error::Degree { degree, dim: complex.dim() });
        }
        if values.len() != complex.count(degree) {
            return Err(Error::input(format!(
                "{} values for {} simplices of degree {degree}",
                values.len(),
                complex.count(degree)
            )));
        }
        Ok(Cochain { degree, values })
    }

    pub fn zeros(complex: &SimplicialComplex, degree: usize) -> Self {
        Cochain { degree, values: vec![0.0; complex.count(degree)] }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        Cochain { degree: self.degree, values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect() }
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        Cochain { degree: self.degree, values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, c: f64) -> Cochain {
        Cochain { degree: self.degree, values: self.values.iter().map(|v| c * v).collect() }
    }
}

impl SimplicialComplex {
    /// `δθ(σ) = θ(∂σ)`. Top-degree input yields the empty cochain of
    /// degree `dim + 1`.
    pub fn coboundary(&self, theta: &Cochain) -> Result<Cochain> {
        let k = theta.degree;
        if k > self.dim() {
            return Err(Error::Degree { degree: k, dim: self.dim() });
        }
        if theta.values.len() != self.count(k) {
            return Err(Error::input("cochain does not match the complex"));
        }
        let values = (0..self.count(k + 1))
            .map(|i| self.faces(k + 1, i).iter().map(|&(f, s)| s as f64 * theta.values[f]).sum())
            .collect();
        Ok(Cochain { degree: k + 1, values })
    }

    /// Transpose of the coboundary: `(δᵀψ)(τ) = Σ_σ [σ:τ] ψ(σ)` for `ψ` of degree `k+1`.
    pub fn coboundary_transpose(&self, psi: &Cochain) -> Result<Cochain> {
        let k = psi.degree.checked_sub(1).ok_or(Error::Degree { degree: 0, dim: self.dim() })?;
        let mut values = vec![0.0; self.count(k)];
        for (i, v) in psi.values.iter().enumerate() {
            for &(f, s) in self.faces(k + 1, i) {
                values[f] += s as f64 * v;
            }
        }
        Ok(Cochain { degree: k, values })
    }

    /// Dense matrix of `δ_k` (rows: `(k+1)`-simplices, columns: `k`-simplices).
    pub fn coboundary_matrix(&self, k: usize) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::zeros(self.count(k + 1), self.count(k));
        for i in 0..self.count(k + 1) {
            for &(f, s) in self.faces(k + 1, i) {
                m[(i, f)] = s as f64;
            }
        }
        m
    }
}

/// `ℓ^φ` norm over counting measure on the simplices.
pub fn cochain_norm(phi: &YoungFunction, theta: &Cochain, tol: f64) -> f64 {
    luxemburg_weighted(phi, &theta.values, None, tol).value()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuityReport {
    pub trials: usize,
    /// Largest number of cofaces of a simplex (`N(1)`).
    pub coface_bound: usize,
    pub worst_ratio: f64,
    /// `max_k max(N(1), k+2)` over the tested degrees.
    pub bound: f64,
    /// Worst `‖δθ‖ / ((k+2)·‖θ‖_{Kφ})`, `K = max(N(1)/(k+2), 1)`; at most 1.
    pub worst_scaled_ratio: f64,
    pub violations: usize,
    /// `δδθ` vanished identically for integer-valued trials.
    pub delta_squared_zero: bool,
}

/// Samples random cochains in every degree below the dimension and compares
/// `‖δθ‖_φ / ‖θ‖_φ` with the constant `max(N(1), k+2)`.
///
/// The estimate: `δθ(σ)` is a signed sum of `k+2` face values, so convexity
/// gives `Σ_σ φ(δθ/γ) ≤ N(1)/(k+2) · Σ_τ φ((k+2)θ/γ)`, hence
/// `‖δθ‖_φ ≤ (k+2)‖θ‖_{Kφ} ≤ (k+2)K‖θ‖_φ` with `K = max(N(1)/(k+2), 1)`.
pub fn delta_continuity_report(
    phi: &YoungFunction,
    complex: &SimplicialComplex,
    trials: usize,
    rng: &mut impl Rng,
    tol: f64,
) -> Result<ContinuityReport> {
    let n1 = complex.coface_bound();
    let slack = 1e-8;
    let mut report = ContinuityReport {
        trials,
        coface_bound: n1,
        worst_ratio: 0.0,
        bound: 0.0,
        worst_scaled_ratio: 0.0,
        violations: 0,
        delta_squared_zero: true,
    };
    let top = complex.dim();
    for k in 0..top {
        let kk = (k + 2) as f64;
        let factor = (n1 as f64 / kk).max(1.0);
        let constant = (n1 as f64).max(kk);
        report.bound = report.bound.max(constant);
        let space = MeasureSpace::counting(complex.count(k));
        for _ in 0..trials {
            let theta = Cochain {
                degree: k,
                values: (0..complex.count(k)).map(|_| rng.random_range(-1.0..1.0)).collect(),
            };
            let norm = cochain_norm(phi, &theta, tol);
            if norm == 0.0 {
                continue;
            }
            let d = complex.coboundary(&theta)?;
            let ratio = cochain_norm(phi, &d, tol) / norm;
            let eq = check_norm_equivalence(phi, factor, &theta.values, &space, tol)?;
            let scaled = cochain_norm(phi, &d, tol) / (kk * eq.scaled_norm);
            report.worst_ratio = report.worst_ratio.max(ratio);
            report.worst_scaled_ratio = report.worst_scaled_ratio.max(scaled);
            if ratio > constant * (1.0 + slack) || scaled > 1.0 + slack {
                report.violations += 1;
            }
            if k + 1 < top {
                let int = Cochain {
                    degree: k,
                    values: (0..complex.count(k)).map(|_| rng.random_range(-1000i32..=1000) as f64).collect(),
                };
                let dd = complex.coboundary(&complex.coboundary(&int)?)?;
                report.delta_squared_zero &= dd.values.iter().all(|&v| v == 0.0);
            }
        }
    }
    Ok(report)
}
