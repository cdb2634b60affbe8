use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::algebra::pullback_linear;
use super::domain::ChartedDomain;
use super::form::{DiscreteForm, FormField};
use super::norm::pointwise_norm;
use crate::orlicz::{luxemburg_weighted, YoungFunction};
use crate::{Error, Result};

/// A smooth map between coordinate patches of equal dimension.
pub trait ChartMap: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64]) -> Vec<f64>;
    /// Jacobian at `x`, row-major; rows are output coordinates.
    fn differential(&self, x: &[f64]) -> Vec<f64>;
}

/// `x ↦ A x + b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineChart {
    pub matrix: Vec<f64>,
    pub offset: Vec<f64>,
}

impl AffineChart {
    pub fn new(matrix: Vec<f64>, offset: Vec<f64>) -> Result<Self> {
        let n = offset.len();
        if matrix.len() != n * n || n == 0 {
            return Err(Error::input("affine chart needs an n × n matrix"));
        }
        Ok(AffineChart { matrix, offset })
    }

    pub fn identity(n: usize) -> Self {
        let mut matrix = vec![0.0; n * n];
        (0..n).for_each(|a| matrix[a * n + a] = 1.0);
        AffineChart { matrix, offset: vec![0.0; n] }
    }

    /// The diagonal map sending the box `[lo, hi]` onto `[-1, 1]^n`.
    pub fn box_to_cube(lo: &[f64], hi: &[f64]) -> Self {
        let n = lo.len();
        let mut matrix = vec![0.0; n * n];
        let mut offset = vec![0.0; n];
        for a in 0..n {
            let s = 2.0 / (hi[a] - lo[a]);
            matrix[a * n + a] = s;
            offset[a] = -1.0 - s * lo[a];
        }
        AffineChart { matrix, offset }
    }
}

impl ChartMap for AffineChart {
    fn dim(&self) -> usize {
        self.offset.len()
    }
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n).map(|r| self.offset[r] + (0..n).map(|c| self.matrix[r * n + c] * x[c]).sum::<f64>()).collect()
    }
    fn differential(&self, _x: &[f64]) -> Vec<f64> {
        self.matrix.clone()
    }
}

/// Outcome of a pullback together with the continuity comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PullbackReport {
    pub lipschitz: f64,
    pub source_norm: f64,
    pub target_norm: f64,
    pub ratio: f64,
    pub bound: f64,
    pub holds: bool,
}

/// `(f*ω)(x) = Df(x)^* ω(f(x))` at every source sample.
pub fn chart_pullback(f: &dyn ChartMap, omega: &dyn FormField, source: &ChartedDomain) -> Result<DiscreteForm> {
    let n = source.dim();
    if f.dim() != n || omega.dim() != n {
        return Err(Error::input("chart, form and domain dimensions differ"));
    }
    let k = omega.degree();
    let mut out = DiscreteForm::zeros(&source.grid, k);
    let c = out.ncomp();
    let grid = &source.grid;
    out.data.par_chunks_mut(c).enumerate().try_for_each(|(i, o)| {
        let x = grid.point(i);
        let jac = f.differential(&x);
        if jacobian_det(&jac, n).abs() < 1e-14 {
            return Err(Error::SingularDifferential(i));
        }
        let w = omega.eval(&f.apply(&x));
        pullback_linear(n, k, &jac, &w, o);
        Ok(())
    })?;
    Ok(out)
}

fn jacobian_det(jac: &[f64], n: usize) -> f64 {
    nalgebra::DMatrix::from_row_slice(n, n, jac).determinant()
}

fn operator_norms(jac: &[f64], n: usize) -> (f64, f64) {
    let m = nalgebra::DMatrix::from_row_slice(n, n, jac);
    let sv = m.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    (max, 1.0 / min)
}

/// Pulls `omega` back and compares `‖f*ω‖_{L^φ(M)}` with `‖ω‖_{L^φ(f(M))}`.
/// The target norm is integrated over the source samples by change of
/// variables, so both sides see the same discretisation. The bound is
/// `L^k · L^{n/p}` for `|t|^p` and `L^{k+n}` otherwise, with `L` the
/// bi-Lipschitz constant of `f` on the samples.
pub fn pullback_report(
    phi: &YoungFunction,
    f: &dyn ChartMap,
    omega: &dyn FormField,
    source: &ChartedDomain,
    target: &ChartedDomain,
    tol: f64,
) -> Result<(DiscreteForm, PullbackReport)> {
    crate::orlicz::check_tol(tol)?;
    let pulled = chart_pullback(f, omega, source)?;
    let n = source.dim();
    let k = omega.degree();
    let idx: Vec<usize> = (0..source.grid.len()).filter(|&i| source.volume_weight(i) > 0.0).collect();
    let rows: Vec<(f64, f64, f64, f64, f64)> = idx
        .par_iter()
        .map(|&i| {
            let x = source.grid.point(i);
            let jac = f.differential(&x);
            let (big, inv) = operator_norms(&jac, n);
            let y = f.apply(&x);
            let w_src = source.volume_weight(i);
            let w_tgt = target.volume_density(&y) * jacobian_det(&jac, n).abs() * source.grid.cell_volume();
            let src = pointwise_norm(source, &x, k, pulled.at(i));
            let tgt = pointwise_norm(target, &y, k, &omega.eval(&y));
            (src, w_src, tgt, w_tgt, big.max(inv))
        })
        .collect();
    let lipschitz = rows.iter().map(|r| r.4).fold(1.0, f64::max);
    let (sv, sw): (Vec<f64>, Vec<f64>) = rows.iter().map(|r| (r.0, r.1)).unzip();
    let (tv, tw): (Vec<f64>, Vec<f64>) = rows.iter().map(|r| (r.2, r.3)).unzip();
    let source_norm = luxemburg_weighted(phi, &sv, Some(&sw), tol).value();
    let target_norm = luxemburg_weighted(phi, &tv, Some(&tw), tol).value();
    let bound = match phi.power_exponent() {
        Some(p) => lipschitz.powi(k as i32) * lipschitz.powf(n as f64 / p),
        None => lipschitz.powi((k + n) as i32),
    };
    let ratio = if target_norm > 0.0 { source_norm / target_norm } else { 0.0 };
    let report = PullbackReport {
        lipschitz,
        source_norm,
        target_norm,
        ratio,
        bound,
        holds: ratio <= bound * (1.0 + 1e-9) + 1e-12,
    };
    Ok((pulled, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{AnalyticForm, Grid};

    #[test]
    fn identity_and_dilation() {
        let grid = Grid::cube(2, 0.0, 1.0, 12, false).unwrap();
        let d = ChartedDomain::euclidean_box(grid);
        let w = AnalyticForm::new(2, 1, |x, o| {
            o[0] = x[1].sin();
            o[1] = x[0] * x[1];
        });
        let phi = YoungFunction::power(2.0).unwrap();
        let (pulled, rep) = pullback_report(&phi, &AffineChart::identity(2), &w, &d, &d, 1e-12).unwrap();
        assert_eq!(pulled, DiscreteForm::sample(&d.grid, &w).unwrap());
        assert!((rep.ratio - 1.0).abs() < 1e-9);

        let line = ChartedDomain::euclidean_box(Grid::cube(1, 0.0, 1.0, 8, false).unwrap());
        let dil = AffineChart::new(vec![2.0], vec![0.0]).unwrap();
        let dx = AnalyticForm::new(1, 1, |_, o| o[0] = 1.0);
        let p = chart_pullback(&dil, &dx, &line).unwrap();
        assert!(p.data.iter().all(|v| *v == 2.0));
    }

    #[test]
    fn singular_charts_are_rejected() {
        let d = ChartedDomain::euclidean_box(Grid::cube(2, 0.0, 1.0, 4, false).unwrap());
        let flat = AffineChart::new(vec![1.0, 1.0, 1.0, 1.0], vec![0.0; 2]).unwrap();
        let w = AnalyticForm::new(2, 1, |_, o| o.fill(1.0));
        assert!(matches!(chart_pullback(&flat, &w, &d), Err(Error::SingularDifferential(_))));
    }
}
