use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kernel::Kernel;
use super::model::GroupModel;
use crate::forms::{binomial, pullback_linear, Contraction, DiscreteForm, FormField, Grid};
use crate::quadrature::gauss_legendre_on;
use crate::{Error, Result};

/// A sampled operator output together with the samples on which every
/// quadrature point stayed inside the sampled box.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sampled {
    pub form: DiscreteForm,
    pub valid: Vec<bool>,
}

impl Sampled {
    pub fn valid_count(&self) -> usize {
        self.valid.iter().filter(|v| **v).count()
    }
}

/// `A^T c` for a `k`-form in dimension `n`, with fast paths for `n ≤ 2`.
#[inline]
pub(crate) fn pull(n: usize, k: usize, a: &[f64], c: &[f64], out: &mut [f64]) {
    match (n, k) {
        (_, 0) => out[0] = c[0],
        (1, 1) => out[0] = a[0] * c[0],
        (2, 1) => {
            out[0] = a[0] * c[0] + a[2] * c[1];
            out[1] = a[1] * c[0] + a[3] * c[1];
        }
        (2, 2) => out[0] = (a[0] * a[3] - a[1] * a[2]) * c[0],
        _ => pullback_linear(n, k, a, c, out),
    }
}

fn check(model: &GroupModel, omega: &dyn FormField, grid: &Grid) -> Result<()> {
    if omega.dim() != model.dim() || grid.dim() != model.dim() {
        return Err(Error::input("form, grid and group dimensions differ"));
    }
    if matches!(model, GroupModel::AffineHalfPlane) && grid.lo[1] <= 0.0 {
        return Err(Error::Model("the affine model needs y > 0 on the grid".into()));
    }
    Ok(())
}

fn inside(grid: &Grid, p: &[f64]) -> bool {
    grid.contains(p)
}

/// `(ω∗κ)_x = Σ_z κ(z)dz · (R_z^*ω)_x`.
pub fn convolve(kernel: &Kernel, omega: &dyn FormField, grid: &Grid) -> Result<Sampled> {
    let model = &kernel.model;
    check(model, omega, grid)?;
    let n = model.dim();
    let k = omega.degree();
    let c = binomial(n, k);
    let jacs: Vec<Vec<f64>> = kernel.points.iter().map(|z| model.right_differential(z)).collect();
    let mut data = vec![0.0; grid.len() * c];
    let mut valid = vec![false; grid.len()];
    data.par_chunks_mut(c.max(1)).zip(valid.par_iter_mut()).enumerate().for_each(|(i, (out, ok))| {
        let x = grid.point(i);
        let mut y = vec![0.0; n];
        let mut w = vec![0.0; c];
        let mut p = vec![0.0; c];
        let mut all_in = true;
        for ((z, jac), wt) in kernel.points.iter().zip(&jacs).zip(&kernel.weights) {
            model.product(&x, z, &mut y);
            all_in &= inside(grid, &y);
            if c == 0 {
                continue;
            }
            omega.eval_into(&y, &mut w);
            pull(n, k, jac, &w, &mut p);
            out.iter_mut().zip(&p).for_each(|(o, v)| *o += wt * v);
        }
        *ok = all_in;
    });
    if !valid.iter().any(|v| *v) {
        return Err(Error::Region("the kernel support leaves the sampled region everywhere".into()));
    }
    Ok(Sampled { form: DiscreteForm { degree: k, grid: grid.clone(), data }, valid })
}

/// `h(ω)_x = −Σ_z κ(z)dz ∫₀¹ ((φ_t^Z)^* ι_Z ω)_x dt` with `φ_t^Z(x) = x·exp(tZ)`.
pub fn flow_homotopy(kernel: &Kernel, omega: &dyn FormField, grid: &Grid, t_nodes: usize) -> Result<Sampled> {
    let model = &kernel.model;
    check(model, omega, grid)?;
    let n = model.dim();
    let k = omega.degree();
    if k == 0 {
        return Err(Error::Degree { degree: 0, dim: n });
    }
    let c_in = binomial(n, k);
    let c_out = binomial(n, k - 1);
    let (ts, wts) = gauss_legendre_on(t_nodes, 0.0, 1.0);
    // per (z, t): flow endpoint exp(tZ) and its right-translation Jacobian
    let flows: Vec<Vec<(Vec<f64>, Vec<f64>, f64)>> = kernel
        .lie
        .iter()
        .zip(&kernel.weights)
        .map(|(lie, wz)| {
            ts.iter()
                .zip(&wts)
                .map(|(t, wt)| {
                    let tz: Vec<f64> = lie.iter().map(|v| t * v).collect();
                    let e = model.exp(&tz);
                    let j = model.right_differential(&e);
                    (e, j, -wz * wt)
                })
                .collect()
        })
        .collect();
    let contraction = Contraction::new(n, k);
    let mut data = vec![0.0; grid.len() * c_out];
    let mut valid = vec![false; grid.len()];
    data.par_chunks_mut(c_out).zip(valid.par_iter_mut()).enumerate().for_each(|(i, (out, ok))| {
        let x = grid.point(i);
        let mut q = vec![0.0; n];
        let mut v = vec![0.0; n];
        let mut w = vec![0.0; c_in];
        let mut iota = vec![0.0; c_out];
        let mut p = vec![0.0; c_out];
        let mut all_in = true;
        for (lie, row) in kernel.lie.iter().zip(&flows) {
            for (e, jac, wt) in row {
                model.product(&x, e, &mut q);
                all_in &= inside(grid, &q);
                omega.eval_into(&q, &mut w);
                model.field(lie, &q, &mut v);
                contraction.apply(&v, &w, &mut iota);
                pull(n, k - 1, jac, &iota, &mut p);
                out.iter_mut().zip(&p).for_each(|(o, val)| *o += wt * val);
            }
        }
        *ok = all_in;
    });
    if !valid.iter().any(|v| *v) {
        return Err(Error::Region("the flows leave the sampled region everywhere".into()));
    }
    Ok(Sampled { form: DiscreteForm { degree: k - 1, grid: grid.clone(), data }, valid })
}

/// Valid samples whose axis neighbours are valid too (so that centred
/// differences only see valid data).
pub fn shrink_mask(grid: &Grid, valid: &[bool]) -> Vec<bool> {
    (0..grid.len())
        .map(|i| {
            if !valid[i] {
                return false;
            }
            let m = grid.multi_index(i);
            (0..grid.dim()).all(|a| {
                let s = grid.stride(a);
                m[a] > 0 && m[a] + 1 < grid.counts[a] && valid[i - s] && valid[i + s]
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::AnalyticForm;

    #[test]
    fn constants_and_odd_moments() {
        let model = GroupModel::Abelian { dim: 1 };
        let kernel = Kernel::bump(model, 0.2, 16).unwrap();
        let grid = Grid::cube(1, -1.0, 1.0, 32, false).unwrap();
        let cdx = AnalyticForm::new(1, 1, |_, o| o[0] = 3.0);
        let r = convolve(&kernel, &cdx, &grid).unwrap();
        assert!(r.form.data.iter().all(|v| (v - 3.0).abs() < 1e-12));
        let f = AnalyticForm::function(1, |x| x[0]);
        let r = convolve(&kernel, &f, &grid).unwrap();
        for i in 0..grid.len() {
            assert!((r.form.data[i] - grid.point(i)[0]).abs() < 1e-12);
        }
        // h(df) = f − f∗κ = 0 for f(x) = x
        let df = AnalyticForm::new(1, 1, |_, o| o[0] = 1.0);
        let h = flow_homotopy(&kernel, &df, &grid, 8).unwrap();
        assert!(h.form.sup_norm() < 1e-12);
        let zero = AnalyticForm::new(1, 1, |_, o| o[0] = 0.0);
        assert_eq!(flow_homotopy(&kernel, &zero, &grid, 8).unwrap().form.sup_norm(), 0.0);
    }

    #[test]
    fn region_errors() {
        let kernel = Kernel::bump(GroupModel::Abelian { dim: 1 }, 2.0, 8).unwrap();
        let grid = Grid::cube(1, 0.0, 1.0, 16, false).unwrap();
        let f = AnalyticForm::function(1, |x| x[0]);
        assert!(matches!(convolve(&kernel, &f, &grid), Err(Error::Region(_))));
    }
}
