use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::{basis, binomial, component_index, Grid};
use crate::{Error, Result};

/// Anything that can be evaluated as a `k`-form at arbitrary points.
pub trait FormField: Sync {
    fn dim(&self) -> usize;
    fn degree(&self) -> usize;
    /// Writes the `C(n, k)` coefficients at `x` into `out`.
    fn eval_into(&self, x: &[f64], out: &mut [f64]);

    fn components(&self) -> usize {
        binomial(self.dim(), self.degree())
    }

    fn eval(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.components()];
        self.eval_into(x, &mut out);
        out
    }
}

type Coefficients = dyn Fn(&[f64], &mut [f64]) + Send + Sync;

/// A form given by a closure.
#[derive(Clone)]
pub struct AnalyticForm {
    n: usize,
    k: usize,
    f: Arc<Coefficients>,
}

impl AnalyticForm {
    pub fn new(n: usize, k: usize, f: impl Fn(&[f64], &mut [f64]) + Send + Sync + 'static) -> Self {
        AnalyticForm { n, k, f: Arc::new(f) }
    }

    pub fn function(n: usize, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self::new(n, 0, move |x, out| out[0] = f(x))
    }
}

impl std::fmt::Debug for AnalyticForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "AnalyticForm(n={}, k={})", self.n, self.k)
    }
}

impl FormField for AnalyticForm {
    fn dim(&self) -> usize {
        self.n
    }
    fn degree(&self) -> usize {
        self.k
    }
    fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        (self.f)(x, out)
    }
}

/// Coefficients of a `k`-form at every sample of a grid, point-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscreteForm {
    pub degree: usize,
    pub grid: Grid,
    pub data: Vec<f64>,
}

impl DiscreteForm {
    pub fn zeros(grid: &Grid, degree: usize) -> Self {
        DiscreteForm { degree, grid: grid.clone(), data: vec![0.0; grid.len() * binomial(grid.dim(), degree)] }
    }

    pub fn from_data(grid: &Grid, degree: usize, data: Vec<f64>) -> Result<Self> {
        if degree > grid.dim() {
            return Err(Error::Degree { degree, dim: grid.dim() });
        }
        if data.len() != grid.len() * binomial(grid.dim(), degree) {
            return Err(Error::input("coefficient array does not match the grid"));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::input("non-finite form coefficient"));
        }
        Ok(DiscreteForm { degree, grid: grid.clone(), data })
    }

    /// Samples a field at every grid point.
    pub fn sample(grid: &Grid, field: &dyn FormField) -> Result<Self> {
        if field.dim() != grid.dim() {
            return Err(Error::input("field and grid dimensions differ"));
        }
        let c = field.components();
        let mut data = vec![0.0; grid.len() * c];
        if c > 0 {
            data.par_chunks_mut(c).enumerate().for_each(|(i, out)| field.eval_into(&grid.point(i), out));
        }
        Ok(DiscreteForm { degree: field.degree(), grid: grid.clone(), data })
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn ncomp(&self) -> usize {
        binomial(self.dim(), self.degree)
    }

    pub fn at(&self, idx: usize) -> &[f64] {
        let c = self.ncomp();
        &self.data[idx * c..(idx + 1) * c]
    }

    pub fn at_mut(&mut self, idx: usize) -> &mut [f64] {
        let c = self.ncomp();
        &mut self.data[idx * c..(idx + 1) * c]
    }

    pub fn component(&self, idx: usize, comp: usize) -> f64 {
        self.data[idx * self.ncomp() + comp]
    }

    fn zip_with(&self, other: &DiscreteForm, f: impl Fn(f64, f64) -> f64) -> Result<DiscreteForm> {
        if self.degree != other.degree || self.data.len() != other.data.len() {
            return Err(Error::input("forms of different shape"));
        }
        Ok(DiscreteForm {
            degree: self.degree,
            grid: self.grid.clone(),
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(*a, *b)).collect(),
        })
    }

    pub fn add(&self, other: &DiscreteForm) -> Result<DiscreteForm> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &DiscreteForm) -> Result<DiscreteForm> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: f64) -> DiscreteForm {
        DiscreteForm { degree: self.degree, grid: self.grid.clone(), data: self.data.iter().map(|v| c * v).collect() }
    }

    /// Largest coefficient magnitude over the points where `mask` holds.
    pub fn sup_norm_where(&self, mask: impl Fn(usize) -> bool) -> f64 {
        let c = self.ncomp();
        if c == 0 {
            return 0.0;
        }
        self.data
            .chunks(c)
            .enumerate()
            .filter(|(i, _)| mask(*i))
            .flat_map(|(_, v)| v.iter())
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn sup_norm(&self) -> f64 {
        self.sup_norm_where(|_| true)
    }

    /// Centred second-order differences (one-sided second order at the
    /// ends of non-periodic axes), assembled as
    /// `(dω)_J = Σ_p (−1)^p ∂_{J_p} ω_{J∖J_p}`. Top-degree input yields
    /// the zero form of degree `n + 1` (no components).
    pub fn exterior_derivative(&self) -> DiscreteForm {
        let n = self.dim();
        let k = self.degree;
        if k >= n {
            return DiscreteForm { degree: k + 1, grid: self.grid.clone(), data: vec![] };
        }
        let out_basis = basis(n, k + 1);
        // (output component, axis, input component, sign)
        let mut terms = Vec::new();
        for (o, j) in out_basis.iter().enumerate() {
            for (p, &axis) in j.iter().enumerate() {
                let mut rest = j.clone();
                rest.remove(p);
                let src = component_index(n, &rest).expect("subset in basis");
                terms.push((o, axis, src, if p % 2 == 0 { 1.0 } else { -1.0 }));
            }
        }
        let co = out_basis.len();
        let ci = self.ncomp();
        let grid = &self.grid;
        let mut data = vec![0.0; grid.len() * co];
        data.par_chunks_mut(co).enumerate().for_each(|(idx, out)| {
            let m = grid.multi_index(idx);
            for &(o, axis, src, sign) in &terms {
                out[o] += sign * partial(&self.data, ci, src, grid, &m, idx, axis);
            }
        });
        DiscreteForm { degree: k + 1, grid: grid.clone(), data }
    }

    /// Copies the sub-grid starting at `start` (wrapping on periodic axes).
    pub fn restrict_to(&self, sub: &Grid, start: &[i64]) -> DiscreteForm {
        let c = self.ncomp();
        let mut data = vec![0.0; sub.len() * c];
        for (i, chunk) in data.chunks_mut(c.max(1)).enumerate().take(sub.len()) {
            if c == 0 {
                break;
            }
            let m = sub.multi_index(i);
            let g: Vec<usize> = (0..self.dim())
                .map(|a| (start[a] + m[a] as i64).rem_euclid(self.grid.counts[a] as i64) as usize)
                .collect();
            chunk.copy_from_slice(self.at(self.grid.flat_index(&g)));
        }
        DiscreteForm { degree: self.degree, grid: sub.clone(), data }
    }
}

fn partial(data: &[f64], ci: usize, comp: usize, grid: &Grid, m: &[usize], idx: usize, axis: usize) -> f64 {
    let n = grid.counts[axis];
    let h = grid.spacing(axis);
    let stride = grid.stride(axis);
    let i = m[axis];
    let val = |j: usize| data[(idx - i * stride + j * stride) * ci + comp];
    if grid.periodic[axis] {
        let (l, r) = ((i + n - 1) % n, (i + 1) % n);
        (val(r) - val(l)) / (2.0 * h)
    } else if i == 0 {
        (-3.0 * val(0) + 4.0 * val(1) - val(2)) / (2.0 * h)
    } else if i == n - 1 {
        (3.0 * val(n - 1) - 4.0 * val(n - 2) + val(n - 3)) / (2.0 * h)
    } else {
        (val(i + 1) - val(i - 1)) / (2.0 * h)
    }
}

impl FormField for DiscreteForm {
    fn dim(&self) -> usize {
        self.grid.dim()
    }
    fn degree(&self) -> usize {
        self.degree
    }
    /// Tensor cubic Lagrange interpolation.
    fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        let n = self.dim();
        let c = self.ncomp();
        out.iter_mut().for_each(|o| *o = 0.0);
        if c == 0 {
            return;
        }
        match n {
            1 => {
                let (ni, wi) = self.grid.stencil(0, x[0]);
                for (a, wa) in ni.iter().zip(&wi) {
                    for (o, v) in out.iter_mut().zip(self.at(*a)) {
                        *o += wa * v;
                    }
                }
            }
            2 => {
                let (n0, w0) = self.grid.stencil(0, x[0]);
                let (n1, w1) = self.grid.stencil(1, x[1]);
                let s = self.grid.counts[1];
                for (a, wa) in n0.iter().zip(&w0) {
                    for (b, wb) in n1.iter().zip(&w1) {
                        let w = wa * wb;
                        let base = (a * s + b) * c;
                        for (o, v) in out.iter_mut().zip(&self.data[base..base + c]) {
                            *o += w * v;
                        }
                    }
                }
            }
            _ => {
                let stencils: Vec<_> = (0..n).map(|a| self.grid.stencil(a, x[a])).collect();
                let mut m = vec![0usize; n];
                for t in 0..4usize.pow(n as u32) {
                    let mut w = 1.0;
                    let mut rem = t;
                    for a in (0..n).rev() {
                        let d = rem % 4;
                        rem /= 4;
                        m[a] = stencils[a].0[d];
                        w *= stencils[a].1[d];
                    }
                    let idx = self.grid.flat_index(&m);
                    for (o, v) in out.iter_mut().zip(self.at(idx)) {
                        *o += w * v;
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane(count: usize) -> Grid {
        Grid::cube(2, -1.0, 1.0, count, false).unwrap()
    }

    #[test]
    fn derivative_examples() {
        let g = plane(16);
        let x_dy = AnalyticForm::new(2, 1, |p, o| {
            o[0] = 0.0;
            o[1] = p[0];
        });
        let d = DiscreteForm::sample(&g, &x_dy).unwrap().exterior_derivative();
        assert!(d.data.iter().all(|v| (v - 1.0).abs() < 1e-12));
        let y_dx = AnalyticForm::new(2, 1, |p, o| {
            o[0] = p[1];
            o[1] = 0.0;
        });
        let d = DiscreteForm::sample(&g, &y_dx).unwrap().exterior_derivative();
        assert!(d.data.iter().all(|v| (v + 1.0).abs() < 1e-12));
        let top = DiscreteForm::zeros(&g, 2).exterior_derivative();
        assert_eq!((top.degree, top.data.len()), (3, 0));
    }

    #[test]
    fn derivative_converges_at_second_order() {
        // Axis-wise difference operators commute, so dd vanishes to
        // round-off; the derivative itself converges at rate h².
        let f = AnalyticForm::function(2, |p| (p[0] + 0.5).sin() * p[1].cos());
        let df = AnalyticForm::new(2, 1, |p, o| {
            o[0] = (p[0] + 0.5).cos() * p[1].cos();
            o[1] = -(p[0] + 0.5).sin() * p[1].sin();
        });
        let mut errs = Vec::new();
        for count in [32, 64, 128] {
            let g = plane(count);
            let d = DiscreteForm::sample(&g, &f).unwrap().exterior_derivative();
            assert!(d.exterior_derivative().sup_norm() < 1e-9);
            errs.push(d.sub(&DiscreteForm::sample(&g, &df).unwrap()).unwrap().sup_norm());
        }
        for w in errs.windows(2) {
            assert!((w[0] / w[1]).log2() > 1.9, "{errs:?}");
        }
    }

    #[test]
    fn interpolation_of_cubic_forms() {
        let g = plane(12);
        let w = AnalyticForm::new(2, 1, |p, o| {
            o[0] = p[0] * p[0] * p[1] - p[1].powi(3);
            o[1] = 1.0 + p[0];
        });
        let d = DiscreteForm::sample(&g, &w).unwrap();
        for x in [[0.3, -0.2], [-0.99, 0.97], [0.0, 0.0]] {
            let (a, b) = (d.eval(&x), w.eval(&x));
            assert!((a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn periodic_restriction() {
        let g = Grid::cube(2, 0.0, 1.0, 8, true).unwrap();
        let f = DiscreteForm::from_data(&g, 0, (0..64).map(|i| i as f64).collect()).unwrap();
        let sub = g.subgrid(&[-1, 6], &[4, 4]).unwrap();
        let r = f.restrict_to(&sub, &[-1, 6]);
        assert_eq!(r.at(0)[0], (7 * 8 + 6) as f64);
        assert_eq!(r.at(3)[0], (7 * 8 + 1) as f64);
    }
}
