use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cover::CoverNerve;
use crate::forms::{binomial, DiscreteForm, FormField};
use crate::orlicz::{luxemburg_weighted, YoungFunction};
use crate::simplicial::Cochain;
use crate::{Error, Result};

/// An element of bidegree `(k, ℓ)`: a `k`-form on the piece of every
/// `ℓ`-simplex of the nerve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BicomplexElement {
    pub k: usize,
    pub l: usize,
    pub pieces: Vec<DiscreteForm>,
}

impl BicomplexElement {
    pub fn scale(&self, c: f64) -> Self {
        BicomplexElement { k: self.k, l: self.l, pieces: self.pieces.iter().map(|p| p.scale(c)).collect() }
    }

    fn zip(&self, other: &Self, f: impl Fn(&DiscreteForm, &DiscreteForm) -> Result<DiscreteForm>) -> Result<Self> {
        if (self.k, self.l) != (other.k, other.l) {
            return Err(Error::input("bidegrees differ"));
        }
        let pieces = self.pieces.iter().zip(&other.pieces).map(|(a, b)| f(a, b)).collect::<Result<_>>()?;
        Ok(BicomplexElement { k: self.k, l: self.l, pieces })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a.sub(b))
    }
}

impl CoverNerve {
    fn check_level(&self, l: usize) -> Result<()> {
        if l > self.top_degree() {
            return Err(Error::Degree { degree: l, dim: self.top_degree() });
        }
        Ok(())
    }

    pub fn zero_element(&self, k: usize, l: usize) -> Result<BicomplexElement> {
        self.check_level(l)?;
        Ok(BicomplexElement { k, l, pieces: self.pieces[l].iter().map(|p| DiscreteForm::zeros(&p.grid, k)).collect() })
    }

    /// Samples a (periodic, when the domain is a torus) field on every
    /// `ℓ`-piece in that piece's own coordinates.
    pub fn sample_element(&self, field: &dyn FormField, l: usize) -> Result<BicomplexElement> {
        self.check_level(l)?;
        let pieces = self.pieces[l].iter().map(|p| DiscreteForm::sample(&p.grid, field)).collect::<Result<_>>()?;
        Ok(BicomplexElement { k: field.degree(), l, pieces })
    }

    /// Copies a global form onto every `ℓ`-piece.
    pub fn restrict_global(&self, omega: &DiscreteForm, l: usize) -> Result<BicomplexElement> {
        self.check_level(l)?;
        if omega.grid != *self.grid() {
            return Err(Error::input("form is not sampled on the cover's grid"));
        }
        let pieces = self.pieces[l].iter().map(|p| omega.restrict_to(&p.grid, &p.start)).collect();
        Ok(BicomplexElement { k: omega.degree, l, pieces })
    }

    /// Piecewise-constant element of bidegree `(0, ℓ)` carrying a nerve cochain.
    pub fn embed_cochain(&self, theta: &Cochain) -> Result<BicomplexElement> {
        let l = theta.degree;
        self.check_level(l)?;
        if theta.values.len() != self.nerve.count(l) {
            return Err(Error::input("cochain does not live on the nerve"));
        }
        let pieces = self.pieces[l]
            .iter()
            .zip(&theta.values)
            .map(|(p, v)| DiscreteForm { degree: 0, grid: p.grid.clone(), data: vec![*v; p.grid.len()] })
            .collect();
        Ok(BicomplexElement { k: 0, l, pieces })
    }

    /// Mean over the nominal samples of every piece of a `(0, ℓ)` element,
    /// together with the largest deviation from it.
    pub fn piece_means(&self, e: &BicomplexElement) -> Result<(Cochain, f64)> {
        if e.k != 0 {
            return Err(Error::Degree { degree: e.k, dim: 0 });
        }
        let mut values = Vec::with_capacity(e.pieces.len());
        let mut spread: f64 = 0.0;
        for (p, f) in self.pieces[e.l].iter().zip(&e.pieces) {
            let nominal: Vec<f64> = (0..p.grid.len()).filter(|&i| p.is_nominal(i)).map(|i| f.data[i]).collect();
            let mean = nominal.iter().sum::<f64>() / nominal.len() as f64;
            spread = nominal.iter().fold(spread, |s, v| s.max((v - mean).abs()));
            values.push(mean);
        }
        Ok((Cochain { degree: e.l, values }, spread))
    }

    /// `(d′ω)_U = (−1)^ℓ dω_U`.
    pub fn d_prime(&self, e: &BicomplexElement) -> BicomplexElement {
        let sign = if e.l % 2 == 0 { 1.0 } else { -1.0 };
        let pieces = e.pieces.par_iter().map(|p| p.exterior_derivative().scale(sign)).collect();
        BicomplexElement { k: e.k + 1, l: e.l, pieces }
    }

    /// `(d″ω)_W = Σ_i (−1)^i ω_{W∖W_i}|_W`.
    pub fn d_double_prime(&self, e: &BicomplexElement) -> Result<BicomplexElement> {
        let l = e.l;
        if l + 1 > self.top_degree() {
            // no (ℓ+2)-fold intersections: the target group is trivial
            return Ok(BicomplexElement { k: e.k, l: l + 1, pieces: vec![] });
        }
        let c = binomial(self.grid().dim(), e.k);
        let pieces = (0..self.nerve.count(l + 1))
            .into_par_iter()
            .map(|j| {
                let tau = &self.pieces[l + 1][j];
                let mut out = DiscreteForm::zeros(&tau.grid, e.k);
                for (f, &(face, sign)) in self.nerve.faces(l + 1, j).iter().enumerate() {
                    let src = &e.pieces[face];
                    let off = &self.offsets[l][j][f];
                    copy_into(&mut out, src, off, sign as f64, c);
                }
                out
            })
            .collect();
        Ok(BicomplexElement { k: e.k, l: l + 1, pieces })
    }

    /// Largest coefficient of `a − b` over the nominal samples.
    pub fn sup_diff(&self, a: &BicomplexElement, b: &BicomplexElement) -> Result<f64> {
        let d = a.sub(b)?;
        Ok(self.sup_nominal(&d))
    }

    pub fn sup_nominal(&self, e: &BicomplexElement) -> f64 {
        self.pieces[e.l]
            .iter()
            .zip(&e.pieces)
            .map(|(p, f)| f.sup_norm_where(|i| p.is_nominal(i)))
            .fold(0.0, f64::max)
    }

    /// `‖ω_U‖_{L^φ}` over the nominal samples of each piece (flat metric).
    pub fn piece_norms(&self, phi: &YoungFunction, e: &BicomplexElement, tol: f64) -> Vec<f64> {
        self.pieces[e.l]
            .par_iter()
            .zip(&e.pieces)
            .map(|(p, f)| {
                let c = f.ncomp();
                let vals: Vec<f64> = (0..p.grid.len())
                    .filter(|&i| p.is_nominal(i))
                    .map(|i| {
                        if c == 0 {
                            0.0
                        } else {
                            crate::forms::pointwise_norm(&self.domain, &p.grid.point(i), f.degree, f.at(i))
                        }
                    })
                    .collect();
                let w = vec![p.grid.cell_volume(); vals.len()];
                luxemburg_weighted(phi, &vals, Some(&w), tol).value()
            })
            .collect()
    }

    /// `ℓ^φ` norm of the piece norms.
    pub fn element_norm(&self, phi: &YoungFunction, e: &BicomplexElement, tol: f64) -> f64 {
        luxemburg_weighted(phi, &self.piece_norms(phi, e, tol), None, tol).value()
    }
}

/// Adds `sign · src` (restricted) onto `out`, whose stored grid sits at
/// `off` inside that of `src`.
pub(crate) fn copy_into(out: &mut DiscreteForm, src: &DiscreteForm, off: &[usize], sign: f64, c: usize) {
    if c == 0 {
        return;
    }
    for i in 0..out.grid.len() {
        let m = out.grid.multi_index(i);
        let s: Vec<usize> = m.iter().zip(off).map(|(a, b)| a + b).collect();
        let si = src.grid.flat_index(&s);
        for (o, v) in out.data[i * c..(i + 1) * c].iter_mut().zip(&src.data[si * c..(si + 1) * c]) {
            *o += sign * v;
        }
    }
}
