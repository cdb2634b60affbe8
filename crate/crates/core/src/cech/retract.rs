use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cover::CoverNerve;
use super::element::BicomplexElement;
use crate::forms::{basis, binomial, ConeRule, DiscreteForm, FormField, PoincareOptions};
use crate::quadrature::ball_average_rule;
use crate::{Error, Result};

/// Quadrature and tolerance settings for the bicomplex operators.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BicomplexOptions {
    /// Quadrature of the per-piece homotopy. The identity `dh + hd = Id`
    /// holds for every cone centre, so a coarse averaging rule suffices.
    pub homotopy: PoincareOptions,
    /// Relative tolerance for the closedness preconditions of the zig-zag.
    pub closed_tol: f64,
}

impl Default for BicomplexOptions {
    fn default() -> Self {
        BicomplexOptions { homotopy: PoincareOptions { t_nodes: 16, radial: 2, angular: 8 }, closed_tol: 1e-2 }
    }
}

/// A piece form seen through the chart `u ↦ c + s∘u` from `[-1, 1]^n`.
struct ChartView<'a> {
    form: &'a DiscreteForm,
    centre: &'a [f64],
    half: &'a [f64],
    factors: Vec<f64>,
}

impl FormField for ChartView<'_> {
    fn dim(&self) -> usize {
        self.form.dim()
    }
    fn degree(&self) -> usize {
        self.form.degree
    }
    fn eval_into(&self, u: &[f64], out: &mut [f64]) {
        let mut x = [0.0; 8];
        for a in 0..u.len() {
            x[a] = self.centre[a] + self.half[a] * u[a];
        }
        self.form.eval_into(&x[..u.len()], out);
        out.iter_mut().zip(&self.factors).for_each(|(o, f)| *o *= f);
    }
}

/// `Π_{i ∈ I} s_i` for every basis `k`-subset `I`.
fn component_factors(n: usize, k: usize, s: &[f64]) -> Vec<f64> {
    basis(n, k).iter().map(|set| set.iter().map(|&i| s[i]).product()).collect()
}

impl CoverNerve {
    /// `(Hω)_U = (−1)^ℓ f_U^* h (f_U^{−1})^* ω_U`, with `f_U` the affine chart
    /// of the nominal box onto `[-1, 1]^n` and `h` the averaged cone
    /// homotopy. Needs `k ≥ 1`.
    pub fn retraction_h(&self, e: &BicomplexElement, opts: &BicomplexOptions) -> Result<BicomplexElement> {
        if e.k == 0 {
            return Err(Error::Degree { degree: 0, dim: self.grid().dim() });
        }
        let n = self.grid().dim();
        let k = e.k;
        let sign = if e.l % 2 == 0 { 1.0 } else { -1.0 };
        let ho = &opts.homotopy;
        let (centres, weights) = ball_average_rule(&vec![0.0; n], 0.5, ho.radial, ho.angular);
        let rule = ConeRule::new(n, k, ho.t_nodes);
        let c_out = binomial(n, k - 1);
        let pieces = self.pieces[e.l]
            .iter()
            .zip(&e.pieces)
            .map(|(piece, form)| {
                let (centre, half) = piece.chart(self.grid());
                let view = ChartView { form, centre: &centre, half: &half, factors: component_factors(n, k, &half) };
                let back: Vec<f64> =
                    component_factors(n, k - 1, &half).iter().map(|f| sign / f).collect();
                let mut out = DiscreteForm::zeros(&piece.grid, k - 1);
                out.data.par_chunks_mut(c_out).enumerate().for_each(|(i, o)| {
                    let y = piece.grid.point(i);
                    let u: Vec<f64> = (0..n).map(|a| (y[a] - centre[a]) / half[a]).collect();
                    for (x, w) in centres.iter().zip(&weights) {
                        rule.accumulate(&view, x, &u, *w, o);
                    }
                    o.iter_mut().zip(&back).for_each(|(v, b)| *v *= b);
                });
                out
            })
            .collect();
        Ok(BicomplexElement { k: k - 1, l: e.l, pieces })
    }

    /// `(Pω)_V = Σ_U η_U ω_{UV}` for `ℓ ≥ 1`, where `ω_{UV}` is extended by
    /// zero off `U ∩ V` and carries the orientation sign of `U` in `U ∪ V`.
    pub fn contraction_p(&self, e: &BicomplexElement) -> Result<BicomplexElement> {
        if e.l == 0 {
            return Err(Error::Degree { degree: 0, dim: self.top_degree() });
        }
        let l = e.l - 1;
        let c = binomial(self.grid().dim(), e.k);
        let grid = self.grid();
        let pieces = (0..self.nerve.count(l))
            .into_par_iter()
            .map(|v| {
                let pv = &self.pieces[l][v];
                let mut out = DiscreteForm::zeros(&pv.grid, e.k);
                if c == 0 {
                    return out;
                }
                for &(tau, sign) in self.nerve.cofaces(l, v) {
                    let verts = self.nerve.simplex(l + 1, tau);
                    let face_pos = self.nerve.faces(l + 1, tau).iter().position(|&(f, _)| f == v).expect("face");
                    let u = verts[face_pos];
                    let eta = &self.partition[u];
                    let off = &self.offsets[l][tau][face_pos];
                    let pt = &self.pieces[l + 1][tau];
                    let src = &e.pieces[tau];
                    for i in 0..pv.grid.len() {
                        let w = eta[pv.global_index(i, grid)];
                        if w == 0.0 {
                            continue;
                        }
                        let m = pv.grid.multi_index(i);
                        let q: Option<Vec<usize>> = m
                            .iter()
                            .zip(off)
                            .zip(&pt.grid.counts)
                            .map(|((&a, &o), &cnt)| a.checked_sub(o).filter(|&x| x < cnt))
                            .collect();
                        let Some(q) = q else { continue };
                        let si = pt.grid.flat_index(&q);
                        for (o, val) in out.data[i * c..(i + 1) * c].iter_mut().zip(&src.data[si * c..(si + 1) * c]) {
                            *o += sign as f64 * w * val;
                        }
                    }
                }
                out
            })
            .collect();
        Ok(BicomplexElement { k: e.k, l, pieces })
    }

    /// `Σ_V η_V ω_V` for a `(k, 0)` element: the global form of a
    /// `d″`-closed element.
    pub fn glue(&self, e: &BicomplexElement) -> Result<DiscreteForm> {
        if e.l != 0 {
            return Err(Error::input("only (k, 0) elements glue to global forms"));
        }
        let grid = self.grid();
        let mut out = DiscreteForm::zeros(grid, e.k);
        let c = out.ncomp();
        if c == 0 {
            return Ok(out);
        }
        for (v, (piece, form)) in self.pieces[0].iter().zip(&e.pieces).enumerate() {
            let eta = &self.partition[v];
            for i in 0..piece.grid.len() {
                let g = piece.global_index(i, grid);
                if eta[g] == 0.0 {
                    continue;
                }
                for (o, val) in out.data[g * c..(g + 1) * c].iter_mut().zip(form.at(i)) {
                    *o += eta[g] * val;
                }
            }
        }
        Ok(out)
    }
}
