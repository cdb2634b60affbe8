use serde::{Deserialize, Serialize};

use super::cover::CoverNerve;
use super::element::BicomplexElement;
use super::retract::BicomplexOptions;
use crate::forms::DiscreteForm;
use crate::orlicz::YoungFunction;
use crate::simplicial::Cochain;
use crate::{Error, Result};

/// Norms of the intermediate elements of a zig-zag.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageNorm {
    pub k: usize,
    pub l: usize,
    /// `ℓ^φ` norm of the piece norms.
    pub piecewise: f64,
    pub sup: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToSimplicial {
    pub cochain: Cochain,
    /// `‖δθ‖_∞` of the resulting nerve cochain.
    pub coboundary_residual: f64,
    /// Largest deviation of the final pieces from their constants.
    pub constancy: f64,
    pub stages: Vec<StageNorm>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToForm {
    pub form: DiscreteForm,
    /// `‖dω‖_∞` of the glued form.
    pub closedness: f64,
    pub stages: Vec<StageNorm>,
}

impl CoverNerve {
    fn stage(&self, phi: &YoungFunction, e: &BicomplexElement) -> StageNorm {
        StageNorm { k: e.k, l: e.l, piecewise: self.element_norm(phi, e, 1e-10), sup: self.sup_nominal(e) }
    }

    /// Descends from a closed global `k`-form to a nerve `k`-cocycle:
    /// `b₀ = ω|`, `b_{j+1} = −d″H b_j`, then the piece constants of `b_k`.
    pub fn zigzag_to_simplicial(
        &self,
        phi: &YoungFunction,
        omega: &DiscreteForm,
        opts: &BicomplexOptions,
    ) -> Result<ToSimplicial> {
        let k = omega.degree;
        if k > self.top_degree() {
            return Err(Error::Degree { degree: k, dim: self.top_degree() });
        }
        let d = omega.exterior_derivative().sup_norm();
        if d > opts.closed_tol * omega.sup_norm().max(1.0) {
            return Err(Error::Precondition(format!("form is not closed: ‖dω‖_∞ = {d:.3e}")));
        }
        let mut b = self.restrict_global(omega, 0)?;
        let mut stages = vec![self.stage(phi, &b)];
        for _ in 0..k {
            let h = self.retraction_h(&b, opts)?;
            b = self.d_double_prime(&h)?.scale(-1.0);
            stages.push(self.stage(phi, &b));
        }
        let (cochain, constancy) = self.piece_means(&b)?;
        let coboundary_residual =
            if k < self.nerve.dim() { self.nerve.coboundary(&cochain)?.sup_norm() } else { 0.0 };
        Ok(ToSimplicial { cochain, coboundary_residual, constancy, stages })
    }

    /// Ascends from a nerve `k`-cocycle to a closed global form:
    /// `a₀ = θ` as piece constants, `a_{j+1} = −d′P a_j`, glued by the partition.
    pub fn zigzag_to_form(&self, phi: &YoungFunction, theta: &Cochain) -> Result<ToForm> {
        let k = theta.degree;
        if k < self.nerve.dim() {
            let r = self.nerve.coboundary(theta)?.sup_norm();
            if r > 1e-9 * theta.sup_norm().max(1.0) {
                return Err(Error::Precondition(format!("cochain is not a cocycle: ‖δθ‖_∞ = {r:.3e}")));
            }
        }
        let mut a = self.embed_cochain(theta)?;
        let mut stages = vec![self.stage(phi, &a)];
        for _ in 0..k {
            let p = self.contraction_p(&a)?;
            a = self.d_prime(&p).scale(-1.0);
            stages.push(self.stage(phi, &a));
        }
        let form = self.glue(&a)?;
        let closedness = form.exterior_derivative().sup_norm();
        Ok(ToForm { form, closedness, stages })
    }

    /// Line integrals of a global 1-form along the coordinate loops of a
    /// torus, averaged over the parallel loops.
    pub fn periods(&self, omega: &DiscreteForm) -> Result<Vec<f64>> {
        let grid = self.grid();
        if omega.degree != 1 || omega.grid != *grid || grid.periodic.iter().any(|p| !p) {
            return Err(Error::input("periods need a 1-form on the torus grid"));
        }
        let n = grid.dim();
        Ok((0..n)
            .map(|a| {
                let mean = (0..grid.len()).map(|i| omega.at(i)[a]).sum::<f64>() / grid.len() as f64;
                mean * (grid.hi[a] - grid.lo[a])
            })
            .collect())
    }
}

/// Orthogonal projection onto the cocycles of the nerve.
pub fn project_to_cocycles(nerve: &crate::simplicial::SimplicialComplex, theta: &Cochain) -> Result<Cochain> {
    if theta.degree >= nerve.dim() {
        return Ok(theta.clone());
    }
    let a = nerve.coboundary_matrix(theta.degree);
    let x = nalgebra::DVector::from_vec(theta.values.clone());
    let ax = &a * &x;
    let row_part = a.svd(true, true).solve(&ax, 1e-12).map_err(|e| Error::Resolution(e.into()))?;
    Ok(Cochain { degree: theta.degree, values: (x - row_part).iter().copied().collect() })
}
