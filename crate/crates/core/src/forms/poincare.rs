use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::algebra::Contraction;
use super::domain::{ChartedDomain, Model};
use super::form::{DiscreteForm, FormField};
use super::norm::form_norm;
use crate::orlicz::YoungFunction;
use crate::quadrature::{ball_average_rule, gauss_legendre_on};
use crate::{Error, Result};

/// Quadrature sizes for the cone and averaged homotopies.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PoincareOptions {
    /// Gauss–Legendre nodes along each segment.
    pub t_nodes: usize,
    /// Radial nodes of the `½B` averaging rule.
    pub radial: usize,
    /// Angular nodes of the `½B` averaging rule (planar case).
    pub angular: usize,
}

impl Default for PoincareOptions {
    fn default() -> Self {
        PoincareOptions { t_nodes: 32, radial: 4, angular: 16 }
    }
}

/// Averaged homotopy output: degree-0 input averages to a number.
#[derive(Clone, Debug, PartialEq)]
pub enum HomotopyValue {
    Scalar(f64),
    Form(DiscreteForm),
}

impl HomotopyValue {
    pub fn into_form(self) -> Option<DiscreteForm> {
        match self {
            HomotopyValue::Form(f) => Some(f),
            HomotopyValue::Scalar(_) => None,
        }
    }
}

/// Segment quadrature shared by all cone evaluations.
pub(crate) struct ConeRule {
    k: usize,
    n: usize,
    t: Vec<f64>,
    w: Vec<f64>,
    contraction: Contraction,
}

impl ConeRule {
    pub(crate) fn new(n: usize, k: usize, t_nodes: usize) -> Self {
        let (t, w) = gauss_legendre_on(t_nodes, 0.0, 1.0);
        let w = t.iter().zip(&w).map(|(t, w)| w * t.powi(k as i32 - 1)).collect();
        ConeRule { k, n, t, w, contraction: Contraction::new(n, k) }
    }

    /// Adds `scale · χ_x(ω)(y)` to `out`.
    pub(crate) fn accumulate(&self, omega: &dyn FormField, x: &[f64], y: &[f64], scale: f64, out: &mut [f64]) {
        let n = self.n;
        let mut v = [0.0; 8];
        let mut p = [0.0; 8];
        let mut coeffs = vec![0.0; omega.components()];
        let mut contracted = vec![0.0; out.len()];
        for a in 0..n {
            v[a] = y[a] - x[a];
        }
        for (t, w) in self.t.iter().zip(&self.w) {
            for a in 0..n {
                p[a] = x[a] + t * v[a];
            }
            omega.eval_into(&p[..n], &mut coeffs);
            self.contraction.apply(&v[..n], &coeffs, &mut contracted);
            for (o, c) in out.iter_mut().zip(&contracted) {
                *o += scale * w * c;
            }
        }
        debug_assert!(self.k >= 1);
    }
}

fn check_ball(domain: &ChartedDomain, omega: &dyn FormField) -> Result<()> {
    if domain.model != Model::UnitBall {
        return Err(Error::Model("the homotopy operators live on the unit-ball model".into()));
    }
    if omega.dim() != domain.dim() {
        return Err(Error::input("form and domain dimensions differ"));
    }
    Ok(())
}

/// `χ_x(ω)(y) = ∫₀¹ t^{k−1} ι_{y−x} ω(x + t(y−x)) dt`, sampled on the domain grid.
pub fn cone_homotopy(omega: &dyn FormField, x: &[f64], domain: &ChartedDomain, t_nodes: usize) -> Result<DiscreteForm> {
    check_ball(domain, omega)?;
    let k = omega.degree();
    if k == 0 {
        return Err(Error::Degree { degree: 0, dim: domain.dim() });
    }
    if x.len() != domain.dim() || x.iter().map(|v| v * v).sum::<f64>() >= 1.0 {
        return Err(Error::input("cone centre must lie in the open unit ball"));
    }
    let rule = ConeRule::new(domain.dim(), k, t_nodes);
    let mut out = DiscreteForm::zeros(&domain.grid, k - 1);
    let c = out.ncomp();
    let grid = &domain.grid;
    out.data.par_chunks_mut(c).enumerate().for_each(|(i, o)| rule.accumulate(omega, x, &grid.point(i), 1.0, o));
    Ok(out)
}

/// `h(ω) = ⨍_{½B} χ_x(ω) dx`; for functions the mean over `½B`.
pub fn poincare_homotopy(omega: &dyn FormField, domain: &ChartedDomain, opts: &PoincareOptions) -> Result<HomotopyValue> {
    check_ball(domain, omega)?;
    let n = domain.dim();
    let (centers, weights) = ball_average_rule(&vec![0.0; n], 0.5, opts.radial, opts.angular);
    let k = omega.degree();
    if k == 0 {
        let mean = centers.iter().zip(&weights).map(|(x, w)| w * omega.eval(x)[0]).sum();
        return Ok(HomotopyValue::Scalar(mean));
    }
    let rule = ConeRule::new(n, k, opts.t_nodes);
    let mut out = DiscreteForm::zeros(&domain.grid, k - 1);
    let c = out.ncomp();
    let grid = &domain.grid;
    out.data.par_chunks_mut(c).enumerate().for_each(|(i, o)| {
        let y = grid.point(i);
        for (x, w) in centers.iter().zip(&weights) {
            rule.accumulate(omega, x, &y, *w, o);
        }
    });
    Ok(HomotopyValue::Form(out))
}

/// Residuals of the homotopy formulas on the ball samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomotopyReport {
    pub degree: usize,
    /// `sup |d h(ω) + h(dω) − ω|` (for functions `sup |h(df) − f + mean f|`).
    pub residual: f64,
    pub norm_in: f64,
    pub norm_out: f64,
    /// `‖h(ω)‖ / ‖ω‖`, the measured operator bound.
    pub ratio: f64,
}

/// Checks `dh + hd = Id` for the sampled `omega` on the ball.
pub fn verify_poincare(
    phi: &YoungFunction,
    omega: &dyn FormField,
    domain: &ChartedDomain,
    opts: &PoincareOptions,
    tol: f64,
) -> Result<HomotopyReport> {
    check_ball(domain, omega)?;
    let k = omega.degree();
    let sampled = DiscreteForm::sample(&domain.grid, omega)?;
    let region = domain.region_indices();
    let norm_in = form_norm(phi, domain, &sampled, None, tol)?.value();
    let (residual, norm_out) = if k == 0 {
        let mean = match poincare_homotopy(omega, domain, opts)? {
            HomotopyValue::Scalar(m) => m,
            HomotopyValue::Form(_) => unreachable!(),
        };
        let df = sampled.exterior_derivative();
        let h_df = poincare_homotopy(&df, domain, opts)?.into_form().expect("degree one");
        let res = region.iter().map(|&i| (h_df.at(i)[0] - sampled.at(i)[0] + mean).abs()).fold(0.0, f64::max);
        let constant = DiscreteForm::from_data(&domain.grid, 0, vec![mean; domain.grid.len()])?;
        (res, form_norm(phi, domain, &constant, None, tol)?.value())
    } else {
        let h = poincare_homotopy(omega, domain, opts)?.into_form().expect("positive degree");
        let dh = h.exterior_derivative();
        let d_omega = sampled.exterior_derivative();
        let mut total = dh;
        if d_omega.ncomp() > 0 {
            let hd = poincare_homotopy(&d_omega, domain, opts)?.into_form().expect("positive degree");
            total = total.add(&hd)?;
        }
        let diff = total.sub(&sampled)?;
        let res = diff.sup_norm_where(|i| domain.in_region(&domain.grid.point(i)));
        (res, form_norm(phi, domain, &h, None, tol)?.value())
    };
    Ok(HomotopyReport {
        degree: k,
        residual,
        norm_in,
        norm_out,
        ratio: if norm_in > 0.0 { norm_out / norm_in } else { 0.0 },
    })
}
