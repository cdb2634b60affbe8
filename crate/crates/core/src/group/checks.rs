use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::conv::{convolve, flow_homotopy, shrink_mask, Sampled};
use super::kernel::Kernel;
use super::model::GroupModel;
use crate::cech::random_trig_form;
use crate::forms::{form_norm, pointwise_norm, DiscreteForm, FormField, Grid};
use crate::orlicz::{luxemburg_weighted, YoungFunction};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointwiseBoundReport {
    /// `M = max_z ‖dR_z‖`.
    pub translation_bound: f64,
    /// `C = M^k`.
    pub constant: f64,
    /// `max_x |ω∗κ|_x / (C·(|ω|∗κ)(x))`; at most one when the bound holds.
    pub max_ratio: f64,
    pub samples: usize,
    pub violations: usize,
}

/// Checks `|ω∗κ|_x ≤ C (|ω|∗κ)(x)` at every valid sample.
pub fn pointwise_bound_check(kernel: &Kernel, omega: &dyn FormField, grid: &Grid) -> Result<PointwiseBoundReport> {
    let model = kernel.model;
    let domain = model.domain(grid)?;
    let conv = convolve(kernel, omega, grid)?;
    let n = model.dim();
    let k = omega.degree();
    let m = kernel.translation_bound();
    let constant = m.powi(k as i32);
    let rows: Vec<(f64, f64)> = (0..grid.len())
        .into_par_iter()
        .filter(|&i| conv.valid[i])
        .map(|i| {
            let x = grid.point(i);
            let mut y = vec![0.0; n];
            let mut avg = 0.0;
            for (z, w) in kernel.points.iter().zip(&kernel.weights) {
                model.product(&x, z, &mut y);
                avg += w * pointwise_norm(&domain, &y, k, &omega.eval(&y));
            }
            (pointwise_norm(&domain, &x, k, conv.form.at(i)), constant * avg)
        })
        .collect();
    let violations = rows.iter().filter(|(l, r)| *l > r * (1.0 + 1e-12) + 1e-300).count();
    let max_ratio = rows.iter().filter(|(_, r)| *r > 0.0).map(|(l, r)| l / r).fold(0.0, f64::max);
    Ok(PointwiseBoundReport { translation_bound: m, constant, max_ratio, samples: rows.len(), violations })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommutationReport {
    pub residual: f64,
    pub samples: usize,
}

fn derivative_of(omega: &dyn FormField, grid: &Grid) -> Result<DiscreteForm> {
    Ok(DiscreteForm::sample(grid, omega)?.exterior_derivative())
}

/// `sup |d(ω∗κ) − (dω)∗κ|` over samples where both sides are valid. The
/// derivative of `ω` is `d_omega` when given and a sampled difference
/// otherwise.
pub fn derivative_commutation_check(
    kernel: &Kernel,
    omega: &dyn FormField,
    d_omega: Option<&dyn FormField>,
    grid: &Grid,
) -> Result<CommutationReport> {
    let conv = convolve(kernel, omega, grid)?;
    let lhs = conv.form.exterior_derivative();
    let fd;
    let d: &dyn FormField = match d_omega {
        Some(d) => d,
        None => {
            fd = derivative_of(omega, grid)?;
            &fd
        }
    };
    if d.components() == 0 {
        return Ok(CommutationReport { residual: 0.0, samples: conv.valid_count() });
    }
    let rhs = convolve(kernel, d, grid)?;
    let mask: Vec<bool> = shrink_mask(grid, &conv.valid).iter().zip(&rhs.valid).map(|(a, b)| *a && *b).collect();
    let diff = lhs.sub(&rhs.form)?;
    Ok(CommutationReport { residual: diff.sup_norm_where(|i| mask[i]), samples: mask.iter().filter(|m| **m).count() })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CartanReport {
    /// `sup |h(dω) + dh(ω) − ω + ω∗κ|`.
    pub residual: f64,
    pub samples: usize,
    pub norm_omega: f64,
    pub norm_convolution: f64,
    pub norm_homotopy: f64,
    pub convolution_ratio: f64,
    pub homotopy_ratio: f64,
}

/// The Cartan identity `h(dω) + dh(ω) = ω − ω∗κ` on the valid samples.
pub fn cartan_identity_check(
    phi: &YoungFunction,
    kernel: &Kernel,
    omega: &dyn FormField,
    d_omega: Option<&dyn FormField>,
    grid: &Grid,
    t_nodes: usize,
) -> Result<CartanReport> {
    let model = kernel.model;
    let n = model.dim();
    let k = omega.degree();
    if k == 0 {
        return Err(Error::Degree { degree: 0, dim: n });
    }
    let sampled = DiscreteForm::sample(grid, omega)?;
    let conv = convolve(kernel, omega, grid)?;
    let h = flow_homotopy(kernel, omega, grid, t_nodes)?;
    let mut total = h.form.exterior_derivative();
    let mut mask = shrink_mask(grid, &h.valid);
    mask.iter_mut().zip(&conv.valid).for_each(|(m, v)| *m &= *v);
    if k < n {
        let fd;
        let d: &dyn FormField = match d_omega {
            Some(d) => d,
            None => {
                fd = derivative_of(omega, grid)?;
                &fd
            }
        };
        let hd = flow_homotopy(kernel, d, grid, t_nodes)?;
        mask.iter_mut().zip(&hd.valid).for_each(|(m, v)| *m &= *v);
        total = total.add(&hd.form)?;
    }
    let diff = total.sub(&sampled)?.add(&conv.form)?;
    let residual = diff.sup_norm_where(|i| mask[i]);
    let domain = model.domain(grid)?;
    let norm_omega = form_norm(phi, &domain, &sampled, None, 1e-10)?.value();
    let norm_convolution = masked_norm(phi, &domain, &conv)?;
    let norm_homotopy = masked_norm(phi, &domain, &h)?;
    let ratio = |v: f64| if norm_omega > 0.0 { v / norm_omega } else { 0.0 };
    Ok(CartanReport {
        residual,
        samples: mask.iter().filter(|m| **m).count(),
        norm_omega,
        norm_convolution,
        norm_homotopy,
        convolution_ratio: ratio(norm_convolution),
        homotopy_ratio: ratio(norm_homotopy),
    })
}

fn masked_norm(phi: &YoungFunction, domain: &crate::forms::ChartedDomain, s: &Sampled) -> Result<f64> {
    let valid = &s.valid;
    Ok(form_norm(phi, domain, &s.form, Some(&|i| valid[i]), 1e-10)?.value())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub forms: usize,
    pub convolution_ratios: Vec<f64>,
    pub homotopy_ratios: Vec<f64>,
    /// `ℓ^φ` norm of the block norms of `ω∗κ` over that of `ω`.
    pub piecewise_ratios: Vec<f64>,
    pub max_convolution_ratio: f64,
    pub max_homotopy_ratio: f64,
    pub max_piecewise_ratio: f64,
}

/// Measured operator-norm ratios of `∗κ` and `h` on random smooth
/// `degree`-forms, plus the piecewise transfer over a `blocks^n` cover of
/// the grid.
#[allow(clippy::too_many_arguments)]
pub fn operator_ratios(
    phi: &YoungFunction,
    kernel: &Kernel,
    grid: &Grid,
    degree: usize,
    count: usize,
    blocks: usize,
    t_nodes: usize,
    seed: u64,
) -> Result<RatioReport> {
    let model = kernel.model;
    let domain = model.domain(grid)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let block_of = |i: usize| -> usize {
        let m = grid.multi_index(i);
        m.iter().zip(&grid.counts).fold(0, |acc, (&j, &c)| acc * blocks + j * blocks / c)
    };
    let n_blocks = blocks.pow(grid.dim() as u32);
    let mut convolution_ratios = Vec::with_capacity(count);
    let mut homotopy_ratios = Vec::with_capacity(count);
    let mut piecewise_ratios = Vec::with_capacity(count);
    for _ in 0..count {
        let omega = random_trig_form(grid, degree, &mut rng);
        let sampled = DiscreteForm::sample(grid, &omega)?;
        let base = form_norm(phi, &domain, &sampled, None, 1e-10)?.value();
        let conv = convolve(kernel, &omega, grid)?;
        convolution_ratios.push(masked_norm(phi, &domain, &conv)? / base);
        if degree >= 1 {
            let h = flow_homotopy(kernel, &omega, grid, t_nodes)?;
            homotopy_ratios.push(masked_norm(phi, &domain, &h)? / base);
        }
        let blocks_norm = |form: &DiscreteForm, mask: Option<&[bool]>| -> Result<f64> {
            let norms: Vec<f64> = (0..n_blocks)
                .map(|b| {
                    let sel = |i: usize| block_of(i) == b && mask.is_none_or(|m| m[i]);
                    form_norm(phi, &domain, form, Some(&sel), 1e-10).map(|r| r.value())
                })
                .collect::<Result<_>>()?;
            Ok(luxemburg_weighted(phi, &norms, None, 1e-10).value())
        };
        let before = blocks_norm(&sampled, None)?;
        let after = blocks_norm(&conv.form, Some(&conv.valid))?;
        piecewise_ratios.push(after / before);
    }
    let max = |v: &[f64]| v.iter().cloned().fold(0.0, f64::max);
    Ok(RatioReport {
        forms: count,
        max_convolution_ratio: max(&convolution_ratios),
        max_homotopy_ratio: max(&homotopy_ratios),
        max_piecewise_ratio: max(&piecewise_ratios),
        convolution_ratios,
        homotopy_ratios,
        piecewise_ratios,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelativeConvolutionReport {
    /// `ω` vanishes on the samples with last coordinate above this.
    pub threshold_in: f64,
    /// Predicted vanishing threshold for `ω∗κ` and `h(ω)`.
    pub threshold_out: f64,
    pub samples_above: usize,
    pub max_convolution_above: f64,
    pub max_homotopy_above: f64,
    pub preserved: bool,
}

/// For a sampled form vanishing above `threshold` in the last coordinate
/// (a horoball neighbourhood of the boundary point at infinity), checks
/// that `ω∗κ` and `h(ω)` vanish exactly above the shifted threshold.
pub fn relative_preservation(
    kernel: &Kernel,
    omega: &DiscreteForm,
    threshold: f64,
    t_nodes: usize,
) -> Result<RelativeConvolutionReport> {
    let grid = &omega.grid;
    let n = grid.dim();
    let last = n - 1;
    let c = omega.ncomp();
    for i in 0..grid.len() {
        if grid.point(i)[last] > threshold && omega.at(i).iter().any(|v| *v != 0.0) {
            return Err(Error::Precondition("form does not vanish above the threshold".into()));
        }
    }
    // interpolation stencils reach two cells below the evaluation point
    let reach = threshold + 2.0 * grid.spacing(last);
    let threshold_out = match kernel.model {
        GroupModel::Abelian { .. } => reach + kernel.radius,
        GroupModel::AffineHalfPlane => reach * kernel.radius.exp(),
    };
    if threshold_out + 4.0 * grid.spacing(last) > grid.hi[last] {
        return Err(Error::Region("no room above the shifted threshold".into()));
    }
    let conv = convolve(kernel, omega, grid)?;
    let h = if omega.degree >= 1 { Some(flow_homotopy(kernel, omega, grid, t_nodes)?) } else { None };
    let mut samples_above = 0;
    let mut max_conv: f64 = 0.0;
    let mut max_h: f64 = 0.0;
    for i in 0..grid.len() {
        if grid.point(i)[last] <= threshold_out || !conv.valid[i] {
            continue;
        }
        samples_above += 1;
        if c > 0 {
            max_conv = conv.form.at(i).iter().fold(max_conv, |m, v| m.max(v.abs()));
        }
        if let Some(h) = &h {
            max_h = h.form.at(i).iter().fold(max_h, |m, v| m.max(v.abs()));
        }
    }
    Ok(RelativeConvolutionReport {
        threshold_in: threshold,
        threshold_out,
        samples_above,
        max_convolution_above: max_conv,
        max_homotopy_above: max_h,
        preserved: samples_above > 0 && max_conv == 0.0 && max_h == 0.0,
    })
}
