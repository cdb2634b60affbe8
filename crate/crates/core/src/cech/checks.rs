use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::cover::CoverNerve;
use super::element::BicomplexElement;
use super::retract::BicomplexOptions;
use super::zigzag::{project_to_cocycles, ToForm, ToSimplicial};
use crate::forms::{binomial, AnalyticForm, DiscreteForm, Grid};
use crate::orlicz::YoungFunction;
use crate::simplicial::{euler_characteristic, harmonic_basis, reduced_representative, ReducedOptions};
use crate::{Error, Result};

/// Random trigonometric `k`-form of frequency one on the domain box.
pub fn random_trig_form(grid: &Grid, k: usize, rng: &mut impl Rng) -> AnalyticForm {
    let n = grid.dim();
    let len: Vec<f64> = (0..n).map(|a| grid.hi[a] - grid.lo[a]).collect();
    let comps = binomial(n, k);
    // per component: constant + (cos, sin) along each axis and each axis pair
    let modes = 1 + 2 * n + if n >= 2 { 4 } else { 0 };
    let scale = 1.0 / (modes as f64).sqrt();
    let coeffs: Vec<f64> = (0..comps * modes).map(|_| scale * (2.0 * rng.random::<f64>() - 1.0)).collect();
    AnalyticForm::new(n, k, move |x, out| {
        let t: Vec<f64> = (0..n).map(|a| TAU * x[a] / len[a]).collect();
        let mut basis = Vec::with_capacity(modes);
        basis.push(1.0);
        for ta in &t {
            basis.push(ta.cos());
            basis.push(ta.sin());
        }
        if n >= 2 {
            for s in [t[0] + t[1], t[0] - t[1]] {
                basis.push(s.cos());
                basis.push(s.sin());
            }
        }
        for (c, o) in out.iter_mut().enumerate() {
            *o = basis.iter().zip(&coeffs[c * modes..(c + 1) * modes]).map(|(b, w)| b * w).sum();
        }
    })
}

/// Residual of one identity at one bidegree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityResidual {
    pub k: usize,
    pub l: usize,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BicomplexReport {
    pub nerve_counts: Vec<usize>,
    pub euler_characteristic: i64,
    pub partition_defect: f64,
    pub max_multiplicity: usize,
    /// `d″d″` on integer-valued elements (exact arithmetic).
    pub d_double_prime_squared: f64,
    /// `d″d″` on smooth elements.
    pub d_double_prime_squared_smooth: f64,
    pub d_prime_squared: f64,
    /// `d′d″ + d″d′` on smooth elements, nominal samples.
    pub anticommutation: f64,
    pub h_identity: Vec<IdentityResidual>,
    /// `Hd′f − (f − piece means)` on degree-zero elements.
    pub h_degree_zero: f64,
    pub p_identity: Vec<IdentityResidual>,
    pub piece_norms_finite: bool,
}

impl BicomplexReport {
    pub fn passes(&self, tol_exact: f64, tol_grid: f64) -> bool {
        self.d_double_prime_squared == 0.0
            && self.anticommutation <= tol_exact
            && self.h_identity.iter().all(|r| r.residual <= tol_grid)
            && self.h_degree_zero <= tol_grid
            && self.p_identity.iter().all(|r| r.residual <= tol_grid)
            && self.piece_norms_finite
    }
}

fn integer_element(cover: &CoverNerve, k: usize, l: usize, rng: &mut impl Rng) -> Result<BicomplexElement> {
    let mut e = cover.zero_element(k, l)?;
    for p in e.pieces.iter_mut() {
        p.data.iter_mut().for_each(|v| *v = rng.random_range(-100i32..=100) as f64);
    }
    Ok(e)
}

/// Measures the bicomplex identities on random elements.
pub fn bicomplex_identity_report(
    cover: &CoverNerve,
    phi: &YoungFunction,
    opts: &BicomplexOptions,
    seed: u64,
) -> Result<BicomplexReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = cover.grid().clone();
    let n = grid.dim();
    let top = cover.top_degree();
    let mut finite = true;
    let mut norm_check = |e: &BicomplexElement| {
        finite &= cover.piece_norms(phi, e, 1e-10).iter().all(|v| v.is_finite());
    };

    let mut dd_exact: f64 = 0.0;
    let mut dd_smooth: f64 = 0.0;
    let mut dprime2: f64 = 0.0;
    let mut anti: f64 = 0.0;
    for l in 0..top.saturating_sub(1) {
        let e = integer_element(cover, 1.min(n), l, &mut rng)?;
        let dd = cover.d_double_prime(&cover.d_double_prime(&e)?)?;
        dd_exact = dd.pieces.iter().map(|p| p.sup_norm()).fold(dd_exact, f64::max);
        let s = cover.sample_element(&random_trig_form(&grid, 1.min(n), &mut rng), l)?;
        norm_check(&s);
        let dd = cover.d_double_prime(&cover.d_double_prime(&s)?)?;
        dd_smooth = dd.pieces.iter().map(|p| p.sup_norm()).fold(dd_smooth, f64::max);
    }
    for l in 0..top {
        for k in 0..n {
            let e = cover.sample_element(&random_trig_form(&grid, k, &mut rng), l)?;
            let a = cover.d_prime(&cover.d_double_prime(&e)?);
            let b = cover.d_double_prime(&cover.d_prime(&e))?;
            anti = anti.max(cover.sup_nominal(&a.add(&b)?));
            if k + 2 <= n {
                let d2 = cover.d_prime(&cover.d_prime(&e));
                dprime2 = dprime2.max(cover.sup_nominal(&d2));
            }
        }
    }

    let mut h_identity = Vec::new();
    for l in 0..=top.min(1) {
        for k in 1..=n {
            let e = cover.sample_element(&random_trig_form(&grid, k, &mut rng), l)?;
            norm_check(&e);
            let he = cover.retraction_h(&e, opts)?;
            let mut total = cover.d_prime(&he);
            if k < n {
                total = total.add(&cover.retraction_h(&cover.d_prime(&e), opts)?)?;
            }
            h_identity.push(IdentityResidual { k, l, residual: cover.sup_diff(&total, &e)? });
        }
    }
    let f = cover.sample_element(&random_trig_form(&grid, 0, &mut rng), 0)?;
    let hdf = cover.retraction_h(&cover.d_prime(&f), opts)?;
    // Hd′f = f − (mean of f over ½B in each chart)
    let diff = f.sub(&hdf)?;
    let (_, h_degree_zero) = cover.piece_means(&diff)?;

    let mut p_identity = Vec::new();
    for l in 1..=top.min(2) {
        for k in [0, 1] {
            let e = cover.sample_element(&random_trig_form(&grid, k, &mut rng), l)?;
            let mut total = cover.contraction_p(&cover.d_double_prime(&e)?)?;
            total = total.add(&cover.d_double_prime(&cover.contraction_p(&e)?)?)?;
            p_identity.push(IdentityResidual { k, l, residual: cover.sup_diff(&total, &e)? });
        }
    }

    Ok(BicomplexReport {
        nerve_counts: (0..=cover.nerve.dim()).map(|l| cover.nerve.count(l)).collect(),
        euler_characteristic: euler_characteristic(&cover.nerve),
        partition_defect: cover.partition_defect(),
        max_multiplicity: cover.max_multiplicity,
        d_double_prime_squared: dd_exact,
        d_double_prime_squared_smooth: dd_smooth,
        d_prime_squared: dprime2,
        anticommutation: anti,
        h_identity,
        h_degree_zero,
        p_identity,
        piece_norms_finite: finite,
    })
}

/// One cohomology class pushed around the zig-zag.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassRoundtrip {
    pub to_form: ToForm,
    pub periods: Vec<f64>,
    pub back: ToSimplicial,
    /// Reduced `ℓ²` residual of (cocycle part of) `back − θ`.
    pub reduced_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZigzagReport {
    pub h1_dim: usize,
    /// `Q[i][a]`: basis cocycle `i` on the nerve loop around axis `a`.
    pub pairing_matrix: Vec<Vec<f64>>,
    /// `P[i][a]`: period of the form of cocycle `i` around axis `a`.
    pub period_matrix: Vec<Vec<f64>>,
    /// `P Q⁻¹`, the identity when periods match pairings.
    pub normalized_period_matrix: Vec<Vec<f64>>,
    pub normalized_det: f64,
    /// Determinant of `P` with unit rows.
    pub row_normalized_det: f64,
    /// `M[a][b]`: cocycle of `dx_a` paired with the loop around axis `b`.
    pub coordinate_pairings: Vec<Vec<f64>>,
    pub classes: Vec<ClassRoundtrip>,
    pub max_form_closedness: f64,
    pub max_cochain_coboundary: f64,
    pub max_roundtrip_residual: f64,
}

impl ZigzagReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.h1_dim == self.period_matrix.len()
            && self.max_form_closedness <= tol
            && self.max_cochain_coboundary <= tol
            && self.max_roundtrip_residual <= tol
            && self.row_normalized_det.abs() > 0.5
            && self.normalized_det.abs() > 0.5
    }
}

fn det(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    nalgebra::DMatrix::from_fn(n, n, |i, j| m[i][j]).determinant()
}

/// Both zig-zag directions on a torus cover, in degree one.
pub fn zigzag_report(cover: &CoverNerve, phi: &YoungFunction, opts: &BicomplexOptions) -> Result<ZigzagReport> {
    let grid = cover.grid().clone();
    let n = grid.dim();
    let loops: Vec<_> = (0..n).map(|a| cover.axis_loop(a)).collect::<Result<_>>()?;
    let basis = harmonic_basis(&cover.nerve, 1)?;
    if basis.dim() != n {
        return Err(Error::Coverage(format!("nerve has H¹ of dimension {}, expected {n}", basis.dim())));
    }
    let p2 = YoungFunction::power(2.0)?;
    let mut classes = Vec::new();
    for theta in &basis.cocycles {
        let to_form = cover.zigzag_to_form(phi, theta)?;
        let periods = cover.periods(&to_form.form)?;
        let back = cover.zigzag_to_simplicial(phi, &to_form.form, opts)?;
        let diff = project_to_cocycles(&cover.nerve, &back.cochain.sub(theta))?;
        let reduced = reduced_representative(&p2, &cover.nerve, &diff, &ReducedOptions::default())?;
        classes.push(ClassRoundtrip { to_form, periods, back, reduced_residual: reduced.residual });
    }
    let pairing_matrix: Vec<Vec<f64>> =
        basis.cocycles.iter().map(|t| loops.iter().map(|c| c.evaluate(t)).collect()).collect();
    let period_matrix: Vec<Vec<f64>> = classes.iter().map(|c| c.periods.clone()).collect();
    let q = nalgebra::DMatrix::from_fn(n, n, |i, j| pairing_matrix[i][j]);
    let p = nalgebra::DMatrix::from_fn(n, n, |i, j| period_matrix[i][j]);
    let q_inv = q.try_inverse().ok_or_else(|| Error::Resolution("nerve pairing matrix is singular".into()))?;
    let norm = p * q_inv;
    let normalized_period_matrix: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| norm[(i, j)]).collect()).collect();
    let row_normalized: Vec<Vec<f64>> = period_matrix
        .iter()
        .map(|r| {
            let s = r.iter().map(|v| v * v).sum::<f64>().sqrt();
            r.iter().map(|v| v / s).collect()
        })
        .collect();

    let mut coordinate_pairings = Vec::new();
    for a in 0..n {
        let dx = DiscreteForm::sample(
            &grid,
            &AnalyticForm::new(n, 1, move |_, o| {
                o.fill(0.0);
                o[a] = 1.0;
            }),
        )?;
        let c = cover.zigzag_to_simplicial(phi, &dx, opts)?;
        coordinate_pairings.push(loops.iter().map(|l| l.evaluate(&c.cochain)).collect());
    }

    Ok(ZigzagReport {
        h1_dim: basis.dim(),
        normalized_det: det(&normalized_period_matrix),
        row_normalized_det: det(&row_normalized),
        pairing_matrix,
        period_matrix,
        normalized_period_matrix,
        coordinate_pairings,
        max_form_closedness: classes.iter().map(|c| c.to_form.closedness).fold(0.0, f64::max),
        max_cochain_coboundary: classes.iter().map(|c| c.back.coboundary_residual).fold(0.0, f64::max),
        max_roundtrip_residual: classes.iter().map(|c| c.reduced_residual).fold(0.0, f64::max),
        classes,
    })
}
