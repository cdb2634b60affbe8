use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{
    build_chain_map, prism_homotopy, pullback, pullback_bound_report, ChainConstants, ChainMap, FillOptions,
    FillOrder, PullbackBoundReport, QuasiIsometry,
};
use crate::orlicz::YoungFunction;
use crate::simplicial::{harmonic_basis, Cochain, SimplicialComplex};
use crate::Result;

/// Matrix of `F#: H^k(Y) → H^k(X)` in harmonic bases; entry `[i][j]` is
/// the `i`-th coordinate of `F*z_j`.
pub fn induced_cohomology_map(
    c_f: &ChainMap,
    x: &SimplicialComplex,
    y: &SimplicialComplex,
    k: usize,
) -> Result<Vec<Vec<f64>>> {
    let bx = harmonic_basis(x, k)?;
    let by = harmonic_basis(y, k)?;
    let mut m = vec![vec![0.0; by.dim()]; bx.dim()];
    for (j, z) in by.cocycles.iter().enumerate() {
        let (coords, _) = bx.coordinates(x, &pullback(z, c_f)?)?;
        for (i, c) in coords.into_iter().enumerate() {
            m[i][j] = c;
        }
    }
    Ok(m)
}

fn matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter().map(|row| (0..cols).map(|j| (0..inner).map(|l| row[l] * b[l][j]).sum()).collect()).collect()
}

fn identity_error(m: &[Vec<f64>]) -> f64 {
    m.iter()
        .enumerate()
        .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, v)| (v - if i == j { 1.0 } else { 0.0 }).abs()))
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsoReport {
    pub lambda: f64,
    pub epsilon: f64,
    pub forward_constants: Vec<ChainConstants>,
    pub backward_constants: Vec<ChainConstants>,
    /// Commutation failures of `c_F` and `c_F̄` (must be 0).
    pub commutation_defects: usize,
    /// Prism identity failures for `c_F̄∘c_F ≃ Id_X` and `c_F∘c_F̄ ≃ Id_Y`.
    pub prism_defects: usize,
    /// Per degree: `F#`, `F̄#`, `F#·F̄#`, `F̄#·F#` and the largest deviation
    /// of the two products from the identity.
    pub forward: Vec<Vec<Vec<f64>>>,
    pub backward: Vec<Vec<Vec<f64>>>,
    pub composite_x: Vec<Vec<Vec<f64>>>,
    pub composite_y: Vec<Vec<Vec<f64>>>,
    pub identity_error: f64,
    /// `(F̄F)*θ − θ = δ(h*θ)` held exactly for integer cocycles.
    pub homotopy_formula_exact: bool,
    /// Two chain maps for `F` built with opposite filling orders induce
    /// cochain maps differing by an exact coboundary.
    pub choice_independent: bool,
    pub pullback_bounds: Vec<PullbackBoundReport>,
}

impl IsoReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.commutation_defects == 0
            && self.prism_defects == 0
            && self.identity_error <= tol
            && self.homotopy_formula_exact
            && self.choice_independent
            && self.pullback_bounds.iter().all(|r| r.violations == 0 && r.commutes_with_delta)
    }
}

/// Builds `c_F`, `c_F̄`, both prism homotopies to the identities, the
/// induced maps on cohomology and the pullback bounds.
#[allow(clippy::too_many_arguments)]
pub fn verify_quasi_isometry(
    f: &QuasiIsometry,
    x: &SimplicialComplex,
    y: &SimplicialComplex,
    phi: &YoungFunction,
    options: &FillOptions,
    trials: usize,
    rng: &mut impl Rng,
    tol: f64,
) -> Result<IsoReport> {
    let k_max = x.dim().min(y.dim());
    let inv = QuasiIsometry::measure(y, x, f.inverse_map(x, y), None)?;
    let c_f = build_chain_map(f, x, y, k_max, options)?;
    let c_g = build_chain_map(&inv, y, x, k_max, options)?;
    let commutation_defects = c_f.commutation_defects(x, y) + c_g.commutation_defects(y, x);

    let gf = c_f.compose(&c_g);
    let fg = c_g.compose(&c_f);
    let id_x = ChainMap::identity(x, k_max);
    let id_y = ChainMap::identity(y, k_max);
    let h_x = prism_homotopy(&gf, &id_x, x, x, options)?;
    let h_y = prism_homotopy(&fg, &id_y, y, y, options)?;
    let prism_defects = h_x.identity_defects(&gf, &id_x, x, x) + h_y.identity_defects(&fg, &id_y, y, y);

    let mut report = IsoReport {
        lambda: f.lambda,
        epsilon: f.epsilon,
        forward_constants: c_f.constants(x, y),
        backward_constants: c_g.constants(y, x),
        commutation_defects,
        prism_defects,
        forward: vec![],
        backward: vec![],
        composite_x: vec![],
        composite_y: vec![],
        identity_error: 0.0,
        homotopy_formula_exact: true,
        choice_independent: true,
        pullback_bounds: vec![],
    };
    let other = FillOptions {
        order: match options.order {
            FillOrder::Lexicographic => FillOrder::Reverse,
            FillOrder::Reverse => FillOrder::Lexicographic,
        },
        ..*options
    };
    let c_f2 = build_chain_map(f, x, y, k_max, &other)?;
    let h_choice = prism_homotopy(&c_f, &c_f2, x, y, options)?;
    report.choice_independent &= h_choice.identity_defects(&c_f, &c_f2, x, y) == 0;

    for k in 0..=k_max {
        let m_f = induced_cohomology_map(&c_f, x, y, k)?;
        let m_g = induced_cohomology_map(&c_g, y, x, k)?;
        let px = matmul(&m_f, &m_g);
        let py = matmul(&m_g, &m_f);
        report.identity_error = report.identity_error.max(identity_error(&px)).max(identity_error(&py));
        report.forward.push(m_f);
        report.backward.push(m_g);
        report.composite_x.push(px);
        report.composite_y.push(py);

        // exact homotopy formula on integer cocycles: (F̄F)*θ − θ = δ(h*θ)
        for _ in 0..trials.min(20) {
            let theta = integer_cocycle(x, k, rng)?;
            let lhs = pullback(&theta, &gf)?.sub(&theta);
            let rhs = if k == 0 { Cochain::zeros(x, 0) } else { x.coboundary(&h_x.pullback(&theta)?)? };
            report.homotopy_formula_exact &= lhs == rhs;
            // independence of the filling choice
            let t_y = integer_cocycle(y, k, rng)?;
            let diff = pullback(&t_y, &c_f)?.sub(&pullback(&t_y, &c_f2)?);
            let exact = if k == 0 { Cochain::zeros(x, 0) } else { x.coboundary(&h_choice.pullback(&t_y)?)? };
            report.choice_independent &= diff == exact;
        }
        report.pullback_bounds.push(pullback_bound_report(phi, &c_f, x, y, k, trials, rng, tol)?);
    }
    Ok(report)
}

/// A random integer cocycle: an integer coboundary plus, when available, a
/// closed integer cochain with a nonzero class.
fn integer_cocycle(x: &SimplicialComplex, k: usize, rng: &mut impl Rng) -> Result<Cochain> {
    let mut theta = if k == 0 {
        Cochain::zeros(x, 0)
    } else {
        let eta = Cochain { degree: k - 1, values: (0..x.count(k - 1)).map(|_| rng.random_range(-9i32..=9) as f64).collect() };
        x.coboundary(&eta)?
    };
    // add a closed integer cochain that is typically not exact
    if let Some(z) = closed_integer_cochain(x, k, rng)? {
        theta = theta.add(&z);
    }
    Ok(theta)
}

/// Rounds a scaled harmonic cocycle to integers and keeps it when the
/// rounding stays closed (always true in top degree).
fn closed_integer_cochain(x: &SimplicialComplex, k: usize, rng: &mut impl Rng) -> Result<Option<Cochain>> {
    let basis = harmonic_basis(x, k)?;
    if basis.dim() == 0 {
        return Ok(None);
    }
    let mut combo = Cochain::zeros(x, k);
    for z in &basis.cocycles {
        combo = combo.add(&z.scale(rng.random_range(-3.0..3.0)));
    }
    let scale = 1.0 / combo.values.iter().map(|v| v.abs()).filter(|v| *v > 1e-9).fold(f64::INFINITY, f64::min);
    let rounded = Cochain { degree: k, values: combo.values.iter().map(|v| (v * scale).round()).collect() };
    if k < x.dim() && x.coboundary(&rounded)?.sup_norm() != 0.0 {
        return Ok(None);
    }
    Ok(Some(rounded))
}
