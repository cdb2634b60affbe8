use serde::{Deserialize, Serialize};

use super::norm::check_tol;
use super::{conjugate_eval, luxemburg_by, luxemburg_norm, ConjugateGrid, MeasureSpace, YoungFunction};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub factor: f64,
    pub norm: f64,
    pub scaled_norm: f64,
    /// `scaled_norm / norm`, or 1 for the zero function.
    pub ratio: f64,
    pub holds: bool,
}

/// Compares `‖f‖_φ` with `‖f‖_{Kφ}`; the sandwich `‖f‖_φ ≤ ‖f‖_{Kφ} ≤ K‖f‖_φ`
/// holds for `K ≥ 1`.
pub fn check_norm_equivalence(
    phi: &YoungFunction,
    factor: f64,
    f: &[f64],
    space: &MeasureSpace,
    tol: f64,
) -> Result<EquivalenceReport> {
    if !(factor >= 1.0) || !factor.is_finite() {
        return Err(Error::input(format!("equivalence factor must be ≥ 1, got {factor}")));
    }
    let norm = luxemburg_norm(phi, f, space, tol)?.value();
    let scaled_norm = luxemburg_norm(&phi.times(factor)?, f, space, tol)?.value();
    let ratio = if norm == 0.0 { 1.0 } else { scaled_norm / norm };
    let slack = 4.0 * tol;
    let holds = ratio >= 1.0 - slack && ratio <= factor * (1.0 + slack);
    Ok(EquivalenceReport { factor, norm, scaled_norm, ratio, holds })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolderReport {
    pub lhs: f64,
    pub rhs: f64,
    pub norm_f: f64,
    pub conjugate_norm_g: f64,
    pub holds: bool,
}

/// `‖fg‖_{L¹} ≤ 2‖f‖_φ‖g‖_{φ*}` with the conjugate evaluated numerically.
pub fn holder_check(
    phi: &YoungFunction,
    f: &[f64],
    g: &[f64],
    space: &MeasureSpace,
    grid: &ConjugateGrid,
    tol: f64,
) -> Result<HolderReport> {
    space.check_function(f)?;
    space.check_function(g)?;
    check_tol(tol)?;
    let w = space.weights();
    let lhs: f64 = f.iter().zip(g).zip(&w).map(|((a, b), w)| w * (a * b).abs()).sum();
    let norm_f = luxemburg_norm(phi, f, space, tol)?.value();
    // An unbracketed maximiser means φ* is huge there; treat it as +∞,
    // which only pushes γ upwards. Other errors are real and propagate.
    let failure = std::cell::RefCell::new(None);
    let start = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let conj = luxemburg_by(
        |gamma| {
            let mut total = 0.0;
            for (v, w) in g.iter().zip(&w) {
                match conjugate_eval(phi, v / gamma, grid) {
                    Ok(c) => total += w * c,
                    Err(Error::Resolution(_)) => return f64::INFINITY,
                    Err(e) => {
                        *failure.borrow_mut() = Some(e);
                        return f64::INFINITY;
                    }
                }
            }
            total
        },
        start,
        tol,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let conjugate_norm_g = conj.value();
    let rhs = 2.0 * norm_f * conjugate_norm_g;
    let holds = lhs <= rhs * (1.0 + 4.0 * tol) + f64::MIN_POSITIVE;
    Ok(HolderReport { lhs, rhs, norm_f, conjugate_norm_g, holds })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct L1Bound {
    pub l1: f64,
    pub bound: f64,
    pub holds: bool,
}

/// `‖f‖_{L¹} ≤ μ(Z)·φ⁻¹(1/μ(Z))·‖f‖_φ`, with `φ⁻¹` the generalised right inverse.
pub fn l1_embedding_bound(phi: &YoungFunction, f: &[f64], space: &MeasureSpace, tol: f64) -> Result<L1Bound> {
    let norm = luxemburg_norm(phi, f, space, tol)?.value();
    let mass = space.total_mass();
    let l1: f64 = f.iter().zip(space.atoms()).map(|(v, a)| a.weight * v.abs()).sum();
    let bound = mass * phi.inverse(1.0 / mass) * norm;
    let holds = l1 <= bound * (1.0 + 4.0 * tol) + f64::MIN_POSITIVE;
    Ok(L1Bound { l1, bound, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orlicz::DEFAULT_TOL;

    #[test]
    fn equivalence_examples() {
        let sq = YoungFunction::power(2.0).unwrap();
        let one = MeasureSpace::counting(1);
        let r = check_norm_equivalence(&sq, 4.0, &[1.0], &one, DEFAULT_TOL).unwrap();
        assert!((r.ratio - 2.0).abs() < 1e-9 && r.holds);
        let r = check_norm_equivalence(&sq, 1.0, &[0.3], &one, DEFAULT_TOL).unwrap();
        assert!((r.ratio - 1.0).abs() < 1e-9 && r.holds);
        assert!(check_norm_equivalence(&sq, 0.5, &[1.0], &one, DEFAULT_TOL).is_err());
    }

    #[test]
    fn holder_examples() {
        let sq = YoungFunction::power(2.0).unwrap();
        let one = MeasureSpace::counting(1);
        let g = ConjugateGrid::default();
        let r = holder_check(&sq, &[0.0], &[0.0], &one, &g, DEFAULT_TOL).unwrap();
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
        // φ*(s) = s²/4, so ‖1‖_{φ*} = 1/2 and the inequality is an equality.
        let r = holder_check(&sq, &[1.0], &[1.0], &one, &g, DEFAULT_TOL).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-12);
        assert!((r.conjugate_norm_g - 0.5).abs() < 1e-9);
        assert!((r.rhs - 1.0).abs() < 1e-9 && r.holds);
    }

    #[test]
    fn l1_examples() {
        let one = MeasureSpace::counting(1);
        let abs = YoungFunction::power(1.0).unwrap();
        let r = l1_embedding_bound(&abs, &[0.5], &one, DEFAULT_TOL).unwrap();
        assert!((r.l1 - 0.5).abs() < 1e-12 && (r.bound - 0.5).abs() < 1e-9 && r.holds);
        let sq = YoungFunction::power(2.0).unwrap();
        let r = l1_embedding_bound(&sq, &[1.0], &one, DEFAULT_TOL).unwrap();
        assert!((r.bound - 1.0).abs() < 1e-9 && r.holds);
        let r = l1_embedding_bound(&sq, &[0.0], &one, DEFAULT_TOL).unwrap();
        assert_eq!((r.l1, r.bound), (0.0, 0.0));
    }
}
