use serde::{Deserialize, Serialize};

use super::{MeasureSpace, YoungFunction};
use crate::{Error, Result};

/// Relative bracket width at which the bisection stops.
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormValue {
    Finite(f64),
    Divergent,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormResult {
    pub value: NormValue,
    pub iterations: usize,
    /// Final bisection bracket `(lo, hi)`; the modular exceeds one at `lo`
    /// and is at most one at `hi`.
    pub bracket: (f64, f64),
    pub modular_at_value: f64,
}

impl NormResult {
    fn zero() -> Self {
        NormResult { value: NormValue::Finite(0.0), iterations: 0, bracket: (0.0, 0.0), modular_at_value: 0.0 }
    }

    /// The finite value, or `+∞` for a divergent norm.
    pub fn value(&self) -> f64 {
        match self.value {
            NormValue::Finite(v) => v,
            NormValue::Divergent => f64::INFINITY,
        }
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self.value, NormValue::Divergent)
    }
}

/// `Σ w·φ(f/γ)`.
pub fn modular(phi: &YoungFunction, f: &[f64], space: &MeasureSpace, gamma: f64) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(Error::input(format!("modular needs gamma > 0, got {gamma}")));
    }
    space.check_function(f)?;
    Ok(space.atoms().iter().zip(f).map(|(a, v)| a.weight * phi.eval(v / gamma)).sum())
}

/// Luxemburg norm of `f` on `space`.
pub fn luxemburg_norm(
    phi: &YoungFunction,
    f: &[f64],
    space: &MeasureSpace,
    tol: f64,
) -> Result<NormResult> {
    space.check_function(f)?;
    check_tol(tol)?;
    let w = space.weights();
    Ok(luxemburg_weighted(phi, f, Some(&w), tol))
}

/// Luxemburg norm with explicit weights (`None` is counting measure).
/// Inputs are trusted; used by the cochain and form norms.
pub fn luxemburg_weighted(phi: &YoungFunction, f: &[f64], weights: Option<&[f64]>, tol: f64) -> NormResult {
    let start = f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let modular = |gamma: f64| -> f64 {
        let inv = 1.0 / gamma;
        match weights {
            Some(w) => f.iter().zip(w).map(|(v, w)| w * phi.eval(v * inv)).sum(),
            None => f.iter().map(|v| phi.eval(v * inv)).sum(),
        }
    };
    luxemburg_by(modular, start, tol)
}

/// Bisection with geometric bracket expansion for
/// `inf{γ > 0 : modular(γ) ≤ 1}`, where `modular` is nonincreasing and
/// `start = max|f|`. A zero `start` means `f = 0`.
pub fn luxemburg_by(modular: impl Fn(f64) -> f64, start: f64, tol: f64) -> NormResult {
    if start == 0.0 {
        return NormResult::zero();
    }
    let mut iterations = 0;
    let (mut lo, mut hi);
    if modular(start) > 1.0 {
        lo = start;
        hi = 2.0 * start;
        while modular(hi) > 1.0 && iterations < 4000 {
            lo = hi;
            hi *= 2.0;
            iterations += 1;
        }
    } else {
        hi = start;
        lo = 0.5 * start;
        while modular(lo) <= 1.0 && iterations < 4000 {
            hi = lo;
            lo *= 0.5;
            iterations += 1;
        }
    }
    while hi - lo > tol * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if modular(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    NormResult { value: NormValue::Finite(hi), iterations, bracket: (lo, hi), modular_at_value: modular(hi) }
}

/// Norm over a sequence of truncations of an infinite space. The result is
/// `Divergent` when, for every truncation from index `threshold` on, the
/// modular exceeds one at every probed `γ`; otherwise it is the norm of the
/// last truncation.
pub fn truncated_norm(
    phi: &YoungFunction,
    truncations: &[(Vec<f64>, MeasureSpace)],
    probes: &[f64],
    threshold: usize,
    tol: f64,
) -> Result<NormResult> {
    let last = truncations.last().ok_or_else(|| Error::input("no truncations supplied"))?;
    if threshold < truncations.len() && !probes.is_empty() {
        let mut divergent = true;
        for (f, z) in &truncations[threshold..] {
            for &g in probes {
                if modular(phi, f, z, g)? <= 1.0 {
                    divergent = false;
                }
            }
        }
        if divergent {
            let gmax = probes.iter().cloned().fold(f64::MIN, f64::max);
            return Ok(NormResult {
                value: NormValue::Divergent,
                iterations: 0,
                bracket: (gmax, f64::INFINITY),
                modular_at_value: modular(phi, &last.0, &last.1, gmax)?,
            });
        }
    }
    luxemburg_norm(phi, &last.0, &last.1, tol)
}

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::input(format!("tolerance must lie in (0, 1), got {tol}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(p: f64) -> YoungFunction {
        YoungFunction::power(p).unwrap()
    }

    #[test]
    fn modular_examples() {
        let two = MeasureSpace::counting(2);
        assert_eq!(modular(&p(2.0), &[3.0, 4.0], &two, 5.0).unwrap(), 1.0);
        assert_eq!(modular(&p(3.0), &[0.0, 0.0], &two, 0.1).unwrap(), 0.0);
        let half = MeasureSpace::from_weights(&[0.5]).unwrap();
        assert_eq!(modular(&p(1.0), &[2.0], &half, 1.0).unwrap(), 1.0);
        assert!(matches!(modular(&p(2.0), &[1.0, 1.0], &two, 0.0), Err(Error::Input(_))));
        assert!(matches!(modular(&p(2.0), &[1.0, 1.0], &two, -1.0), Err(Error::Input(_))));
    }

    #[test]
    fn norm_examples() {
        let two = MeasureSpace::counting(2);
        let r = luxemburg_norm(&p(2.0), &[3.0, 4.0], &two, DEFAULT_TOL).unwrap();
        assert!((r.value() - 5.0).abs() < 1e-9);
        assert_eq!(luxemburg_norm(&p(2.0), &[0.0, 0.0], &two, DEFAULT_TOL).unwrap().value(), 0.0);

        // log-damped, single unit atom, f = 1: the unique γ with φ(1/γ) = 1,
        // found independently by bisection on the scalar equation.
        let ld = YoungFunction::log_damped(2.0, 2.0).unwrap();
        let (mut lo, mut hi) = (1e-3, 10.0);
        for _ in 0..200 {
            let m = 0.5 * (lo + hi);
            if ld.eval(1.0 / m) > 1.0 {
                lo = m
            } else {
                hi = m
            }
        }
        let r = luxemburg_norm(&ld, &[1.0], &MeasureSpace::counting(1), DEFAULT_TOL).unwrap();
        assert!((r.value() - hi).abs() < 1e-9 * hi);
    }

    #[test]
    fn bracket_invariant() {
        let ld = YoungFunction::log_damped(2.0, 2.0).unwrap();
        let z = MeasureSpace::from_weights(&[0.3, 1.2, 2.0]).unwrap();
        let f = [0.2, -3.0, 1.5];
        let tol = 1e-8;
        let r = luxemburg_norm(&ld, &f, &z, tol).unwrap();
        let v = r.value();
        assert!(modular(&ld, &f, &z, v * (1.0 + tol)).unwrap() <= 1.0);
        assert!(modular(&ld, &f, &z, v * (1.0 - tol)).unwrap() >= 1.0);
        assert!(r.bracket.0 <= v && v == r.bracket.1);
    }

    #[test]
    fn rejects_bad_inputs() {
        let z = MeasureSpace::counting(2);
        assert!(luxemburg_norm(&p(2.0), &[1.0], &z, 1e-10).is_err());
        assert!(luxemburg_norm(&p(2.0), &[1.0, f64::NAN], &z, 1e-10).is_err());
        assert!(luxemburg_norm(&p(2.0), &[1.0, 1.0], &z, 0.0).is_err());
    }

    #[test]
    fn truncations_flag_divergence() {
        let phi = p(2.0);
        // f = 1 on n unit atoms: the modular at γ is n/γ².
        let truncs: Vec<_> =
            (1..=40).map(|n| (vec![1.0; n * n], MeasureSpace::counting(n * n))).collect();
        let r = truncated_norm(&phi, &truncs, &[1.0, 5.0, 20.0], 25, DEFAULT_TOL).unwrap();
        assert!(r.is_divergent());
        let r = truncated_norm(&phi, &truncs[..3], &[1.0, 5.0], 1, DEFAULT_TOL).unwrap();
        assert!((r.value() - 3.0).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn modular_is_monotone(g1 in 0.01f64..10.0, dg in 0.0f64..10.0, f in prop::collection::vec(-5.0f64..5.0, 1..20)) {
            let phi = YoungFunction::log_damped(2.0, 2.0).unwrap();
            let z = MeasureSpace::counting(f.len());
            let a = modular(&phi, &f, &z, g1).unwrap();
            let b = modular(&phi, &f, &z, g1 + dg).unwrap();
            prop_assert!(a >= b);
        }

        #[test]
        fn zero_iff_function_vanishes(f in prop::collection::vec(-1.0f64..1.0, 1..10), i in 0usize..10) {
            let z = MeasureSpace::counting(f.len());
            let mut g = vec![0.0; f.len()];
            prop_assert_eq!(luxemburg_norm(&p(1.5), &g, &z, DEFAULT_TOL).unwrap().value(), 0.0);
            let i = i % f.len();
            g[i] = if f[i] == 0.0 { 1e-3 } else { f[i] };
            prop_assert!(luxemburg_norm(&p(1.5), &g, &z, DEFAULT_TOL).unwrap().value() > 0.0);
        }
    }
}
