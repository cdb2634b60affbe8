use serde::{Deserialize, Serialize};

use super::YoungFunction;
use crate::{Error, Result};

/// Sampling of `[0, t_max]` used to locate the maximiser of `s·t − φ(t)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjugateGrid {
    pub t_max: f64,
    pub samples: usize,
}

impl Default for ConjugateGrid {
    fn default() -> Self {
        ConjugateGrid { t_max: 1e4, samples: 128 }
    }
}

/// Numeric Legendre transform `φ*(s) = sup_t (s·t − φ(t))`.
///
/// The objective is concave in `t`, so a coarse scan followed by a
/// golden-section search around the best sample is enough. A maximiser on
/// the last grid sample means the grid does not bracket it.
pub fn conjugate_eval(phi: &YoungFunction, s: f64, grid: &ConjugateGrid) -> Result<f64> {
    if !s.is_finite() {
        return Err(Error::input(format!("conjugate argument {s} is not finite")));
    }
    if !(grid.t_max > 0.0) || grid.samples < 3 {
        return Err(Error::input("conjugate grid needs t_max > 0 and at least 3 samples"));
    }
    let s = s.abs();
    if s == 0.0 {
        return Ok(0.0);
    }
    let objective = |t: f64| s * t - phi.eval(t);
    let step = grid.t_max / (grid.samples - 1) as f64;
    let mut best = (0usize, objective(0.0));
    for i in 1..grid.samples {
        let v = objective(i as f64 * step);
        if v > best.1 {
            best = (i, v);
        }
    }
    if best.0 == grid.samples - 1 {
        return Err(Error::Resolution(format!(
            "maximiser of s·t − φ(t) for s = {s} lies beyond t_max = {}",
            grid.t_max
        )));
    }
    let (mut a, mut b) = (best.0.saturating_sub(1) as f64 * step, (best.0 + 1) as f64 * step);
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (objective(c), objective(d));
    while b - a > 1e-12 * b.max(1.0) {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = objective(d);
        }
    }
    Ok(best.1.max(fc).max(fd).max(objective(0.5 * (a + b))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        let g = ConjugateGrid::default();
        let sq = YoungFunction::power(2.0).unwrap();
        assert!((conjugate_eval(&sq, 2.0, &g).unwrap() - 1.0).abs() < 1e-12);
        assert!((conjugate_eval(&sq, -3.0, &g).unwrap() - 2.25).abs() < 1e-12);
        assert_eq!(conjugate_eval(&sq, 0.0, &g).unwrap(), 0.0);
        let abs = YoungFunction::power(1.0).unwrap();
        assert_eq!(conjugate_eval(&abs, 0.5, &g).unwrap(), 0.0);
        // p = 3: φ*(s) = 2(s/3)^{3/2}
        let cube = YoungFunction::power(3.0).unwrap();
        let want = 2.0 * (1.5f64 / 3.0).powf(1.5);
        assert!((conjugate_eval(&cube, 1.5, &g).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn unbracketed_maximiser() {
        let sq = YoungFunction::power(2.0).unwrap();
        let small = ConjugateGrid { t_max: 1.0, samples: 16 };
        assert!(matches!(conjugate_eval(&sq, 10.0, &small), Err(Error::Resolution(_))));
        let abs = YoungFunction::power(1.0).unwrap();
        assert!(conjugate_eval(&abs, 1.5, &ConjugateGrid::default()).is_err());
    }
}
