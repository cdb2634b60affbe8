//! A function whose restrictions to the unit intervals have summable
//! `L^φ` norms while its global `L^φ` norm is infinite.

use serde::{Deserialize, Serialize};

use crate::orlicz::{luxemburg_by, luxemburg_weighted, YoungFunction};
use crate::quadrature::{gauss_legendre, gauss_legendre_on};
use crate::{Error, Result};

/// Parameters of the construction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BourdonParams {
    pub p: f64,
    pub kappa: f64,
    /// Truncation: intervals `A_1, …, A_N`.
    pub n_max: usize,
    pub epsilon: f64,
    /// Start of the Cauchy / integral-test window.
    pub tail_start: usize,
    /// Pieces for which the mollified indicator is also measured.
    pub mollified_pieces: usize,
}

impl Default for BourdonParams {
    fn default() -> Self {
        BourdonParams { p: 2.0, kappa: 2.0, n_max: 1_000_000, epsilon: 0.01, tail_start: 100_000, mollified_pieces: 1000 }
    }
}

/// Value of a growing quantity at a truncation level.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub n: usize,
    pub modular: f64,
    pub global_norm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BourdonReport {
    pub params: BourdonParams,
    pub phi_at_one: f64,
    /// `∫_{[0,N]} φ(f)` at the final truncation.
    pub truncated_modular: f64,
    pub divergent: bool,
    /// Smallest `N` from which the truncated modular stays above one.
    pub exceeds_one_from: Option<usize>,
    /// `min_{N ≥ 7} modular(N) / (φ(1)·ln N)`.
    pub min_log_growth: f64,
    pub checkpoints: Vec<Checkpoint>,
    /// `max_n ‖f|_{U_n}‖ / a_n`.
    pub max_piece_ratio: f64,
    pub pieces_within_bound: bool,
    /// Same ratio for the mollified indicators of the first pieces.
    pub max_mollified_ratio: f64,
    /// `Σ_{n≤N} φ(a_n)`.
    pub partial_sum: f64,
    /// `max_{n > tail_start} φ(a_n)`.
    pub max_tail_increment: f64,
    /// `Σ_{M<n≤N} φ(a_n)` and `∫_M^N φ(x^{−1/p}) dx`.
    pub window_sum: f64,
    pub window_integral: f64,
    pub integral_test_relative_gap: f64,
    /// `∫_N^∞ φ(x^{−1/p}) dx`, bounding the remaining sum.
    pub tail_bound: f64,
    /// `ℓ^φ` norm of the sequence of piece norms.
    pub piece_sequence_norm: f64,
}

/// `|A_n| = a_n^p = 1/n`, clipped to the slot width `1 − 4ε`.
fn interval_length(n: usize, eps: f64) -> f64 {
    (1.0 / n as f64).min(1.0 - 4.0 * eps)
}

/// Builds `a_n = n^{−1/p}`, intervals `A_n` of length `a_n^p` centred in
/// `(n + 2ε, n + 1 − 2ε)` (the first one clipped to fit), `f = Σ 𝟙_{A_n}`,
/// and measures both sides of the dichotomy.
pub fn bourdon_example(params: &BourdonParams) -> Result<BourdonReport> {
    let BourdonParams { p, kappa, n_max, epsilon, tail_start, mollified_pieces } = *params;
    if !(epsilon > 0.0 && epsilon < 0.25) {
        return Err(Error::input(format!("epsilon must lie in (0, 1/4), got {epsilon}")));
    }
    if !(p > 1.0 && kappa > 1.0) {
        return Err(Error::Precondition(format!("need p > 1 and kappa > 1, got p={p}, kappa={kappa}")));
    }
    if n_max == 0 || tail_start >= n_max {
        return Err(Error::input("need 0 < tail_start < n_max"));
    }
    let phi = YoungFunction::log_damped(p, kappa)?;
    let phi1 = phi.eval(1.0);

    let mut total_len = 0.0;
    let mut exceeds_from = None;
    let mut min_log_growth = f64::INFINITY;
    let mut checkpoints = Vec::new();
    let mut next_checkpoint = 10;
    let mut max_piece_ratio: f64 = 0.0;
    let mut piece_norms = Vec::with_capacity(n_max);
    let mut partial_sum = 0.0;
    let mut window_sum = 0.0;
    let mut max_tail_increment: f64 = 0.0;
    for n in 1..=n_max {
        let a = (n as f64).powf(-1.0 / p);
        let len = interval_length(n, epsilon);
        total_len += len;
        let modular = total_len * phi1;
        if modular > 1.0 {
            exceeds_from.get_or_insert(n);
        } else {
            exceeds_from = None;
        }
        if n >= 7 {
            min_log_growth = min_log_growth.min(modular / (phi1 * (n as f64).ln()));
        }
        if n == next_checkpoint || n == n_max {
            checkpoints.push(Checkpoint { n, modular, global_norm: 1.0 / phi.inverse(1.0 / total_len) });
            next_checkpoint *= 10;
        }
        // ‖𝟙_{A_n}‖ solves len·φ(1/γ) = 1.
        let norm = 1.0 / phi.inverse(1.0 / len);
        piece_norms.push(norm);
        max_piece_ratio = max_piece_ratio.max(norm / a);
        let inc = phi.eval(a);
        partial_sum += inc;
        if n > tail_start {
            window_sum += inc;
            max_tail_increment = max_tail_increment.max(inc);
        }
    }

    let mut max_mollified_ratio: f64 = 0.0;
    for n in 1..=mollified_pieces.min(n_max) {
        let len = interval_length(n, epsilon);
        let a = (n as f64).powf(-1.0 / p);
        max_mollified_ratio = max_mollified_ratio.max(mollified_piece_norm(&phi, len, (len / 8.0).min(epsilon)) / a);
    }

    let profile = |x: f64| phi.eval(x.powf(-1.0 / p));
    let window_integral = log_integral(&profile, tail_start as f64, n_max as f64);
    let tail_bound = tail_integral(&profile, n_max as f64);
    let truncated_modular = total_len * phi1;
    Ok(BourdonReport {
        params: *params,
        phi_at_one: phi1,
        truncated_modular,
        divergent: truncated_modular > 1.0,
        exceeds_one_from: exceeds_from,
        min_log_growth,
        checkpoints,
        max_piece_ratio,
        pieces_within_bound: max_piece_ratio <= 1.0 + 1e-12,
        max_mollified_ratio,
        partial_sum,
        max_tail_increment,
        window_sum,
        window_integral,
        integral_test_relative_gap: (window_sum - window_integral).abs() / window_integral,
        tail_bound,
        piece_sequence_norm: luxemburg_weighted(&phi, &piece_norms, None, 1e-12).value(),
    })
}

/// `∫_a^b g(x) dx` after the substitution `x = e^u`.
fn log_integral(g: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (u, w) = gauss_legendre_on(64, a.ln(), b.ln());
    u.iter().zip(&w).map(|(u, w)| w * u.exp() * g(u.exp())).sum()
}

/// `∫_a^∞ g(x) dx` via `x = e^{ln a + s/(1−s)}`.
fn tail_integral(g: &dyn Fn(f64) -> f64, a: f64) -> f64 {
    let (s, w) = gauss_legendre_on(128, 0.0, 1.0);
    s.iter()
        .zip(&w)
        .map(|(s, w)| {
            let u = a.ln() + s / (1.0 - s);
            w * u.exp() * g(u.exp()) / ((1.0 - s) * (1.0 - s))
        })
        .sum()
}

/// Norm of `𝟙_A ∗ ρ_δ` for an interval `A` of length `len`, with `ρ_δ` the
/// standard smooth bump of radius `δ`.
fn mollified_piece_norm(phi: &YoungFunction, len: f64, delta: f64) -> f64 {
    let (u, wu) = gauss_legendre(48);
    let bump = |x: f64| if x.abs() < 1.0 { (-1.0 / (1.0 - x * x)).exp() } else { 0.0 };
    let (z, wz) = gauss_legendre(64);
    let mass: f64 = z.iter().zip(&wz).map(|(z, w)| w * bump(*z)).sum();
    // Transition profile C(u) = ∫_{-1}^{u} ρ / ∫ ρ at the outer nodes.
    let cdf: Vec<f64> = u
        .iter()
        .map(|&ui| {
            let half = 0.5 * (ui + 1.0);
            z.iter().zip(&wz).map(|(z, w)| w * half * bump(-1.0 + half * (z + 1.0))).sum::<f64>() / mass
        })
        .collect();
    let plateau = (len - 2.0 * delta).max(0.0);
    let modular = |gamma: f64| {
        let inv = 1.0 / gamma;
        let ramp: f64 = cdf.iter().zip(&wu).map(|(c, w)| w * phi.eval(c * inv)).sum();
        plateau * phi.eval(inv) + 2.0 * delta * ramp
    };
    luxemburg_by(modular, 1.0, 1e-12).value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_truncation() {
        let params = BourdonParams { n_max: 100, tail_start: 10, mollified_pieces: 20, ..Default::default() };
        let r = bourdon_example(&params).unwrap();
        // First interval is clipped to 1 − 4ε; the rest have length 1/n.
        let h100: f64 = (1..=100).map(|n| 1.0 / n as f64).sum();
        let expected = (h100 - 4.0 * params.epsilon) * r.phi_at_one;
        assert!((r.truncated_modular - expected).abs() < 1e-12);
        assert!((r.truncated_modular - 3.0).abs() < 0.05);
        assert!(r.divergent && r.pieces_within_bound);
        assert!(r.max_mollified_ratio <= 1.0);
    }

    #[test]
    fn invalid_parameters() {
        let bad = BourdonParams { epsilon: 0.25, ..Default::default() };
        assert!(bourdon_example(&bad).is_err());
        let bad = BourdonParams { kappa: 1.0, ..Default::default() };
        assert!(bourdon_example(&bad).is_err());
    }
}
