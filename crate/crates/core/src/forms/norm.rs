use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::algebra::{evaluate_on, pullback_linear};
use super::domain::ChartedDomain;
use super::form::DiscreteForm;
use crate::orlicz::{luxemburg_weighted, NormResult, YoungFunction};
use crate::Result;

const FRAME_SAMPLES: usize = 10_000;
const FRAME_SEED: u64 = 0x5eed_f0a1;

/// `|ω|_x`: supremum of `|ω(v₁, …, v_k)|` over `g`-unit vectors.
pub fn pointwise_norm(domain: &ChartedDomain, x: &[f64], degree: usize, coeffs: &[f64]) -> f64 {
    let n = domain.dim();
    let g = domain.metric(x);
    match degree {
        0 => coeffs[0].abs(),
        1 => {
            let inv = invert(&g, n);
            let mut s = 0.0;
            for i in 0..n {
                for j in 0..n {
                    s += coeffs[i] * inv[i * n + j] * coeffs[j];
                }
            }
            s.max(0.0).sqrt()
        }
        k if k == n => coeffs[0].abs() / domain.volume_density(x),
        k => {
            // Move to an orthonormal frame: v = L^{-T} u with g = L Lᵀ.
            let l = cholesky(&g, n);
            let lt_inv = invert(&transpose(&l, n), n);
            let mut euclid = vec![0.0; coeffs.len()];
            pullback_linear(n, k, &lt_inv, coeffs, &mut euclid);
            euclidean_comass(n, k, &euclid)
        }
    }
}

/// Maximum of `|η(u₁, …, u_k)|` over orthonormal frames, by sampling random
/// frames and refining the best one with coordinate rotations.
pub fn euclidean_comass(n: usize, k: usize, coeffs: &[f64]) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(FRAME_SEED);
    let mut best = 0.0;
    let mut best_frame = Vec::new();
    for _ in 0..FRAME_SAMPLES {
        let frame = random_frame(&mut rng, n, k);
        let v = evaluate_on(n, k, coeffs, &frame).abs();
        if v > best {
            best = v;
            best_frame = frame;
        }
    }
    if best_frame.is_empty() {
        return 0.0;
    }
    let mut step = 0.1;
    while step > 1e-9 {
        let mut improved = false;
        for i in 0..k {
            for a in 0..n {
                for sign in [1.0, -1.0] {
                    let mut cand = best_frame.clone();
                    cand[i][a] += sign * step;
                    orthonormalize(&mut cand);
                    let v = evaluate_on(n, k, coeffs, &cand).abs();
                    if v > best {
                        best = v;
                        best_frame = cand;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    best
}

fn random_frame(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<Vec<f64>> {
    let mut frame: Vec<Vec<f64>> = (0..k).map(|_| (0..n).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect()).collect();
    orthonormalize(&mut frame);
    frame
}

fn orthonormalize(frame: &mut [Vec<f64>]) {
    for i in 0..frame.len() {
        for j in 0..i {
            let d: f64 = frame[i].iter().zip(&frame[j]).map(|(a, b)| a * b).sum();
            let fj = frame[j].clone();
            frame[i].iter_mut().zip(&fj).for_each(|(a, b)| *a -= d * b);
        }
        let norm = frame[i].iter().map(|a| a * a).sum::<f64>().sqrt().max(1e-300);
        frame[i].iter_mut().for_each(|a| *a /= norm);
    }
}

fn transpose(m: &[f64], n: usize) -> Vec<f64> {
    (0..n * n).map(|i| m[(i % n) * n + i / n]).collect()
}

fn cholesky(g: &[f64], n: usize) -> Vec<f64> {
    let m = nalgebra::DMatrix::from_row_slice(n, n, g);
    let l = m.cholesky().expect("metric must be positive definite").l();
    (0..n * n).map(|i| l[(i / n, i % n)]).collect()
}

pub(crate) fn invert(m: &[f64], n: usize) -> Vec<f64> {
    let mat = nalgebra::DMatrix::from_row_slice(n, n, m);
    let inv = mat.try_inverse().expect("invertible matrix");
    (0..n * n).map(|i| inv[(i / n, i % n)]).collect()
}

/// Pointwise norms at every grid sample.
pub fn pointwise_norms(domain: &ChartedDomain, omega: &DiscreteForm) -> Vec<f64> {
    (0..omega.grid.len())
        .into_par_iter()
        .map(|i| pointwise_norm(domain, &omega.grid.point(i), omega.degree, omega.at(i)))
        .collect()
}

/// `‖ω‖_{L^φ}` over the samples of the domain region accepted by `mask`.
pub fn form_norm(
    phi: &YoungFunction,
    domain: &ChartedDomain,
    omega: &DiscreteForm,
    mask: Option<&(dyn Fn(usize) -> bool + Sync)>,
    tol: f64,
) -> Result<NormResult> {
    crate::orlicz::check_tol(tol)?;
    if omega.grid != domain.grid {
        return Err(crate::Error::input("form is not sampled on the domain grid"));
    }
    let (values, weights): (Vec<f64>, Vec<f64>) = (0..omega.grid.len())
        .into_par_iter()
        .filter(|&i| mask.is_none_or(|m| m(i)))
        .filter_map(|i| {
            let w = domain.volume_weight(i);
            (w > 0.0).then(|| (pointwise_norm(domain, &omega.grid.point(i), omega.degree, omega.at(i)), w))
        })
        .unzip();
    Ok(luxemburg_weighted(phi, &values, Some(&weights), tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{Grid, Model};

    #[test]
    fn pointwise_examples() {
        let flat = ChartedDomain::euclidean_box(Grid::cube(2, 0.0, 1.0, 8, false).unwrap());
        assert_eq!(pointwise_norm(&flat, &[0.5, 0.5], 1, &[3.0, 0.0]), 3.0);
        assert_eq!(pointwise_norm(&flat, &[0.5, 0.5], 2, &[1.0]), 1.0);
        let hp = ChartedDomain::half_plane((-1.0, 1.0), (1.0, 3.0), [8, 8]).unwrap();
        assert!((pointwise_norm(&hp, &[0.0, 2.0], 1, &[1.0, 0.0]) - 2.0).abs() < 1e-12);
        assert!((pointwise_norm(&hp, &[0.0, 2.0], 2, &[1.0]) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn middle_degree_comass() {
        // In ℝ³ the comass of a 2-form is the length of its Hodge dual.
        let flat = ChartedDomain::euclidean_box(Grid::cube(3, 0.0, 1.0, 4, false).unwrap());
        let c = [1.0, -2.0, 2.0];
        assert!((pointwise_norm(&flat, &[0.5; 3], 2, &c) - 3.0).abs() < 1e-8);
        let conf = ChartedDomain::new(Grid::cube(3, 0.0, 1.0, 4, false).unwrap(), Model::Conformal { factor: 4.0 }).unwrap();
        assert!((pointwise_norm(&conf, &[0.5; 3], 2, &c) - 0.75).abs() < 1e-8);
    }

    #[test]
    fn norm_examples() {
        let phi = YoungFunction::power(2.0).unwrap();
        let grid = Grid::cube(2, 0.0, 1.0, 16, false).unwrap();
        let flat = ChartedDomain::euclidean_box(grid.clone());
        let dx = DiscreteForm::from_data(&grid, 1, [1.0, 0.0].repeat(grid.len())).unwrap();
        assert!((form_norm(&phi, &flat, &dx, None, 1e-12).unwrap().value() - 1.0).abs() < 1e-9);
        // Metric 4δ: |dx| = 1/2 and dV = 4 dx dy, so the L² norm is 1.
        let conf = ChartedDomain::new(grid.clone(), Model::Conformal { factor: 4.0 }).unwrap();
        assert!((form_norm(&phi, &conf, &dx, None, 1e-12).unwrap().value() - 1.0).abs() < 1e-9);
        let zero = DiscreteForm::zeros(&grid, 1);
        assert_eq!(form_norm(&phi, &flat, &zero, None, 1e-12).unwrap().value(), 0.0);
    }
}
