use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{pullback, ChainMap};
use crate::simplicial::{relative_mask, BoundaryPointModel, Cochain, SimplexMask, SimplicialComplex};
use crate::Result;

/// Smallest horoparameter `t_X` such that every simplex of `X` beyond it
/// has `c_F(σ)` supported inside `mask_y`; computed exhaustively. Returns
/// `−∞` when no simplex constrains it.
pub fn relative_pullback_threshold(
    c_f: &ChainMap,
    x: &SimplicialComplex,
    xi_x: &BoundaryPointModel,
    mask_y: &SimplexMask,
) -> f64 {
    let mut t = f64::NEG_INFINITY;
    for k in 0..=c_f.k_max() {
        let values = xi_x.simplex_values(x, k);
        for (i, img) in c_f.images[k].iter().enumerate() {
            if img.support().any(|s| !mask_y.contains(k, s)) {
                t = t.max(values[i]);
            }
        }
    }
    t
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelativeReport {
    pub t_source: f64,
    pub t_target: f64,
    pub masked_source: usize,
    pub masked_target: usize,
    pub trials: usize,
    /// Every pulled-back relative cocycle was closed and vanished on the
    /// pulled-back mask.
    pub preserved: bool,
}

/// Pulls back random relative cocycles of `Y` (vanishing on `mask(t_y)`)
/// and checks, exactly, that they stay closed and vanish on `mask(t_x)`.
#[allow(clippy::too_many_arguments)]
pub fn verify_relative(
    c_f: &ChainMap,
    x: &SimplicialComplex,
    xi_x: &BoundaryPointModel,
    y: &SimplicialComplex,
    xi_y: &BoundaryPointModel,
    t_y: f64,
    trials: usize,
    rng: &mut impl Rng,
) -> Result<RelativeReport> {
    let mask_y = relative_mask(y, xi_y, t_y)?;
    let t_x = relative_pullback_threshold(c_f, x, xi_x, &mask_y);
    let mask_x = relative_mask(x, xi_x, t_x)?;
    let mut preserved = true;
    for k in 0..=c_f.k_max().min(y.dim()) {
        for _ in 0..trials {
            let random = |d: usize, rng: &mut dyn rand::RngCore| Cochain {
                degree: d,
                values: (0..y.count(d)).map(|_| rng.random_range(-20i32..=20) as f64).collect(),
            };
            // relative cocycles: top-degree relative cochains, or δ of
            // relative cochains (the mask is δ-stable)
            let theta = if k == y.dim() {
                mask_y.restrict(&random(k, rng))
            } else if k > 0 {
                y.coboundary(&mask_y.restrict(&random(k - 1, rng)))?
            } else if mask_y.count() == 0 {
                Cochain { degree: 0, values: vec![rng.random_range(-5i32..=5) as f64; y.count(0)] }
            } else {
                Cochain::zeros(y, 0)
            };
            debug_assert!(mask_y.vanishes(&theta));
            let pulled = pullback(&theta, c_f)?;
            preserved &= mask_x.vanishes(&pulled);
            if k < x.dim() {
                preserved &= x.coboundary(&pulled)?.values.iter().all(|&v| v == 0.0);
            }
        }
    }
    Ok(RelativeReport {
        t_source: t_x,
        t_target: t_y,
        masked_source: mask_x.count(),
        masked_target: mask_y.count(),
        trials,
        preserved,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qi::{build_chain_map, FillOptions, QuasiIsometry};
    use crate::simplicial::ComplexSpec;
    use rand::SeedableRng;

    #[test]
    fn doubling_ray() {
        let x = ComplexSpec::Path { n: 100 }.build().unwrap();
        let y = ComplexSpec::Path { n: 200 }.build().unwrap();
        let f = QuasiIsometry::measure(&x, &y, (0..100).map(|i| 2 * i).collect(), None).unwrap();
        let c = build_chain_map(&f, &x, &y, 1, &FillOptions::default()).unwrap();
        let xi_x = BoundaryPointModel::new(&x, (0..100).collect()).unwrap();
        let xi_y = BoundaryPointModel::new(&y, (0..200).collect()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let r = verify_relative(&c, &x, &xi_x, &y, &xi_y, 100.0, 20, &mut rng).unwrap();
        assert_eq!(r.t_source, 50.0);
        assert!(r.preserved && r.masked_source > 0);
    }
}
