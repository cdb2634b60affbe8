use serde::{Deserialize, Serialize};

use super::filling::{fill_cycle, FillOptions};
use super::ChainMap;
use crate::simplicial::{ChainValue, Cochain, SimplicialComplex};
use crate::{Error, Result};

/// `σ ↦ h(σ)`, a chain one degree up, with `∂h + h∂ = c_F − c_G`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrismHomotopy {
    pub images: Vec<Vec<ChainValue>>,
}

impl PrismHomotopy {
    pub fn apply(&self, chain: &ChainValue) -> ChainValue {
        let mut out = ChainValue::zero(chain.degree + 1);
        for (i, v) in chain.terms() {
            out.add_scaled(&self.images[chain.degree][i], v);
        }
        out
    }

    /// `(N′_k, L′_k)` per degree.
    pub fn constants(&self) -> Vec<(i64, usize)> {
        self.images
            .iter()
            .map(|l| (l.iter().map(|c| c.sup_norm()).max().unwrap_or(0), l.iter().map(|c| c.length()).max().unwrap_or(0)))
            .collect()
    }

    /// Simplices violating `∂h(σ) + h(∂σ) = c_F(σ) − c_G(σ)`.
    pub fn identity_defects(&self, f: &ChainMap, g: &ChainMap, x: &SimplicialComplex, y: &SimplicialComplex) -> usize {
        (0..self.images.len())
            .map(|k| {
                (0..x.count(k))
                    .filter(|&i| {
                        let s = ChainValue::simplex(k, i);
                        let mut lhs = self.images[k][i].boundary(y);
                        if k > 0 {
                            lhs.add_scaled(&self.apply(&s.boundary(x)), 1);
                        }
                        lhs != f.apply(&s).minus(&g.apply(&s))
                    })
                    .count()
            })
            .sum()
    }

    /// `h*θ = θ ∘ h`, lowering the degree by one.
    pub fn pullback(&self, theta: &Cochain) -> Result<Cochain> {
        let k = theta.degree.checked_sub(1).filter(|&k| k < self.images.len()).ok_or(Error::Degree {
            degree: theta.degree,
            dim: self.images.len(),
        })?;
        Ok(Cochain { degree: k, values: self.images[k].iter().map(|c| c.evaluate(theta)).collect() })
    }
}

/// Prism homotopy between two chain maps `X → Y`, built by filling
/// `c_F(σ) − c_G(σ) − h(∂σ)` degree by degree.
pub fn prism_homotopy(
    c_f: &ChainMap,
    c_g: &ChainMap,
    x: &SimplicialComplex,
    y: &SimplicialComplex,
    options: &FillOptions,
) -> Result<PrismHomotopy> {
    let k_max = c_f.k_max().min(c_g.k_max());
    let mut h = PrismHomotopy { images: Vec::with_capacity(k_max + 1) };
    for k in 0..=k_max {
        let mut level = Vec::with_capacity(x.count(k));
        for i in 0..x.count(k) {
            let s = ChainValue::simplex(k, i);
            let mut z = c_f.apply(&s).minus(&c_g.apply(&s));
            if k > 0 {
                z.add_scaled(&h.apply(&s.boundary(x)), -1);
            }
            level.push(fill_cycle(y, &z, options, x.simplex(k, i))?);
        }
        h.images.push(level);
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qi::{build_chain_map, QuasiIsometry};
    use crate::simplicial::ComplexSpec;
    use rand::{Rng, SeedableRng};

    #[test]
    fn equal_maps_give_zero() {
        let x = ComplexSpec::Cycle { n: 6 }.build().unwrap();
        let id = ChainMap::identity(&x, 1);
        let h = prism_homotopy(&id, &id, &x, &x, &FillOptions::default()).unwrap();
        assert!(h.images.iter().flatten().all(|c| c.is_zero()));
    }

    #[test]
    fn rotation_on_c6() {
        let x = ComplexSpec::Cycle { n: 6 }.build().unwrap();
        let id = ChainMap::identity(&x, 1);
        let rot = QuasiIsometry::measure(&x, &x, (0..6).map(|i| (i + 1) % 6).collect(), None).unwrap();
        let c_rot = build_chain_map(&rot, &x, &x, 1, &FillOptions::default()).unwrap();
        let h = prism_homotopy(&id, &c_rot, &x, &x, &FillOptions::default()).unwrap();
        for v in 0..6 {
            let e = x.find_oriented(&[(v + 1) % 6, v]).unwrap();
            assert_eq!(h.images[0][v], ChainValue::from_terms(1, [(e.0, e.1 as i64)]));
        }
        assert_eq!(h.identity_defects(&id, &c_rot, &x, &x), 0);
    }

    #[test]
    fn random_pair_on_disk() {
        let x = ComplexSpec::GridDisk { m: 3 }.build().unwrap();
        let y = ComplexSpec::GridDisk { m: 5 }.build().unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let base: Vec<usize> = (0..16).map(|v| (v / 4) * 6 + (v % 4)).collect();
        let jitter = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<usize> {
            base.iter()
                .map(|&w| {
                    let (i, j) = (w / 6, w % 6);
                    let i = (i + rng.random_range(0..2)).min(5);
                    let j = (j + rng.random_range(0..2)).min(5);
                    i * 6 + j
                })
                .collect()
        };
        let opts = FillOptions { radius_budget: 5, ..Default::default() };
        let f = QuasiIsometry::measure(&x, &y, jitter(&mut rng), None).unwrap();
        let g = QuasiIsometry::measure(&x, &y, jitter(&mut rng), None).unwrap();
        let cf = build_chain_map(&f, &x, &y, 2, &opts).unwrap();
        let cg = build_chain_map(&g, &x, &y, 2, &opts).unwrap();
        let h = prism_homotopy(&cf, &cg, &x, &y, &opts).unwrap();
        assert_eq!(h.identity_defects(&cf, &cg, &x, &y), 0);
    }
}
