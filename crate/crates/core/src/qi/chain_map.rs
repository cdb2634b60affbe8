use rand::Rng;
use serde::{Deserialize, Serialize};

use super::filling::{fill_cycle, FillOptions};
use super::{GraphMetric, QuasiIsometry};
use crate::orlicz::YoungFunction;
use crate::simplicial::{cochain_norm, ChainValue, Cochain, SimplicialComplex};
use crate::{Error, Result};

/// `σ ↦ c_F(σ)` in every degree up to `k_max`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainMap {
    pub vertex_map: Vec<usize>,
    pub images: Vec<Vec<ChainValue>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainConstants {
    pub degree: usize,
    /// `N_k = max ‖c_F(σ)‖_∞`.
    pub sup_coefficient: i64,
    /// `L_k = max ℓ(c_F(σ))`.
    pub max_length: usize,
    /// Largest number of `σ` whose image contains a given target simplex.
    pub multiplicity: usize,
    /// Largest Hausdorff distance between the vertices of `c_F(σ)` and `F(σ)`.
    pub hausdorff: usize,
}

impl ChainMap {
    pub fn identity(x: &SimplicialComplex, k_max: usize) -> Self {
        ChainMap {
            vertex_map: (0..x.n_vertices()).collect(),
            images: (0..=k_max.min(x.dim())).map(|k| (0..x.count(k)).map(|i| ChainValue::simplex(k, i)).collect()).collect(),
        }
    }

    pub fn k_max(&self) -> usize {
        self.images.len() - 1
    }

    pub fn image(&self, k: usize, i: usize) -> &ChainValue {
        &self.images[k][i]
    }

    /// Extends linearly to an arbitrary chain.
    pub fn apply(&self, chain: &ChainValue) -> ChainValue {
        let mut out = ChainValue::zero(chain.degree);
        for (i, v) in chain.terms() {
            out.add_scaled(&self.images[chain.degree][i], v);
        }
        out
    }

    /// `then ∘ self`.
    pub fn compose(&self, then: &ChainMap) -> ChainMap {
        let k_max = self.k_max().min(then.k_max());
        ChainMap {
            vertex_map: self.vertex_map.iter().map(|&v| then.vertex_map[v]).collect(),
            images: (0..=k_max).map(|k| self.images[k].iter().map(|c| then.apply(c)).collect()).collect(),
        }
    }

    /// Number of simplices with `∂c_F(σ) ≠ c_F(∂σ)`.
    pub fn commutation_defects(&self, x: &SimplicialComplex, y: &SimplicialComplex) -> usize {
        (1..=self.k_max())
            .map(|k| {
                (0..x.count(k))
                    .filter(|&i| {
                        let lhs = self.images[k][i].boundary(y);
                        let rhs = self.apply(&ChainValue::simplex(k, i).boundary(x));
                        lhs != rhs
                    })
                    .count()
            })
            .sum()
    }

    pub fn constants(&self, x: &SimplicialComplex, y: &SimplicialComplex) -> Vec<ChainConstants> {
        let my = GraphMetric::new(y);
        (0..=self.k_max())
            .map(|k| {
                let mut hits = vec![0usize; y.count(k)];
                let mut c = ChainConstants { degree: k, sup_coefficient: 0, max_length: 0, multiplicity: 0, hausdorff: 0 };
                for (i, img) in self.images[k].iter().enumerate() {
                    c.sup_coefficient = c.sup_coefficient.max(img.sup_norm());
                    c.max_length = c.max_length.max(img.length());
                    for t in img.support() {
                        hits[t] += 1;
                    }
                    let fs: Vec<usize> = x.simplex(k, i).iter().map(|&v| self.vertex_map[v]).collect();
                    let cs = img.vertices(y);
                    if !cs.is_empty() {
                        let one_sided = |a: &[usize], b: &[usize]| {
                            a.iter().map(|&p| b.iter().map(|&q| my.d(p, q)).min().unwrap_or(0)).max().unwrap_or(0)
                        };
                        c.hausdorff = c.hausdorff.max(one_sided(&fs, &cs)).max(one_sided(&cs, &fs));
                    }
                }
                c.multiplicity = hits.into_iter().max().unwrap_or(0);
                c
            })
            .collect()
    }
}

/// Builds `c_F` degree by degree: vertices to vertices, edges to shortest
/// paths, higher simplices to fillings of `c_F(∂σ)`.
pub fn build_chain_map(
    f: &QuasiIsometry,
    x: &SimplicialComplex,
    y: &SimplicialComplex,
    k_max: usize,
    options: &FillOptions,
) -> Result<ChainMap> {
    if f.map.len() != x.n_vertices() {
        return Err(Error::input("vertex map does not match the source complex"));
    }
    let k_max = k_max.min(x.dim());
    let mut map = ChainMap { vertex_map: f.map.clone(), images: Vec::with_capacity(k_max + 1) };
    map.images.push(f.map.iter().map(|&w| ChainValue::simplex(0, w)).collect());
    for k in 1..=k_max {
        let mut level = Vec::with_capacity(x.count(k));
        for i in 0..x.count(k) {
            let z = map.apply(&ChainValue::simplex(k, i).boundary(x));
            level.push(fill_cycle(y, &z, options, x.simplex(k, i))?);
        }
        map.images.push(level);
    }
    Ok(map)
}

/// `F*θ = θ ∘ c_F`.
pub fn pullback(theta: &Cochain, c_f: &ChainMap) -> Result<Cochain> {
    let k = theta.degree;
    if k > c_f.k_max() {
        return Err(Error::Degree { degree: k, dim: c_f.k_max() });
    }
    Ok(Cochain { degree: k, values: c_f.images[k].iter().map(|c| c.evaluate(theta)).collect() })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PullbackBoundReport {
    pub degree: usize,
    pub trials: usize,
    pub worst_ratio: f64,
    /// `N_k · max(D_k, L_k)`.
    pub bound: f64,
    pub violations: usize,
    /// `δF*θ = F*δθ` held exactly on integer-valued trials.
    pub commutes_with_delta: bool,
}

/// Random check of `‖F*θ‖_φ ≤ N_k·max(D_k, L_k)·‖θ‖_φ`.
///
/// `F*θ(σ)` is a sum of at most `L` terms with coefficients at most `N`,
/// and each target simplex feeds at most `D` source simplices, so
/// convexity gives `‖F*θ‖_φ ≤ LN‖θ‖_{(D/L)φ} ≤ N·max(D, L)‖θ‖_φ`.
#[allow(clippy::too_many_arguments)]
pub fn pullback_bound_report(
    phi: &YoungFunction,
    c_f: &ChainMap,
    x: &SimplicialComplex,
    y: &SimplicialComplex,
    degree: usize,
    trials: usize,
    rng: &mut impl Rng,
    tol: f64,
) -> Result<PullbackBoundReport> {
    let consts = c_f.constants(x, y);
    let c = consts.get(degree).ok_or(Error::Degree { degree, dim: c_f.k_max() })?;
    let bound = c.sup_coefficient as f64 * c.multiplicity.max(c.max_length) as f64;
    let mut report = PullbackBoundReport { degree, trials, worst_ratio: 0.0, bound, violations: 0, commutes_with_delta: true };
    for _ in 0..trials {
        let theta = Cochain { degree, values: (0..y.count(degree)).map(|_| rng.random_range(-1.0..1.0)).collect() };
        let n = cochain_norm(phi, &theta, tol);
        if n > 0.0 {
            let ratio = cochain_norm(phi, &pullback(&theta, c_f)?, tol) / n;
            report.worst_ratio = report.worst_ratio.max(ratio);
            if ratio > bound * (1.0 + 1e-8) {
                report.violations += 1;
            }
        }
        if degree < c_f.k_max() {
            let int = Cochain { degree, values: (0..y.count(degree)).map(|_| rng.random_range(-50i32..=50) as f64).collect() };
            let lhs = x.coboundary(&pullback(&int, c_f)?)?;
            let rhs = pullback(&y.coboundary(&int)?, c_f)?;
            report.commutes_with_delta &= lhs == rhs;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qi::FillOrder;
    use crate::simplicial::ComplexSpec;

    #[test]
    fn identity_and_rotation() {
        let c6 = ComplexSpec::Cycle { n: 6 }.build().unwrap();
        let id = QuasiIsometry::measure(&c6, &c6, (0..6).collect(), None).unwrap();
        let c = build_chain_map(&id, &c6, &c6, 1, &FillOptions::default()).unwrap();
        assert_eq!(c, ChainMap::identity(&c6, 1));
        let rot = QuasiIsometry::measure(&c6, &c6, (0..6).map(|i| (i + 1) % 6).collect(), None).unwrap();
        let c = build_chain_map(&rot, &c6, &c6, 1, &FillOptions::default()).unwrap();
        assert!(c.images[1].iter().all(|e| e.length() == 1 && e.sup_norm() == 1));
        assert_eq!(c.commutation_defects(&c6, &c6), 0);
    }

    #[test]
    fn doubling_map() {
        let c6 = ComplexSpec::Cycle { n: 6 }.build().unwrap();
        let c12 = ComplexSpec::Cycle { n: 12 }.build().unwrap();
        let f = QuasiIsometry::measure(&c6, &c12, (0..6).map(|i| 2 * i).collect(), None).unwrap();
        let c = build_chain_map(&f, &c6, &c12, 1, &FillOptions::default()).unwrap();
        let consts = c.constants(&c6, &c12);
        assert_eq!(consts[1].max_length, 2);
        assert_eq!(consts[1].sup_coefficient, 1);
        assert_eq!(c.commutation_defects(&c6, &c12), 0);
        // indicator of the Y-edge {2,3} pulls back to the indicator of {1,2}
        let e = c12.find(&[2, 3]).unwrap();
        let mut theta = Cochain::zeros(&c12, 1);
        theta.values[e] = 1.0;
        let pulled = pullback(&theta, &c).unwrap();
        let target = c6.find(&[1, 2]).unwrap();
        for (i, v) in pulled.values.iter().enumerate() {
            assert_eq!(*v, if i == target { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn disk_fillings_commute() {
        let x = ComplexSpec::GridDisk { m: 3 }.build().unwrap();
        let y = ComplexSpec::GridDisk { m: 6 }.build().unwrap();
        let map: Vec<usize> = (0..16).map(|v| (v / 4) * 2 * 7 + (v % 4) * 2).collect();
        let f = QuasiIsometry::measure(&x, &y, map, None).unwrap();
        for order in [FillOrder::Lexicographic, FillOrder::Reverse] {
            let c = build_chain_map(&f, &x, &y, 2, &FillOptions { radius_budget: 4, order }).unwrap();
            assert_eq!(c.commutation_defects(&x, &y), 0);
        }
    }
}
