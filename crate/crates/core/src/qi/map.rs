use serde::{Deserialize, Serialize};

use crate::simplicial::SimplicialComplex;
use crate::{Error, Result};

/// All-pairs graph distances on the 1-skeleton.
#[derive(Clone, Debug)]
pub struct GraphMetric {
    dist: Vec<Vec<usize>>,
}

impl GraphMetric {
    pub fn new(complex: &SimplicialComplex) -> Self {
        GraphMetric { dist: (0..complex.n_vertices()).map(|v| complex.distances_from(&[v])).collect() }
    }

    pub fn d(&self, a: usize, b: usize) -> usize {
        self.dist[a][b]
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }
}

/// A vertex map with measured quasi-isometry constants.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuasiIsometry {
    pub map: Vec<usize>,
    pub lambda: f64,
    pub epsilon: f64,
    #[serde(default)]
    pub quasi_inverse: Option<Vec<usize>>,
}

impl QuasiIsometry {
    /// Measures `λ` and `ε` over all vertex pairs: `λ` is the largest
    /// expansion `d_Y/d_X` (at least 1) and `ε` the smallest additive error
    /// making `d_X/λ − ε ≤ d_Y` hold.
    pub fn measure(
        x: &SimplicialComplex,
        y: &SimplicialComplex,
        map: Vec<usize>,
        quasi_inverse: Option<Vec<usize>>,
    ) -> Result<Self> {
        if map.len() != x.n_vertices() {
            return Err(Error::input(format!("vertex map has {} entries for {} vertices", map.len(), x.n_vertices())));
        }
        if let Some(&v) = map.iter().find(|&&v| v >= y.n_vertices()) {
            return Err(Error::input(format!("image vertex {v} is not in the target")));
        }
        if let Some(inv) = &quasi_inverse {
            if inv.len() != y.n_vertices() || inv.iter().any(|&v| v >= x.n_vertices()) {
                return Err(Error::input("quasi-inverse does not match the complexes"));
            }
        }
        let (mx, my) = (GraphMetric::new(x), GraphMetric::new(y));
        let (lambda, epsilon) = distortion(&mx, &my, &map)?;
        Ok(QuasiIsometry { map, lambda, epsilon, quasi_inverse })
    }

    /// The declared quasi-inverse, or a nearest-preimage one.
    pub fn inverse_map(&self, x: &SimplicialComplex, y: &SimplicialComplex) -> Vec<usize> {
        if let Some(inv) = &self.quasi_inverse {
            return inv.clone();
        }
        let my = GraphMetric::new(y);
        (0..y.n_vertices())
            .map(|w| (0..x.n_vertices()).min_by_key(|&v| (my.d(self.map[v], w), v)).unwrap_or(0))
            .collect()
    }

    /// Measured constants hold on every pair.
    pub fn satisfies_bounds(&self, x: &SimplicialComplex, y: &SimplicialComplex) -> bool {
        let (mx, my) = (GraphMetric::new(x), GraphMetric::new(y));
        (0..mx.len()).all(|a| {
            (0..mx.len()).all(|b| {
                let (dx, dy) = (mx.d(a, b) as f64, my.d(self.map[a], self.map[b]) as f64);
                dx / self.lambda - self.epsilon <= dy + 1e-12 && dy <= self.lambda * dx + self.epsilon + 1e-12
            })
        })
    }
}

fn distortion(mx: &GraphMetric, my: &GraphMetric, map: &[usize]) -> Result<(f64, f64)> {
    let n = mx.len();
    let mut lambda: f64 = 1.0;
    for a in 0..n {
        for b in a + 1..n {
            let dx = mx.d(a, b);
            let dy = my.d(map[a], map[b]);
            if dx == usize::MAX || dy == usize::MAX {
                if dx != dy {
                    return Err(Error::input("the map does not respect connected components"));
                }
                continue;
            }
            lambda = lambda.max(dy as f64 / dx as f64);
        }
    }
    let mut epsilon: f64 = 0.0;
    for a in 0..n {
        for b in a + 1..n {
            let dx = mx.d(a, b);
            if dx == usize::MAX {
                continue;
            }
            epsilon = epsilon.max(dx as f64 / lambda - my.d(map[a], map[b]) as f64);
        }
    }
    Ok((lambda, epsilon))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::ComplexSpec;

    #[test]
    fn circle_maps() {
        let c6 = ComplexSpec::Cycle { n: 6 }.build().unwrap();
        let c10 = ComplexSpec::Cycle { n: 10 }.build().unwrap();
        let f = QuasiIsometry::measure(&c6, &c10, vec![0, 2, 3, 5, 7, 8], None).unwrap();
        assert_eq!(f.lambda, 2.0);
        assert!(f.satisfies_bounds(&c6, &c10));
        let id = QuasiIsometry::measure(&c6, &c6, (0..6).collect(), None).unwrap();
        assert_eq!((id.lambda, id.epsilon), (1.0, 0.0));
        let inv = f.inverse_map(&c6, &c10);
        assert!((0..6).all(|v| inv[f.map[v]] == v));
    }
}
