use serde::{Deserialize, Serialize};

use super::{Cochain, SimplicialComplex};
use crate::{Error, Result};

/// A boundary point modelled by a geodesic ray from a base vertex. The
/// combinatorial Busemann value of a vertex is `d(x, v₀) − 2·d(x, ray)`; a
/// simplex takes the minimum over its vertices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPointModel {
    pub ray: Vec<usize>,
}

impl BoundaryPointModel {
    pub fn new(complex: &SimplicialComplex, ray: Vec<usize>) -> Result<Self> {
        if ray.is_empty() {
            return Err(Error::NotAPath("empty ray".into()));
        }
        if let Some(&v) = ray.iter().find(|&&v| v >= complex.n_vertices()) {
            return Err(Error::NotAPath(format!("vertex {v} is not in the complex")));
        }
        if let Some(w) = ray.windows(2).find(|w| !complex.neighbors(w[0]).contains(&w[1])) {
            return Err(Error::NotAPath(format!("{} and {} are not adjacent", w[0], w[1])));
        }
        Ok(BoundaryPointModel { ray })
    }

    pub fn base(&self) -> usize {
        self.ray[0]
    }

    pub fn vertex_values(&self, complex: &SimplicialComplex) -> Vec<f64> {
        let from_base = complex.distances_from(&[self.base()]);
        let from_ray = complex.distances_from(&self.ray);
        from_base
            .iter()
            .zip(&from_ray)
            .map(|(&a, &b)| if a == usize::MAX { f64::NEG_INFINITY } else { a as f64 - 2.0 * b as f64 })
            .collect()
    }

    /// Busemann values of all `k`-simplices.
    pub fn simplex_values(&self, complex: &SimplicialComplex, k: usize) -> Vec<f64> {
        let v = self.vertex_values(complex);
        complex.simplices(k).iter().map(|s| s.iter().map(|&u| v[u]).fold(f64::INFINITY, f64::min)).collect()
    }
}

/// Per-degree membership flags of a horoball neighbourhood.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimplexMask {
    pub threshold: f64,
    pub masked: Vec<Vec<bool>>,
}

impl SimplexMask {
    pub fn contains(&self, k: usize, i: usize) -> bool {
        self.masked.get(k).is_some_and(|m| m[i])
    }

    pub fn count(&self) -> usize {
        self.masked.iter().flatten().filter(|&&b| b).count()
    }

    /// `θ(σ) = 0` for every masked `σ`.
    pub fn vanishes(&self, theta: &Cochain) -> bool {
        theta.values.iter().enumerate().all(|(i, &v)| v == 0.0 || !self.contains(theta.degree, i))
    }

    /// Zeroes the masked values, projecting onto the relative cochains.
    pub fn restrict(&self, theta: &Cochain) -> Cochain {
        let values =
            theta.values.iter().enumerate().map(|(i, &v)| if self.contains(theta.degree, i) { 0.0 } else { v }).collect();
        Cochain { degree: theta.degree, values }
    }

    pub fn is_subset_of(&self, other: &SimplexMask) -> bool {
        self.masked.iter().zip(&other.masked).all(|(a, b)| a.iter().zip(b).all(|(&x, &y)| !x || y))
    }
}

/// Simplices whose Busemann value exceeds `t`. Faces have values at least
/// that of the simplex, so the mask is face-closed and `θ` vanishing on it
/// implies `δθ` vanishing on it.
pub fn relative_mask(complex: &SimplicialComplex, xi: &BoundaryPointModel, t: f64) -> Result<SimplexMask> {
    if t.is_nan() {
        return Err(Error::input("horoparameter is NaN"));
    }
    BoundaryPointModel::new(complex, xi.ray.clone())?;
    let masked = (0..=complex.dim()).map(|k| xi.simplex_values(complex, k).iter().map(|&b| b > t).collect()).collect();
    Ok(SimplexMask { threshold: t, masked })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::ComplexSpec;

    #[test]
    fn ray_masks() {
        let x = ComplexSpec::Path { n: 100 }.build().unwrap();
        let xi = BoundaryPointModel::new(&x, (0..100).collect()).unwrap();
        assert_eq!(relative_mask(&x, &xi, f64::INFINITY).unwrap().count(), 0);
        assert_eq!(relative_mask(&x, &xi, f64::NEG_INFINITY).unwrap().count(), 199);
        let m = relative_mask(&x, &xi, 50.0).unwrap();
        assert!((0..100).all(|v| m.contains(0, v) == (v > 50)));
        assert!((0..99).all(|e| m.contains(1, e) == (e >= 51)));
    }

    #[test]
    fn non_path_ray() {
        let x = ComplexSpec::Path { n: 5 }.build().unwrap();
        assert!(matches!(BoundaryPointModel::new(&x, vec![0, 2]), Err(Error::NotAPath(_))));
    }

    #[test]
    fn delta_stable() {
        let x = ComplexSpec::GridDisk { m: 6 }.build().unwrap();
        // the diagonal of the grid square
        let ray: Vec<usize> = (0..7).map(|i| i * 7 + i).collect();
        let xi = BoundaryPointModel::new(&x, ray).unwrap();
        let m = relative_mask(&x, &xi, 3.0).unwrap();
        let theta = m.restrict(&Cochain { degree: 0, values: (0..x.count(0)).map(|i| i as f64).collect() });
        assert!(m.vanishes(&theta));
        assert!(m.vanishes(&x.coboundary(&theta).unwrap()));
    }
}
