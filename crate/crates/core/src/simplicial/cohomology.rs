use nalgebra::DMatrix;

use super::{Cochain, SimplicialComplex};
use crate::{Error, Result};

const PRIME: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    r
}

/// Rank of `δ_k` by exact Gaussian elimination over `Z/p`, `p = 2⁶¹ − 1`.
fn coboundary_rank(complex: &SimplicialComplex, k: usize) -> usize {
    let rows = complex.count(k + 1);
    let cols = complex.count(k);
    if rows == 0 || cols == 0 {
        return 0;
    }
    let mut m = vec![vec![0u64; cols]; rows];
    for (i, row) in m.iter_mut().enumerate() {
        for &(f, s) in complex.faces(k + 1, i) {
            row[f] = if s > 0 { 1 } else { PRIME - 1 };
        }
    }
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, p);
        let inv = pow_mod(m[rank][c], PRIME - 2);
        for x in m[rank].iter_mut() {
            *x = mul_mod(*x, inv);
        }
        let pivot = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot).skip(c) {
                    *x = (*x + PRIME - mul_mod(f, y)) % PRIME;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// `dim H^k = dim ker δ_k − rank δ_{k−1}`.
pub fn cohomology_dims(complex: &SimplicialComplex, k: usize) -> Result<usize> {
    if k > complex.dim() {
        return Err(Error::Degree { degree: k, dim: complex.dim() });
    }
    let kernel = complex.count(k) - coboundary_rank(complex, k);
    let image = if k == 0 { 0 } else { coboundary_rank(complex, k - 1) };
    Ok(kernel - image)
}

pub fn euler_characteristic(complex: &SimplicialComplex) -> i64 {
    (0..=complex.dim()).map(|k| if k % 2 == 0 { complex.count(k) as i64 } else { -(complex.count(k) as i64) }).sum()
}

/// Orthonormal harmonic cocycles (`δθ = 0`, `δᵀθ = 0`) spanning `H^k`.
#[derive(Clone, Debug)]
pub struct CohomologyBasis {
    pub degree: usize,
    pub cocycles: Vec<Cochain>,
}

impl CohomologyBasis {
    pub fn dim(&self) -> usize {
        self.cocycles.len()
    }

    /// Coordinates of the class of a closed cochain, together with the
    /// Euclidean size of the part that is not a coboundary (zero up to
    /// round-off for closed input).
    pub fn coordinates(&self, complex: &SimplicialComplex, theta: &Cochain) -> Result<(Vec<f64>, f64)> {
        let coords: Vec<f64> = self
            .cocycles
            .iter()
            .map(|z| z.values.iter().zip(&theta.values).map(|(a, b)| a * b).sum())
            .collect();
        let mut rest = theta.clone();
        for (z, c) in self.cocycles.iter().zip(&coords) {
            rest = rest.sub(&z.scale(*c));
        }
        // what remains must be exact: measure its distance to Im δ_{k-1}
        let off = if self.degree == 0 {
            rest.values.iter().map(|v| v * v).sum::<f64>().sqrt()
        } else {
            let d = complex.coboundary_matrix(self.degree - 1);
            let b = nalgebra::DVector::from_vec(rest.values.clone());
            let x = d.clone().svd(true, true).solve(&b, 1e-12).map_err(|e| Error::Resolution(e.into()))?;
            (&d * x - b).norm()
        };
        Ok((coords, off))
    }
}

pub fn harmonic_basis(complex: &SimplicialComplex, k: usize) -> Result<CohomologyBasis> {
    if k > complex.dim() {
        return Err(Error::Degree { degree: k, dim: complex.dim() });
    }
    let n = complex.count(k);
    let up = complex.coboundary_matrix(k);
    let down = if k == 0 { DMatrix::zeros(0, n) } else { complex.coboundary_matrix(k - 1).transpose() };
    let mut stacked = DMatrix::zeros(up.nrows() + down.nrows(), n);
    stacked.rows_mut(0, up.nrows()).copy_from(&up);
    stacked.rows_mut(up.nrows(), down.nrows()).copy_from(&down);
    let expected = cohomology_dims(complex, k)?;
    if expected == 0 {
        return Ok(CohomologyBasis { degree: k, cocycles: vec![] });
    }
    // null space from the eigenvectors of the Gram matrix
    let gram = stacked.transpose() * &stacked;
    let eig = gram.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let cocycles = order[..expected]
        .iter()
        .map(|&j| Cochain { degree: k, values: eig.eigenvectors.column(j).iter().copied().collect() })
        .collect();
    Ok(CohomologyBasis { degree: k, cocycles })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::ComplexSpec;

    fn dims(spec: ComplexSpec) -> Vec<usize> {
        let x = spec.build().unwrap();
        (0..=x.dim()).map(|k| cohomology_dims(&x, k).unwrap()).collect()
    }

    #[test]
    fn standard_examples() {
        assert_eq!(dims(ComplexSpec::Cycle { n: 6 }), vec![1, 1]);
        assert_eq!(dims(ComplexSpec::FilledTriangle), vec![1, 0, 0]);
        assert_eq!(dims(ComplexSpec::DisjointEdges { count: 2 }), vec![2, 0]);
        assert_eq!(dims(ComplexSpec::Torus7), vec![1, 2, 1]);
        assert_eq!(dims(ComplexSpec::GridTorus { m: 3, n: 4 }), vec![1, 2, 1]);
        assert_eq!(dims(ComplexSpec::Tree { branching: 2, depth: 3 }), vec![1, 0]);
    }

    #[test]
    fn torus7_counts() {
        let x = ComplexSpec::Torus7.build().unwrap();
        assert_eq!((x.count(0), x.count(1), x.count(2)), (7, 21, 14));
        assert_eq!(euler_characteristic(&x), 0);
    }

    #[test]
    fn harmonic_cocycles_are_closed_and_coclosed() {
        let x = ComplexSpec::Torus7.build().unwrap();
        let b = harmonic_basis(&x, 1).unwrap();
        assert_eq!(b.dim(), 2);
        for z in &b.cocycles {
            assert!(x.coboundary(z).unwrap().sup_norm() < 1e-10);
            assert!(x.coboundary_transpose(z).unwrap().sup_norm() < 1e-10);
        }
        // an exact cocycle has zero class
        let f = Cochain { degree: 0, values: (0..7).map(|i| (i * i) as f64).collect() };
        let (c, off) = b.coordinates(&x, &x.coboundary(&f).unwrap()).unwrap();
        assert!(c.iter().all(|v| v.abs() < 1e-9) && off < 1e-9);
    }
}
