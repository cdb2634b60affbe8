//! Pointwise multilinear algebra on coefficient vectors in the
//! lexicographic basis of [`super::basis`].

use super::grid::{basis, component_index};

/// Determinant of a small square matrix given row-major.
pub(crate) fn small_det(m: &mut [f64], k: usize) -> f64 {
    match k {
        0 => 1.0,
        1 => m[0],
        2 => m[0] * m[3] - m[1] * m[2],
        _ => {
            let mut det = 1.0;
            for c in 0..k {
                let p = (c..k).max_by(|&a, &b| m[a * k + c].abs().total_cmp(&m[b * k + c].abs())).unwrap_or(c);
                if m[p * k + c] == 0.0 {
                    return 0.0;
                }
                if p != c {
                    for j in 0..k {
                        m.swap(p * k + j, c * k + j);
                    }
                    det = -det;
                }
                det *= m[c * k + c];
                for r in c + 1..k {
                    let f = m[r * k + c] / m[c * k + c];
                    for j in c..k {
                        m[r * k + j] -= f * m[c * k + j];
                    }
                }
            }
            det
        }
    }
}

/// Precomputed `ι_v` on `k`-forms in `n` dimensions.
#[derive(Clone, Debug)]
pub struct Contraction {
    terms: Vec<Vec<(usize, usize, f64)>>,
}

impl Contraction {
    pub fn new(n: usize, k: usize) -> Self {
        assert!(k >= 1 && k <= n, "contraction needs 1 ≤ k ≤ n");
        let terms = basis(n, k - 1)
            .into_iter()
            .map(|sub| {
                (0..n)
                    .filter(|j| !sub.contains(j))
                    .map(|j| {
                        let pos = sub.iter().filter(|&&i| i < j).count();
                        let mut full = sub.clone();
                        full.insert(pos, j);
                        let idx = component_index(n, &full).expect("subset in basis");
                        (j, idx, if pos % 2 == 0 { 1.0 } else { -1.0 })
                    })
                    .collect()
            })
            .collect();
        Contraction { terms }
    }

    #[inline]
    pub fn apply(&self, v: &[f64], coeffs: &[f64], out: &mut [f64]) {
        for (o, terms) in out.iter_mut().zip(&self.terms) {
            *o = terms.iter().map(|&(j, idx, s)| s * v[j] * coeffs[idx]).sum();
        }
    }
}

/// `ι_v ω` for a `k`-form `ω` in `n` dimensions.
pub fn contract(n: usize, k: usize, v: &[f64], coeffs: &[f64], out: &mut [f64]) {
    Contraction::new(n, k).apply(v, coeffs, out)
}

/// `A*η` for a linear map with matrix `a` (row-major `n × n`, rows are
/// output coordinates): `(A*η)_I = Σ_J η_J det A[J, I]`. Supports `k ≤ 4`.
pub fn pullback_linear(n: usize, k: usize, a: &[f64], coeffs: &[f64], out: &mut [f64]) {
    let b = basis(n, k);
    let mut minor = [0.0; 16];
    for (o, cols) in out.iter_mut().zip(&b) {
        let mut acc = 0.0;
        for (eta, rows) in coeffs.iter().zip(&b) {
            if *eta == 0.0 {
                continue;
            }
            for (r, &row) in rows.iter().enumerate() {
                for (c, &col) in cols.iter().enumerate() {
                    minor[r * k + c] = a[row * n + col];
                }
            }
            acc += eta * small_det(&mut minor[..k * k], k);
        }
        *o = acc;
    }
}

/// Value of a `k`-form on vectors `vs` (each of length `n`).
pub fn evaluate_on(n: usize, k: usize, coeffs: &[f64], vs: &[Vec<f64>]) -> f64 {
    let mut minor = vec![0.0; k * k];
    basis(n, k)
        .iter()
        .zip(coeffs)
        .map(|(rows, c)| {
            for (r, &row) in rows.iter().enumerate() {
                for (col, v) in vs.iter().enumerate() {
                    minor[r * k + col] = v[row];
                }
            }
            c * small_det(&mut minor, k)
        })
        .sum()
}
