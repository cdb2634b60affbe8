use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Cell-centred tensor grid: along axis `a` the samples sit at
/// `lo[a] + (i + ½)·h[a]`, `h[a] = (hi[a] − lo[a]) / counts[a]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub counts: Vec<usize>,
    pub periodic: Vec<bool>,
}

impl Grid {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, counts: Vec<usize>, periodic: Vec<bool>) -> Result<Self> {
        let n = lo.len();
        if n == 0 || hi.len() != n || counts.len() != n || periodic.len() != n {
            return Err(Error::input("grid axes disagree in length"));
        }
        for a in 0..n {
            if !(hi[a] > lo[a]) || !lo[a].is_finite() || !hi[a].is_finite() {
                return Err(Error::input(format!("axis {a} has an empty extent")));
            }
            if counts[a] < 4 {
                return Err(Error::input(format!("axis {a} needs at least 4 samples")));
            }
        }
        Ok(Grid { lo, hi, counts, periodic })
    }

    /// `count^n` cube `[lo, hi]^n`.
    pub fn cube(n: usize, lo: f64, hi: f64, count: usize, periodic: bool) -> Result<Self> {
        Self::new(vec![lo; n], vec![hi; n], vec![count; n], vec![periodic; n])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        (self.hi[axis] - self.lo[axis]) / self.counts[axis] as f64
    }

    pub fn cell_volume(&self) -> f64 {
        (0..self.dim()).map(|a| self.spacing(a)).product()
    }

    pub fn coord(&self, axis: usize, i: usize) -> f64 {
        self.lo[axis] + (i as f64 + 0.5) * self.spacing(axis)
    }

    /// Row-major: the last axis varies fastest.
    pub fn multi_index(&self, mut idx: usize) -> Vec<usize> {
        let mut m = vec![0; self.dim()];
        for a in (0..self.dim()).rev() {
            m[a] = idx % self.counts[a];
            idx /= self.counts[a];
        }
        m
    }

    pub fn flat_index(&self, m: &[usize]) -> usize {
        m.iter().zip(&self.counts).fold(0, |acc, (&i, &c)| acc * c + i)
    }

    pub fn stride(&self, axis: usize) -> usize {
        self.counts[axis + 1..].iter().product()
    }

    pub fn point(&self, idx: usize) -> Vec<f64> {
        self.multi_index(idx).iter().enumerate().map(|(a, &i)| self.coord(a, i)).collect()
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }

    /// Four-point Lagrange stencil along one axis: node indices and weights.
    /// Non-periodic axes clamp the stencil (extrapolating outside).
    pub fn stencil(&self, axis: usize, x: f64) -> ([usize; 4], [f64; 4]) {
        let n = self.counts[axis];
        let s = (x - self.lo[axis]) / self.spacing(axis) - 0.5;
        let mut base = s.floor() as i64 - 1;
        if !self.periodic[axis] {
            base = base.clamp(0, n as i64 - 4);
        }
        let mut nodes = [0usize; 4];
        let mut weights = [0.0; 4];
        for m in 0..4 {
            let j = base + m as i64;
            nodes[m] = j.rem_euclid(n as i64) as usize;
            let mut w = 1.0;
            for l in 0..4 {
                if l != m {
                    w *= (s - (base + l as i64) as f64) / (m as f64 - l as f64);
                }
            }
            weights[m] = w;
        }
        (nodes, weights)
    }

    /// True when `x` lies inside the sampled box (always true on periodic axes).
    pub fn contains(&self, x: &[f64]) -> bool {
        (0..self.dim()).all(|a| self.periodic[a] || (x[a] >= self.lo[a] && x[a] <= self.hi[a]))
    }

    /// The sub-grid of `counts` cells starting at multi-index `start`
    /// (which may run past the ends of periodic axes).
    pub fn subgrid(&self, start: &[i64], counts: &[usize]) -> Result<Grid> {
        let n = self.dim();
        let mut lo = vec![0.0; n];
        let mut hi = vec![0.0; n];
        for a in 0..n {
            if !self.periodic[a] && (start[a] < 0 || start[a] as usize + counts[a] > self.counts[a]) {
                return Err(Error::Coverage(format!("sub-grid leaves axis {a}")));
            }
            let h = self.spacing(a);
            lo[a] = self.lo[a] + start[a] as f64 * h;
            hi[a] = lo[a] + counts[a] as f64 * h;
        }
        Grid::new(lo, hi, counts.to_vec(), vec![false; n])
    }
}

/// `C(n, k)`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Increasing `k`-subsets of `0..n` in lexicographic order; the component
/// order of every discrete form.
pub fn basis(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

pub fn component_index(n: usize, subset: &[usize]) -> Option<usize> {
    basis(n, subset.len()).iter().position(|s| s == subset)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_roundtrip() {
        let g = Grid::new(vec![0.0, -1.0], vec![1.0, 1.0], vec![5, 7], vec![false, true]).unwrap();
        for i in 0..g.len() {
            assert_eq!(g.flat_index(&g.multi_index(i)), i);
        }
        assert_eq!(g.stride(0), 7);
        assert!((g.coord(0, 0) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn cubic_interpolation_is_exact_for_cubics() {
        let g = Grid::cube(1, 0.0, 1.0, 10, false).unwrap();
        let f = |x: f64| 2.0 * x * x * x - x + 0.5;
        for &x in &[0.0, 0.013, 0.5, 0.77, 1.0] {
            let (nodes, w) = g.stencil(0, x);
            let v: f64 = nodes.iter().zip(&w).map(|(&j, w)| w * f(g.coord(0, j))).sum();
            assert!((v - f(x)).abs() < 1e-12);
        }
        let p = Grid::cube(1, 0.0, 1.0, 16, true).unwrap();
        let (nodes, _) = p.stencil(0, 0.01);
        assert_eq!(nodes, [14, 15, 0, 1]);
    }

    #[test]
    fn bases() {
        assert_eq!(basis(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(basis(2, 3).len(), 0);
        assert_eq!(component_index(3, &[0, 2]), Some(1));
    }
}
