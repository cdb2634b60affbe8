use std::collections::{BTreeSet, HashMap, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::simplicial::{ChainValue, SimplicialComplex};
use crate::{Error, Result};

/// Which candidate simplices the elimination prefers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FillOrder {
    #[default]
    Lexicographic,
    Reverse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FillOptions {
    /// Largest neighbourhood radius searched around a cycle.
    pub radius_budget: usize,
    pub order: FillOrder,
}

impl Default for FillOptions {
    fn default() -> Self {
        FillOptions { radius_budget: 6, order: FillOrder::Lexicographic }
    }
}

/// Breadth-first shortest path as an oriented 1-chain from `a` to `b`.
pub(crate) fn path_chain(y: &SimplicialComplex, a: usize, b: usize, order: FillOrder) -> Option<ChainValue> {
    let mut chain = ChainValue::zero(1);
    if a == b {
        return Some(chain);
    }
    let mut parent = vec![usize::MAX; y.n_vertices()];
    parent[a] = a;
    let mut queue = VecDeque::from([a]);
    while let Some(v) = queue.pop_front() {
        if v == b {
            break;
        }
        let mut nbrs = y.neighbors(v).to_vec();
        nbrs.sort_unstable();
        if order == FillOrder::Reverse {
            nbrs.reverse();
        }
        for w in nbrs {
            if parent[w] == usize::MAX {
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    if parent[b] == usize::MAX {
        return None;
    }
    let mut v = b;
    while v != a {
        let u = parent[v];
        let (e, s) = y.find_oriented(&[u, v])?;
        chain.add_term(e, s as i64);
        v = u;
    }
    Some(chain)
}

/// Finds an integral `k`-chain `c` with `∂c = z` near the support of the
/// `(k−1)`-cycle `z`, enlarging the search radius up to the budget.
/// `label` identifies the simplex being filled in error reports.
pub(crate) fn fill_cycle(
    y: &SimplicialComplex,
    z: &ChainValue,
    options: &FillOptions,
    label: &[usize],
) -> Result<ChainValue> {
    let k = z.degree + 1;
    if z.is_zero() {
        return Ok(ChainValue::zero(k));
    }
    // two-point 0-cycles are paths
    if k == 1 && z.length() == 2 {
        let terms: Vec<_> = z.terms().collect();
        if terms[0].1 == -terms[1].1 && terms[0].1.abs() == 1 {
            let (from, to) = if terms[0].1 < 0 { (terms[0].0, terms[1].0) } else { (terms[1].0, terms[0].0) };
            if let Some(mut p) = path_chain(y, from, to, options.order) {
                // ∂(path from a to b) = b − a
                if p.boundary(y) != *z {
                    p = ChainValue::zero(1).minus(&p);
                }
                if p.boundary(y) == *z {
                    return Ok(p);
                }
            }
        }
    }
    let budget_error = || Error::FillingBudget { simplex: label.to_vec(), radius: options.radius_budget };
    if k > y.dim() {
        return Err(budget_error());
    }
    let sources = z.vertices(y);
    let dist = y.distances_from(&sources);
    for r in 0..=options.radius_budget {
        let mut cols: Vec<usize> =
            (0..y.count(k)).filter(|&i| y.simplex(k, i).iter().all(|&v| dist[v] <= r)).collect();
        if cols.is_empty() {
            continue;
        }
        if options.order == FillOrder::Reverse {
            cols.reverse();
        }
        if let Some(c) = solve_boundary(y, k, &cols, z)? {
            return Ok(c);
        }
    }
    Err(budget_error())
}

/// Solves `∂c = z` with `c` supported on `cols` by Gauss–Jordan elimination
/// over the rationals. Free variables are set to zero, so the solution is
/// supported on pivot columns.
fn solve_boundary(y: &SimplicialComplex, k: usize, cols: &[usize], z: &ChainValue) -> Result<Option<ChainValue>> {
    let mut rows: BTreeSet<usize> = z.support().collect();
    for &c in cols {
        rows.extend(y.faces(k, c).iter().map(|&(f, _)| f));
    }
    let row_of: HashMap<usize, usize> = rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let (m, n) = (rows.len(), cols.len());
    let zero = BigRational::zero();
    let mut a = vec![vec![zero.clone(); n + 1]; m];
    for (j, &c) in cols.iter().enumerate() {
        for &(f, s) in y.faces(k, c) {
            a[row_of[&f]][j] = BigRational::from_integer(BigInt::from(s));
        }
    }
    for (f, v) in z.terms() {
        a[row_of[&f]][n] = BigRational::from_integer(BigInt::from(v));
    }
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..m).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(row, p);
        let inv = BigRational::one() / &a[row][col];
        for x in a[row].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = a[row].clone();
        for (r, other) in a.iter_mut().enumerate() {
            if r != row && !other[col].is_zero() {
                let f = other[col].clone();
                for (x, p) in other.iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *x -= &f * p;
                    }
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m {
            break;
        }
    }
    if a[row..].iter().any(|r| !r[n].is_zero()) {
        return Ok(None);
    }
    let mut chain = ChainValue::zero(k);
    for (i, &col) in pivots.iter().enumerate() {
        let v = &a[i][n];
        if v.is_zero() {
            continue;
        }
        if !v.is_integer() {
            return Err(Error::Construction(format!("filling needs the non-integral coefficient {v}")));
        }
        let v = v.to_integer();
        let v = v.to_i64().filter(|x| x.abs() < 1 << 40).ok_or_else(|| {
            Error::Construction(format!("filling coefficient {} is out of range", v.abs()))
        })?;
        chain.add_term(cols[col], v);
    }
    if chain.boundary(y) != *z {
        return Err(Error::Construction("filling does not bound the cycle".into()));
    }
    Ok(Some(chain))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::ComplexSpec;

    #[test]
    fn paths_and_disks() {
        let y = ComplexSpec::GridDisk { m: 4 }.build().unwrap();
        let p = path_chain(&y, 0, 24, FillOrder::Lexicographic).unwrap();
        assert_eq!(p.length(), 4);
        let mut expect = ChainValue::zero(0);
        expect.add_term(24, 1);
        expect.add_term(0, -1);
        assert_eq!(p.boundary(&y), expect);
        // boundary of a 2×2 block filled by its four... eight triangles
        let square: Vec<usize> = vec![0, 1, 2, 7, 12, 11, 10, 5];
        let mut z = ChainValue::zero(1);
        for i in 0..square.len() {
            let (e, s) = y.find_oriented(&[square[i], square[(i + 1) % square.len()]]).unwrap();
            z.add_term(e, s as i64);
        }
        for order in [FillOrder::Lexicographic, FillOrder::Reverse] {
            let c = fill_cycle(&y, &z, &FillOptions { radius_budget: 3, order }, &[0]).unwrap();
            assert_eq!(c.boundary(&y), z);
            assert_eq!(c.length(), 8);
        }
    }

    #[test]
    fn essential_cycle_cannot_be_filled() {
        let y = ComplexSpec::Cycle { n: 5 }.build().unwrap();
        let mut z = ChainValue::zero(1);
        for i in 0..5 {
            let (e, s) = y.find_oriented(&[i, (i + 1) % 5]).unwrap();
            z.add_term(e, s as i64);
        }
        assert!(matches!(fill_cycle(&y, &z, &FillOptions::default(), &[3]), Err(Error::FillingBudget { .. })));
    }
}
