use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Cochain, SimplicialComplex};

/// A finite integer combination of `k`-simplices, keyed by simplex index.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainValue {
    pub degree: usize,
    terms: BTreeMap<usize, i64>,
}

impl ChainValue {
    pub fn zero(degree: usize) -> Self {
        ChainValue { degree, terms: BTreeMap::new() }
    }

    pub fn simplex(degree: usize, index: usize) -> Self {
        Self::from_terms(degree, [(index, 1)])
    }

    pub fn from_terms(degree: usize, terms: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let mut c = Self::zero(degree);
        for (i, v) in terms {
            c.add_term(i, v);
        }
        c
    }

    pub fn add_term(&mut self, index: usize, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let e = self.terms.entry(index).or_insert(0);
        *e += coeff;
        if *e == 0 {
            self.terms.remove(&index);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.terms.iter().map(|(&i, &v)| (i, v))
    }

    pub fn coefficient(&self, index: usize) -> i64 {
        self.terms.get(&index).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `‖c‖_∞`.
    pub fn sup_norm(&self) -> i64 {
        self.terms.values().map(|v| v.abs()).max().unwrap_or(0)
    }

    /// `ℓ(c)`, the support size.
    pub fn length(&self) -> usize {
        self.terms.len()
    }

    pub fn add_scaled(&mut self, other: &ChainValue, factor: i64) {
        debug_assert_eq!(self.degree, other.degree);
        for (i, v) in other.terms() {
            self.add_term(i, factor * v);
        }
    }

    pub fn plus(&self, other: &ChainValue) -> ChainValue {
        let mut c = self.clone();
        c.add_scaled(other, 1);
        c
    }

    pub fn minus(&self, other: &ChainValue) -> ChainValue {
        let mut c = self.clone();
        c.add_scaled(other, -1);
        c
    }

    /// Simplicial boundary in `complex`.
    pub fn boundary(&self, complex: &SimplicialComplex) -> ChainValue {
        let mut out = ChainValue::zero(self.degree.saturating_sub(1));
        if self.degree == 0 {
            return out;
        }
        for (i, v) in self.terms() {
            for &(f, s) in complex.faces(self.degree, i) {
                out.add_term(f, v * s as i64);
            }
        }
        out
    }

    /// Pairing `θ(c)` with a cochain of the same degree.
    pub fn evaluate(&self, theta: &Cochain) -> f64 {
        self.terms().map(|(i, v)| v as f64 * theta.values[i]).sum()
    }

    /// Vertices touched by the support.
    pub fn vertices(&self, complex: &SimplicialComplex) -> Vec<usize> {
        let mut vs: Vec<usize> =
            self.support().flat_map(|i| complex.simplex(self.degree, i).iter().copied()).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::ComplexSpec;

    #[test]
    fn boundary_of_boundary() {
        let x = ComplexSpec::FilledTriangle.build().unwrap();
        let t = ChainValue::simplex(2, 0);
        let b = t.boundary(&x);
        assert_eq!(b.length(), 3);
        assert_eq!(b.sup_norm(), 1);
        assert!(b.boundary(&x).is_zero());
    }

    #[test]
    fn cancellation_drops_terms() {
        let mut c = ChainValue::from_terms(1, [(0, 2), (3, -1)]);
        c.add_term(0, -2);
        assert_eq!(c.length(), 1);
        assert_eq!(c.support().collect::<Vec<_>>(), vec![3]);
    }
}
