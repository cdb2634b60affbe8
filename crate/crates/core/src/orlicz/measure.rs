use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub id: u64,
    pub weight: f64,
}

/// A finite list of weighted atoms: counting measure or quadrature cells.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasureSpec", into = "MeasureSpec")]
pub struct MeasureSpace {
    atoms: Vec<Atom>,
    total_mass: f64,
}

impl MeasureSpace {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        if let Some(a) = atoms.iter().find(|a| !(a.weight.is_finite() && a.weight > 0.0)) {
            return Err(Error::input(format!("atom {} has non-positive weight {}", a.id, a.weight)));
        }
        let total_mass = atoms.iter().map(|a| a.weight).sum();
        Ok(Self { atoms, total_mass })
    }

    /// Counting measure on `n` atoms.
    pub fn counting(n: usize) -> Self {
        Self {
            atoms: (0..n as u64).map(|id| Atom { id, weight: 1.0 }).collect(),
            total_mass: n as f64,
        }
    }

    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        Self::new(
            weights.iter().enumerate().map(|(i, &w)| Atom { id: i as u64, weight: w }).collect(),
        )
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    pub fn weights(&self) -> Vec<f64> {
        self.atoms.iter().map(|a| a.weight).collect()
    }

    pub(crate) fn check_function(&self, f: &[f64]) -> Result<()> {
        if f.len() != self.atoms.len() {
            return Err(Error::input(format!(
                "function has {} values but the space has {} atoms",
                f.len(),
                self.atoms.len()
            )));
        }
        if let Some(i) = f.iter().position(|v| !v.is_finite()) {
            return Err(Error::input(format!("function value at atom {i} is not finite")));
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct MeasureSpec {
    atoms: Vec<(u64, f64)>,
    #[serde(default)]
    total_mass: Option<f64>,
}

impl TryFrom<MeasureSpec> for MeasureSpace {
    type Error = Error;

    fn try_from(spec: MeasureSpec) -> Result<Self> {
        let space =
            MeasureSpace::new(spec.atoms.into_iter().map(|(id, weight)| Atom { id, weight }).collect())?;
        if let Some(m) = spec.total_mass {
            if (m - space.total_mass).abs() > 1e-12 * space.total_mass.max(1.0) {
                return Err(Error::input(format!(
                    "declared total mass {m} differs from the sum of weights {}",
                    space.total_mass
                )));
            }
        }
        Ok(space)
    }
}

impl From<MeasureSpace> for MeasureSpec {
    fn from(m: MeasureSpace) -> Self {
        MeasureSpec {
            atoms: m.atoms.iter().map(|a| (a.id, a.weight)).collect(),
            total_mass: Some(m.total_mass),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_must_be_positive() {
        assert!(MeasureSpace::from_weights(&[1.0, 0.0]).is_err());
        assert!(MeasureSpace::from_weights(&[1.0, -2.0]).is_err());
        let m = MeasureSpace::from_weights(&[0.25, 0.5]).unwrap();
        assert_eq!(m.total_mass(), 0.75);
    }

    #[test]
    fn json_schema() {
        let m: MeasureSpace =
            serde_json::from_str(r#"{"atoms": [[0, 0.5], [7, 1.5]]}"#).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m.total_mass(), 2.0);
        let bad = serde_json::from_str::<MeasureSpace>(r#"{"atoms": [[0, 0.5]], "total_mass": 3}"#);
        assert!(bad.is_err());
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(serde_json::from_str::<MeasureSpace>(&text).unwrap(), m);
    }
}
