use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// An even convex function `φ: ℝ → [0, ∞)` vanishing only at zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "YoungSpec", into = "YoungSpec")]
pub enum YoungFunction {
    /// `|t|^p`, `p ≥ 1`.
    Power { p: f64 },
    /// `|t|^p / log(e + |t|^{-1})^κ`, extended by `0` at `t = 0`.
    LogDamped { p: f64, kappa: f64 },
    /// `K·φ`.
    Scaled { factor: f64, inner: Box<YoungFunction> },
    /// Piecewise-linear convex interpolant through `knots`, starting at
    /// `(0, 0)` and extended past the last knot with the last slope.
    Tabulated { knots: Vec<(f64, f64)> },
}

impl YoungFunction {
    pub fn power(p: f64) -> Result<Self> {
        if !(p.is_finite() && p >= 1.0) {
            return Err(Error::input(format!("power exponent must be >= 1, got {p}")));
        }
        Ok(YoungFunction::Power { p })
    }

    pub fn log_damped(p: f64, kappa: f64) -> Result<Self> {
        if !(p.is_finite() && p > 1.0 && kappa.is_finite() && kappa > 0.0) {
            return Err(Error::input(format!(
                "log-damped family needs p > 1 and kappa > 0, got p={p}, kappa={kappa}"
            )));
        }
        Ok(YoungFunction::LogDamped { p, kappa })
    }

    pub fn scaled(factor: f64, inner: YoungFunction) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::input(format!("scale factor must be positive, got {factor}")));
        }
        Ok(YoungFunction::Scaled { factor, inner: Box::new(inner) })
    }

    pub fn tabulated(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::input("tabulated Young function needs at least two knots"));
        }
        if knots[0] != (0.0, 0.0) {
            return Err(Error::input("tabulated Young function must start at (0, 0)"));
        }
        let mut last_slope = 0.0;
        for w in knots.windows(2) {
            let (t0, v0) = w[0];
            let (t1, v1) = w[1];
            if !(t1.is_finite() && v1.is_finite()) || t1 <= t0 {
                return Err(Error::input("knots must have strictly increasing finite abscissae"));
            }
            if v1 <= 0.0 {
                return Err(Error::input("tabulated values must be positive away from zero"));
            }
            let slope = (v1 - v0) / (t1 - t0);
            if slope < last_slope - 1e-12 * slope.abs().max(1.0) {
                return Err(Error::input("tabulated slopes must be nondecreasing (convexity)"));
            }
            last_slope = slope;
        }
        Ok(YoungFunction::Tabulated { knots })
    }

    /// `K·self`.
    pub fn times(&self, factor: f64) -> Result<Self> {
        Self::scaled(factor, self.clone())
    }

    /// Evaluate `φ(t)`; `t` must be finite.
    pub fn try_eval(&self, t: f64) -> Result<f64> {
        if !t.is_finite() {
            return Err(Error::input(format!("Young function argument must be finite, got {t}")));
        }
        Ok(self.eval(t))
    }

    /// Evaluate `φ(t)` without validating the argument.
    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        let a = t.abs();
        match self {
            YoungFunction::Power { p } => {
                if *p == 2.0 {
                    a * a
                } else if *p == 1.0 {
                    a
                } else {
                    a.powf(*p)
                }
            }
            YoungFunction::LogDamped { p, kappa } => {
                if a == 0.0 {
                    0.0
                } else if a.is_infinite() {
                    f64::INFINITY
                } else {
                    let l = (std::f64::consts::E + 1.0 / a).ln();
                    a.powf(*p) / l.powf(*kappa)
                }
            }
            YoungFunction::Scaled { factor, inner } => factor * inner.eval(a),
            YoungFunction::Tabulated { knots } => {
                let i = knots.partition_point(|k| k.0 <= a);
                if i >= knots.len() {
                    let (t0, v0) = knots[knots.len() - 2];
                    let (t1, v1) = knots[knots.len() - 1];
                    v1 + (a - t1) * (v1 - v0) / (t1 - t0)
                } else {
                    let (t0, v0) = knots[i - 1];
                    let (t1, v1) = knots[i];
                    v0 + (a - t0) * (v1 - v0) / (t1 - t0)
                }
            }
        }
    }

    /// A (right) derivative of `φ` at `t`, odd in `t`. At `t = 0` this is the
    /// zero subgradient.
    pub fn derivative(&self, t: f64) -> f64 {
        let a = t.abs();
        let s = t.signum();
        if a == 0.0 {
            return 0.0;
        }
        let d = match self {
            YoungFunction::Power { p } => p * a.powf(p - 1.0),
            YoungFunction::LogDamped { p, kappa } => {
                let e = std::f64::consts::E;
                let l = (e + 1.0 / a).ln();
                a.powf(p - 1.0) / l.powf(*kappa) * (p + kappa / (l * (e * a + 1.0)))
            }
            YoungFunction::Scaled { factor, inner } => factor * inner.derivative(a),
            YoungFunction::Tabulated { knots } => {
                let i = knots.partition_point(|k| k.0 <= a).clamp(1, knots.len() - 1);
                let (t0, v0) = knots[i - 1];
                let (t1, v1) = knots[i];
                (v1 - v0) / (t1 - t0)
            }
        };
        s * d
    }

    /// Generalised right inverse `inf{t ≥ 0 : φ(t) ≥ s}` by bisection.
    pub fn inverse(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        let mut hi = 1.0;
        let mut guard = 0;
        while self.eval(hi) < s && guard < 2000 {
            hi *= 2.0;
            guard += 1;
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.eval(mid) >= s {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 1e-15 * hi {
                break;
            }
        }
        hi
    }

    /// A constant `D` with `φ(2t) ≤ D·φ(t)`, when one is known in closed form.
    pub fn doubling_constant(&self) -> Option<f64> {
        match self {
            YoungFunction::Power { p } => Some(2f64.powf(*p)),
            // log(e + 2y) <= 2 log(e + y) since (e + y)^2 >= e + 2y.
            YoungFunction::LogDamped { p, kappa } => Some(2f64.powf(p + kappa)),
            YoungFunction::Scaled { inner, .. } => inner.doubling_constant(),
            YoungFunction::Tabulated { .. } => None,
        }
    }

    /// The exponent when `φ` is a (scaled) power.
    pub fn power_exponent(&self) -> Option<f64> {
        match self {
            YoungFunction::Power { p } => Some(*p),
            YoungFunction::Scaled { inner, .. } => inner.power_exponent(),
            _ => None,
        }
    }

    pub fn is_quadratic(&self) -> bool {
        matches!(self, YoungFunction::Power { p } if *p == 2.0)
    }
}

impl fmt::Display for YoungFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            YoungFunction::Power { p } => write!(f, "power:{p}"),
            YoungFunction::LogDamped { p, kappa } => write!(f, "log:{p},{kappa}"),
            YoungFunction::Scaled { factor, inner } => write!(f, "scaled:{factor}:{inner}"),
            YoungFunction::Tabulated { knots } => {
                write!(f, "table:")?;
                let flat: Vec<String> =
                    knots.iter().flat_map(|(t, v)| [t.to_string(), v.to_string()]).collect();
                write!(f, "{}", flat.join(","))
            }
        }
    }
}

/// Parses `power:P`, `log:P,K`, `scaled:K:<inner>`, `table:t0,v0,t1,v1,...`
/// or a JSON object in the serialized schema.
impl FromStr for YoungFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            return serde_json::from_str(s).map_err(|e| Error::input(e.to_string()));
        }
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let nums = |r: &str| -> Result<Vec<f64>> {
            r.split(',')
                .filter(|x| !x.trim().is_empty())
                .map(|x| x.trim().parse::<f64>().map_err(|e| Error::input(format!("{x}: {e}"))))
                .collect()
        };
        match kind {
            "power" | "p" => match nums(rest)?.as_slice() {
                [p] => Self::power(*p),
                _ => Err(Error::input("power expects one parameter")),
            },
            "log" | "logdamped" | "log-damped" => match nums(rest)?.as_slice() {
                [p, k] => Self::log_damped(*p, *k),
                _ => Err(Error::input("log-damped expects two parameters")),
            },
            "scaled" => {
                let (k, inner) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::input("scaled expects scaled:K:<inner>"))?;
                let k: f64 = k.trim().parse().map_err(|_| Error::input("bad scale factor"))?;
                Self::scaled(k, inner.parse()?)
            }
            "table" | "tabulated" => {
                let v = nums(rest)?;
                if v.len() % 2 != 0 {
                    return Err(Error::input("table expects an even number of reals"));
                }
                Self::tabulated(v.chunks(2).map(|c| (c[0], c[1])).collect())
            }
            other => Err(Error::input(format!("unknown Young function kind '{other}'"))),
        }
    }
}

/// Wire form: `{"kind": ..., "params": [...], "inner": {...}}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
struct YoungSpec {
    kind: String,
    params: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    inner: Option<Box<YoungSpec>>,
}

impl TryFrom<YoungSpec> for YoungFunction {
    type Error = Error;

    fn try_from(spec: YoungSpec) -> Result<Self> {
        match (spec.kind.as_str(), spec.params.as_slice()) {
            ("power", [p]) => Self::power(*p),
            ("log-damped", [p, k]) => Self::log_damped(*p, *k),
            ("scaled", [k]) => {
                let inner = spec.inner.ok_or_else(|| Error::input("scaled needs 'inner'"))?;
                Self::scaled(*k, YoungFunction::try_from(*inner)?)
            }
            ("tabulated", flat) if flat.len() % 2 == 0 => {
                Self::tabulated(flat.chunks(2).map(|c| (c[0], c[1])).collect())
            }
            (kind, params) => Err(Error::input(format!(
                "unsupported Young function spec kind={kind} with {} params",
                params.len()
            ))),
        }
    }
}

impl From<YoungFunction> for YoungSpec {
    fn from(phi: YoungFunction) -> Self {
        match phi {
            YoungFunction::Power { p } => YoungSpec { kind: "power".into(), params: vec![p], inner: None },
            YoungFunction::LogDamped { p, kappa } => {
                YoungSpec { kind: "log-damped".into(), params: vec![p, kappa], inner: None }
            }
            YoungFunction::Scaled { factor, inner } => YoungSpec {
                kind: "scaled".into(),
                params: vec![factor],
                inner: Some(Box::new((*inner).into())),
            },
            YoungFunction::Tabulated { knots } => YoungSpec {
                kind: "tabulated".into(),
                params: knots.iter().flat_map(|(t, v)| [*t, *v]).collect(),
                inner: None,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn families() -> Vec<YoungFunction> {
        vec![
            YoungFunction::power(1.0).unwrap(),
            YoungFunction::power(1.5).unwrap(),
            YoungFunction::power(3.0).unwrap(),
            YoungFunction::log_damped(2.0, 2.0).unwrap(),
            YoungFunction::log_damped(1.5, 0.5).unwrap(),
            YoungFunction::power(2.0).unwrap().times(4.0).unwrap(),
            YoungFunction::tabulated(vec![(0.0, 0.0), (1.0, 0.5), (2.0, 2.0), (3.0, 4.0)]).unwrap(),
        ]
    }

    #[test]
    fn examples() {
        let p2 = YoungFunction::power(2.0).unwrap();
        assert_eq!(p2.eval(3.0), 9.0);
        for phi in families() {
            assert_eq!(phi.eval(0.0), 0.0);
        }
        let ld = YoungFunction::log_damped(2.0, 2.0).unwrap();
        let oracle = 1.0 / (std::f64::consts::E + 1.0).ln().powi(2);
        assert!((ld.eval(1.0) - oracle).abs() < 1e-15);
        assert!((ld.eval(1.0) - 0.5798).abs() < 1e-4);
    }

    #[test]
    fn non_finite_argument_is_rejected() {
        let phi = YoungFunction::power(2.0).unwrap();
        assert!(matches!(phi.try_eval(f64::NAN), Err(Error::Input(_))));
        assert!(matches!(phi.try_eval(f64::INFINITY), Err(Error::Input(_))));
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(YoungFunction::power(0.5).is_err());
        assert!(YoungFunction::log_damped(1.0, 2.0).is_err());
        assert!(YoungFunction::log_damped(2.0, 0.0).is_err());
        assert!(YoungFunction::tabulated(vec![(0.0, 0.0), (1.0, 2.0), (2.0, 2.5)]).is_err());
        assert!(YoungFunction::tabulated(vec![(0.1, 0.0), (1.0, 2.0)]).is_err());
    }

    #[test]
    fn parse_and_json_roundtrip() {
        for phi in families() {
            let parsed: YoungFunction = phi.to_string().parse().unwrap();
            assert_eq!(parsed, phi);
            let json = serde_json::to_string(&phi).unwrap();
            let back: YoungFunction = serde_json::from_str(&json).unwrap();
            assert_eq!(back, phi);
        }
        let j: YoungFunction = r#"{"kind":"power","params":[2.0]}"#.parse().unwrap();
        assert_eq!(j, YoungFunction::Power { p: 2.0 });
    }

    #[test]
    fn derivative_matches_finite_differences() {
        for phi in families() {
            for &t in &[0.3, 0.7, 1.3, 2.5] {
                let h = 1e-6;
                let fd = (phi.eval(t + h) - phi.eval(t - h)) / (2.0 * h);
                let d = phi.derivative(t);
                if matches!(phi, YoungFunction::Tabulated { .. }) {
                    continue;
                }
                assert!((fd - d).abs() < 1e-5 * d.abs().max(1.0), "{phi} at {t}: {fd} vs {d}");
                assert_eq!(phi.derivative(-t), -d);
            }
        }
    }

    #[test]
    fn inverse_is_generalised_right_inverse() {
        let p2 = YoungFunction::power(2.0).unwrap();
        assert!((p2.inverse(1.0) - 1.0).abs() < 1e-12);
        assert!((p2.inverse(4.0) - 2.0).abs() < 1e-12);
        let ld = YoungFunction::log_damped(2.0, 2.0).unwrap();
        let s = 0.37;
        let t = ld.inverse(s);
        assert!(ld.eval(t) >= s && ld.eval(t * (1.0 - 1e-12)) < s);
    }

    #[test]
    fn log_damped_doubling_bound_holds() {
        let ld = YoungFunction::log_damped(2.0, 2.0).unwrap();
        let d = ld.doubling_constant().unwrap();
        for i in -40..40 {
            let t = 1.3f64.powi(i);
            assert!(ld.eval(2.0 * t) <= d * ld.eval(t));
        }
    }

    proptest! {
        #[test]
        fn young_axioms(t1 in -20.0f64..20.0, t2 in -20.0f64..20.0, lam in 0.0f64..1.0, idx in 0usize..7) {
            let phi = &families()[idx];
            prop_assert_eq!(phi.eval(t1), phi.eval(-t1));
            if t1 != 0.0 { prop_assert!(phi.eval(t1) > 0.0); }
            let mid = phi.eval(lam * t1 + (1.0 - lam) * t2);
            let chord = lam * phi.eval(t1) + (1.0 - lam) * phi.eval(t2);
            prop_assert!(mid <= chord + 1e-12 * chord.max(1.0));
            let (a, b) = (t1.abs().min(t2.abs()), t1.abs().max(t2.abs()));
            prop_assert!(phi.eval(a) <= phi.eval(b));
        }
    }
}
