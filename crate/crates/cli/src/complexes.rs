use anyhow::{bail, Context, Result};
use orlicz_lab::simplicial::ComplexSpec;

/// Parses `cycle:N`, `path:N`, `disk:N`, `grid-disk:M`, `grid-torus:M,N`,
/// `tree:B,D`, `random:V,DEG,DIM[,SEED]`, `torus7`, `triangle` or a JSON
/// object in the serialized `ComplexSpec` schema.
pub fn parse_complex(s: &str) -> Result<ComplexSpec> {
    let s = s.trim();
    if s.starts_with('{') {
        return serde_json::from_str(s).context("parsing complex JSON");
    }
    let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
    let nums: Vec<usize> = rest
        .split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| x.trim().parse::<usize>().with_context(|| format!("bad integer '{x}' in complex spec")))
        .collect::<Result<_>>()?;
    let spec = match (kind, nums.as_slice()) {
        ("cycle", [n]) => ComplexSpec::Cycle { n: *n },
        ("path", [n]) => ComplexSpec::Path { n: *n },
        ("disk", [n]) => ComplexSpec::Disk { n: *n },
        ("grid-disk", [m]) => ComplexSpec::GridDisk { m: *m },
        ("grid-torus", [m, n]) => ComplexSpec::GridTorus { m: *m, n: *n },
        ("tree", [b, d]) => ComplexSpec::Tree { branching: *b, depth: *d },
        ("random", [v, d, k]) => ComplexSpec::RandomBounded { vertices: *v, max_degree: *d, max_dim: *k, seed: 0 },
        ("random", [v, d, k, seed]) => {
            ComplexSpec::RandomBounded { vertices: *v, max_degree: *d, max_dim: *k, seed: *seed as u64 }
        }
        ("torus7", []) => ComplexSpec::Torus7,
        ("triangle", []) => ComplexSpec::FilledTriangle,
        _ => bail!("unrecognised complex spec '{s}'"),
    };
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_shorthands() {
        assert_eq!(parse_complex("cycle:6").unwrap(), ComplexSpec::Cycle { n: 6 });
        assert_eq!(parse_complex("grid-torus:4,5").unwrap(), ComplexSpec::GridTorus { m: 4, n: 5 });
        assert_eq!(parse_complex(r#"{"kind":"torus7"}"#).unwrap(), ComplexSpec::Torus7);
        assert!(parse_complex("cycle").is_err());
        assert!(parse_complex("sphere:3").is_err());
    }
}
