use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::SimplicialComplex;
use crate::{Error, Result};

/// Named complex generators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ComplexSpec {
    Cycle { n: usize },
    Path { n: usize },
    FilledTriangle,
    /// Cone over an `n`-cycle.
    Disk { n: usize },
    /// Triangulated `m × m` grid square (contractible).
    GridDisk { m: usize },
    /// The minimal 7-vertex torus.
    Torus7,
    GridTorus { m: usize, n: usize },
    Tree { branching: usize, depth: usize },
    DisjointEdges { count: usize },
    /// Flag complex of a random graph with bounded vertex degree.
    RandomBounded { vertices: usize, max_degree: usize, max_dim: usize, seed: u64 },
    Maximal { vertices: usize, simplices: Vec<Vec<usize>> },
}

impl ComplexSpec {
    pub fn build(&self) -> Result<SimplicialComplex> {
        match *self {
            ComplexSpec::Cycle { n } => {
                if n < 3 {
                    return Err(Error::Construction(format!("a cycle needs at least 3 vertices, got {n}")));
                }
                let edges: Vec<_> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
                let pos = (0..n)
                    .map(|i| {
                        let a = std::f64::consts::TAU * i as f64 / n as f64;
                        vec![a.cos(), a.sin()]
                    })
                    .collect();
                SimplicialComplex::from_maximal(n, &edges)?.with_positions(pos)
            }
            ComplexSpec::Path { n } => {
                if n == 0 {
                    return Err(Error::Construction("empty path".into()));
                }
                let edges: Vec<_> = (1..n).map(|i| vec![i - 1, i]).collect();
                SimplicialComplex::from_maximal(n, &edges)?
                    .with_positions((0..n).map(|i| vec![i as f64]).collect())
            }
            ComplexSpec::FilledTriangle => SimplicialComplex::from_maximal(3, &[vec![0, 1, 2]]),
            ComplexSpec::Disk { n } => {
                if n < 3 {
                    return Err(Error::Construction("a disk needs a rim of at least 3 vertices".into()));
                }
                let tris: Vec<_> = (0..n).map(|i| vec![0, 1 + i, 1 + (i + 1) % n]).collect();
                SimplicialComplex::from_maximal(n + 1, &tris)
            }
            ComplexSpec::GridDisk { m } => {
                if m == 0 {
                    return Err(Error::Construction("grid disk needs m ≥ 1".into()));
                }
                let id = |i: usize, j: usize| i * (m + 1) + j;
                let mut tris = Vec::new();
                for i in 0..m {
                    for j in 0..m {
                        tris.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
                        tris.push(vec![id(i, j), id(i, j + 1), id(i + 1, j + 1)]);
                    }
                }
                let pos = (0..=m).flat_map(|i| (0..=m).map(move |j| vec![i as f64, j as f64])).collect();
                SimplicialComplex::from_maximal((m + 1) * (m + 1), &tris)?.with_positions(pos)
            }
            ComplexSpec::Torus7 => {
                let tris: Vec<_> = (0..7)
                    .flat_map(|i| [vec![i, (i + 1) % 7, (i + 3) % 7], vec![i, (i + 2) % 7, (i + 3) % 7]])
                    .collect();
                SimplicialComplex::from_maximal(7, &tris)
            }
            ComplexSpec::GridTorus { m, n } => {
                if m < 3 || n < 3 {
                    return Err(Error::Construction("grid torus needs m, n ≥ 3".into()));
                }
                let id = |i: usize, j: usize| (i % m) * n + (j % n);
                let mut tris = Vec::new();
                for i in 0..m {
                    for j in 0..n {
                        tris.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
                        tris.push(vec![id(i, j), id(i, j + 1), id(i + 1, j + 1)]);
                    }
                }
                SimplicialComplex::from_maximal(m * n, &tris)
            }
            ComplexSpec::Tree { branching, depth } => {
                let mut edges = Vec::new();
                let mut frontier = vec![0usize];
                let mut next_id = 1;
                for _ in 0..depth {
                    let mut next = Vec::new();
                    for &p in &frontier {
                        for _ in 0..branching {
                            edges.push(vec![p, next_id]);
                            next.push(next_id);
                            next_id += 1;
                        }
                    }
                    frontier = next;
                }
                SimplicialComplex::from_maximal(next_id, &edges)
            }
            ComplexSpec::DisjointEdges { count } => {
                let edges: Vec<_> = (0..count).map(|i| vec![2 * i, 2 * i + 1]).collect();
                SimplicialComplex::from_maximal(2 * count, &edges)
            }
            ComplexSpec::RandomBounded { vertices, max_degree, max_dim, seed } => {
                random_flag_complex(vertices, max_degree, max_dim, seed)
            }
            ComplexSpec::Maximal { vertices, ref simplices } => SimplicialComplex::from_maximal(vertices, simplices),
        }
    }
}

fn random_flag_complex(n: usize, max_degree: usize, max_dim: usize, seed: u64) -> Result<SimplicialComplex> {
    if n == 0 || max_degree == 0 {
        return Err(Error::Construction("random complex needs vertices and a positive degree bound".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adj = vec![vec![false; n]; n];
    let mut deg = vec![0usize; n];
    // a random spanning path keeps the complex connected, then extra edges
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let add = |a: usize, b: usize, adj: &mut [Vec<bool>], deg: &mut [usize]| {
        if a != b && !adj[a][b] && deg[a] < max_degree && deg[b] < max_degree {
            adj[a][b] = true;
            adj[b][a] = true;
            deg[a] += 1;
            deg[b] += 1;
        }
    };
    for w in order.windows(2) {
        add(w[0], w[1], &mut adj, &mut deg);
    }
    for _ in 0..n * max_degree {
        let a = rng.random_range(0..n);
        // prefer short-range edges so that triangles appear
        let b = (a + rng.random_range(1..=3.min(n.max(2) - 1))) % n;
        add(a, b, &mut adj, &mut deg);
    }
    let mut maximal: Vec<Vec<usize>> = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if adj[a][b] {
                maximal.push(vec![a, b]);
            }
        }
    }
    if max_dim >= 2 {
        let edges = maximal.clone();
        for e in &edges {
            for c in e[1] + 1..n {
                if adj[e[0]][c] && adj[e[1]][c] {
                    maximal.push(vec![e[0], e[1], c]);
                    if max_dim >= 3 {
                        for d in c + 1..n {
                            if adj[e[0]][d] && adj[e[1]][d] && adj[c][d] {
                                maximal.push(vec![e[0], e[1], c, d]);
                            }
                        }
                    }
                }
            }
        }
    }
    SimplicialComplex::from_maximal(n, &maximal)
}
