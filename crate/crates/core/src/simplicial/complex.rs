use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A finite simplicial complex with signed incidence in every degree.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    simplices: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
    /// `faces[k][i]`: the `(k-1)`-faces of the `i`-th `k`-simplex with signs.
    faces: Vec<Vec<Vec<(usize, i8)>>>,
    /// `cofaces[k][i]`: the `(k+1)`-simplices having the `i`-th `k`-simplex as a face.
    cofaces: Vec<Vec<Vec<(usize, i8)>>>,
    adjacency: Vec<Vec<usize>>,
    positions: Option<Vec<Vec<f64>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexStats {
    pub dimension: usize,
    pub counts: Vec<usize>,
    /// Largest simplex diameter (Euclidean when positions are known,
    /// otherwise the combinatorial value 1).
    pub diameter_bound: f64,
    /// Largest number of `(k+1)`-simplices sharing a `k`-face.
    pub coface_bound: usize,
    /// `(r, N(r))`: most simplices inside a combinatorial ball of radius `r`.
    pub local_counts: Vec<(usize, usize)>,
}

impl SimplicialComplex {
    /// Builds a complex from its simplices grouped by dimension. Vertex
    /// labels must be `0..n`; every face of every simplex must be listed.
    pub fn from_simplices(mut simplices: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        while simplices.last().is_some_and(|s| s.is_empty()) && simplices.len() > 1 {
            simplices.pop();
        }
        if simplices.is_empty() {
            return Err(Error::Construction("complex without vertices".into()));
        }
        for (k, level) in simplices.iter_mut().enumerate() {
            for s in level.iter_mut() {
                if s.len() != k + 1 {
                    return Err(Error::Construction(format!("simplex {s:?} listed in dimension {k}")));
                }
                s.sort_unstable();
                if s.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::Construction(format!("simplex {s:?} repeats a vertex")));
                }
            }
            level.sort();
            if level.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Construction(format!("duplicate {k}-simplex")));
            }
        }
        let n = simplices[0].len();
        if simplices[0].iter().enumerate().any(|(i, v)| v[0] != i) {
            return Err(Error::Construction("vertices must be labelled 0..n".into()));
        }
        let index: Vec<HashMap<Vec<usize>, usize>> = simplices
            .iter()
            .map(|level| level.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        let mut faces = vec![vec![Vec::new(); n]];
        let mut cofaces: Vec<Vec<Vec<(usize, i8)>>> =
            simplices.iter().map(|l| vec![Vec::new(); l.len()]).collect();
        for k in 1..simplices.len() {
            let mut level_faces = Vec::with_capacity(simplices[k].len());
            for (j, s) in simplices[k].iter().enumerate() {
                let mut fs = Vec::with_capacity(k + 1);
                for i in 0..=k {
                    let mut face = s.clone();
                    face.remove(i);
                    let f = *index[k - 1].get(&face).ok_or_else(|| {
                        Error::Construction(format!("face {face:?} of {s:?} is missing"))
                    })?;
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    fs.push((f, sign));
                    cofaces[k - 1][f].push((j, sign));
                }
                level_faces.push(fs);
            }
            faces.push(level_faces);
        }
        let mut adjacency = vec![Vec::new(); n];
        if simplices.len() > 1 {
            for e in &simplices[1] {
                adjacency[e[0]].push(e[1]);
                adjacency[e[1]].push(e[0]);
            }
        }
        Ok(SimplicialComplex { simplices, index, faces, cofaces, adjacency, positions: None })
    }

    /// The closure of a list of (not necessarily maximal) simplices on
    /// vertices `0..n_vertices`.
    pub fn from_maximal(n_vertices: usize, maximal: &[Vec<usize>]) -> Result<Self> {
        let dim = maximal.iter().map(|s| s.len().saturating_sub(1)).max().unwrap_or(0);
        let mut levels: Vec<std::collections::BTreeSet<Vec<usize>>> = vec![Default::default(); dim + 1];
        for v in 0..n_vertices {
            levels[0].insert(vec![v]);
        }
        for s in maximal {
            if s.is_empty() {
                return Err(Error::Construction("empty simplex".into()));
            }
            if let Some(&v) = s.iter().find(|&&v| v >= n_vertices) {
                return Err(Error::Construction(format!("vertex {v} out of range")));
            }
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            // every nonempty subset
            let m = s.len();
            for mask in 1u32..(1 << m) {
                let sub: Vec<usize> = (0..m).filter(|i| mask & (1 << i) != 0).map(|i| s[i]).collect();
                levels[sub.len() - 1].insert(sub);
            }
        }
        Self::from_simplices(levels.into_iter().map(|l| l.into_iter().collect()).collect())
    }

    pub fn with_positions(mut self, positions: Vec<Vec<f64>>) -> Result<Self> {
        if positions.len() != self.n_vertices() {
            return Err(Error::Construction("one position per vertex required".into()));
        }
        self.positions = Some(positions);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.simplices.len() - 1
    }

    pub fn n_vertices(&self) -> usize {
        self.simplices[0].len()
    }

    /// Number of `k`-simplices (0 above the dimension).
    pub fn count(&self, k: usize) -> usize {
        self.simplices.get(k).map_or(0, |l| l.len())
    }

    pub fn simplices(&self, k: usize) -> &[Vec<usize>] {
        self.simplices.get(k).map_or(&[], |l| l.as_slice())
    }

    pub fn simplex(&self, k: usize, i: usize) -> &[usize] {
        &self.simplices[k][i]
    }

    /// Index of a sorted vertex tuple.
    pub fn find(&self, simplex: &[usize]) -> Option<usize> {
        let k = simplex.len().checked_sub(1)?;
        self.index.get(k)?.get(simplex).copied()
    }

    /// Index and orientation sign of an arbitrary vertex tuple.
    pub fn find_oriented(&self, simplex: &[usize]) -> Option<(usize, i8)> {
        let mut sorted = simplex.to_vec();
        let mut sign = 1i8;
        // insertion sort, counting transpositions
        for i in 1..sorted.len() {
            let mut j = i;
            while j > 0 && sorted[j - 1] > sorted[j] {
                sorted.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        self.find(&sorted).map(|i| (i, sign))
    }

    pub fn faces(&self, k: usize, i: usize) -> &[(usize, i8)] {
        &self.faces[k][i]
    }

    pub fn cofaces(&self, k: usize, i: usize) -> &[(usize, i8)] {
        &self.cofaces[k][i]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn positions(&self) -> Option<&[Vec<f64>]> {
        self.positions.as_deref()
    }

    /// Breadth-first graph distances from a set of sources (`usize::MAX`
    /// when unreachable).
    pub fn distances_from(&self, sources: &[usize]) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n_vertices()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s] != 0 {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            for &w in &self.adjacency[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Largest number of cofaces of any simplex.
    pub fn coface_bound(&self) -> usize {
        self.cofaces.iter().flatten().map(|c| c.len()).max().unwrap_or(0)
    }

    pub fn stats(&self, radii: &[usize]) -> ComplexStats {
        let diameter_bound = match &self.positions {
            Some(pos) => self
                .simplices
                .iter()
                .flatten()
                .flat_map(|s| {
                    s.iter().flat_map(move |&a| {
                        s.iter().map(move |&b| {
                            pos[a].iter().zip(&pos[b]).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
                        })
                    })
                })
                .fold(0.0, f64::max),
            None => {
                if self.dim() > 0 {
                    1.0
                } else {
                    0.0
                }
            }
        };
        let local_counts = radii
            .iter()
            .map(|&r| {
                let worst = (0..self.n_vertices())
                    .map(|v| {
                        let d = self.distances_from(&[v]);
                        self.simplices.iter().flatten().filter(|s| s.iter().all(|&u| d[u] <= r)).count()
                    })
                    .max()
                    .unwrap_or(0);
                (r, worst)
            })
            .collect();
        ComplexStats {
            dimension: self.dim(),
            counts: self.simplices.iter().map(|l| l.len()).collect(),
            diameter_bound,
            coface_bound: self.coface_bound(),
            local_counts,
        }
    }

    /// Verifies that `∂∘∂ = 0` as signed incidence composition.
    pub fn boundary_squared_vanishes(&self) -> bool {
        (2..=self.dim()).all(|k| {
            (0..self.count(k)).all(|i| {
                let mut acc: HashMap<usize, i64> = HashMap::new();
                for &(f, s) in &self.faces[k][i] {
                    for &(g, t) in &self.faces[k - 1][f] {
                        *acc.entry(g).or_default() += (s * t) as i64;
                    }
                }
                acc.values().all(|&v| v == 0)
            })
        })
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexWire {
    simplices: Vec<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    positions: Option<Vec<Vec<f64>>>,
}

impl Serialize for SimplicialComplex {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexWire { simplices: self.simplices.clone(), positions: self.positions.clone() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SimplicialComplex {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = ComplexWire::deserialize(deserializer)?;
        let c = SimplicialComplex::from_simplices(wire.simplices).map_err(serde::de::Error::custom)?;
        match wire.positions {
            Some(p) => c.with_positions(p).map_err(serde::de::Error::custom),
            None => Ok(c),
        }
    }
}
