use serde::{Deserialize, Serialize};

use crate::forms::{ChartedDomain, Grid, Model};
use crate::simplicial::SimplicialComplex;
use crate::{Error, Result};

/// A coordinate box `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxSpec {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

/// A finite cover of a sampled flat domain by boxes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverSpec {
    pub boxes: Vec<BoxSpec>,
    /// Extra cells stored around every piece, so that centred differences
    /// on the piece itself never need one-sided stencils.
    #[serde(default = "default_halo")]
    pub halo: usize,
    /// Cells by which a box is shrunk before its bump is built; must exceed
    /// the halo.
    #[serde(default = "default_margin")]
    pub margin: usize,
    /// Boxes per axis when the cover is a uniform product cover.
    #[serde(default)]
    pub per_axis: Option<usize>,
}

fn default_halo() -> usize {
    2
}

fn default_margin() -> usize {
    3
}

impl CoverSpec {
    /// `m^n` boxes `[i/m − δ, (i+1)/m + δ]` (scaled to the grid), with
    /// `δ = overlap / m` times the side length. Box `(i₀, …)` is vertex
    /// `Σ i_a m^{n−1−a}`.
    pub fn uniform(grid: &Grid, per_axis: usize, overlap: f64) -> Self {
        let n = grid.dim();
        let mut boxes = Vec::new();
        for flat in 0..per_axis.pow(n as u32) {
            let mut rem = flat;
            let mut idx = vec![0; n];
            for a in (0..n).rev() {
                idx[a] = rem % per_axis;
                rem /= per_axis;
            }
            let (lo, hi) = (0..n)
                .map(|a| {
                    let w = (grid.hi[a] - grid.lo[a]) / per_axis as f64;
                    let d = overlap * w;
                    (grid.lo[a] + idx[a] as f64 * w - d, grid.lo[a] + (idx[a] + 1) as f64 * w + d)
                })
                .unzip();
            boxes.push(BoxSpec { lo, hi });
        }
        CoverSpec { boxes, halo: default_halo(), margin: default_margin(), per_axis: Some(per_axis) }
    }
}

/// The sampled region attached to one nerve simplex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    /// Half-open cell ranges of the intersection, in unwrapped global indices.
    pub nominal: Vec<(i64, i64)>,
    /// First stored cell (nominal start minus the halo, clipped on
    /// non-periodic axes).
    pub start: Vec<i64>,
    /// Stored samples, in unwrapped coordinates.
    pub grid: Grid,
}

impl Piece {
    pub fn is_nominal(&self, local: usize) -> bool {
        let m = self.grid.multi_index(local);
        m.iter().enumerate().all(|(a, &i)| {
            let g = self.start[a] + i as i64;
            g >= self.nominal[a].0 && g < self.nominal[a].1
        })
    }

    /// Global sample index of a stored sample.
    pub fn global_index(&self, local: usize, global: &Grid) -> usize {
        let m = self.grid.multi_index(local);
        let g: Vec<usize> = m
            .iter()
            .enumerate()
            .map(|(a, &i)| (self.start[a] + i as i64).rem_euclid(global.counts[a] as i64) as usize)
            .collect();
        global.flat_index(&g)
    }

    /// Centre and half-widths of the nominal box (the chart onto `[-1, 1]^n`).
    pub fn chart(&self, global: &Grid) -> (Vec<f64>, Vec<f64>) {
        (0..global.dim())
            .map(|a| {
                let h = global.spacing(a);
                let lo = global.lo[a] + self.nominal[a].0 as f64 * h;
                let hi = global.lo[a] + self.nominal[a].1 as f64 * h;
                (0.5 * (lo + hi), 0.5 * (hi - lo))
            })
            .unzip()
    }
}

/// A cover, its nerve, the pieces on every nerve simplex and a partition
/// of unity subordinate to the cover.
#[derive(Clone, Debug)]
pub struct CoverNerve {
    pub domain: ChartedDomain,
    pub spec: CoverSpec,
    pub nerve: SimplicialComplex,
    /// `pieces[ℓ][i]` belongs to the `i`-th `ℓ`-simplex of the nerve.
    pub pieces: Vec<Vec<Piece>>,
    /// `offsets[ℓ][j][f]`: position of the stored grid of `(ℓ+1)`-simplex
    /// `j` inside that of its `f`-th face.
    pub(crate) offsets: Vec<Vec<Vec<Vec<usize>>>>,
    /// `η_U` on the global grid.
    pub partition: Vec<Vec<f64>>,
    pub max_multiplicity: usize,
}

type Interval = (i64, i64);

fn intersect_axis(a: Interval, b: Interval, period: Option<i64>) -> Result<Option<Interval>> {
    let shifts: Vec<i64> = match period {
        Some(p) => vec![-p, 0, p],
        None => vec![0],
    };
    let hits: Vec<Interval> = shifts
        .iter()
        .map(|s| (a.0.max(b.0 + s), a.1.min(b.1 + s)))
        .filter(|(lo, hi)| lo < hi)
        .collect();
    match hits.len() {
        0 => Ok(None),
        1 => Ok(Some(hits[0])),
        _ => Err(Error::Coverage("two cover sets meet in more than one component".into())),
    }
}

fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / t).exp();
        let b = (-1.0 / (1.0 - t)).exp();
        a / (a + b)
    }
}

impl CoverNerve {
    pub fn build(domain: &ChartedDomain, spec: &CoverSpec) -> Result<Self> {
        if !matches!(domain.model, Model::EuclideanBox | Model::FlatTorus) {
            return Err(Error::Model("covers are supported on flat boxes and tori".into()));
        }
        if spec.margin <= spec.halo {
            return Err(Error::input("the partition margin must exceed the halo"));
        }
        if spec.boxes.is_empty() {
            return Err(Error::input("empty cover"));
        }
        let grid = &domain.grid;
        let n = grid.dim();
        let period = |a: usize| grid.periodic[a].then_some(grid.counts[a] as i64);

        let mut cells: Vec<Vec<Interval>> = Vec::new();
        for (u, b) in spec.boxes.iter().enumerate() {
            if b.lo.len() != n || b.hi.len() != n {
                return Err(Error::input(format!("box {u} has the wrong dimension")));
            }
            let mut iv = Vec::with_capacity(n);
            for a in 0..n {
                let h = grid.spacing(a);
                let mut s = ((b.lo[a] - grid.lo[a]) / h).round() as i64;
                let mut e = ((b.hi[a] - grid.lo[a]) / h).round() as i64;
                if period(a).is_none() {
                    s = s.max(0);
                    e = e.min(grid.counts[a] as i64);
                }
                if e <= s {
                    return Err(Error::Resolution(format!("cover set {u} contains no samples")));
                }
                if let Some(p) = period(a) {
                    if e - s + 2 * spec.halo as i64 >= p {
                        return Err(Error::Coverage(format!("cover set {u} wraps around axis {a}")));
                    }
                }
                iv.push((s, e));
            }
            cells.push(iv);
        }

        // Nerve by incremental intersection tests.
        let mut levels: Vec<Vec<(Vec<usize>, Vec<Interval>)>> =
            vec![cells.iter().enumerate().map(|(u, iv)| (vec![u], iv.clone())).collect()];
        loop {
            let mut next = Vec::new();
            for (s, iv) in levels.last().unwrap() {
                for v in s.last().unwrap() + 1..cells.len() {
                    let mut joint = Vec::with_capacity(n);
                    for a in 0..n {
                        match intersect_axis(iv[a], cells[v][a], period(a))? {
                            Some(x) => joint.push(x),
                            None => break,
                        }
                    }
                    if joint.len() == n {
                        let mut t = s.clone();
                        t.push(v);
                        next.push((t, joint));
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            levels.push(next);
        }
        let nerve = SimplicialComplex::from_simplices(
            levels.iter().map(|l| l.iter().map(|(s, _)| s.clone()).collect()).collect(),
        )?;

        let mut pieces = Vec::with_capacity(levels.len());
        for (l, level) in levels.iter().enumerate() {
            let mut row: Vec<Option<Piece>> = vec![None; level.len()];
            for (s, iv) in level {
                let idx = nerve.find(s).expect("simplex just inserted");
                row[idx] = Some(Self::make_piece(grid, iv, spec.halo)?);
            }
            pieces.push(row.into_iter().map(|p| p.expect("every simplex has a piece")).collect::<Vec<_>>());
            debug_assert_eq!(pieces[l].len(), nerve.count(l));
        }

        let mut offsets = Vec::new();
        for l in 0..pieces.len().saturating_sub(1) {
            let mut lvl = Vec::with_capacity(nerve.count(l + 1));
            for j in 0..nerve.count(l + 1) {
                let tau = &pieces[l + 1][j];
                let mut per_face = Vec::new();
                for &(f, _) in nerve.faces(l + 1, j) {
                    let sigma = &pieces[l][f];
                    let mut off = Vec::with_capacity(n);
                    for a in 0..n {
                        let mut d = tau.start[a] - sigma.start[a];
                        if let Some(p) = period(a) {
                            d = d.rem_euclid(p);
                        }
                        if d < 0 || d as usize + tau.grid.counts[a] > sigma.grid.counts[a] {
                            return Err(Error::Coverage("intersection leaves its face".into()));
                        }
                        off.push(d as usize);
                    }
                    per_face.push(off);
                }
                lvl.push(per_face);
            }
            offsets.push(lvl);
        }

        let (partition, max_multiplicity) = Self::partition(grid, &cells, spec.margin)?;
        Ok(CoverNerve {
            domain: domain.clone(),
            spec: spec.clone(),
            nerve,
            pieces,
            offsets,
            partition,
            max_multiplicity,
        })
    }

    fn make_piece(grid: &Grid, nominal: &[Interval], halo: usize) -> Result<Piece> {
        let n = grid.dim();
        let mut start = Vec::with_capacity(n);
        let mut counts = Vec::with_capacity(n);
        for a in 0..n {
            let (mut s, mut e) = (nominal[a].0 - halo as i64, nominal[a].1 + halo as i64);
            if !grid.periodic[a] {
                s = s.max(0);
                e = e.min(grid.counts[a] as i64);
            }
            start.push(s);
            counts.push((e - s) as usize);
        }
        let lo: Vec<f64> = (0..n).map(|a| grid.lo[a] + start[a] as f64 * grid.spacing(a)).collect();
        let hi: Vec<f64> = (0..n).map(|a| lo[a] + counts[a] as f64 * grid.spacing(a)).collect();
        let sub = Grid::new(lo, hi, counts, vec![false; n])
            .map_err(|_| Error::Coverage("a cover intersection is too thin to sample".into()))?;
        Ok(Piece { nominal: nominal.to_vec(), start, grid: sub })
    }

    /// Normalised smooth bumps on the boxes shrunk by `margin` cells; sides
    /// lying on the boundary of a non-periodic axis are left flat.
    fn partition(grid: &Grid, cells: &[Vec<Interval>], margin: usize) -> Result<(Vec<Vec<f64>>, usize)> {
        let n = grid.dim();
        let bumps: Vec<Vec<f64>> = cells
            .iter()
            .map(|iv| {
                (0..grid.len())
                    .map(|g| {
                        let m = grid.multi_index(g);
                        (0..n)
                            .map(|a| {
                                let (s, e) = iv[a];
                                let a_lo = (s + margin as i64) as f64;
                                let a_hi = (e - margin as i64) as f64;
                                let w = 0.5 * (a_hi - a_lo);
                                let centre = 0.5 * (s + e) as f64;
                                let mut x = m[a] as f64 + 0.5;
                                if grid.periodic[a] {
                                    let p = grid.counts[a] as f64;
                                    x -= ((x - centre) / p).round() * p;
                                }
                                let left = if !grid.periodic[a] && s == 0 { 1.0 } else { smooth_step((x - a_lo) / w) };
                                let right = if !grid.periodic[a] && e == grid.counts[a] as i64 {
                                    1.0
                                } else {
                                    smooth_step((a_hi - x) / w)
                                };
                                left * right
                            })
                            .product()
                    })
                    .collect()
            })
            .collect();
        let mut partition = bumps.clone();
        let mut max_multiplicity = 0;
        for g in 0..grid.len() {
            let total: f64 = bumps.iter().map(|b| b[g]).sum();
            if total <= 0.0 {
                return Err(Error::Coverage(format!("sample {g} is not covered by the shrunk cover")));
            }
            max_multiplicity = max_multiplicity.max(bumps.iter().filter(|b| b[g] > 0.0).count());
            for p in partition.iter_mut() {
                p[g] /= total;
            }
        }
        Ok((partition, max_multiplicity))
    }

    pub fn grid(&self) -> &Grid {
        &self.domain.grid
    }

    pub fn piece(&self, l: usize, i: usize) -> &Piece {
        &self.pieces[l][i]
    }

    /// Highest `ℓ` with a nonempty `(ℓ+1)`-fold intersection.
    pub fn top_degree(&self) -> usize {
        self.pieces.len() - 1
    }

    /// Largest deviation of `Σ η_U` from one.
    pub fn partition_defect(&self) -> f64 {
        (0..self.grid().len())
            .map(|g| (self.partition.iter().map(|p| p[g]).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// The nerve 1-cycle running once around axis `axis` through vertex 0,
    /// for uniform product covers.
    pub fn axis_loop(&self, axis: usize) -> Result<crate::simplicial::ChainValue> {
        let m = self.spec.per_axis.ok_or_else(|| Error::input("axis loops need a uniform cover"))?;
        let n = self.grid().dim();
        let stride = m.pow((n - 1 - axis) as u32);
        let mut chain = crate::simplicial::ChainValue::zero(1);
        for j in 0..m {
            let (u, v) = (j * stride, ((j + 1) % m) * stride);
            let (idx, sign) = self
                .nerve
                .find_oriented(&[u, v])
                .ok_or_else(|| Error::Coverage(format!("consecutive boxes {u}, {v} do not meet")))?;
            chain.add_term(idx, sign as i64);
        }
        Ok(chain)
    }
}
