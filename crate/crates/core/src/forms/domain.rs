use serde::{Deserialize, Serialize};

use super::grid::Grid;
use crate::{Error, Result};

/// Riemannian models available on a sampled chart.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Model {
    /// Flat metric on a coordinate box.
    EuclideanBox,
    /// Flat metric restricted to `|x| < 1`, sampled by rejection from `[-1, 1]^n`.
    UnitBall,
    /// Flat metric on a periodic box.
    FlatTorus,
    /// `g = (dx² + dy²) / y²` on `y > 0` (also the left-invariant metric on
    /// the affine group in these coordinates).
    HalfPlane,
    /// Constant conformal metric `g = c·δ`.
    Conformal { factor: f64 },
}

/// A sample grid together with a metric model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartedDomain {
    pub grid: Grid,
    pub model: Model,
}

impl ChartedDomain {
    pub fn new(grid: Grid, model: Model) -> Result<Self> {
        match &model {
            Model::HalfPlane => {
                if grid.dim() != 2 || grid.lo[1] <= 0.0 || grid.periodic[1] {
                    return Err(Error::Model("half-plane charts need y > 0 on a planar grid".into()));
                }
            }
            Model::Conformal { factor } if !(factor.is_finite() && *factor > 0.0) => {
                return Err(Error::Model(format!("conformal factor must be positive, got {factor}")));
            }
            Model::FlatTorus if grid.periodic.iter().any(|p| !p) => {
                return Err(Error::Model("flat torus needs periodic axes".into()));
            }
            _ => {}
        }
        Ok(ChartedDomain { grid, model })
    }

    pub fn euclidean_box(grid: Grid) -> Self {
        ChartedDomain { grid, model: Model::EuclideanBox }
    }

    pub fn unit_ball(n: usize, count: usize) -> Result<Self> {
        Ok(ChartedDomain { grid: Grid::cube(n, -1.0, 1.0, count, false)?, model: Model::UnitBall })
    }

    pub fn flat_torus(n: usize, count: usize) -> Result<Self> {
        Ok(ChartedDomain { grid: Grid::cube(n, 0.0, 1.0, count, true)?, model: Model::FlatTorus })
    }

    pub fn half_plane(x: (f64, f64), y: (f64, f64), counts: [usize; 2]) -> Result<Self> {
        Self::new(Grid::new(vec![x.0, y.0], vec![x.1, y.1], counts.to_vec(), vec![false; 2])?, Model::HalfPlane)
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    /// Metric tensor at `x`, row-major `n × n`.
    pub fn metric(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let c = match self.model {
            Model::HalfPlane => 1.0 / (x[1] * x[1]),
            Model::Conformal { factor } => factor,
            _ => 1.0,
        };
        let mut g = vec![0.0; n * n];
        for a in 0..n {
            g[a * n + a] = c;
        }
        g
    }

    /// `√det g` at `x`.
    pub fn volume_density(&self, x: &[f64]) -> f64 {
        let n = self.dim() as i32;
        match self.model {
            Model::HalfPlane => 1.0 / (x[1] * x[1]),
            Model::Conformal { factor } => factor.powf(n as f64 / 2.0),
            _ => 1.0,
        }
    }

    /// Whether the sample lies in the modelled region.
    pub fn in_region(&self, x: &[f64]) -> bool {
        match self.model {
            Model::UnitBall => x.iter().map(|v| v * v).sum::<f64>() < 1.0,
            Model::HalfPlane => x[1] > 0.0,
            _ => true,
        }
    }

    pub fn region_indices(&self) -> Vec<usize> {
        (0..self.grid.len()).filter(|&i| self.in_region(&self.grid.point(i))).collect()
    }

    /// Riemannian volume weight of a sample (zero outside the region).
    pub fn volume_weight(&self, idx: usize) -> f64 {
        let x = self.grid.point(idx);
        if self.in_region(&x) {
            self.volume_density(&x) * self.grid.cell_volume()
        } else {
            0.0
        }
    }
}
