use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Samples below this fraction of the field maximum count as decayed.
pub const BOUNDARY_DECAY: f64 = 1e-10;

/// Uniform grid on [−X, X] × T¹_L.
///
/// The x nodes are the `nx` interior points `−X + (i+1)h`, `h = 2X/(nx+1)`,
/// with the field taken to vanish at ±X; the y nodes are `jL/ny`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x_half_width: f64,
    pub nx: usize,
    pub length: f64,
    pub ny: usize,
}

impl Grid {
    pub fn new(x_half_width: f64, nx: usize, length: f64, ny: usize) -> Result<Self> {
        if !(x_half_width > 0.0 && x_half_width.is_finite()) || !(length > 0.0 && length.is_finite()) {
            return Err(Error::grid("half-width and circle length must be positive and finite"));
        }
        if nx < 8 || ny < 8 || !nx.is_multiple_of(2) || !ny.is_multiple_of(2) {
            return Err(Error::grid(format!("nx = {nx} and ny = {ny} must be even and at least 8")));
        }
        Ok(Grid { x_half_width, nx, length, ny })
    }

    pub fn hx(&self) -> f64 {
        2.0 * self.x_half_width / (self.nx + 1) as f64
    }

    pub fn hy(&self) -> f64 {
        self.length / self.ny as f64
    }

    /// Quadrature weight of one node.
    pub fn weight(&self) -> f64 {
        self.hx() * self.hy()
    }

    pub fn x(&self, i: usize) -> f64 {
        -self.x_half_width + (i + 1) as f64 * self.hx()
    }

    pub fn y(&self, j: usize) -> f64 {
        j as f64 * self.hy()
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn with_length(self, length: f64) -> Result<Self> {
        Grid::new(self.x_half_width, self.nx, length, self.ny)
    }
}

/// Real samples on a [`Grid`], stored row by row (`samples[j * nx + i]`).
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    samples: Vec<f64>,
}

impl Field {
    pub fn new(grid: Grid, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::grid(format!("expected {} samples, got {}", grid.len(), samples.len())));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::numeric("field contains non-finite samples"));
        }
        Ok(Field { grid, samples })
    }

    pub fn zeros(grid: Grid) -> Self {
        Field { grid, samples: vec![0.0; grid.len()] }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let mut samples = Vec::with_capacity(grid.len());
        for j in 0..grid.ny {
            let y = grid.y(j);
            samples.extend((0..grid.nx).map(|i| f(grid.x(i), y)));
        }
        Field::new(grid, samples)
    }

    pub(crate) fn from_raw(grid: Grid, samples: Vec<f64>) -> Self {
        debug_assert_eq!(samples.len(), grid.len());
        Field { grid, samples }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [f64] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.samples[j * self.grid.nx + i]
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest |u| on the outermost x columns relative to max |u| (0 for u ≡ 0).
    pub fn boundary_ratio(&self) -> f64 {
        let max = self.max_abs();
        if max == 0.0 {
            return 0.0;
        }
        let nx = self.grid.nx;
        let edge = self
            .samples
            .chunks(nx)
            .fold(0.0f64, |m, row| m.max(row[0].abs()).max(row[1].abs()).max(row[nx - 2].abs()).max(row[nx - 1].abs()));
        edge / max
    }

    pub fn check_decay(&self) -> Result<()> {
        let r = self.boundary_ratio();
        if r >= BOUNDARY_DECAY {
            return Err(Error::grid(format!(
                "field has not decayed at x = ±{}: boundary/max = {r:.3e} (need < {BOUNDARY_DECAY:e}); enlarge the half-width",
                self.grid.x_half_width
            )));
        }
        Ok(())
    }

    pub fn scaled(&self, s: f64) -> Field {
        Field { grid: self.grid, samples: self.samples.iter().map(|v| v * s).collect() }
    }

    /// `self + s·other` on the same grid.
    pub fn axpy(&self, s: f64, other: &Field) -> Result<Field> {
        if self.grid != other.grid {
            return Err(Error::grid("fields live on different grids"));
        }
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| a + s * b).collect();
        Ok(Field { grid: self.grid, samples })
    }

    /// Discrete L² inner product.
    pub fn dot(&self, other: &Field) -> f64 {
        self.grid.weight() * self.samples.iter().zip(&other.samples).map(|(a, b)| a * b).sum::<f64>()
    }
}
