//! Applies (I + dt(σ − ∂²ₓ − λ∂²ᵧ))⁻¹: a DFT in y followed by a banded
//! LDLᵀ solve in x per Fourier mode.

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::energy::dyy_symbol;
use super::grid::Grid;

/// LDLᵀ factor of a symmetric pentadiagonal Toeplitz matrix.
struct Penta {
    d: Vec<f64>,
    l1: Vec<f64>,
    l2: Vec<f64>,
}

impl Penta {
    fn factor(n: usize, diag: f64, e1: f64, e2: f64) -> Self {
        let (mut d, mut l1, mut l2) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        for i in 0..n {
            if i >= 2 {
                l2[i] = e2 / d[i - 2];
            }
            if i >= 1 {
                let corr = if i >= 2 { l2[i] * l1[i - 1] * d[i - 2] } else { 0.0 };
                l1[i] = (e1 - corr) / d[i - 1];
            }
            let mut di = diag;
            if i >= 1 {
                di -= l1[i] * l1[i] * d[i - 1];
            }
            if i >= 2 {
                di -= l2[i] * l2[i] * d[i - 2];
            }
            d[i] = di;
        }
        Penta { d, l1, l2 }
    }

    /// Solves in place for a strided vector `x[offset + i*stride]`.
    fn solve(&self, x: &mut [Complex<f64>], offset: usize, stride: usize) {
        let n = self.d.len();
        let at = |i: usize| offset + i * stride;
        for i in 1..n {
            let mut v = x[at(i)] - x[at(i - 1)] * self.l1[i];
            if i >= 2 {
                v -= x[at(i - 2)] * self.l2[i];
            }
            x[at(i)] = v;
        }
        for i in 0..n {
            x[at(i)] /= self.d[i];
        }
        for i in (0..n.saturating_sub(1)).rev() {
            let mut v = x[at(i)] - x[at(i + 1)] * self.l1[i + 1];
            if i + 2 < n {
                v -= x[at(i + 2)] * self.l2[i + 2];
            }
            x[at(i)] = v;
        }
    }
}

pub(crate) struct Preconditioner {
    grid: Grid,
    lambda: f64,
    shift: f64,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    buf: Vec<Complex<f64>>,
    scratch: Vec<Complex<f64>>,
    cached_dt: f64,
    factors: Vec<Penta>,
}

impl Preconditioner {
    pub fn new(grid: Grid, lambda: f64) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(grid.ny);
        let inverse = planner.plan_fft_inverse(grid.ny);
        let scratch_len = forward.get_inplace_scratch_len().max(inverse.get_inplace_scratch_len());
        Preconditioner {
            grid,
            lambda,
            shift: 0.0,
            forward,
            inverse,
            buf: vec![Complex::default(); grid.len()],
            scratch: vec![Complex::default(); scratch_len],
            cached_dt: f64::NAN,
            factors: Vec::new(),
        }
    }

    fn refactor(&mut self, dt: f64, shift: f64) {
        if dt == self.cached_dt && shift == self.shift {
            return;
        }
        self.shift = shift;
        let c = dt / (12.0 * self.grid.hx() * self.grid.hx());
        // Symbols are symmetric in m ↔ ny − m, so only ny/2 + 1 factors are needed.
        self.factors = (0..=self.grid.ny / 2)
            .map(|m| {
                let diag = 1.0 + dt * self.shift + 30.0 * c + dt * self.lambda * dyy_symbol(&self.grid, m);
                Penta::factor(self.grid.nx, diag, -16.0 * c, c)
            })
            .collect();
        self.cached_dt = dt;
    }

    /// Overwrites `r` with (I + dt(σ − ∂²ₓ − λ∂²ᵧ))⁻¹ r, σ = `shift` ≥ 0.
    pub fn apply(&mut self, dt: f64, shift: f64, r: &mut [f64]) {
        self.refactor(dt, shift);
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        // buf holds column i (all y samples) contiguously at i*ny.
        for j in 0..ny {
            for i in 0..nx {
                self.buf[i * ny + j] = Complex::new(r[j * nx + i], 0.0);
            }
        }
        for col in self.buf.chunks_mut(ny) {
            self.forward.process_with_scratch(col, &mut self.scratch);
        }
        for m in 0..ny {
            let f = &self.factors[m.min(ny - m)];
            f.solve(&mut self.buf, m, ny);
        }
        for col in self.buf.chunks_mut(ny) {
            self.inverse.process_with_scratch(col, &mut self.scratch);
        }
        let scale = 1.0 / ny as f64;
        for j in 0..ny {
            for i in 0..nx {
                r[j * nx + i] = self.buf[i * ny + j].re * scale;
            }
        }
    }
}
