//! Discrete energy, its L² gradient and the quadrature norms.
//!
//! Second derivatives use the fourth-order stencil (−1, 16, −30, 16, −1)/(12h²),
//! with zero ghosts beyond ±X and periodic wrap in y. The kinetic terms are
//! the quadratic forms ⟨u, −∂²u⟩, so the gradient is exact for the discrete E.

use crate::error::{Error, Result};

use super::grid::{Field, Grid};

/// −∂²ₓu for every row, written into `out`.
pub(crate) fn neg_dxx(grid: &Grid, u: &[f64], out: &mut [f64]) {
    let nx = grid.nx;
    let c = 1.0 / (12.0 * grid.hx() * grid.hx());
    for (row, dst) in u.chunks(nx).zip(out.chunks_mut(nx)) {
        for i in 0..nx {
            let at = |k: isize| -> f64 {
                let idx = i as isize + k;
                if idx < 0 || idx >= nx as isize {
                    0.0
                } else {
                    row[idx as usize]
                }
            };
            dst[i] = c * (at(-2) - 16.0 * at(-1) + 30.0 * row[i] - 16.0 * at(1) + at(2));
        }
    }
}

/// −∂²ᵧu (periodic), written into `out`.
pub(crate) fn neg_dyy(grid: &Grid, u: &[f64], out: &mut [f64]) {
    let (nx, ny) = (grid.nx, grid.ny);
    let c = 1.0 / (12.0 * grid.hy() * grid.hy());
    for j in 0..ny {
        let r = |k: isize| ((j as isize + k).rem_euclid(ny as isize) as usize) * nx;
        let (m2, m1, z, p1, p2) = (r(-2), r(-1), j * nx, r(1), r(2));
        for i in 0..nx {
            out[z + i] = c * (u[m2 + i] - 16.0 * u[m1 + i] + 30.0 * u[z + i] - 16.0 * u[p1 + i] + u[p2 + i]);
        }
    }
}

/// Symbol of the periodic y operator on Fourier mode `m`.
pub(crate) fn dyy_symbol(grid: &Grid, m: usize) -> f64 {
    let t = 2.0 * std::f64::consts::PI * m as f64 / grid.ny as f64;
    (30.0 - 32.0 * t.cos() + 2.0 * (2.0 * t).cos()) / (12.0 * grid.hy() * grid.hy())
}

/// Energy pieces `(∫|∂ₓu|², ∫|∂ᵧu|², ∫|u|^{2+α})` plus the pointwise gradient if requested.
pub(crate) struct Evaluation {
    pub gx: f64,
    pub gy: f64,
    pub lp: f64,
    pub mass: f64,
}

impl Evaluation {
    pub fn energy(&self, alpha: f64, lambda: f64) -> f64 {
        0.5 * self.gx + 0.5 * lambda * self.gy - self.lp / (2.0 + alpha)
    }

    pub fn t_ratio(&self, lambda: f64) -> f64 {
        (self.gx / lambda + self.gy) / self.mass
    }
}

/// Scratch buffers reused across evaluations.
pub(crate) struct Workspace {
    pub ax: Vec<f64>,
    pub ay: Vec<f64>,
}

impl Workspace {
    pub fn new(grid: &Grid) -> Self {
        Workspace { ax: vec![0.0; grid.len()], ay: vec![0.0; grid.len()] }
    }
}

/// Evaluates the norms of `u`; with `grad = Some(g)` also stores
/// g = −∂²ₓu − λ∂²ᵧu − |u|^α u.
pub(crate) fn evaluate(
    grid: &Grid,
    u: &[f64],
    alpha: f64,
    lambda: f64,
    ws: &mut Workspace,
    grad: Option<&mut [f64]>,
) -> Evaluation {
    neg_dxx(grid, u, &mut ws.ax);
    neg_dyy(grid, u, &mut ws.ay);
    let (mut gx, mut gy, mut lp, mut mass) = (0.0, 0.0, 0.0, 0.0);
    for ((&v, &ax), &ay) in u.iter().zip(&ws.ax).zip(&ws.ay) {
        let p = v.abs().powf(alpha);
        gx += v * ax;
        gy += v * ay;
        lp += p * v * v;
        mass += v * v;
    }
    if let Some(g) = grad {
        for idx in 0..u.len() {
            let v = u[idx];
            g[idx] = ws.ax[idx] + lambda * ws.ay[idx] - v.abs().powf(alpha) * v;
        }
    }
    let w = grid.weight();
    Evaluation { gx: w * gx, gy: w * gy, lp: w * lp, mass: w * mass }
}

fn checked(u: &Field) -> Result<()> {
    u.check_decay()
}

/// E(u) = ∫∫ ½|∇u|² − |u|^{2+α}/(2+α).
pub fn discrete_energy(u: &Field, alpha: f64) -> Result<f64> {
    discrete_energy_lambda(u, alpha, 1.0)
}

/// E_λ(u) = ∫∫ ½|∂ₓu|² + (λ/2)|∂ᵧu|² − |u|^{2+α}/(2+α).
pub fn discrete_energy_lambda(u: &Field, alpha: f64, lambda: f64) -> Result<f64> {
    checked(u)?;
    let mut ws = Workspace::new(u.grid());
    Ok(evaluate(u.grid(), u.samples(), alpha, lambda, &mut ws, None).energy(alpha, lambda))
}

pub fn mass(u: &Field) -> f64 {
    u.dot(u)
}

/// (∫|∂ₓu|², ∫|∂ᵧu|²).
pub fn grad_norms(u: &Field) -> (f64, f64) {
    let mut ws = Workspace::new(u.grid());
    let e = evaluate(u.grid(), u.samples(), 0.0, 1.0, &mut ws, None);
    (e.gx, e.gy)
}

/// ∫|u|^{2+α}.
pub fn lp_norm_pow(u: &Field, alpha: f64) -> f64 {
    u.grid().weight() * u.samples().iter().map(|v| v.abs().powf(2.0 + alpha)).sum::<f64>()
}

/// t(u) = ‖∇u‖²/‖u‖².
pub fn t_ratio(u: &Field) -> Result<f64> {
    let m = mass(u);
    if !(m > 0.0) {
        return Err(Error::domain("t(u) is undefined for a zero field"));
    }
    let (gx, gy) = grad_norms(u);
    Ok((gx + gy) / m)
}

/// L² gradient −Δu − |u|^α u of E.
pub fn l2_gradient(u: &Field, alpha: f64) -> Field {
    l2_gradient_lambda(u, alpha, 1.0)
}

/// L² gradient of E_λ.
pub fn l2_gradient_lambda(u: &Field, alpha: f64, lambda: f64) -> Field {
    let grid = *u.grid();
    let mut ws = Workspace::new(&grid);
    let mut g = vec![0.0; grid.len()];
    evaluate(&grid, u.samples(), alpha, lambda, &mut ws, Some(&mut g));
    Field::from_raw(grid, g)
}

/// Fraction of the discrete mass outside the y-mean mode, in [0, 1].
pub fn y_nontriviality(u: &Field) -> f64 {
    let grid = u.grid();
    let total: f64 = u.samples().iter().map(|v| v * v).sum();
    if total == 0.0 {
        return 0.0;
    }
    let mut mean = vec![0.0; grid.nx];
    for row in u.samples().chunks(grid.nx) {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    let ny = grid.ny as f64;
    let mean_mass: f64 = mean.iter().map(|m| (m / ny).powi(2)).sum::<f64>() * ny;
    (1.0 - mean_mass / total).clamp(0.0, 1.0)
}
