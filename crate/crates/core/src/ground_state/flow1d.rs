//! A self-contained normalized gradient flow for E₀ on a 1-D window.
//!
//! Deliberately independent of the closed forms and of the 2-D field solver:
//! second-order differences, a Gaussian start, and a tridiagonal
//! preconditioner. Used as an oracle for G and I_ρ.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct E0FlowConfig {
    pub half_width: f64,
    pub points: usize,
    pub initial_width: f64,
    pub dt: f64,
    pub dt_max: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for E0FlowConfig {
    fn default() -> Self {
        E0FlowConfig {
            half_width: 300.0,
            points: 4001,
            initial_width: 20.0,
            dt: 1.0,
            dt_max: 1e4,
            tol: 1e-13,
            max_iter: 20_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct E0Minimum {
    pub energy: f64,
    /// Lagrange multiplier estimate ω = −⟨u, E₀′(u)⟩/ρ².
    pub omega: f64,
    pub iterations: usize,
    pub samples: Vec<f64>,
    pub spacing: f64,
}

struct Problem {
    alpha: f64,
    h: f64,
}

impl Problem {
    fn energy(&self, u: &[f64]) -> f64 {
        let mut grad = 0.0;
        let mut prev = 0.0;
        for &v in u.iter().chain(std::iter::once(&0.0)) {
            grad += (v - prev) * (v - prev);
            prev = v;
        }
        let lp: f64 = u.iter().map(|v| v.abs().powf(2.0 + self.alpha)).sum();
        0.5 * grad / self.h - self.h * lp / (2.0 + self.alpha)
    }

    fn gradient(&self, u: &[f64]) -> Vec<f64> {
        let n = u.len();
        let inv = 1.0 / (self.h * self.h);
        (0..n)
            .map(|i| {
                let l = if i > 0 { u[i - 1] } else { 0.0 };
                let r = if i + 1 < n { u[i + 1] } else { 0.0 };
                (2.0 * u[i] - l - r) * inv - u[i].abs().powf(self.alpha) * u[i]
            })
            .collect()
    }

    fn mass(&self, u: &[f64]) -> f64 {
        self.h * u.iter().map(|v| v * v).sum::<f64>()
    }

    /// Solves (I + dt·(−D²)) x = b with the Thomas algorithm.
    fn precondition(&self, dt: f64, b: &[f64]) -> Vec<f64> {
        let n = b.len();
        let off = -dt / (self.h * self.h);
        let diag = 1.0 + 2.0 * dt / (self.h * self.h);
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        c[0] = off / diag;
        d[0] = b[0] / diag;
        for i in 1..n {
            let m = diag - off * c[i - 1];
            c[i] = off / m;
            d[i] = (b[i] - off * d[i - 1]) / m;
        }
        let mut x = vec![0.0; n];
        x[n - 1] = d[n - 1];
        for i in (0..n - 1).rev() {
            x[i] = d[i] - c[i] * x[i + 1];
        }
        x
    }
}

/// Minimizes E₀(u) = ∫ ½|u′|² − |u|^{2+α}/(2+α) over ∫u² = ρ² on [−X, X]
/// with homogeneous Dirichlet ends.
pub fn minimize_e0_1d(alpha: f64, rho: f64, cfg: &E0FlowConfig) -> Result<E0Minimum> {
    if !(alpha > 0.0 && alpha < 4.0) {
        return Err(Error::domain(format!("1-D flow needs 0 < alpha < 4, got {alpha}")));
    }
    if !(rho > 0.0) || cfg.points < 8 || !(cfg.half_width > 0.0) {
        return Err(Error::domain("invalid mass or window for the 1-D flow"));
    }
    let h = 2.0 * cfg.half_width / (cfg.points + 1) as f64;
    let prob = Problem { alpha, h };
    let target = rho * rho;
    let normalize = |u: &mut Vec<f64>| {
        let s = (target / prob.mass(u)).sqrt();
        u.iter_mut().for_each(|v| *v *= s);
    };
    let mut u: Vec<f64> = (0..cfg.points)
        .map(|i| {
            let x = -cfg.half_width + (i + 1) as f64 * h;
            (-(x / cfg.initial_width).powi(2)).exp()
        })
        .collect();
    normalize(&mut u);
    let mut energy = prob.energy(&u);
    let mut dt = cfg.dt;
    let mut stalls = 0;
    for it in 0..cfg.max_iter {
        let g = prob.gradient(&u);
        let mu = u.iter().zip(&g).map(|(a, b)| a * b).sum::<f64>() / u.iter().map(|a| a * a).sum::<f64>();
        let omega = -mu;
        let residual: Vec<f64> = g.iter().zip(&u).map(|(gi, ui)| gi - mu * ui).collect();
        loop {
            let d = prob.precondition(dt, &residual);
            let mut trial: Vec<f64> = u.iter().zip(&d).map(|(ui, di)| ui - dt * di).collect();
            normalize(&mut trial);
            let e = prob.energy(&trial);
            if e <= energy {
                let change = (energy - e).abs();
                u = trial;
                energy = e;
                dt = (dt * 1.5).min(cfg.dt_max);
                stalls = if change < cfg.tol * energy.abs() { stalls + 1 } else { 0 };
                break;
            }
            dt *= 0.5;
            if dt < 1e-12 {
                // No descent possible at any step: we are at a discrete minimizer.
                return Ok(E0Minimum { energy, omega, iterations: it, samples: u, spacing: h });
            }
        }
        if !energy.is_finite() {
            return Err(Error::numeric("1-D flow produced a non-finite energy"));
        }
        if stalls >= 20 {
            return Ok(E0Minimum { energy, omega, iterations: it + 1, samples: u, spacing: h });
        }
    }
    Err(Error::numeric(format!("1-D flow did not stall within {} iterations", cfg.max_iter)))
}
