//! Mass-constrained descent for E_λ.
//!
//! Each step projects the L² gradient onto the tangent of the mass sphere,
//! preconditions it with (I + dt(ω − ∂²ₓ − λ∂²ᵧ))⁻¹ (ω = max(−μ, 0) with μ
//! the current Lagrange multiplier estimate), takes `u − dt·d` and
//! rescales back to the target mass. Steps that raise the energy are
//! rejected and dt is halved; accepted steps let dt grow.
//!
//! In the mass-supercritical regime the energy is unbounded below and the
//! descent can concentrate onto the grid scale. A run whose energy falls
//! ten times the y-constant energy scale below that level is reported as
//! diverged; the reference level is E_λ of the y-average of the initial
//! field at the same mass.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::energy::{evaluate, Workspace};
use super::grid::Field;
use super::precond::Preconditioner;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlowStatus {
    Converged,
    HitTStar,
    MaxIterations,
    Diverged,
}

impl FlowStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            FlowStatus::Converged => "converged",
            FlowStatus::HitTStar => "hit-t-star",
            FlowStatus::MaxIterations => "max-iterations",
            FlowStatus::Diverged => "diverged",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowConfig {
    pub dt: f64,
    pub dt_max: f64,
    pub dt_growth: f64,
    /// Relative energy change counted as a stall.
    pub tol: f64,
    /// Consecutive stalls required.
    pub patience: usize,
    /// Dual norm of the projected gradient, relative to |μ|·‖u‖, required for convergence.
    pub residual_tol: f64,
    pub max_iter: usize,
    pub record_trace: bool,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig {
            dt: 0.5,
            dt_max: 1e3,
            dt_growth: 1.3,
            tol: 1e-10,
            patience: 50,
            residual_tol: 1e-6,
            max_iter: 50_000,
            record_trace: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimizeResult {
    pub field: Field,
    /// E_λ of the final iterate.
    pub energy: f64,
    pub mass: f64,
    /// ‖∂ₓu‖²/λ + ‖∂ᵧu‖² over the mass: t(u) of the physical field.
    pub t_ratio: f64,
    pub y_nontriviality: f64,
    pub residual: f64,
    pub iterations: usize,
    pub status: FlowStatus,
    /// Accepted energies, starting with the initial one, when requested.
    pub trace: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Descends E_λ on {‖u‖² = target_mass}, starting from `init` (which must carry that mass).
pub fn normalized_gradient_flow(
    init: &Field,
    alpha: f64,
    lambda: f64,
    target_mass: f64,
    t_star_cap: Option<f64>,
    cfg: &FlowConfig,
) -> Result<MinimizeResult> {
    if !(target_mass > 0.0) || !(lambda > 0.0) {
        return Err(Error::domain("target mass and lambda must be positive"));
    }
    let grid = *init.grid();
    let w = grid.weight();
    let m0 = init.dot(init);
    if (m0 - target_mass).abs() > 1e-10 * target_mass {
        return Err(Error::domain(format!("initial mass {m0} differs from the target {target_mass}")));
    }
    init.check_decay()?;

    let mut ws = Workspace::new(&grid);
    let n = grid.len();
    let mut u = init.samples().to_vec();
    let mut g = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let normalize = |v: &mut [f64]| {
        let s = (target_mass / (w * dot(v, v))).sqrt();
        v.iter_mut().for_each(|x| *x *= s);
    };

    let reference = {
        let mut row_mean = vec![0.0; grid.nx];
        for row in u.chunks(grid.nx) {
            for (m, v) in row_mean.iter_mut().zip(row) {
                *m += v / grid.ny as f64;
            }
        }
        let mut mean: Vec<f64> = (0..n).map(|k| row_mean[k % grid.nx]).collect();
        normalize(&mut mean);
        evaluate(&grid, &mean, alpha, lambda, &mut ws, None).energy(alpha, lambda)
    };
    let collapse_level = reference - 10.0 * reference.abs();
    let mut ev = evaluate(&grid, &u, alpha, lambda, &mut ws, Some(&mut g));
    let mut pre = Preconditioner::new(grid, lambda);
    let mut dual = Preconditioner::new(grid, lambda);
    let mut scratch = vec![0.0; n];
    let mut energy = ev.energy(alpha, lambda);
    let mut trace = if cfg.record_trace { vec![energy] } else { Vec::new() };
    let mut dt = cfg.dt;
    let mut stalls = 0usize;
    let mut status = FlowStatus::MaxIterations;
    let mut residual = f64::INFINITY;
    let mut iterations = 0;

    while iterations < cfg.max_iter {
        let uu = dot(&u, &u);
        let mu = dot(&u, &g) / uu;
        for k in 0..n {
            d[k] = g[k] - mu * u[k];
        }
        // Dual (H⁻¹-type) norm of the projected gradient, relative to |μ|‖u‖.
        scratch.copy_from_slice(&d);
        dual.apply(1.0, (-mu).max(0.0), &mut scratch);
        residual = (dot(&d, &scratch) / uu).sqrt() / mu.abs().max(f64::MIN_POSITIVE);
        if residual < cfg.residual_tol && stalls >= cfg.patience.min(iterations) {
            status = FlowStatus::Converged;
            break;
        }
        let r = d.clone();
        let accepted = loop {
            d.copy_from_slice(&r);
            pre.apply(dt, (-mu).max(0.0), &mut d);
            for k in 0..n {
                trial[k] = u[k] - dt * d[k];
            }
            normalize(&mut trial);
            let e = evaluate(&grid, &trial, alpha, lambda, &mut ws, None).energy(alpha, lambda);
            if e <= energy {
                break Some(e);
            }
            dt *= 0.5;
            if dt < 1e-14 {
                break None;
            }
        };
        iterations += 1;
        let Some(e) = accepted else {
            // No descent at any step size: a discrete critical point up to round-off.
            status = if residual < 1e3 * cfg.residual_tol { FlowStatus::Converged } else { FlowStatus::MaxIterations };
            break;
        };
        std::mem::swap(&mut u, &mut trial);
        let change = energy - e;
        stalls = if change <= cfg.tol * e.abs() { stalls + 1 } else { 0 };
        energy = e;
        if cfg.record_trace {
            trace.push(e);
        }
        dt = (dt * cfg.dt_growth).min(cfg.dt_max);
        ev = evaluate(&grid, &u, alpha, lambda, &mut ws, Some(&mut g));
        if !ev.energy(alpha, lambda).is_finite() {
            status = FlowStatus::Diverged;
            break;
        }
        let t = ev.t_ratio(lambda);
        if let Some(cap) = t_star_cap {
            if t > cap {
                status = FlowStatus::HitTStar;
                break;
            }
        }
        if energy < collapse_level {
            status = FlowStatus::Diverged;
            break;
        }
    }

    let field = Field::new(grid, u)?;
    let y_nontriviality = super::energy::y_nontriviality(&field);
    Ok(MinimizeResult {
        energy,
        mass: ev.mass,
        t_ratio: ev.t_ratio(lambda),
        y_nontriviality,
        residual,
        iterations,
        status,
        field,
        trace,
    })
}
