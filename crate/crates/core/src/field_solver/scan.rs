use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ground_state::GroundStateData;
use crate::params::frequency_exponent;
use crate::thresholds;

use super::flow::{normalized_gradient_flow, FlowConfig, FlowStatus, MinimizeResult};
use super::grid::Grid;
use super::transform::{make_initial_in_frame, Frame};

/// Physical summary of a constrained minimization at mass ρ² on ℝ×T¹_L.
#[derive(Debug, Clone, PartialEq)]
pub struct MassMinimum {
    pub rho: f64,
    pub energy: f64,
    pub i_closed: f64,
    pub mass: f64,
    pub t_ratio: f64,
    pub frame: Frame,
    pub result: MinimizeResult,
}

/// I on T¹_L for the y-constant soliton: −G L^{−p/2} ρ^{2+p}.
pub fn i_closed_torus(alpha: f64, rho: f64, length: f64) -> Result<f64> {
    let gs = GroundStateData::new(alpha, 1)?;
    let p = frequency_exponent(alpha, 1);
    Ok(-gs.g * length.powf(-0.5 * p) * rho.powf(2.0 + p))
}

/// Closed-form E″(Z)[φ₁Z, φ₁Z] on T¹_L: the ℝ formula at ρ̂ = ρ/√L with μ₁ = (2π/L)².
pub fn second_variation_closed_torus(alpha: f64, rho: f64, length: f64) -> Result<f64> {
    let params = crate::params::ProblemParams::new(1, 1, alpha)?;
    let gs = GroundStateData::new(alpha, 1)?;
    let mu1 = (2.0 * std::f64::consts::PI / length).powi(2);
    thresholds::second_variation(&params, mu1, rho / length.sqrt(), &gs)
}

/// The ρ*_tr upper bound on T¹_L (vol = L, μ₁ = (2π/L)²).
pub fn rho_tr_upper_torus(alpha: f64, length: f64) -> Result<f64> {
    let params = crate::params::ProblemParams::new(1, 1, alpha)?;
    let gs = GroundStateData::new(alpha, 1)?;
    let mu1 = (2.0 * std::f64::consts::PI / length).powi(2);
    thresholds::rho_tr_upper(&params, mu1, &gs, length)
}

/// Minimizes from the ε-perturbed soliton, working in soliton units on `grid`.
pub fn minimize_at_mass(
    alpha: f64,
    rho: f64,
    epsilon: f64,
    grid: &Grid,
    t_star_cap: Option<f64>,
    cfg: &FlowConfig,
) -> Result<MassMinimum> {
    let frame = Frame::soliton(alpha, rho, grid.length)?;
    let init = make_initial_in_frame(alpha, rho, epsilon, grid, &frame)?;
    let target = rho * rho / frame.mass_factor();
    let result = normalized_gradient_flow(&init, alpha, frame.lambda, target, t_star_cap, cfg)?;
    if result.status == FlowStatus::Converged {
        result.field.check_decay()?;
    }
    Ok(MassMinimum {
        rho,
        energy: frame.energy_factor() * result.energy,
        i_closed: i_closed_torus(alpha, rho, grid.length)?,
        mass: frame.mass_factor() * result.mass,
        t_ratio: result.t_ratio,
        frame,
        result,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub alpha: f64,
    /// Grid in soliton units along x; its length is the circle length L.
    pub grid: Grid,
    pub epsilon: f64,
    pub nontrivial_tol: f64,
    pub tol_rel: f64,
    pub t_star_cap: Option<f64>,
    pub flow: FlowConfig,
}

impl ScanConfig {
    pub fn new(alpha: f64, length: f64) -> Result<Self> {
        Ok(ScanConfig {
            alpha,
            grid: Grid::new(30.0, 512, length, 64)?,
            epsilon: 0.05,
            nontrivial_tol: 1e-6,
            tol_rel: 1e-3,
            t_star_cap: None,
            flow: FlowConfig::default(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub rho: f64,
    pub m_numeric: f64,
    pub i_closed: f64,
    pub y_nontriviality: f64,
    pub t_ratio: f64,
    pub iterations: usize,
    pub status: String,
}

pub const SCAN_CSV_HEADER: &str = "rho,m_numeric,I_closed,y_nontriviality,t_ratio,iterations,status";

impl ScanRow {
    pub fn converged(&self) -> bool {
        self.status == FlowStatus::Converged.as_str()
    }

    /// Strictly below the y-constant level and carrying y-dependent mass.
    pub fn is_nontrivial(&self, cfg: &ScanConfig) -> bool {
        self.m_numeric < self.i_closed - cfg.tol_rel * self.i_closed.abs() && self.y_nontriviality > cfg.nontrivial_tol
    }

    pub fn is_trivial(&self, cfg: &ScanConfig) -> bool {
        (self.m_numeric - self.i_closed).abs() < cfg.tol_rel * self.i_closed.abs()
            && self.y_nontriviality <= cfg.nontrivial_tol
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{:.12e},{:.12e},{:.12e},{:.6e},{:.12e},{},{}",
            self.rho, self.m_numeric, self.i_closed, self.y_nontriviality, self.t_ratio, self.iterations, self.status
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub schema: u32,
    pub alpha: f64,
    pub length: f64,
    pub grid: Grid,
    pub rho_tr_upper: f64,
    pub rho_tr_estimate: Option<f64>,
    pub monotone: bool,
    pub rows: Vec<ScanRow>,
}

fn run_row(rho: f64, cfg: &ScanConfig) -> ScanRow {
    match minimize_at_mass(cfg.alpha, rho, cfg.epsilon, &cfg.grid, cfg.t_star_cap, &cfg.flow) {
        Ok(m) => ScanRow {
            rho,
            m_numeric: m.energy,
            i_closed: m.i_closed,
            y_nontriviality: m.result.y_nontriviality,
            t_ratio: m.t_ratio,
            iterations: m.result.iterations,
            status: m.result.status.as_str().to_string(),
        },
        Err(e) => ScanRow {
            rho,
            m_numeric: f64::NAN,
            i_closed: i_closed_torus(cfg.alpha, rho, cfg.grid.length).unwrap_or(f64::NAN),
            y_nontriviality: f64::NAN,
            t_ratio: f64::NAN,
            iterations: 0,
            status: format!("error: {e}"),
        },
    }
}

/// Minimizes at each ρ (in parallel) and estimates ρ*_tr as the first nontrivial row.
pub fn bifurcation_scan(rho_grid: &[f64], cfg: &ScanConfig) -> Result<ScanReport> {
    if rho_grid.is_empty() || rho_grid.windows(2).any(|w| !(w[0] < w[1])) || !(rho_grid[0] > 0.0) {
        return Err(Error::domain("rho grid must be positive and strictly ascending"));
    }
    let rows: Vec<ScanRow> = rho_grid.par_iter().map(|&rho| run_row(rho, cfg)).collect();
    let verdicts: Vec<bool> = rows.iter().filter(|r| r.converged()).map(|r| r.is_nontrivial(cfg)).collect();
    let monotone = verdicts.windows(2).all(|w| !w[0] || w[1]);
    let rho_tr_estimate = rows.iter().find(|r| r.converged() && r.is_nontrivial(cfg)).map(|r| r.rho);
    Ok(ScanReport {
        schema: 1,
        alpha: cfg.alpha,
        length: cfg.grid.length,
        grid: cfg.grid,
        rho_tr_upper: rho_tr_upper_torus(cfg.alpha, cfg.grid.length)?,
        rho_tr_estimate,
        monotone,
        rows,
    })
}

/// `n` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}
