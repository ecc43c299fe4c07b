//! Finite-difference minimization of E on ℝ×T¹_L (N = 1, circle of length L).

mod energy;
mod flow;
mod grid;
mod precond;
mod scan;
mod transform;

pub use energy::{
    discrete_energy, discrete_energy_lambda, grad_norms, l2_gradient, l2_gradient_lambda, lp_norm_pow, mass,
    t_ratio, y_nontriviality,
};
pub use flow::{normalized_gradient_flow, FlowConfig, FlowStatus, MinimizeResult};
pub use grid::{Field, Grid, BOUNDARY_DECAY};
pub use scan::{
    bifurcation_scan, i_closed_torus, linspace, minimize_at_mass, rho_tr_upper_torus, second_variation_closed_torus,
    MassMinimum, ScanConfig, ScanReport, ScanRow, SCAN_CSV_HEADER,
};
pub use transform::{
    make_initial, make_initial_in_frame, renormalize, second_variation_fd, second_variation_fd_step, transform,
    transform_roundtrip, Frame,
};
