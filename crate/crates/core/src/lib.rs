//! Normalized solutions of mass-supercritical NLS on waveguide manifolds ℝᴺ×Mᵏ:
//! soliton ground states, Gagliardo–Nirenberg constants, existence and
//! triviality thresholds, the sphere criteria and a finite-difference solver
//! on ℝ×T¹.

// Guards are written as `!(x > 0.0)` so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod field_solver;
pub mod gn_constants;
pub mod ground_state;
pub mod params;
pub mod selftest;
pub mod specfun;
pub mod sphere_criteria;
pub mod thresholds;

pub use error::{Error, Result};
pub use params::ProblemParams;
