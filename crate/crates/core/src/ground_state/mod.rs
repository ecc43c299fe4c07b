//! The Euclidean soliton Z_ρ: the positive ground state of
//! `−ΔZ + ω_ρ Z = Z^{1+α}` on ℝᴺ with ‖Z‖₂ = ρ, and the constants built from it.
//!
//! Everything scales from the unit-frequency profile U (ω = 1) with mass ρ₀:
//! `Z_ρ(x) = c^{4/(4−αN)} U(c^{2α/(4−αN)} x)` with `c = ρ/ρ₀`. For N = 1 the
//! profile is explicit; for N ≥ 2 it is computed by radial shooting.

mod flow1d;
mod radial;

pub use flow1d::{minimize_e0_1d, E0FlowConfig, E0Minimum};
pub use radial::RadialProfile;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::frequency_exponent;
use crate::specfun;

/// Closed form of the unit-frequency 1-D soliton
/// `U(x) = (1+α/2)^{1/α} cosh(αx/2)^{−2/α}`.
pub fn soliton_profile_1d(alpha: f64, x: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::domain(format!("alpha must be positive, got {alpha}")));
    }
    if !x.is_finite() {
        return Err(Error::domain("profile abscissa must be finite"));
    }
    Ok(profile_1d(alpha, x))
}

fn profile_1d(alpha: f64, x: f64) -> f64 {
    // cosh(t)^{-2/α} evaluated in log space so large |x| underflows cleanly.
    let t = (0.5 * alpha * x).abs();
    let ln_cosh = t + (-2.0 * t).exp().ln_1p() - std::f64::consts::LN_2;
    ((1.0 + 0.5 * alpha).ln() / alpha - 2.0 / alpha * ln_cosh).exp()
}

fn check_exponent(alpha: f64, n: u32) -> Result<()> {
    if n < 1 {
        return Err(Error::domain("Euclidean dimension N must be >= 1"));
    }
    let nf = f64::from(n);
    let mut hi = 4.0 / nf;
    if n >= 3 {
        hi = hi.min(4.0 / (nf - 2.0));
    }
    if !(alpha > 0.0 && alpha < hi) {
        return Err(Error::domain(format!(
            "alpha = {alpha} outside (0, {hi}) required for the soliton in dimension N = {n}"
        )));
    }
    Ok(())
}

/// Closed-form ρ₀ for N = 1: ρ₀² = (1+α/2)^{2/α} (2/α) 𝐁(1/2, 2/α).
fn rho0_closed_1d(alpha: f64) -> Result<f64> {
    let ln_sq = (2.0 / alpha) * (1.0 + 0.5 * alpha).ln()
        + (2.0 / alpha).ln()
        + specfun::log_beta(0.5, 2.0 / alpha)?;
    Ok((0.5 * ln_sq).exp())
}

/// ρ₀ = ‖U‖_{L²(ℝᴺ)}.
pub fn rho0(alpha: f64, n: u32) -> Result<f64> {
    check_exponent(alpha, n)?;
    if n == 1 {
        rho0_closed_1d(alpha)
    } else {
        Ok(RadialProfile::shoot(alpha, n)?.mass())
    }
}

fn g_from_rho0(alpha: f64, n: u32, rho0: f64) -> f64 {
    let nf = f64::from(n);
    (4.0 - alpha * nf) / (8.0 - 2.0 * alpha * nf + 4.0 * alpha)
        * rho0.powf(-frequency_exponent(alpha, n))
}

/// G = −I₁ > 0.
pub fn g_constant(alpha: f64, n: u32) -> Result<f64> {
    Ok(g_from_rho0(alpha, n, rho0(alpha, n)?))
}

fn check_mass(rho: f64) -> Result<()> {
    if rho.is_finite() && rho > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("mass parameter rho must be positive, got {rho}")))
    }
}

/// Ground-state energy level I_ρ = −G ρ^{2+4α/(4−Nα)} on ℝᴺ.
pub fn i_rho(alpha: f64, n: u32, rho: f64) -> Result<f64> {
    GroundStateData::new(alpha, n)?.i_rho(rho)
}

/// (‖∇Z_ρ‖², ‖Z_ρ‖_{2+α}^{2+α}) from the Pohozaev-type identities.
pub fn ground_state_identities(alpha: f64, n: u32, rho: f64) -> Result<(f64, f64)> {
    GroundStateData::new(alpha, n)?.identities(rho)
}

/// Lagrange multiplier ω_ρ = (ρ/ρ₀)^{4α/(4−αN)}.
pub fn omega_rho(alpha: f64, n: u32, rho: f64) -> Result<f64> {
    GroundStateData::new(alpha, n)?.omega(rho)
}

/// Sample of the mass-ρ soliton at (radial) position `x`, for N = 1.
///
/// For N ≥ 2 build a [`GroundState`] once and call [`GroundState::z_rho`].
pub fn z_rho_profile(alpha: f64, n: u32, rho: f64, x: f64) -> Result<f64> {
    GroundState::new(alpha, n)?.z_rho(rho, x)
}

/// ρ₀ and G for a given (α, N).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroundStateData {
    pub alpha: f64,
    pub n: u32,
    pub rho0: f64,
    pub g: f64,
}

impl GroundStateData {
    pub fn new(alpha: f64, n: u32) -> Result<Self> {
        let rho0 = rho0(alpha, n)?;
        Ok(Self::from_rho0(alpha, n, rho0))
    }

    /// Builds the data from an externally computed ρ₀ (e.g. a cached shooting result).
    pub fn from_rho0(alpha: f64, n: u32, rho0: f64) -> Self {
        GroundStateData { alpha, n, rho0, g: g_from_rho0(alpha, n, rho0) }
    }

    pub fn frequency_exponent(&self) -> f64 {
        frequency_exponent(self.alpha, self.n)
    }

    pub fn i_rho(&self, rho: f64) -> Result<f64> {
        check_mass(rho)?;
        Ok(-self.g * rho.powf(2.0 + self.frequency_exponent()))
    }

    pub fn identities(&self, rho: f64) -> Result<(f64, f64)> {
        let i = self.i_rho(rho)?;
        let an = self.alpha * f64::from(self.n);
        let grad = -(2.0 * an / (4.0 - an)) * i;
        let lp = -(4.0 * (self.alpha + 2.0) / (4.0 - an)) * i;
        Ok((grad, lp))
    }

    pub fn omega(&self, rho: f64) -> Result<f64> {
        check_mass(rho)?;
        Ok((rho / self.rho0).powf(self.frequency_exponent()))
    }

    /// Amplitude and length factors (a, b) with Z_ρ(x) = a·U(b·x).
    pub fn scaling(&self, rho: f64) -> Result<(f64, f64)> {
        check_mass(rho)?;
        let an = self.alpha * f64::from(self.n);
        let c = rho / self.rho0;
        Ok((c.powf(4.0 / (4.0 - an)), c.powf(2.0 * self.alpha / (4.0 - an))))
    }
}

/// Ground-state data together with an evaluable unit-frequency profile.
#[derive(Debug, Clone)]
pub struct GroundState {
    data: GroundStateData,
    radial: Option<RadialProfile>,
}

impl GroundState {
    pub fn new(alpha: f64, n: u32) -> Result<Self> {
        check_exponent(alpha, n)?;
        if n == 1 {
            Ok(GroundState { data: GroundStateData::new(alpha, 1)?, radial: None })
        } else {
            let profile = RadialProfile::shoot(alpha, n)?;
            let data = GroundStateData::from_rho0(alpha, n, profile.mass());
            Ok(GroundState { data, radial: Some(profile) })
        }
    }

    pub fn data(&self) -> &GroundStateData {
        &self.data
    }

    /// U at radius |x|.
    pub fn unit_profile(&self, x: f64) -> f64 {
        match &self.radial {
            None => profile_1d(self.data.alpha, x),
            Some(p) => p.value(x.abs()),
        }
    }

    /// Z_ρ at radius |x|.
    pub fn z_rho(&self, rho: f64, x: f64) -> Result<f64> {
        let (a, b) = self.data.scaling(rho)?;
        Ok(a * self.unit_profile(b * x))
    }
}

/// Quadrature values of a grid-sampled 1-D Z_ρ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampledNorms {
    pub mass: f64,
    pub grad_sq: f64,
    pub lp_pow: f64,
    pub energy: f64,
}

/// Samples Z_ρ (N = 1) with spacing `h` on a window wide enough that the
/// profile drops below 1e-12 of its peak, and integrates by the composite
/// trapezoid rule. The derivative uses the closed form of U′.
pub fn sampled_norms_1d(alpha: f64, rho: f64, h: f64) -> Result<SampledNorms> {
    let data = GroundStateData::new(alpha, 1)?;
    let (a, b) = data.scaling(rho)?;
    let half_width = decay_half_width(alpha, 1e-12) / b;
    let steps = (half_width / h).ceil() as usize;
    let (mut mass, mut grad, mut lp) = (0.0, 0.0, 0.0);
    for i in 0..=(2 * steps) {
        let x = -(steps as f64) * h + i as f64 * h;
        let w = if i == 0 || i == 2 * steps { 0.5 * h } else { h };
        let u = a * profile_1d(alpha, b * x);
        let du = a * b * profile_derivative_1d(alpha, b * x);
        mass += w * u * u;
        grad += w * du * du;
        lp += w * u.powf(2.0 + alpha);
    }
    Ok(SampledNorms { mass, grad_sq: grad, lp_pow: lp, energy: 0.5 * grad - lp / (2.0 + alpha) })
}

fn profile_derivative_1d(alpha: f64, x: f64) -> f64 {
    // U′ = −U · tanh(αx/2)
    -profile_1d(alpha, x) * (0.5 * alpha * x).tanh()
}

/// Half-width X with U(X) < `fraction`·U(0) for the 1-D unit profile.
pub fn decay_half_width(alpha: f64, fraction: f64) -> f64 {
    // cosh(αX/2)^{-2/α} < fraction  ⇐  e^{αX/2}/2 > fraction^{-α/2}
    let t = -0.5 * alpha * fraction.ln() + std::f64::consts::LN_2;
    2.0 * t / alpha
}

/// Max-norm of the centered-difference residual −Z″ + ω_ρ Z − Z^{1+α}
/// over interior samples on [−X, X] with spacing `h` (N = 1).
pub fn ode_residual_1d(alpha: f64, rho: f64, h: f64) -> Result<f64> {
    let data = GroundStateData::new(alpha, 1)?;
    let (a, b) = data.scaling(rho)?;
    let omega = data.omega(rho)?;
    let half_width = decay_half_width(alpha, 1e-12) / b;
    let steps = (half_width / h).ceil() as i64;
    let z = |x: f64| a * profile_1d(alpha, b * x);
    let mut worst: f64 = 0.0;
    for i in (-steps + 1)..steps {
        let x = i as f64 * h;
        let (zm, z0, zp) = (z(x - h), z(x), z(x + h));
        let lap = (zp - 2.0 * z0 + zm) / (h * h);
        worst = worst.max((-lap + omega * z0 - z0.powf(1.0 + alpha)).abs());
    }
    Ok(worst)
}
