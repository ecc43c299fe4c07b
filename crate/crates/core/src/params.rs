use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Euclidean dimension `n`, compact-factor dimension `k` and nonlinearity
/// exponent `alpha` of the energy on ℝⁿ × Mᵏ.
///
/// Construction enforces the admissible window
/// `4/(n+k) ≤ alpha < min{4/n, 4/(n+k−2)}`, the last bound read as +∞ when
/// `n + k ≤ 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemParams {
    n: u32,
    k: u32,
    alpha: f64,
}

impl ProblemParams {
    pub fn new(n: u32, k: u32, alpha: f64) -> Result<Self> {
        let (lo, hi) = Self::alpha_window(n, k)?;
        if !alpha.is_finite() {
            return Err(Error::domain(format!("alpha must be finite, got {alpha}")));
        }
        // Tolerate round-off at the mass-critical endpoint (e.g. 4/3 typed as 1.3333333333333333).
        if alpha < lo * (1.0 - 4.0 * f64::EPSILON) {
            return Err(Error::domain(format!(
                "alpha = {alpha} is mass-subcritical for N = {n}, k = {k}; need alpha >= 4/(N+k) = {lo}"
            )));
        }
        if alpha >= hi {
            return Err(Error::domain(format!(
                "alpha = {alpha} exceeds the admissible bound min(4/N, 4/(N+k-2)) = {hi} for N = {n}, k = {k}"
            )));
        }
        Ok(ProblemParams { n, k, alpha: alpha.max(lo) })
    }

    /// The admissible `[lo, hi)` range of alpha for dimensions `(n, k)`.
    pub fn alpha_window(n: u32, k: u32) -> Result<(f64, f64)> {
        if n < 1 || k < 1 {
            return Err(Error::domain(format!("dimensions must be >= 1, got N = {n}, k = {k}")));
        }
        let lo = 4.0 / f64::from(n + k);
        let euclid = 4.0 / f64::from(n);
        let sobolev = if n + k <= 2 { f64::INFINITY } else { 4.0 / f64::from(n + k - 2) };
        Ok((lo, euclid.min(sobolev)))
    }

    /// The mass-critical exponent 4/(n+k).
    pub fn mass_critical_alpha(n: u32, k: u32) -> f64 {
        4.0 / f64::from(n + k)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// True when `alpha` sits at the mass-critical endpoint.
    pub fn is_mass_critical(&self) -> bool {
        let crit = Self::mass_critical_alpha(self.n, self.k);
        (self.alpha - crit).abs() <= 8.0 * f64::EPSILON * crit
    }

    /// Exponent 4α/(4−Nα) of the frequency scaling ρ ↦ ω_ρ.
    pub fn frequency_exponent(&self) -> f64 {
        frequency_exponent(self.alpha, self.n)
    }
}

/// 4α/(4−Nα), the power of ρ carried by ω_ρ, λ⁻¹ and the soliton energy beyond ρ².
pub fn frequency_exponent(alpha: f64, n: u32) -> f64 {
    4.0 * alpha / (4.0 - f64::from(n) * alpha)
}
