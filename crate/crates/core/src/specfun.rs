//! Gamma, Beta and round-sphere volumes.
//!
//! `log_gamma` uses the Lanczos approximation (g = 7, nine terms) together
//! with the reflection formula below 1/2. Every Beta evaluation goes through
//! log space, so large arguments never overflow.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// A strictly positive, finite real.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PositiveReal(f64);

impl PositiveReal {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 {
            Ok(PositiveReal(value))
        } else {
            Err(Error::domain(format!("expected a finite positive real, got {value}")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for PositiveReal {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        PositiveReal::new(value)
    }
}

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn ln_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection: Γ(x)Γ(1−x) = π / sin(πx), valid for 0 < x < 1/2 here.
        return (PI / (PI * x).sin()).ln() - ln_gamma_unchecked(1.0 - x);
    }
    let z = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

/// ln Γ(x) for x > 0.
pub fn log_gamma(x: f64) -> Result<f64> {
    let x = PositiveReal::new(x)?.get();
    Ok(ln_gamma_unchecked(x))
}

/// Γ(x) for x > 0; overflows to +∞ past x ≈ 171.
pub fn gamma(x: f64) -> Result<f64> {
    log_gamma(x).map(f64::exp)
}

/// ln 𝐁(x, y).
pub fn log_beta(x: f64, y: f64) -> Result<f64> {
    let x = PositiveReal::new(x)?.get();
    let y = PositiveReal::new(y)?.get();
    Ok(ln_gamma_unchecked(x) + ln_gamma_unchecked(y) - ln_gamma_unchecked(x + y))
}

/// Euler Beta function 𝐁(x, y) = Γ(x)Γ(y)/Γ(x+y).
pub fn beta(x: f64, y: f64) -> Result<f64> {
    log_beta(x, y).map(f64::exp)
}

/// Volume of the unit round sphere 𝕊ᵏ ⊂ ℝ^{k+1}: 2π^{(k+1)/2} / Γ((k+1)/2).
pub fn sphere_volume(k: u32) -> Result<f64> {
    if k < 1 {
        return Err(Error::domain("sphere dimension must be at least 1"));
    }
    let half = 0.5 * (k as f64 + 1.0);
    Ok((2.0f64.ln() + half * PI.ln() - ln_gamma_unchecked(half)).exp())
}
