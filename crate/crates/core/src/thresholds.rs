//! Existence and (non)triviality thresholds.
//!
//! The lower bound `E(u) ≥ f(t(u), ρ)` with
//! `f(t, ρ) = ρ²[t/2 − Aρ^α/(2+α) (t+B)^{θ/2}]` gives the cap t* and the
//! existence threshold ρ*_ex; the second variation of E at the y-constant
//! soliton along φ₁Z_ρ gives the upper bound for ρ*_tr. Comparing the two
//! yields the sufficient criteria for y-dependent local minimizers.
//!
//! When the compact factor has volume V ≠ 1 the y-constant competitor at
//! total mass ρ is Z_ρ̂ with ρ̂² = ρ²/V, whose energy is
//! `−G V^{−p/2} ρ^{2+p}` (p = 4α/(4−Nα)); both the ρ*_tr bound and f̃ use it.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gn_constants::{GnConstants, ManifoldSpec};
use crate::ground_state::GroundStateData;
use crate::params::{frequency_exponent, ProblemParams};

/// Relative guard band applied to strict inequalities.
pub const GUARD: f64 = 1e-12;

/// The gradient cap t*; +∞ in the mass-critical case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TStar {
    Finite(f64),
    Infinite,
}

impl TStar {
    pub fn finite(self) -> Option<f64> {
        match self {
            TStar::Finite(t) => Some(t),
            TStar::Infinite => None,
        }
    }

    pub fn as_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

impl Serialize for TStar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            TStar::Finite(t) => s.serialize_f64(*t),
            TStar::Infinite => s.serialize_str("+inf"),
        }
    }
}

/// The improved existence threshold, which may not be bounded by the estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ImprovedThreshold {
    Finite(f64),
    UnboundedByEstimate,
}

impl ImprovedThreshold {
    pub fn finite(self) -> Option<f64> {
        match self {
            ImprovedThreshold::Finite(r) => Some(r),
            ImprovedThreshold::UnboundedByEstimate => None,
        }
    }
}

impl Serialize for ImprovedThreshold {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ImprovedThreshold::Finite(r) => s.serialize_f64(*r),
            ImprovedThreshold::UnboundedByEstimate => s.serialize_str("unbounded-by-estimate"),
        }
    }
}

/// f(t, ρ) = ρ²[t/2 − Aρ^α/(2+α)(t+B)^{θ/2}].
pub fn f_lower(t: f64, rho: f64, params: &ProblemParams, gn: &GnConstants) -> f64 {
    let alpha = params.alpha();
    rho * rho * (0.5 * t - gn.a * rho.powf(alpha) / (2.0 + alpha) * (t + gn.b).powf(gn.theta / 2.0))
}

/// ∂ₜf(t, ρ).
pub fn f_lower_dt(t: f64, rho: f64, params: &ProblemParams, gn: &GnConstants) -> f64 {
    let alpha = params.alpha();
    rho * rho
        * (0.5 - gn.a * gn.theta * rho.powf(alpha) / (2.0 * (2.0 + alpha)) * (t + gn.b).powf(gn.theta / 2.0 - 1.0))
}

fn check_supercritical(params: &ProblemParams) -> Result<()> {
    let crit = ProblemParams::mass_critical_alpha(params.n(), params.k());
    if params.alpha() < crit && !params.is_mass_critical() {
        return Err(Error::domain(format!("alpha = {} is below the mass-critical value {crit}", params.alpha())));
    }
    Ok(())
}

/// t* = 4B/((N+k)α − 4), or +∞ at the mass-critical exponent.
pub fn t_star(params: &ProblemParams, gn: &GnConstants) -> Result<TStar> {
    check_supercritical(params)?;
    if params.is_mass_critical() {
        return Ok(TStar::Infinite);
    }
    let d = f64::from(params.n() + params.k()) * params.alpha() - 4.0;
    Ok(TStar::Finite(4.0 * gn.b / d))
}

/// `(2+α)/(θ A B^{θ/2−1}) ((θ−2)/θ)^{θ/2−1}`, continuously `(2+α)/(2A)` at θ = 2.
fn rho_ex_basic_pow_alpha(params: &ProblemParams, gn: &GnConstants) -> f64 {
    let alpha = params.alpha();
    if params.is_mass_critical() {
        return (2.0 + alpha) / (2.0 * gn.a);
    }
    let th = gn.theta;
    let e = th / 2.0 - 1.0;
    (2.0 + alpha) / (th * gn.a * gn.b.powf(e)) * ((th - 2.0) / th).powf(e)
}

/// ρ*_ex from the solution of f = ∂ₜf = 0.
pub fn rho_ex_basic(params: &ProblemParams, gn: &GnConstants) -> Result<f64> {
    check_supercritical(params)?;
    Ok(rho_ex_basic_pow_alpha(params, gn).powf(1.0 / params.alpha()))
}

/// Energy of the y-constant soliton on a factor of volume `vol`, divided by −ρ^{2+p}.
fn effective_g(gs: &GroundStateData, vol: f64) -> f64 {
    gs.g * vol.powf(-0.5 * gs.frequency_exponent())
}

fn f_tilde_parts(params: &ProblemParams, gn: &GnConstants, gs: &GroundStateData, vol: f64) -> Result<(f64, f64, f64)> {
    let t = t_star(params, gn)?
        .finite()
        .ok_or_else(|| Error::domain("f-tilde is undefined at the mass-critical exponent (t* = +inf)"))?;
    let k = gn.a * (t + gn.b).powf(gn.theta / 2.0) / (2.0 + params.alpha());
    Ok((t, k, effective_g(gs, vol)))
}

/// f̃(ρ) = (f(t*, ρ) − I_ρ)/ρ² = t*/2 − A(t*+B)^{θ/2}ρ^α/(2+α) + G_V ρ^{4α/(4−Nα)},
/// with G_V = G·vol^{−2α/(4−Nα)} (G_V = G for a unit-volume factor).
pub fn f_tilde(rho: f64, params: &ProblemParams, gn: &GnConstants, gs: &GroundStateData, vol: f64) -> Result<f64> {
    let (t, k, g) = f_tilde_parts(params, gn, gs, vol)?;
    let p = frequency_exponent(params.alpha(), params.n());
    Ok(0.5 * t - k * rho.powf(params.alpha()) + g * rho.powf(p))
}

/// d f̃/dρ.
pub fn f_tilde_prime(rho: f64, params: &ProblemParams, gn: &GnConstants, gs: &GroundStateData, vol: f64) -> Result<f64> {
    let (_, k, g) = f_tilde_parts(params, gn, gs, vol)?;
    let alpha = params.alpha();
    let p = frequency_exponent(alpha, params.n());
    Ok(-k * alpha * rho.powf(alpha - 1.0) + g * p * rho.powf(p - 1.0))
}

/// The unique critical point of f̃ on (0, ∞), where the two power terms balance.
pub fn f_tilde_minimizer(params: &ProblemParams, gn: &GnConstants, gs: &GroundStateData, vol: f64) -> Result<f64> {
    let (_, k, g) = f_tilde_parts(params, gn, gs, vol)?;
    let alpha = params.alpha();
    let p = frequency_exponent(alpha, params.n());
    Ok((k * alpha / (g * p)).powf(1.0 / (p - alpha)))
}

/// Improved ρ*_ex: the first positive zero of f̃, or the sentinel when f̃ stays positive.
pub fn rho_ex_improved(
    params: &ProblemParams,
    gn: &GnConstants,
    gs: &GroundStateData,
    vol: f64,
) -> Result<ImprovedThreshold> {
    let rho_min = f_tilde_minimizer(params, gn, gs, vol)?;
    let f = |r: f64| f_tilde(r, params, gn, gs, vol);
    if f(rho_min)? > 0.0 {
        return Ok(ImprovedThreshold::UnboundedByEstimate);
    }
    // f̃(0⁺) = t*/2 > 0 and f̃ decreases on (0, rho_min): a single sign change.
    let (mut lo, mut hi) = (0.0, rho_min);
    while hi - lo > 1e-15 * hi {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ImprovedThreshold::Finite(0.5 * (lo + hi)))
}

fn second_variation_coefficient(params: &ProblemParams) -> f64 {
    let alpha = params.alpha();
    let an = alpha * f64::from(params.n());
    (4.0 * (1.0 + alpha) * (2.0 + alpha) - 2.0 * an) / (4.0 - an)
}

/// E″(Z_ρ)[φ₁Z_ρ, φ₁Z_ρ] = μ₁ρ² + ((4(1+α)(2+α) − 2αN)/(4−αN)) I_ρ.
pub fn second_variation(params: &ProblemParams, mu1: f64, rho: f64, gs: &GroundStateData) -> Result<f64> {
    if !(mu1 > 0.0) {
        return Err(Error::domain("mu1 must be positive"));
    }
    Ok(mu1 * rho * rho + second_variation_coefficient(params) * gs.i_rho(rho)?)
}

/// Upper bound for ρ*_tr, `√vol · [μ₁(4−αN)/(G(4(1+α)(2+α)−2αN))]^{(4−Nα)/(4α)}`.
pub fn rho_tr_upper(params: &ProblemParams, mu1: f64, gs: &GroundStateData, vol: f64) -> Result<f64> {
    if !(mu1 > 0.0) || !(vol > 0.0) {
        return Err(Error::domain("mu1 and vol must be positive"));
    }
    let p = frequency_exponent(params.alpha(), params.n());
    Ok(vol.sqrt() * (mu1 / (gs.g * second_variation_coefficient(params))).powf(1.0 / p))
}

/// λ = ρ^{−4α/(4−αN)}.
pub fn lambda_of_rho(rho: f64, params: &ProblemParams) -> f64 {
    rho.powf(-params.frequency_exponent())
}

/// Inverse of [`lambda_of_rho`].
pub fn rho_of_lambda(lambda: f64, params: &ProblemParams) -> f64 {
    lambda.powf(-1.0 / params.frequency_exponent())
}

/// A strict-inequality verdict `lhs < rhs` with its guard-band diagnostic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub borderline: bool,
    pub lhs: f64,
    pub rhs: f64,
}

impl Verdict {
    pub fn strict_less(lhs: f64, rhs: f64) -> Self {
        let band = GUARD * lhs.abs().max(rhs.abs());
        let borderline = (lhs - rhs).abs() <= band;
        Verdict { holds: !borderline && lhs < rhs, borderline, lhs, rhs }
    }
}

/// Basic criterion: vol^{α/2}[μ₁(4−αN)/(G(…))]^{(4−Nα)/4} < (ρ*_ex)^α.
pub fn criterion_basic(
    params: &ProblemParams,
    manifold: &ManifoldSpec,
    gn: &GnConstants,
    gs: &GroundStateData,
) -> Result<Verdict> {
    let bound = rho_tr_upper(params, manifold.mu1(), gs, manifold.vol())?;
    let lhs = bound.powf(params.alpha());
    Ok(Verdict::strict_less(lhs, rho_ex_basic_pow_alpha(params, gn)))
}

/// Improved criterion: f̃(R) > 0 and f̃′(R) < 0 at R = the ρ*_tr bound.
/// At the mass-critical exponent this is the basic criterion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ImprovedVerdict {
    pub holds: bool,
    pub borderline: bool,
    pub r: f64,
    pub f_tilde: Option<f64>,
    pub f_tilde_prime: Option<f64>,
}

pub fn criterion_improved(
    params: &ProblemParams,
    manifold: &ManifoldSpec,
    gn: &GnConstants,
    gs: &GroundStateData,
) -> Result<ImprovedVerdict> {
    let vol = manifold.vol();
    let r = rho_tr_upper(params, manifold.mu1(), gs, vol)?;
    if params.is_mass_critical() {
        let v = criterion_basic(params, manifold, gn, gs)?;
        return Ok(ImprovedVerdict { holds: v.holds, borderline: v.borderline, r, f_tilde: None, f_tilde_prime: None });
    }
    let (t, k, g) = f_tilde_parts(params, gn, gs, vol)?;
    let p = frequency_exponent(params.alpha(), params.n());
    let value = f_tilde(r, params, gn, gs, vol)?;
    let slope = f_tilde_prime(r, params, gn, gs, vol)?;
    // Scales of the competing terms, for the guard band.
    let value_scale = 0.5 * t + k * r.powf(params.alpha()) + g * r.powf(p);
    let slope_scale = (k * params.alpha() * r.powf(params.alpha() - 1.0)).abs() + (g * p * r.powf(p - 1.0)).abs();
    let borderline = value.abs() <= GUARD * value_scale || slope.abs() <= GUARD * slope_scale;
    Ok(ImprovedVerdict {
        holds: !borderline && value > 0.0 && slope < 0.0,
        borderline,
        r,
        f_tilde: Some(value),
        f_tilde_prime: Some(slope),
    })
}

/// One formula value with the tag of the formula that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaggedValue {
    pub name: &'static str,
    pub formula: &'static str,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdReport {
    pub n: u32,
    pub k: u32,
    pub alpha: f64,
    pub manifold: String,
    pub vol: f64,
    pub mu1: f64,
    pub a: f64,
    pub b: f64,
    pub theta: f64,
    pub g: f64,
    pub t_star: TStar,
    pub rho_ex_basic: f64,
    pub rho_ex_improved: Option<ImprovedThreshold>,
    pub rho_tr_upper: f64,
    pub lambda_ex: f64,
    pub criterion_basic: bool,
    pub criterion_basic_detail: Verdict,
    pub criterion_improved: bool,
    pub criterion_improved_detail: ImprovedVerdict,
    pub conditional_on_b: bool,
    pub conditional_on_a: bool,
    pub warnings: Vec<String>,
}

impl ThresholdReport {
    pub fn compute(
        params: &ProblemParams,
        manifold: &ManifoldSpec,
        gn: &GnConstants,
        gs: &GroundStateData,
        warnings: Vec<String>,
    ) -> Result<Self> {
        let vol = manifold.vol();
        let mu1 = manifold.mu1();
        let rho_ex = rho_ex_basic(params, gn)?;
        let improved = if params.is_mass_critical() { None } else { Some(rho_ex_improved(params, gn, gs, vol)?) };
        let basic = criterion_basic(params, manifold, gn, gs)?;
        let imp = criterion_improved(params, manifold, gn, gs)?;
        Ok(ThresholdReport {
            n: params.n(),
            k: params.k(),
            alpha: params.alpha(),
            manifold: manifold.label(),
            vol,
            mu1,
            a: gn.a,
            b: gn.b,
            theta: gn.theta,
            g: gs.g,
            t_star: t_star(params, gn)?,
            rho_ex_basic: rho_ex,
            rho_ex_improved: improved,
            rho_tr_upper: rho_tr_upper(params, mu1, gs, vol)?,
            lambda_ex: lambda_of_rho(rho_ex, params),
            criterion_basic: basic.holds,
            criterion_basic_detail: basic,
            criterion_improved: imp.holds,
            criterion_improved_detail: imp,
            conditional_on_b: gn.conditional_on_b(),
            conditional_on_a: gn.conditional_on_a(),
            warnings,
        })
    }

    /// Report rows, each tagged with the formula that produced it.
    pub fn rows(&self) -> Vec<TaggedValue> {
        let row = |name, formula, value: String| TaggedValue { name, formula, value };
        let improved = match self.rho_ex_improved {
            None => "n/a (mass-critical)".to_string(),
            Some(ImprovedThreshold::Finite(r)) => format!("{r:.12e}"),
            Some(ImprovedThreshold::UnboundedByEstimate) => "unbounded-by-estimate".to_string(),
        };
        let t = match self.t_star {
            TStar::Finite(t) => format!("{t:.12e}"),
            TStar::Infinite => "+inf".to_string(),
        };
        vec![
            row("theta", "gn-exponent", format!("{:.12e}", self.theta)),
            row("A", "gn-constant-a", format!("{:.12e}", self.a)),
            row("B", "gn-constant-b", format!("{:.12e}", self.b)),
            row("G", "soliton-energy-constant", format!("{:.12e}", self.g)),
            row("t_star", "gradient-cap", t),
            row("rho_ex_basic", "existence-threshold", format!("{:.12e}", self.rho_ex_basic)),
            row("rho_ex_improved", "existence-threshold-improved", improved),
            row("rho_tr_upper", "triviality-upper-bound", format!("{:.12e}", self.rho_tr_upper)),
            row("lambda_ex", "lambda-of-rho", format!("{:.12e}", self.lambda_ex)),
            row("criterion_basic", "criterion-basic", self.criterion_basic.to_string()),
            row("criterion_improved", "criterion-improved", self.criterion_improved.to_string()),
            row("conditional_on_B", "gn-constant-b", self.conditional_on_b.to_string()),
        ]
    }
}
