//! Compact factors Mᵏ and the Gagliardo–Nirenberg constants (A, B) of
//!
//! ```text
//! ‖u‖_{2+α}^{2+α} ≤ A (‖∇u‖² + B‖u‖²)^{θ/2} ‖u‖^{2+α−θ},   θ = (N+k)α/2
//! ```
//!
//! on ℝᴺ × Mᵏ. Only the round sphere (with N = 1) has both constants in
//! closed form; for other factors B, and A when N + k ≤ 2, must come from
//! configuration and every derived number is flagged as conditional.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ProblemParams;
use crate::specfun;

/// θ(α) = (N+k)α/2.
pub fn theta(params: &ProblemParams) -> f64 {
    f64::from(params.n() + params.k()) * params.alpha() / 2.0
}

/// The compact factor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ManifoldSpec {
    /// Unit round sphere 𝕊ᵏ.
    Sphere { k: u32 },
    /// Flat torus ∏ ℝ/(Lᵢℤ).
    FlatTorus { lengths: Vec<f64> },
    /// Any compact manifold described by its dimension, volume and first eigenvalue.
    Generic { dim: u32, vol: f64, mu1: f64 },
}

impl ManifoldSpec {
    pub fn sphere(k: u32) -> Result<Self> {
        if k < 1 {
            return Err(Error::domain("sphere dimension must be >= 1"));
        }
        Ok(ManifoldSpec::Sphere { k })
    }

    pub fn flat_torus(lengths: Vec<f64>) -> Result<Self> {
        if lengths.is_empty() {
            return Err(Error::domain("torus needs at least one side length"));
        }
        if let Some(bad) = lengths.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
            return Err(Error::domain(format!("torus side lengths must be positive, got {bad}")));
        }
        Ok(ManifoldSpec::FlatTorus { lengths })
    }

    pub fn generic(dim: u32, vol: f64, mu1: f64) -> Result<Self> {
        if dim < 1 {
            return Err(Error::domain("manifold dimension must be >= 1"));
        }
        if !(vol.is_finite() && vol > 0.0) || !(mu1.is_finite() && mu1 > 0.0) {
            return Err(Error::domain(format!("generic manifold needs vol > 0 and mu1 > 0, got {vol}, {mu1}")));
        }
        Ok(ManifoldSpec::Generic { dim, vol, mu1 })
    }

    pub fn dim(&self) -> u32 {
        match self {
            ManifoldSpec::Sphere { k } => *k,
            ManifoldSpec::FlatTorus { lengths } => lengths.len() as u32,
            ManifoldSpec::Generic { dim, .. } => *dim,
        }
    }

    pub fn vol(&self) -> f64 {
        match self {
            ManifoldSpec::Sphere { k } => specfun::sphere_volume(*k).expect("k >= 1 checked at construction"),
            ManifoldSpec::FlatTorus { lengths } => lengths.iter().product(),
            ManifoldSpec::Generic { vol, .. } => *vol,
        }
    }

    /// First nonzero eigenvalue of −Δ on the factor.
    pub fn mu1(&self) -> f64 {
        match self {
            ManifoldSpec::Sphere { k } => f64::from(*k),
            ManifoldSpec::FlatTorus { lengths } => {
                let longest = lengths.iter().cloned().fold(0.0, f64::max);
                (2.0 * PI / longest).powi(2)
            }
            ManifoldSpec::Generic { mu1, .. } => *mu1,
        }
    }

    pub fn label(&self) -> String {
        match self {
            ManifoldSpec::Sphere { k } => format!("sphere:{k}"),
            ManifoldSpec::FlatTorus { lengths } => {
                let l: Vec<String> = lengths.iter().map(|l| format!("{l}")).collect();
                format!("torus:{}", l.join(","))
            }
            ManifoldSpec::Generic { vol, mu1, .. } => format!("generic:{vol},{mu1}"),
        }
    }
}

/// Where a constant came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstantSource {
    /// Exact closed form for this geometry.
    Exact,
    /// Sharp Euclidean Sobolev constant in dimension N + k; valid up to the
    /// manifold-dependent ε of the AB-program.
    Sobolev,
    /// Supplied by the user.
    User,
    /// Placeholder default; results depending on it are conditional.
    Default,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GnConstants {
    pub a: f64,
    pub b: f64,
    pub theta: f64,
    pub a_source: ConstantSource,
    pub b_source: ConstantSource,
}

impl GnConstants {
    pub fn new(a: f64, b: f64, theta: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0 && b.is_finite() && b > 0.0) {
            return Err(Error::domain(format!("GN constants must be positive, got A = {a}, B = {b}")));
        }
        Ok(GnConstants { a, b, theta, a_source: ConstantSource::User, b_source: ConstantSource::User })
    }

    pub fn conditional_on_b(&self) -> bool {
        self.b_source != ConstantSource::Exact
    }

    pub fn conditional_on_a(&self) -> bool {
        !matches!(self.a_source, ConstantSource::Exact | ConstantSource::Sobolev)
    }
}

/// User-side overrides for the GN constants.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct GnOverrides {
    pub a: Option<f64>,
    pub b: Option<f64>,
    /// σ in A = (4/(n(n−2) σ^{2/n}))^{θ/2}, n = N + k.
    pub sigma: Option<f64>,
}

/// Default B when the geometry gives none.
pub const DEFAULT_B: f64 = 1.0;
/// Default A when neither A nor σ is given and N + k ≤ 2.
pub const DEFAULT_A: f64 = 1.0;

/// `(4/(n(n−2) σ^{2/n}))^{θ/2}`; with σ = ω_n this is the sharp Sobolev route.
fn sobolev_style_a(total_dim: u32, sigma: f64, theta: f64) -> Result<f64> {
    if total_dim < 3 {
        return Err(Error::domain("Sobolev-style A needs N + k >= 3"));
    }
    if !(sigma > 0.0) {
        return Err(Error::domain("sigma must be positive"));
    }
    let n = f64::from(total_dim);
    Ok((4.0 / (n * (n - 2.0) * sigma.powf(2.0 / n))).powf(theta / 2.0))
}

/// Exact constants for ℝ × 𝕊ᵏ:
/// `A = (4/((k+1)(k−1) ω_{k+1}^{2/(k+1)}))^{θ/2}`, `B = (k−1)²/4`.
pub fn sphere_gn_constants(k: u32, params: &ProblemParams) -> Result<GnConstants> {
    if k < 2 {
        return Err(Error::domain(format!("sphere GN constants need k >= 2, got {k}")));
    }
    if params.n() != 1 || params.k() != k {
        return Err(Error::domain(format!(
            "exact sphere constants are for R x S^k with N = 1; got N = {}, k = {}",
            params.n(),
            params.k()
        )));
    }
    let th = theta(params);
    let a = sobolev_style_a(k + 1, specfun::sphere_volume(k + 1)?, th)?;
    let b = f64::from(k - 1).powi(2) / 4.0;
    Ok(GnConstants { a, b, theta: th, a_source: ConstantSource::Exact, b_source: ConstantSource::Exact })
}

/// Resolves (A, B) for `manifold`, honouring overrides. Returns the constants
/// and human-readable warnings for every non-exact choice.
pub fn resolve_constants(
    params: &ProblemParams,
    manifold: &ManifoldSpec,
    overrides: &GnOverrides,
) -> Result<(GnConstants, Vec<String>)> {
    if manifold.dim() != params.k() {
        return Err(Error::domain(format!(
            "manifold dimension {} does not match k = {}",
            manifold.dim(),
            params.k()
        )));
    }
    let th = theta(params);
    let mut warnings = Vec::new();
    let exact = match manifold {
        ManifoldSpec::Sphere { k } if *k >= 2 && params.n() == 1 => Some(sphere_gn_constants(*k, params)?),
        _ => None,
    };
    let (a, a_source) = match (overrides.a, overrides.sigma, exact) {
        (Some(a), _, _) => (a, ConstantSource::User),
        (None, Some(sigma), _) => (sobolev_style_a(params.n() + params.k(), sigma, th)?, ConstantSource::User),
        (None, None, Some(c)) => (c.a, ConstantSource::Exact),
        (None, None, None) => {
            let total = params.n() + params.k();
            if total >= 3 {
                let sigma = specfun::sphere_volume(total)?;
                warnings.push(format!(
                    "A taken from the sharp Sobolev constant in dimension {total}; valid up to the manifold-dependent epsilon"
                ));
                (sobolev_style_a(total, sigma, th)?, ConstantSource::Sobolev)
            } else {
                warnings.push(format!(
                    "WARNING: no GN constant A is known for {}; using A = {DEFAULT_A}, every A-dependent value is conditional",
                    manifold.label()
                ));
                (DEFAULT_A, ConstantSource::Default)
            }
        }
    };
    let (b, b_source) = match (overrides.b, exact) {
        (Some(b), _) => {
            warnings.push(format!("B = {b} supplied by the user; B-dependent values are conditional on it"));
            (b, ConstantSource::User)
        }
        (None, Some(c)) => (c.b, ConstantSource::Exact),
        (None, None) => {
            warnings.push(format!(
                "WARNING: no GN constant B is known for {}; using B = {DEFAULT_B}, every B-dependent value is conditional",
                manifold.label()
            ));
            (DEFAULT_B, ConstantSource::Default)
        }
    };
    let mut c = GnConstants::new(a, b, th)?;
    c.a_source = a_source;
    c.b_source = b_source;
    Ok((c, warnings))
}

/// L² mass, Dirichlet energy and L^{2+α} power of a field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldNorms {
    pub mass: f64,
    pub grad_sq: f64,
    pub lp_pow: f64,
}

/// RHS/LHS of the GN inequality for a field with the given norms; a value
/// ≥ 1 certifies the inequality on that sample.
pub fn gn_check(norms: &FieldNorms, constants: &GnConstants, alpha: f64) -> Result<f64> {
    if !(norms.mass > 0.0 && norms.lp_pow > 0.0) {
        return Err(Error::domain("GN ratio undefined for the zero field"));
    }
    let rhs = constants.a
        * (norms.grad_sq + constants.b * norms.mass).powf(constants.theta / 2.0)
        * norms.mass.powf((2.0 + alpha - constants.theta) / 2.0);
    Ok(rhs / norms.lp_pow)
}

/// Norms of a zonal function u(x, ϑ) on ℝ × 𝕊ᵏ (ϑ the polar angle), on the
/// window |x| ≤ `half_width`.
///
/// Samples sit at interior x nodes and polar-angle cell midpoints; gradients
/// are differences across cell edges weighted by the sphere measure
/// ω_{k−1} sin^{k−1}ϑ at the edge, which vanishes at the poles.
pub fn zonal_norms(
    u: impl Fn(f64, f64) -> f64,
    k: u32,
    alpha: f64,
    half_width: f64,
    nx: usize,
    ntheta: usize,
) -> Result<FieldNorms> {
    if k < 2 {
        return Err(Error::domain("zonal quadrature needs k >= 2"));
    }
    let hx = 2.0 * half_width / (nx + 1) as f64;
    let ht = PI / ntheta as f64;
    let cap = specfun::sphere_volume(k - 1)?;
    let w = |t: f64| cap * t.sin().powi(k as i32 - 1);
    let samples: Vec<Vec<f64>> = (0..ntheta)
        .map(|j| {
            let t = (j as f64 + 0.5) * ht;
            (0..nx).map(|i| u(-half_width + (i + 1) as f64 * hx, t)).collect()
        })
        .collect();
    let (mut mass, mut grad, mut lp) = (0.0, 0.0, 0.0);
    for (j, row) in samples.iter().enumerate() {
        let t = (j as f64 + 0.5) * ht;
        let wt = w(t);
        let mut prev = 0.0;
        for &v in row.iter().chain(std::iter::once(&0.0)) {
            grad += wt * (v - prev).powi(2) / (hx * hx) * hx * ht;
            prev = v;
        }
        for &v in row {
            mass += wt * v * v * hx * ht;
            lp += wt * v.abs().powf(2.0 + alpha) * hx * ht;
        }
        if let Some(next) = samples.get(j + 1) {
            let we = w((j as f64 + 1.0) * ht);
            for (a, b) in row.iter().zip(next) {
                grad += we * (b - a).powi(2) / (ht * ht) * hx * ht;
            }
        }
    }
    Ok(FieldNorms { mass, grad_sq: grad, lp_pow: lp })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn theta_values() {
        assert_eq!(theta(&ProblemParams::new(1, 3, 1.0).unwrap()), 2.0);
        assert_eq!(theta(&ProblemParams::new(1, 3, 1.5).unwrap()), 3.0);
        assert_eq!(theta(&ProblemParams::new(1, 1, 2.5).unwrap()), 2.5);
    }

    #[test]
    fn sphere_constants() {
        let p = ProblemParams::new(1, 3, 1.5).unwrap();
        let c = sphere_gn_constants(3, &p).unwrap();
        assert_eq!(c.b, 1.0);
        // ω₄ = 8π²/3
        let omega4 = 8.0 * PI * PI / 3.0;
        let a = (4.0 / (8.0 * omega4.powf(0.5))).powf(1.5);
        assert!(rel(c.a, a) < 1e-13);
        assert!((c.a - 0.0304).abs() < 1e-4);
        let p2 = ProblemParams::new(1, 2, 1.5).unwrap();
        assert_eq!(sphere_gn_constants(2, &p2).unwrap().b, 0.25);
        let p1 = ProblemParams::new(1, 1, 2.5).unwrap();
        assert!(sphere_gn_constants(1, &p1).is_err());
        assert!(sphere_gn_constants(3, &p2).is_err());
    }

    #[test]
    fn sphere_a_depends_on_alpha_only_through_theta() {
        let c1 = sphere_gn_constants(4, &ProblemParams::new(1, 4, 0.85).unwrap()).unwrap();
        let c2 = sphere_gn_constants(4, &ProblemParams::new(1, 4, 1.25).unwrap()).unwrap();
        assert!(rel(c1.a.powf(2.0 / c1.theta), c2.a.powf(2.0 / c2.theta)) < 1e-13);
        assert_eq!(c1.b, c2.b);
    }

    #[test]
    fn manifold_descriptors() {
        let t = ManifoldSpec::flat_torus(vec![1.0]).unwrap();
        assert_eq!(t.vol(), 1.0);
        assert!(rel(t.mu1(), 4.0 * PI * PI) < 1e-15);
        let t2 = ManifoldSpec::flat_torus(vec![2.0, 0.5]).unwrap();
        assert_eq!(t2.vol(), 1.0);
        assert!(rel(t2.mu1(), PI * PI) < 1e-15);
        let s = ManifoldSpec::sphere(3).unwrap();
        assert!(rel(s.vol(), 2.0 * PI * PI) < 1e-13);
        assert_eq!(s.mu1(), 3.0);
        assert!(ManifoldSpec::flat_torus(vec![]).is_err());
        assert!(ManifoldSpec::flat_torus(vec![-1.0]).is_err());
        assert!(ManifoldSpec::generic(2, 0.0, 1.0).is_err());
    }

    #[test]
    fn torus_constants_are_flagged() {
        let p = ProblemParams::new(1, 1, 2.5).unwrap();
        let m = ManifoldSpec::flat_torus(vec![2.0 * PI]).unwrap();
        let (c, warnings) = resolve_constants(&p, &m, &GnOverrides::default()).unwrap();
        assert!(c.conditional_on_b() && c.conditional_on_a());
        assert_eq!(c.b, DEFAULT_B);
        assert_eq!(warnings.len(), 2);
        let (c, _) = resolve_constants(&p, &m, &GnOverrides { a: Some(0.3), b: Some(2.0), sigma: None }).unwrap();
        assert_eq!((c.a, c.b), (0.3, 2.0));
        assert!(c.conditional_on_b());
    }

    #[test]
    fn generic_a_from_sigma_reduces_to_sphere_formula() {
        let p = ProblemParams::new(1, 3, 1.2).unwrap();
        let exact = sphere_gn_constants(3, &p).unwrap();
        let m = ManifoldSpec::generic(3, 1.0, 1.0).unwrap();
        let sigma = specfun::sphere_volume(4).unwrap();
        let (c, _) = resolve_constants(&p, &m, &GnOverrides { sigma: Some(sigma), ..Default::default() }).unwrap();
        assert!(rel(c.a, exact.a) < 1e-14);
    }

    #[test]
    fn gn_check_rejects_zero_field() {
        let c = GnConstants::new(1.0, 1.0, 2.0).unwrap();
        let zero = FieldNorms { mass: 0.0, grad_sq: 0.0, lp_pow: 0.0 };
        assert!(gn_check(&zero, &c, 1.0).is_err());
    }

    #[test]
    fn gn_ratio_homogeneous_at_mass_critical_theta() {
        // θ = 2: both sides scale as |c|^{2+α}.
        let p = ProblemParams::new(1, 3, 1.0).unwrap();
        let c = sphere_gn_constants(3, &p).unwrap();
        let f = |x: f64, t: f64| (-(x * x)).exp() * (1.0 + 0.3 * t.cos());
        let base = zonal_norms(f, 3, 1.0, 6.0, 200, 64).unwrap();
        let scaled = zonal_norms(|x, t| 3.7 * f(x, t), 3, 1.0, 6.0, 200, 64).unwrap();
        let r1 = gn_check(&base, &c, 1.0).unwrap();
        let r2 = gn_check(&scaled, &c, 1.0).unwrap();
        assert!(rel(r1, r2) < 1e-12);
    }

    #[test]
    fn zonal_quadrature_mass() {
        // u = e^{-x²}: mass = ω_k · √(π/2).
        let n = zonal_norms(|x, _| (-(x * x)).exp(), 3, 1.0, 8.0, 400, 64).unwrap();
        let exact = specfun::sphere_volume(3).unwrap() * (PI / 2.0).sqrt();
        assert!(rel(n.mass, exact) < 1e-6);
    }
}
