//! The special-function sufficient condition on ℝ×𝕊ᵏ and its rough bounds.
//!
//! With sphere constants the basic criterion is equivalent to `T₁T₂ < T₃T₄`:
//!
//! * `T₁ = ((2/α)𝐁(½, 2/α)/𝐁(½, (k+1)/2))^{α/2}`
//! * `T₂ = [(4+α)k/(4+5α+2α²)]^{(4−α)/4}`
//! * `T₃ = (((k+1)α−4)/((k−1)α))^{θ/2−1}` (1 at α = 4/(k+1))
//! * `T₄ = (k−1)/α`

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gn_constants::{sphere_gn_constants, ManifoldSpec};
use crate::ground_state::GroundStateData;
use crate::params::ProblemParams;
use crate::specfun::beta;
use crate::thresholds::{criterion_improved, Verdict};

/// Offset used for the open right end of the α window.
pub const RIGHT_ENDPOINT_OFFSET: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriterionTerms {
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub t4: f64,
}

impl CriterionTerms {
    pub fn verdict(&self) -> Verdict {
        Verdict::strict_less(self.t1 * self.t2, self.t3 * self.t4)
    }
}

fn sphere_params(k: u32, alpha: f64) -> Result<ProblemParams> {
    if k < 2 {
        return Err(Error::domain(format!("sphere dimension k = {k} must be at least 2")));
    }
    ProblemParams::new(1, k, alpha)
}

pub fn criterion_terms(k: u32, alpha: f64) -> Result<CriterionTerms> {
    let params = sphere_params(k, alpha)?;
    let alpha = params.alpha();
    let kf = f64::from(k);
    let t1 = (2.0 / alpha * beta(0.5, 2.0 / alpha)? / beta(0.5, 0.5 * (kf + 1.0))?).powf(0.5 * alpha);
    let t2 = ((4.0 + alpha) * kf / (4.0 + 5.0 * alpha + 2.0 * alpha * alpha)).powf((4.0 - alpha) / 4.0);
    let t3 = if params.is_mass_critical() {
        1.0
    } else {
        let half_theta = 0.5 * (kf + 1.0) * alpha / 2.0;
        (((kf + 1.0) * alpha - 4.0) / ((kf - 1.0) * alpha)).powf(half_theta - 1.0)
    };
    let t4 = (kf - 1.0) / alpha;
    Ok(CriterionTerms { t1, t2, t3, t4 })
}

/// `T₁T₂ < T₃T₄`, strict with a relative guard band.
pub fn sphere_exact(k: u32, alpha: f64) -> Result<bool> {
    Ok(criterion_terms(k, alpha)?.verdict().holds)
}

/// Left and right sides of the mass-critical reduction.
pub fn sphere_mass_critical_sides(k: u32) -> (f64, f64) {
    let kf = f64::from(k);
    let lhs = (0.5 * (kf + 1.0)).powf(2.0 / (kf + 1.0))
        * (kf * (kf + 1.0) * (kf + 2.0) / (14.0 + 7.0 * kf + kf * kf)).powf(kf / (kf + 1.0));
    let rhs = (kf - 1.0) * (kf + 1.0) / 4.0;
    (lhs, rhs)
}

/// `((k+1)/2)^{2/(k+1)}[k(k+1)(k+2)/(14+7k+k²)]^{k/(k+1)} < (k−1)(k+1)/4`.
pub fn sphere_mass_critical(k: u32) -> bool {
    if k < 2 {
        return false;
    }
    let (lhs, rhs) = sphere_mass_critical_sides(k);
    Verdict::strict_less(lhs, rhs).holds
}

fn rough_bound(k: u32, t2_bound: f64) -> bool {
    if k < 2 {
        return false;
    }
    let kf = f64::from(k);
    let t1_bound = (0.5 * (kf + 1.0)).powf(2.0 / (kf - 1.0));
    let min_xx = (-1.0 / std::f64::consts::E).exp();
    let rhs = min_xx / 4.0 * (kf - 1.0).powi(2) / t2_bound;
    Verdict::strict_less(t1_bound, rhs).holds
}

/// `((k+1)/2)^{2/(k−1)} < e^{−1/e}/4 · (k−1)²/k`.
pub fn rough_bound_coarse(k: u32) -> bool {
    rough_bound(k, f64::from(k))
}

/// As [`rough_bound_coarse`] with `k^{10/11}` in place of `k`.
pub fn rough_bound_refined(k: u32) -> bool {
    rough_bound(k, f64::from(k).powf(10.0 / 11.0))
}

/// α samples: `4/(k+1)` in steps of `step`, plus the right end approached at 1e-6.
pub fn alpha_grid(k: u32, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) {
        return Err(Error::domain("alpha step must be positive"));
    }
    let (lo, hi) = ProblemParams::alpha_window(1, k)?;
    let right = hi - RIGHT_ENDPOINT_OFFSET;
    let mut out = Vec::new();
    let mut j = 0u32;
    loop {
        let a = lo + step * f64::from(j);
        if a >= right {
            break;
        }
        out.push(a);
        j += 1;
    }
    out.push(right);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphereCriterionRow {
    pub k: u32,
    pub alpha: f64,
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub t4: f64,
    pub exact_holds: bool,
    /// Only present on the mass-critical row.
    pub mass_critical_holds: Option<bool>,
    pub rough11: bool,
    pub rough9: bool,
    pub improved_holds: bool,
}

pub const SPHERE_CSV_HEADER: &str =
    "k,alpha,T1,T2,T3,T4,exact_holds,mass_critical_holds,rough11,rough9,improved_holds";

impl SphereCriterionRow {
    pub fn compute(k: u32, alpha: f64, gs: &GroundStateData) -> Result<Self> {
        let params = sphere_params(k, alpha)?;
        let terms = criterion_terms(k, alpha)?;
        let gn = sphere_gn_constants(k, &params)?;
        let manifold = ManifoldSpec::sphere(k)?;
        let improved = criterion_improved(&params, &manifold, &gn, gs)?;
        Ok(SphereCriterionRow {
            k,
            alpha: params.alpha(),
            t1: terms.t1,
            t2: terms.t2,
            t3: terms.t3,
            t4: terms.t4,
            exact_holds: terms.verdict().holds,
            mass_critical_holds: params.is_mass_critical().then(|| sphere_mass_critical(k)),
            rough11: rough_bound_coarse(k),
            rough9: rough_bound_refined(k),
            improved_holds: improved.holds,
        })
    }

    pub fn csv_line(&self) -> String {
        let mc = self.mass_critical_holds.map(|b| b.to_string()).unwrap_or_default();
        format!(
            "{},{:.6},{:.12e},{:.12e},{:.12e},{:.12e},{},{},{},{},{}",
            self.k,
            self.alpha,
            self.t1,
            self.t2,
            self.t3,
            self.t4,
            self.exact_holds,
            mc,
            self.rough11,
            self.rough9,
            self.improved_holds
        )
    }
}

/// All rows for `k` in `k_range` over the α grid, in (k, α) order.
pub fn sphere_scan(k_range: std::ops::RangeInclusive<u32>, alpha_step: f64) -> Result<Vec<SphereCriterionRow>> {
    let mut jobs = Vec::new();
    for k in k_range {
        for a in alpha_grid(k, alpha_step)? {
            jobs.push((k, a));
        }
    }
    jobs.par_iter()
        .map(|&(k, a)| {
            let gs = GroundStateData::new(a, 1)?;
            SphereCriterionRow::compute(k, a, &gs)
        })
        .collect()
}

/// Largest α such that the improved criterion holds on every grid point up to it.
pub fn improved_prefix(rows: &[SphereCriterionRow], k: u32) -> Option<f64> {
    rows.iter().filter(|r| r.k == k).take_while(|r| r.improved_holds).map(|r| r.alpha).last()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mass_critical_terms_k3() {
        let t = criterion_terms(3, 1.0).unwrap();
        assert_eq!(t.t3, 1.0);
        let expected = 2f64.sqrt() * (15.0f64 / 11.0).powf(0.75);
        assert!((t.t1 * t.t2 - expected).abs() < 1e-12);
        assert_eq!(t.t4, 2.0);
    }

    #[test]
    fn t4_value() {
        assert!((criterion_terms(2, 4.0 / 3.0).unwrap().t4 - 0.75).abs() < 1e-15);
    }

    #[test]
    fn mass_critical_reduction_matches_terms() {
        for k in 2..=15 {
            let t = criterion_terms(k, 4.0 / f64::from(k + 1)).unwrap();
            let (lhs, rhs) = sphere_mass_critical_sides(k);
            assert!((t.t1 * t.t2 - lhs).abs() < 1e-12 * lhs, "k={k}");
            assert!((t.t3 * t.t4 - rhs).abs() < 1e-12 * rhs);
        }
    }

    #[test]
    fn mass_critical_verdicts() {
        assert!(!sphere_mass_critical(2));
        for k in 3..=40 {
            assert!(sphere_mass_critical(k), "k={k}");
        }
    }

    #[test]
    fn rough_bounds() {
        for k in 2..=40 {
            assert_eq!(rough_bound_coarse(k), k >= 11, "k={k}");
            assert_eq!(rough_bound_refined(k), k >= 9, "k={k}");
        }
    }

    #[test]
    fn window_errors() {
        assert!(criterion_terms(3, 0.5).is_err());
        assert!(criterion_terms(3, 2.0).is_err());
        assert!(criterion_terms(1, 2.0).is_err());
    }

    #[test]
    fn grid_shape() {
        let g = alpha_grid(4, 0.01).unwrap();
        assert_eq!(g[0], 0.8);
        assert!((g[g.len() - 1] - (4.0 / 3.0 - 1e-6)).abs() < 1e-15);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(alpha_grid(4, 0.0).is_err());
    }

    #[test]
    fn k2_fails_everywhere() {
        for a in alpha_grid(2, 0.01).unwrap() {
            assert!(!sphere_exact(2, a).unwrap(), "alpha={a}");
        }
    }
}
