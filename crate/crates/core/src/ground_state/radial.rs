//! Radial shooting for the unit-frequency ground state in dimension N ≥ 2:
//! `−U″ − ((N−1)/r) U′ + U = U^{1+α}`, `U′(0) = 0`, `U > 0`, `U → 0`.

use crate::error::{Error, Result};
use crate::specfun;

const DR: f64 = 1e-3;
const R_START: f64 = 1e-4;
const R_LIMIT: f64 = 60.0;
const SHOOT_TOL: f64 = 1e-12;
const TAIL_FRACTION: f64 = 1e-10;

#[derive(Debug, PartialEq, Eq, Clone, Copy)]
enum Shot {
    /// U crossed zero: initial value too large.
    Over,
    /// U turned back up while positive: initial value too small.
    Under,
}

/// Tabulated radial profile U(r) on a uniform grid, with an exponential tail
/// spliced on once the shooting solution stops being trustworthy.
#[derive(Debug, Clone)]
pub struct RadialProfile {
    alpha: f64,
    n: u32,
    peak: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
    mass: f64,
}

fn rhs(alpha: f64, n: u32, r: f64, u: f64, du: f64) -> f64 {
    -(f64::from(n) - 1.0) / r * du + u - u.abs().powf(alpha) * u
}

fn rk4_step(alpha: f64, n: u32, r: f64, u: f64, du: f64, h: f64) -> (f64, f64) {
    let k1u = du;
    let k1v = rhs(alpha, n, r, u, du);
    let k2u = du + 0.5 * h * k1v;
    let k2v = rhs(alpha, n, r + 0.5 * h, u + 0.5 * h * k1u, k2u);
    let k3u = du + 0.5 * h * k2v;
    let k3v = rhs(alpha, n, r + 0.5 * h, u + 0.5 * h * k2u, k3u);
    let k4u = du + h * k3v;
    let k4v = rhs(alpha, n, r + h, u + h * k3u, k4u);
    (
        u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u),
        du + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
    )
}

/// Integrates from U(0) = `peak`; returns the classification and the samples
/// on the grid r_i = i·DR up to the event.
fn shoot(alpha: f64, n: u32, peak: f64) -> (Shot, Vec<(f64, f64)>) {
    // Series start: U ≈ s + (s − s^{1+α}) r²/(2N).
    let curv = (peak - peak.powf(1.0 + alpha)) / f64::from(n);
    let mut r = R_START;
    let mut u = peak + 0.5 * curv * r * r;
    let mut du = curv * r;
    // First step brings us onto the DR lattice.
    let (u1, du1) = rk4_step(alpha, n, r, u, du, DR - R_START);
    let mut samples = vec![(peak, 0.0), (u1, du1)];
    r = DR;
    u = u1;
    du = du1;
    while r < R_LIMIT {
        let (nu, ndu) = rk4_step(alpha, n, r, u, du, DR);
        r += DR;
        u = nu;
        du = ndu;
        if u <= 0.0 {
            return (Shot::Over, samples);
        }
        if du > 0.0 {
            return (Shot::Under, samples);
        }
        samples.push((u, du));
    }
    // Neither event within the window: the constant-like branch near U ≡ 1.
    (Shot::Under, samples)
}

impl RadialProfile {
    /// Finds the ground state by bisection on U(0) over [1, 10·(1+α/2)^{1/α}].
    pub fn shoot(alpha: f64, n: u32) -> Result<Self> {
        let mut lo = 1.0;
        let mut hi = 10.0 * (1.0 + 0.5 * alpha).powf(1.0 / alpha);
        if shoot(alpha, n, hi).0 != Shot::Over {
            return Err(Error::numeric(format!(
                "shooting bracket failed: U(0) = {hi} does not overshoot (alpha = {alpha}, N = {n})"
            )));
        }
        let mut iterations = 0;
        while hi - lo > SHOOT_TOL * hi {
            let mid = 0.5 * (lo + hi);
            match shoot(alpha, n, mid).0 {
                Shot::Over => hi = mid,
                Shot::Under => lo = mid,
            }
            iterations += 1;
            if iterations > 200 {
                return Err(Error::numeric(format!(
                    "shooting bisection did not converge: bracket [{lo}, {hi}] after {iterations} steps"
                )));
            }
        }
        if (hi - 1.0).abs() < 1e-6 {
            return Err(Error::numeric(format!(
                "shooting collapsed onto the constant solution (alpha = {alpha}, N = {n})"
            )));
        }
        let (_, low) = shoot(alpha, n, lo);
        let (_, high) = shoot(alpha, n, hi);
        let peak = 0.5 * (lo + hi);
        // Trust the profile while the two bracketing shots agree to 1e-3.
        let trusted = low
            .iter()
            .zip(&high)
            .take_while(|((ul, _), (uh, _))| (ul - uh).abs() <= 1e-3 * 0.5 * (ul + uh))
            .count();
        if trusted < 100 {
            return Err(Error::numeric("bracketing shots diverge immediately"));
        }
        let mut values: Vec<f64> = low[..trusted].iter().zip(&high).map(|(a, b)| 0.5 * (a.0 + b.0)).collect();
        let mut slopes: Vec<f64> = low[..trusted].iter().zip(&high).map(|(a, b)| 0.5 * (a.1 + b.1)).collect();

        // Exponential tail U ≈ C r^{−(N−1)/2} e^{−r}, matched at the last trusted sample.
        let decay = 0.5 * (f64::from(n) - 1.0);
        let r_cut = (trusted - 1) as f64 * DR;
        let c = values[trusted - 1] * r_cut.powf(decay) * r_cut.exp();
        let mut r = r_cut;
        while values.last().copied().unwrap_or(0.0) > TAIL_FRACTION * peak {
            r += DR;
            let u = c * r.powf(-decay) * (-r).exp();
            values.push(u);
            slopes.push(-u * (1.0 + decay / r));
        }

        // |S^{N−1}|, with |S⁰| = 2 counting both half-lines.
        let sphere = if n == 1 { 2.0 } else { specfun::sphere_volume(n - 1)? };
        // Composite trapezoid of U² r^{N−1}.
        let integral: f64 = values
            .iter()
            .enumerate()
            .map(|(i, u)| {
                let rr = i as f64 * DR;
                let w = if i == 0 || i + 1 == values.len() { 0.5 } else { 1.0 };
                w * u * u * rr.powi(n as i32 - 1)
            })
            .sum::<f64>()
            * DR;
        Ok(RadialProfile { alpha, n, peak, values, slopes, mass: (sphere * integral).sqrt() })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    /// U(0).
    pub fn peak(&self) -> f64 {
        self.peak
    }

    /// ‖U‖_{L²(ℝᴺ)} = ρ₀.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Radius beyond which the table reports zero.
    pub fn support_radius(&self) -> f64 {
        (self.values.len() - 1) as f64 * DR
    }

    /// U(r) by cubic Hermite interpolation of the table.
    pub fn value(&self, r: f64) -> f64 {
        let r = r.abs();
        let pos = r / DR;
        let i = pos.floor() as usize;
        if i + 1 >= self.values.len() {
            return 0.0;
        }
        let t = pos - i as f64;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.slopes[i] * DR, self.slopes[i + 1] * DR);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * m0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * m1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_shooting_matches_closed_form() {
        for &alpha in &[1.0, 2.0, 2.5] {
            let p = RadialProfile::shoot(alpha, 1).unwrap();
            let exact_peak = (1.0 + 0.5 * alpha).powf(1.0 / alpha);
            assert!((p.peak() - exact_peak).abs() < 1e-9 * exact_peak);
            // ρ₀ for N = 1 from shooting integrates over the half-line twice (|S⁰| = 2).
            let closed = super::super::rho0(alpha, 1).unwrap();
            assert!((p.mass() - closed).abs() < 1e-6 * closed, "alpha = {alpha}");
            let x = 1.3;
            let u = super::super::soliton_profile_1d(alpha, x).unwrap();
            assert!((p.value(x) - u).abs() < 1e-8);
        }
    }

    #[test]
    fn two_dimensional_profile_is_monotone() {
        let p = RadialProfile::shoot(1.0, 2).unwrap();
        assert!(p.peak() > 1.5 && p.peak() < 3.0);
        assert!(p.value(0.0) == p.peak());
        assert!(p.value(p.support_radius() + 1.0) == 0.0);
        let mut last = p.peak();
        for i in 1..200 {
            let v = p.value(0.1 * i as f64);
            assert!(v <= last);
            last = v;
        }
    }
}
