//! The mass-preserving rescaling `u(x, y) = a v(b x, y)` with
//! `a = c^{4/(4−α)}`, `b = c^{2α/(4−α)}`, under which
//! `E(u) = c^{2+4α/(4−α)} E_λ(v)` with `λ = b^{−2}` and `‖u‖² = c²‖v‖²`.
//!
//! The solver works in the frame `c = ρ̂/ρ₀` (ρ̂² = ρ²/L) where the
//! y-constant soliton is the unit profile U and λ = 1/ω.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ground_state::{soliton_profile_1d, GroundStateData};
use crate::params::frequency_exponent;

use super::energy::{discrete_energy, discrete_energy_lambda, mass};
use super::grid::{Field, Grid};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Frame {
    pub alpha: f64,
    pub scale: f64,
    pub a: f64,
    pub b: f64,
    pub lambda: f64,
}

impl Frame {
    pub fn with_scale(alpha: f64, c: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 4.0) {
            return Err(Error::domain(format!("alpha = {alpha} must lie in (0, 4) for N = 1")));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::domain("frame scale must be positive"));
        }
        let a = c.powf(4.0 / (4.0 - alpha));
        let b = c.powf(2.0 * alpha / (4.0 - alpha));
        Ok(Frame { alpha, scale: c, a, b, lambda: 1.0 / (b * b) })
    }

    pub fn identity(alpha: f64) -> Result<Self> {
        Frame::with_scale(alpha, 1.0)
    }

    /// Frame in which the y-constant minimizer of mass ρ² on T¹_L is the unit profile.
    pub fn soliton(alpha: f64, rho: f64, length: f64) -> Result<Self> {
        if !(rho > 0.0) || !(length > 0.0) {
            return Err(Error::domain("rho and length must be positive"));
        }
        let gs = GroundStateData::new(alpha, 1)?;
        Frame::with_scale(alpha, rho / length.sqrt() / gs.rho0)
    }

    /// Physical energy from the frame energy E_λ(v).
    pub fn energy_factor(&self) -> f64 {
        self.scale.powf(2.0 + frequency_exponent(self.alpha, 1))
    }

    /// Physical mass from the frame mass.
    pub fn mass_factor(&self) -> f64 {
        self.scale * self.scale
    }

    /// Physical t(u) from frame gradient norms and mass.
    pub fn physical_t(&self, gx: f64, gy: f64, frame_mass: f64) -> f64 {
        (gx / self.lambda + gy) / frame_mass
    }
}

/// Six-point Lagrange interpolation in x of one row; zero outside the nodes' span.
fn interpolate_row(grid: &Grid, row: &[f64], x: f64) -> f64 {
    let h = grid.hx();
    // Node i sits at −X + (i+1)h; ghosts at index −1 and nx are zero.
    let mut s = (x + grid.x_half_width) / h - 1.0;
    if (s - s.round()).abs() < 1e-9 {
        // On a node up to round-off: copy it rather than interpolate.
        s = s.round();
    }
    let base = s.floor();
    let t = s - base;
    let base = base as isize;
    let nx = grid.nx as isize;
    let sample = |k: isize| if k < 0 || k >= nx { 0.0 } else { row[k as usize] };
    if t == 0.0 {
        return sample(base);
    }
    let mut acc = 0.0;
    for m in -2..=3isize {
        let mut w = 1.0;
        for q in -2..=3isize {
            if q != m {
                w *= (t - q as f64) / (m - q) as f64;
            }
        }
        acc += w * sample(base + m);
    }
    acc
}

/// Resamples u into the frame of scale `c`: v(x', y) = u(x'/b, y)/a on the same grid.
pub fn transform(u: &Field, alpha: f64, c: f64) -> Result<(Field, Frame)> {
    let frame = Frame::with_scale(alpha, c)?;
    let grid = *u.grid();
    if frame.b < 1.0 {
        // The target nodes only reach |x| ≤ X·b in the source: nothing may live beyond.
        let reach = grid.x_half_width * frame.b;
        let max = u.max_abs();
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                if grid.x(i).abs() > reach && u.get(i, j).abs() >= 1e-10 * max {
                    return Err(Error::grid(format!(
                        "rescaled grid covers |x| <= {reach:.3} but the field is supported beyond it"
                    )));
                }
            }
        }
    }
    let mut out = Vec::with_capacity(grid.len());
    for row in u.samples().chunks(grid.nx) {
        out.extend((0..grid.nx).map(|i| interpolate_row(&grid, row, grid.x(i) / frame.b) / frame.a));
    }
    Ok((Field::new(grid, out)?, frame))
}

/// Transform with `c = ρ` and the residual |E(u) − ρ^{2+p}E_λ(v)|/|E(u)|.
pub fn transform_roundtrip(u: &Field, rho: f64, alpha: f64) -> Result<(Field, f64)> {
    let (v, frame) = transform(u, alpha, rho)?;
    let e_u = discrete_energy(u, alpha)?;
    let e_v = discrete_energy_lambda(&v, alpha, frame.lambda)?;
    let residual = (e_u - frame.energy_factor() * e_v).abs() / e_u.abs();
    Ok((v, residual))
}

/// Rescales `u` in place to discrete mass `target`.
pub fn renormalize(u: &mut Field, target: f64) -> Result<()> {
    let m = mass(u);
    if !(m > 0.0) {
        return Err(Error::domain("cannot renormalize a zero field"));
    }
    let s = (target / m).sqrt();
    u.samples_mut().iter_mut().for_each(|v| *v *= s);
    Ok(())
}

/// Z_ρ̂(x)(1 + ε cos(2πy/L)) expressed in `frame` and scaled to the frame mass of ρ².
pub fn make_initial_in_frame(alpha: f64, rho: f64, epsilon: f64, grid: &Grid, frame: &Frame) -> Result<Field> {
    if !(epsilon >= 0.0) {
        return Err(Error::domain("epsilon must be non-negative"));
    }
    let natural = Frame::soliton(alpha, rho, grid.length)?;
    let (amp, stretch) = (natural.a / frame.a, natural.b / frame.b);
    let k = 2.0 * std::f64::consts::PI / grid.length;
    let mut u = Field::from_fn(*grid, |x, y| {
        amp * soliton_profile_1d(alpha, stretch * x).unwrap_or(0.0) * (1.0 + epsilon * (k * y).cos())
    })?;
    renormalize(&mut u, rho * rho / frame.mass_factor())?;
    Ok(u)
}

/// [`make_initial_in_frame`] on a physical grid.
pub fn make_initial(alpha: f64, rho: f64, epsilon: f64, grid: &Grid) -> Result<Field> {
    make_initial_in_frame(alpha, rho, epsilon, grid, &Frame::identity(alpha)?)
}

/// Finite-difference E″(Z)[φ, φ] with Z the y-constant soliton of mass ρ² on T¹_L
/// and φ = √(2/L) cos(2πy/L) Z_ρ̂. `grid` is in soliton units (x scaled by √ω).
pub fn second_variation_fd(alpha: f64, rho: f64, grid: &Grid) -> Result<f64> {
    second_variation_fd_step(alpha, rho, grid, 1e-4)
}

pub fn second_variation_fd_step(alpha: f64, rho: f64, grid: &Grid, h: f64) -> Result<f64> {
    let frame = Frame::soliton(alpha, rho, grid.length)?;
    let z = Field::from_fn(*grid, |x, _| soliton_profile_1d(alpha, x).unwrap_or(0.0))?;
    let k = 2.0 * std::f64::consts::PI / grid.length;
    let norm = (2.0 / grid.length).sqrt();
    let phi = Field::from_fn(*grid, |x, y| norm * (k * y).cos() * soliton_profile_1d(alpha, x).unwrap_or(0.0))?;
    let e = |f: &Field| discrete_energy_lambda(f, alpha, frame.lambda);
    let plus = e(&z.axpy(h, &phi)?)?;
    let minus = e(&z.axpy(-h, &phi)?)?;
    let mid = e(&z)?;
    // φ maps to the frame direction √(2/L) cos·U and E = a²b·E_λ.
    Ok(frame.a * frame.a * frame.b * (plus - 2.0 * mid + minus) / (h * h))
}
