//! Built-in invariant suite behind `nls-waveguide selftest`.

use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::field_solver::{discrete_energy, l2_gradient, make_initial, i_closed_torus, Field, Grid};
use crate::gn_constants::{gn_check, sphere_gn_constants, zonal_norms};
use crate::ground_state::{g_constant, ode_residual_1d, rho0, GroundStateData, RadialProfile};
use crate::params::ProblemParams;
use crate::specfun::{beta, gamma, sphere_volume};
use crate::sphere_criteria::{rough_bound_coarse, rough_bound_refined, sphere_exact, sphere_mass_critical};
use crate::thresholds::{f_lower, f_lower_dt, lambda_of_rho, rho_ex_basic, rho_of_lambda, t_star};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Suite {
    pub name: String,
    pub seconds: f64,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub suites: Vec<Suite>,
}

impl SelftestReport {
    pub fn failures(&self) -> usize {
        self.suites.iter().flat_map(|s| &s.checks).filter(|c| !c.passed).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn write_text(&self, out: &mut dyn Write) -> std::io::Result<()> {
        for s in &self.suites {
            let bad = s.checks.iter().filter(|c| !c.passed).count();
            let verdict = if bad == 0 { "PASS" } else { "FAIL" };
            writeln!(out, "{verdict} {:<16} {:>3} checks  {:8.3} s", s.name, s.checks.len(), s.seconds)?;
            for c in s.checks.iter().filter(|c| !c.passed) {
                writeln!(out, "     failed: {} ({})", c.name, c.detail)?;
            }
        }
        writeln!(out, "{}", if self.passed() { "selftest: all checks passed" } else { "selftest: FAILED" })
    }
}

struct Recorder(Vec<Check>);

impl Recorder {
    fn close(&mut self, name: &str, got: Result<f64>, want: f64, tol: f64) {
        let (passed, detail) = match got {
            Ok(g) => {
                let err = (g - want).abs() / want.abs().max(f64::MIN_POSITIVE);
                (err <= tol, format!("got {g:.15e}, want {want:.15e}, rel err {err:.2e}, tol {tol:.0e}"))
            }
            Err(e) => (false, e.to_string()),
        };
        self.0.push(Check { name: name.to_string(), passed, detail });
    }

    fn truth(&mut self, name: &str, got: Result<bool>, detail: impl Into<String>) {
        let (passed, detail) = match got {
            Ok(b) => (b, detail.into()),
            Err(e) => (false, e.to_string()),
        };
        self.0.push(Check { name: name.to_string(), passed, detail });
    }
}

fn suite(name: &str, body: impl FnOnce(&mut Recorder)) -> Suite {
    let start = Instant::now();
    let mut r = Recorder(Vec::new());
    body(&mut r);
    Suite { name: name.to_string(), seconds: start.elapsed().as_secs_f64(), checks: r.0 }
}

fn specfun_suite(r: &mut Recorder) {
    r.close("gamma(5)", gamma(5.0), 24.0, 1e-13);
    r.close("gamma(1/2)", gamma(0.5), std::f64::consts::PI.sqrt(), 1e-13);
    r.close("beta(2,3)", beta(2.0, 3.0), 1.0 / 12.0, 1e-13);
    r.close("omega_2", sphere_volume(2), 4.0 * std::f64::consts::PI, 1e-13);
    for k in 1..=20u32 {
        let ratio = (|| Ok(sphere_volume(k + 1)? / sphere_volume(k)?))();
        let want = std::f64::consts::PI.sqrt() * gamma(0.5 * f64::from(k + 1)).unwrap_or(f64::NAN)
            / gamma(0.5 * f64::from(k + 2)).unwrap_or(f64::NAN);
        r.close(&format!("volume ratio k={k}"), ratio, want, 1e-12);
    }
}

fn ground_state_suite(r: &mut Recorder, fault: bool) {
    let g2 = g_constant(2.0, 1).map(|g| if fault { g * 1.01 } else { g });
    r.close("G(alpha=2)", g2, 1.0 / 96.0, 1e-12);
    r.close("rho0(alpha=2)^2", rho0(2.0, 1).map(|v| v * v), 4.0, 1e-12);
    let shot = RadialProfile::shoot(2.5, 1).map(|p| p.mass());
    r.close("rho0 shooting vs closed form", shot, rho0(2.5, 1).unwrap_or(f64::NAN), 1e-6);
    for alpha in [2.0, 2.5, 3.0] {
        let res = ode_residual_1d(alpha, 1.0, 1e-3);
        r.truth(&format!("ODE residual alpha={alpha}"), res.as_ref().map(|v| *v < 1e-5).map_err(|e| e.clone()), format!("{res:?}"));
    }
    let gs = GroundStateData::new(2.5, 1);
    let scaling = gs.as_ref().map_err(|e| e.clone()).and_then(|g| Ok(g.i_rho(2.0)? / g.i_rho(1.0)?));
    r.close("I scaling exponent", scaling, 2f64.powf(2.0 + 10.0 / 1.5), 1e-12);
}

fn gn_suite(r: &mut Recorder, rng: &mut ChaCha8Rng) {
    let p = ProblemParams::new(1, 3, 1.5);
    let c = p.and_then(|p| sphere_gn_constants(3, &p));
    r.close("A(k=3, alpha=1.5)", c.as_ref().map(|c| c.a).map_err(|e| e.clone()), 0.030427, 1e-4);
    if let Ok(c) = c {
        for i in 0..5 {
            let (amp, w, tilt) = (rng.gen_range(0.2..3.0), rng.gen_range(0.3..2.0), rng.gen_range(-0.9..0.9));
            let norms = zonal_norms(|x, t| amp * (-(x / w).powi(2)).exp() * (1.0 + tilt * t.cos()), 3, 1.5, 8.0, 200, 64);
            let ratio = norms.and_then(|n| gn_check(&n, &c, 1.5));
            r.truth(
                &format!("GN inequality on random bump {i}"),
                ratio.as_ref().map(|v| *v >= 1.0).map_err(|e| e.clone()),
                format!("RHS/LHS = {ratio:?}"),
            );
        }
    }
}

fn thresholds_suite(r: &mut Recorder) {
    let p = ProblemParams::new(1, 2, 2.0);
    for i in 0..=40 {
        let rho = 10f64.powf(-2.0 + 0.1 * f64::from(i));
        let back = p.as_ref().map(|p| rho_of_lambda(lambda_of_rho(rho, p), p)).map_err(|e| e.clone());
        r.close(&format!("lambda round trip rho={rho:.3e}"), back, rho, 1e-12);
    }
    let p = ProblemParams::new(1, 3, 1.5);
    let c = p.as_ref().map_err(|e| e.clone()).and_then(|p| sphere_gn_constants(3, p));
    if let (Ok(p), Ok(c)) = (p, c) {
        let t = t_star(&p, &c).map(|t| t.as_f64()).unwrap_or(f64::NAN);
        let rho = rho_ex_basic(&p, &c).unwrap_or(f64::NAN);
        let scale = rho * rho;
        r.truth("f(t*, rho_ex) = 0", Ok(f_lower(t, rho, &p, &c).abs() < 1e-10 * scale), "tangency value");
        r.truth("df/dt(t*, rho_ex) = 0", Ok(f_lower_dt(t, rho, &p, &c).abs() < 1e-10 * scale), "tangency slope");
    }
}

fn sphere_suite(r: &mut Recorder) {
    r.truth("mass-critical k=2 fails", Ok(!sphere_mass_critical(2)), "");
    for k in 3..=12 {
        r.truth(&format!("mass-critical k={k}"), Ok(sphere_mass_critical(k)), "");
        r.truth(&format!("coarse bound k={k}"), Ok(rough_bound_coarse(k) == (k >= 11)), "");
        r.truth(&format!("refined bound k={k}"), Ok(rough_bound_refined(k) == (k >= 9)), "");
    }
    r.truth("exact k=3 alpha=1", sphere_exact(3, 1.0), "");
    r.truth("exact k=2 alpha=4/3 fails", sphere_exact(2, 4.0 / 3.0).map(|b| !b), "");
}

fn field_suite(r: &mut Recorder, rng: &mut ChaCha8Rng) {
    let grid = Grid::new(10.0, 64, 2.0 * std::f64::consts::PI, 16);
    if let Ok(grid) = grid {
        for i in 0..3 {
            let (a, s, alpha) = (rng.gen_range(0.5..2.0), rng.gen_range(0.6..1.4), rng.gen_range(1.0..3.0));
            let u = Field::from_fn(grid, |x, y| a * (-(x / s).powi(2)).exp() * (1.0 + 0.2 * y.sin()));
            let phi = Field::from_fn(grid, |x, y| x * (-(x * x)).exp() * (1.0 + y.cos()));
            let check: Result<(f64, f64)> = (|| {
                let (u, phi) = (u?, phi?);
                let h = 1e-5;
                let fd = (discrete_energy(&u.axpy(h, &phi)?, alpha)? - discrete_energy(&u.axpy(-h, &phi)?, alpha)?)
                    / (2.0 * h);
                Ok((fd, l2_gradient(&u, alpha).dot(&phi)))
            })();
            r.truth(
                &format!("directional derivative {i}"),
                check.as_ref().map(|(fd, an)| (fd - an).abs() < 1e-5 * an.abs().max(1e-3)).map_err(|e| e.clone()),
                format!("{check:?}"),
            );
        }
    }
    let energy = (|| {
        let grid = Grid::new(250.0, 4096, 1.0, 8)?;
        discrete_energy(&make_initial(2.5, 1.0, 0.0, &grid)?, 2.5)
    })();
    r.close("trivial soliton energy", energy, i_closed_torus(2.5, 1.0, 1.0).unwrap_or(f64::NAN), 1e-3);
}

/// Runs every suite; `inject_fault` corrupts one constant so the run must fail.
pub fn run(seed: u64, inject_fault: bool) -> SelftestReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let suites = vec![
        suite("specfun", specfun_suite),
        suite("ground_state", |r| ground_state_suite(r, inject_fault)),
        suite("gn_constants", |r| gn_suite(r, &mut rng)),
        suite("thresholds", thresholds_suite),
        suite("sphere_criteria", sphere_suite),
        suite("field_solver", |r| field_suite(r, &mut rng)),
    ];
    SelftestReport { seed, suites }
}
