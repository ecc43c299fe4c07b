//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use nls_waveguide::field_solver::*;
use nls_waveguide::ground_state::{g_constant, minimize_e0_1d, ode_residual_1d, E0FlowConfig, GroundStateData};
use nls_waveguide::specfun::{gamma, sphere_volume};
use nls_waveguide::sphere_criteria::*;
use nls_waveguide::thresholds::{lambda_of_rho, rho_of_lambda};
use nls_waveguide::{ProblemParams, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { ok, detail: detail.into() })
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn sphere_mass_critical_claim() -> Result<Outcome> {
    let bad: Vec<u32> = (2..=12).filter(|&k| sphere_mass_critical(k) != (k >= 3)).collect();
    outcome(bad.is_empty(), format!("true for k=3..12, false for k=2; mismatches {bad:?}"))
}

fn rough_bound_boundaries() -> Result<Outcome> {
    let bad: Vec<u32> = (2..=40)
        .filter(|&k| rough_bound_coarse(k) != (k >= 11) || rough_bound_refined(k) != (k >= 9))
        .collect();
    outcome(bad.is_empty(), format!("coarse iff k>=11, refined iff k>=9 on k=2..40; mismatches {bad:?}"))
}

fn exact_sphere_condition() -> Result<Outcome> {
    let rows = sphere_scan(2..=12, 0.01)?;
    let high: Vec<_> = rows.iter().filter(|r| r.k >= 6).collect();
    let fail_high = high.iter().filter(|r| !r.exact_holds).count();
    let k2: Vec<_> = rows.iter().filter(|r| r.k == 2).collect();
    let hold_k2 = k2.iter().filter(|r| r.exact_holds).count();
    outcome(
        fail_high == 0 && hold_k2 == 0 && !high.is_empty() && !k2.is_empty(),
        format!("k=6..12: {} of {} grid points fail; k=2: {} of {} hold", fail_high, high.len(), hold_k2, k2.len()),
    )
}

fn improved_criterion_checks() -> Result<Outcome> {
    let rows = sphere_scan(2..=5, 0.01)?;
    let of = |k: u32| rows.iter().filter(move |r| r.k == k);
    let k45 = of(4).chain(of(5)).all(|r| r.improved_holds);
    let k2 = of(2).all(|r| !r.improved_holds);
    let k3: Vec<bool> = of(3).map(|r| r.improved_holds).collect();
    let start = of(3).next().map(|r| r.alpha).unwrap_or(f64::NAN);
    let prefix = improved_prefix(&rows, 3);
    let split = k3.iter().position(|h| !h).unwrap_or(k3.len());
    let k3_shape = split > 0 && split < k3.len() && k3[split..].iter().all(|h| !h) && start == 1.0;
    outcome(
        k45 && k2 && k3_shape,
        format!(
            "k=4,5 all hold: {k45}; k=2 all fail: {k2}; k=3 holds on [1, {}] then fails on the remaining {} points",
            prefix.map_or("none".into(), |a| format!("{a:.2}")),
            k3.len() - split
        ),
    )
}

fn ground_state_fidelity() -> Result<Outcome> {
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    let grid = Grid::new(40.0, 2048, 1.0, 8)?;
    for alpha in [2.0, 2.5, 3.0] {
        let gs = GroundStateData::new(alpha, 1)?;
        for rho in [gs.rho0, 1.3 * gs.rho0] {
            // On the unit circle the y-constant field is Z_ρ itself; the grid is in soliton units.
            let frame = Frame::soliton(alpha, rho, 1.0)?;
            let u = make_initial_in_frame(alpha, rho, 0.0, &grid, &frame)?;
            let energy = frame.energy_factor() * discrete_energy_lambda(&u, alpha, frame.lambda)?;
            worst.0 = worst.0.max(rel(energy, gs.i_rho(rho)?));
            let (gx, _) = grad_norms(&u);
            let (grad, lp) = gs.identities(rho)?;
            let grad_grid = frame.mass_factor() * gx / frame.lambda;
            let lp_grid = frame.energy_factor() * lp_norm_pow(&u, alpha);
            worst.1 = worst.1.max(rel(grad_grid, grad)).max(rel(lp_grid, lp));
            // The h² truncation term grows with ω, so the step follows the soliton scale.
            worst.2 = worst.2.max(ode_residual_1d(alpha, rho, 1e-3 / gs.omega(rho)?.max(1.0))?);
        }
    }
    outcome(
        worst.0 < 1e-3 && worst.1 < 1e-2 && worst.2 < 1e-5,
        format!("energy rel {:.2e}, Pohozaev rel {:.2e}, ODE residual {:.2e}", worst.0, worst.1, worst.2),
    )
}

fn oracle_equivalence() -> Result<Outcome> {
    let m = minimize_e0_1d(2.5, 1.0, &E0FlowConfig::default())?;
    let g = g_constant(2.5, 1)?;
    let err = rel(m.energy, -g);
    outcome(err < 1e-2, format!("E0 flow {:.6e} vs -G {:.6e}, rel {:.2e}", m.energy, -g, err))
}

fn gradient_and_second_variation() -> Result<Outcome> {
    let grid = Grid::new(12.0, 128, 2.0 * PI, 16)?;
    let mut rng = ChaCha8Rng::seed_from_u64(20240601);
    let mut worst_dd: f64 = 0.0;
    for _ in 0..20 {
        let (c1, c2, s) = (rng.gen_range(0.5..2.0), rng.gen_range(-1.0..1.0), rng.gen_range(0.5..1.5));
        let u = Field::from_fn(grid, |x, y| c1 * (-(x / s).powi(2)).exp() * (1.0 + 0.3 * c2 * y.cos()))?;
        let (d1, d2) = (rng.gen_range(-1.0..1.0), rng.gen_range(0.5..2.0));
        let phi = Field::from_fn(grid, |x, y| (d1 + (2.0 * y).sin()) * (-(x / d2).powi(2)).exp() * x)?;
        let alpha = rng.gen_range(1.0..3.0);
        let h = 1e-5;
        let fd = (discrete_energy(&u.axpy(h, &phi)?, alpha)? - discrete_energy(&u.axpy(-h, &phi)?, alpha)?) / (2.0 * h);
        let an = l2_gradient(&u, alpha).dot(&phi);
        worst_dd = worst_dd.max((fd - an).abs() / an.abs().max(1e-3));
    }

    let (alpha, length) = (2.5, 2.0 * PI);
    let grid = Grid::new(30.0, 512, length, 64)?;
    let bound = rho_tr_upper_torus(alpha, length)?;
    let mut worst_sv: f64 = 0.0;
    for f in [0.5, 0.8, 1.5] {
        let rho = f * bound;
        let fd = second_variation_fd(alpha, rho, &grid)?;
        worst_sv = worst_sv.max(rel(fd, second_variation_closed_torus(alpha, rho, length)?));
    }
    let below = second_variation_fd(alpha, 0.99 * bound, &grid)?;
    let above = second_variation_fd(alpha, 1.01 * bound, &grid)?;
    let bracket = below > 0.0 && above < 0.0;
    outcome(
        worst_dd < 1e-5 && worst_sv < 1e-2 && bracket,
        format!(
            "directional rel {:.2e}; second variation rel {:.2e} at 0.5/0.8/1.5x bound; sign flip in [0.99, 1.01]x {:.6}: {bracket}",
            worst_dd, worst_sv, bound
        ),
    )
}

fn bifurcation_containment() -> Result<Outcome> {
    let (alpha, length) = (2.5, 2.0 * PI);
    let bound = rho_tr_upper_torus(alpha, length)?;
    let cfg = ScanConfig::new(alpha, length)?;
    let rhos = linspace(0.3 * bound, 1.5 * bound, 12);
    let report = bifurcation_scan(&rhos, &cfg)?;
    let above: Vec<_> = report.rows.iter().filter(|r| r.rho > bound).collect();
    let above_converged: Vec<_> = above.iter().filter(|r| r.converged()).collect();
    let above_ok = above_converged.iter().all(|r| r.is_nontrivial(&cfg));
    let low: Vec<_> = report.rows.iter().filter(|r| r.rho < 0.5 * bound).collect();
    let low_ok = low.iter().all(|r| r.is_trivial(&cfg));
    let statuses: Vec<String> = report.rows.iter().map(|r| format!("{:.3}:{}", r.rho / bound, r.status)).collect();
    outcome(
        above_ok && low_ok && report.monotone && !low.is_empty(),
        format!(
            "{} rows above the bound ({} converged, all nontrivial: {above_ok}); {} rows below half trivial: {low_ok}; monotone: {}; [{}]",
            above.len(),
            above_converged.len(),
            low.len(),
            report.monotone,
            statuses.join(" ")
        ),
    )
}

fn structural_identities() -> Result<Outcome> {
    let mut lambda_err: f64 = 0.0;
    for (n, k, alpha) in [(1, 1, 2.5), (1, 3, 1.2), (2, 1, 1.5), (1, 4, 0.9)] {
        let params = ProblemParams::new(n, k, alpha)?;
        for i in 0..50 {
            let rho = 0.05 * 1.2f64.powi(i);
            lambda_err = lambda_err.max(rel(rho_of_lambda(lambda_of_rho(rho, &params), &params), rho));
        }
    }
    let grid = Grid::new(40.0, 2048, 1.0, 8)?;
    let mut evs: f64 = 0.0;
    for (amp, width, c) in [(1.2, 2.0, 1.3), (0.8, 1.5, 1.15), (1.5, 3.0, 1.25)] {
        let u = Field::from_fn(grid, |x, _| amp / (width * x).cosh().powf(0.8))?;
        let (_, res) = transform_roundtrip(&u, c, 2.5)?;
        evs = evs.max(res);
    }
    let mut vol_err: f64 = 0.0;
    for k in 1..=20u32 {
        let ratio = sphere_volume(k + 1)? / sphere_volume(k)?;
        let want = PI.sqrt() * gamma(0.5 * f64::from(k + 1))? / gamma(0.5 * f64::from(k + 2))?;
        vol_err = vol_err.max(rel(ratio, want));
    }
    outcome(
        lambda_err < 1e-12 && evs < 1e-4 && vol_err < 1e-12,
        format!("lambda round-trip {:.2e}; E vs E_lambda {:.2e}; volume ratio {:.2e}", lambda_err, evs, vol_err),
    )
}

type Criterion = (&'static str, Duration, fn() -> Result<Outcome>);

fn main() {
    let criteria: [Criterion; 9] = [
        ("sphere mass-critical claim", Duration::from_secs(1), sphere_mass_critical_claim),
        ("rough-bound boundaries", Duration::from_secs(1), rough_bound_boundaries),
        ("exact sphere condition", Duration::from_secs(5), exact_sphere_condition),
        ("improved criterion on spheres", Duration::from_secs(10), improved_criterion_checks),
        ("ground-state fidelity", Duration::from_secs(30), ground_state_fidelity),
        ("oracle equivalence", Duration::from_secs(60), oracle_equivalence),
        ("gradient and second variation", Duration::from_secs(120), gradient_and_second_variation),
        ("bifurcation containment", Duration::from_secs(600), bifurcation_containment),
        ("structural identities", Duration::from_secs(10), structural_identities),
    ];
    let mut failures = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(o) => (o.ok && elapsed <= *budget, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failures += 1;
        }
        println!(
            "{} {}. {name} ({:.2}s of {}s): {detail}",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
