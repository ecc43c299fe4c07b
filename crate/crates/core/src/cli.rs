//! Command-line front end.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::error::Error;
use crate::field_solver::{self, bifurcation_scan, linspace, rho_tr_upper_torus, Grid, ScanConfig};
use crate::gn_constants::{resolve_constants, GnOverrides, ManifoldSpec};
use crate::ground_state::{sampled_norms_1d, GroundStateData};
use crate::params::ProblemParams;
use crate::sphere_criteria::{sphere_scan, SPHERE_CSV_HEADER};
use crate::thresholds::{second_variation, ThresholdReport};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "nls-waveguide", version, about = "Normalized NLS solutions on waveguide manifolds")]
pub struct Cli {
    /// Line-based key=value file; keys are flag names, flags on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Soliton constants ρ₀, G, I_ρ, ω_ρ and identity checks on ℝᴺ.
    GroundState(GroundStateArgs),
    /// Existence/triviality thresholds and the sufficient criteria.
    Thresholds(ThresholdArgs),
    /// Sphere criterion table over a k range.
    SphereScan(SphereScanArgs),
    /// Numerical minimization scan on ℝ×T¹.
    Bifurcation(BifurcationArgs),
    /// Runs the built-in invariant suite.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
pub struct GroundStateArgs {
    #[arg(long = "N", default_value_t = 1)]
    pub n: u32,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,
    #[arg(long, value_enum, default_value_t = OutFormat::Text)]
    pub out: OutFormat,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[arg(long = "N", default_value_t = 1)]
    pub n: u32,
    /// Dimension of the compact factor; inferred from --manifold when omitted.
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub alpha: f64,
    /// sphere:k | torus:L1[,L2...] | generic:vol,mu1[,A,B]
    #[arg(long)]
    pub manifold: Option<String>,
    /// Also report the second variation at this mass.
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long, value_enum, default_value_t = OutFormat::Text)]
    pub out: OutFormat,
}

#[derive(Debug, Args)]
pub struct SphereScanArgs {
    /// k or lo:hi
    #[arg(long, default_value = "2:12")]
    pub k: String,
    #[arg(long, default_value_t = 0.01)]
    pub alpha_step: f64,
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    pub out: OutFormat,
}

#[derive(Debug, Args)]
pub struct BifurcationArgs {
    #[arg(long = "N", default_value_t = 1)]
    pub n: u32,
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    #[arg(long, default_value_t = 2.5)]
    pub alpha: f64,
    /// torus:L
    #[arg(long, default_value = "torus:6.283185307179586")]
    pub manifold: String,
    /// lo:hi:n in absolute mass; defaults to 0.3:1.5:12 times the ρ*_tr bound.
    #[arg(long)]
    pub rho_grid: Option<String>,
    #[arg(long, default_value_t = 512)]
    pub nx: usize,
    #[arg(long, default_value_t = 64)]
    pub ny: usize,
    /// Half-width in soliton units.
    #[arg(long, default_value_t = 30.0)]
    pub x_half_width: f64,
    #[arg(long, default_value_t = 0.05)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 50_000)]
    pub max_iter: usize,
    /// Stop a row when t(u) exceeds this value.
    #[arg(long)]
    pub t_cap: Option<f64>,
    /// Where to write the JSON summary in csv mode.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    pub out: OutFormat,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 20_240_601)]
    pub seed: u64,
    #[arg(long, hide = true)]
    pub inject_fault: bool,
    #[arg(long, value_enum, default_value_t = OutFormat::Text)]
    pub out: OutFormat,
}

/// A failure with its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Numeric(_) => 1,
            Error::Domain(_) | Error::Grid(_) => 2,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        // A closed downstream pipe (`| head`) ends output quietly.
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return CliError { code: 0, message: String::new() };
        }
        CliError { code: 1, message: e.to_string() }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError { code: 2, message: msg.into() }
}

fn parse_num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T, CliError> {
    s.trim().parse().map_err(|_| usage(format!("cannot parse {what} from '{s}'")))
}

/// Parses `sphere:k`, `torus:L1[,L2…]` or `generic:vol,mu1[,A,B]`.
pub fn parse_manifold(s: &str, dim_hint: Option<u32>) -> Result<(ManifoldSpec, GnOverrides), CliError> {
    let (kind, rest) = s.split_once(':').ok_or_else(|| usage(format!("manifold '{s}' must look like kind:params")))?;
    let nums: Vec<&str> = rest.split(',').collect();
    let mut overrides = GnOverrides::default();
    let m = match kind {
        "sphere" => {
            if nums.len() != 1 {
                return Err(usage("sphere takes one parameter: sphere:k"));
            }
            ManifoldSpec::sphere(parse_num(nums[0], "sphere dimension")?)?
        }
        "torus" => ManifoldSpec::flat_torus(
            nums.iter().map(|v| parse_num(v, "torus length")).collect::<Result<Vec<f64>, _>>()?,
        )?,
        "generic" => {
            if nums.len() != 2 && nums.len() != 4 {
                return Err(usage("generic takes vol,mu1 or vol,mu1,A,B"));
            }
            let vol = parse_num(nums[0], "volume")?;
            let mu1 = parse_num(nums[1], "mu1")?;
            if nums.len() == 4 {
                overrides.a = Some(parse_num(nums[2], "A")?);
                overrides.b = Some(parse_num(nums[3], "B")?);
            }
            let dim = dim_hint.ok_or_else(|| usage("generic manifolds need --k for their dimension"))?;
            ManifoldSpec::generic(dim, vol, mu1)?
        }
        other => return Err(usage(format!("unknown manifold kind '{other}' (sphere, torus, generic)"))),
    };
    Ok((m, overrides))
}

/// Parses `lo:hi:n` into n evenly spaced values.
pub fn parse_rho_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(usage(format!("rho grid '{s}' must be lo:hi:n")));
    }
    let lo: f64 = parse_num(parts[0], "rho grid start")?;
    let hi: f64 = parse_num(parts[1], "rho grid end")?;
    let n: usize = parse_num(parts[2], "rho grid count")?;
    if !(lo > 0.0 && hi > lo && n >= 1) {
        return Err(usage(format!("rho grid needs 0 < lo < hi and n >= 1, got {s}")));
    }
    Ok(linspace(lo, hi, n))
}

fn parse_k_range(s: &str) -> Result<std::ops::RangeInclusive<u32>, CliError> {
    let (lo, hi) = match s.split_once(':') {
        Some((a, b)) => (parse_num(a, "k")?, parse_num(b, "k")?),
        None => {
            let k = parse_num(s, "k")?;
            (k, k)
        }
    };
    if lo < 2 || hi < lo {
        return Err(usage(format!("k range '{s}' needs 2 <= lo <= hi")));
    }
    Ok(lo..=hi)
}

/// Reads `key=value` lines; blank lines and `#` comments are ignored.
pub fn read_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("config line {}: expected key=value, got '{line}'", no + 1)))?;
        out.insert(k.trim().trim_start_matches("--").to_string(), v.trim().to_string());
    }
    Ok(out)
}

/// Splices config entries in after the subcommand unless the flag is already given.
fn merge_config(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let strs: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let mut path = None;
    for (i, a) in strs.iter().enumerate() {
        if a == "--config" {
            path = strs.get(i + 1).cloned();
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else { return Ok(args) };
    let text = std::fs::read_to_string(&path).map_err(|e| usage(format!("cannot read config {path}: {e}")))?;
    let cfg = read_config(&text)?;
    let sub_pos = strs
        .iter()
        .enumerate()
        .skip(1)
        .find(|(i, a)| {
            ["ground-state", "thresholds", "sphere-scan", "bifurcation", "selftest"].contains(&a.as_str())
                && strs[i - 1] != "--config"
        })
        .map(|(i, _)| i);
    let Some(pos) = sub_pos else { return Ok(args) };
    let mut out: Vec<OsString> = args[..=pos].to_vec();
    for (k, v) in cfg {
        let flag = format!("--{k}");
        let given = strs.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}=")));
        if !given {
            if v == "true" {
                out.push(flag.into());
            } else {
                out.push(format!("{flag}={v}").into());
            }
        }
    }
    out.extend_from_slice(&args[pos + 1..]);
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
struct Row {
    name: String,
    value: String,
    formula: String,
}

fn row(name: &str, value: f64, formula: &str) -> Row {
    Row { name: name.to_string(), value: format!("{value:.12e}"), formula: formula.to_string() }
}

fn write_rows(out: &mut dyn Write, rows: &[Row]) -> std::io::Result<()> {
    let w = rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let v = rows.iter().map(|r| r.value.len()).max().unwrap_or(0);
    for r in rows {
        writeln!(out, "{:<w$}  {:>v$}  [{}]", r.name, r.value, r.formula)?;
    }
    Ok(())
}

fn write_json(out: &mut dyn Write, value: &serde_json::Value) -> Result<(), CliError> {
    let s = serde_json::to_string_pretty(value).map_err(|e| CliError { code: 1, message: e.to_string() })?;
    writeln!(out, "{s}")?;
    Ok(())
}

fn cmd_ground_state(a: &GroundStateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if !(a.rho > 0.0) {
        return Err(usage("--rho must be positive"));
    }
    let gs = GroundStateData::new(a.alpha, a.n)?;
    let (grad, lp) = gs.identities(a.rho)?;
    let mut rows = vec![
        row("rho0", gs.rho0, "soliton-mass"),
        row("G", gs.g, "soliton-energy-constant"),
        row("I_rho", gs.i_rho(a.rho)?, "soliton-energy"),
        row("omega_rho", gs.omega(a.rho)?, "soliton-frequency"),
        row("grad_sq", grad, "pohozaev-gradient"),
        row("lp_pow", lp, "pohozaev-lp"),
    ];
    if a.n == 1 {
        let b = gs.scaling(a.rho)?.1;
        let s = sampled_norms_1d(a.alpha, a.rho, 1e-3 / b)?;
        let i = gs.i_rho(a.rho)?;
        rows.push(row("energy_rel_err", (s.energy - i).abs() / i.abs(), "sampled-energy-check"));
        rows.push(row("grad_rel_err", (s.grad_sq - grad).abs() / grad.abs(), "sampled-pohozaev-check"));
        rows.push(row("lp_rel_err", (s.lp_pow - lp).abs() / lp.abs(), "sampled-pohozaev-check"));
    }
    match a.out {
        OutFormat::Json => write_json(
            out,
            &json!({"schema": SCHEMA, "command": "ground-state", "N": a.n, "alpha": a.alpha, "rho": a.rho, "rows": rows}),
        ),
        OutFormat::Csv => {
            writeln!(out, "name,value,formula")?;
            for r in &rows {
                writeln!(out, "{},{},{}", r.name, r.value, r.formula)?;
            }
            Ok(())
        }
        OutFormat::Text => Ok(write_rows(out, &rows)?),
    }
}

fn cmd_thresholds(a: &ThresholdArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (manifold, overrides) = match (&a.manifold, a.k) {
        (Some(m), k) => parse_manifold(m, k)?,
        (None, Some(k)) if k >= 2 => (ManifoldSpec::sphere(k)?, GnOverrides::default()),
        (None, Some(1)) => (ManifoldSpec::flat_torus(vec![2.0 * std::f64::consts::PI])?, GnOverrides::default()),
        _ => return Err(usage("give --k or --manifold")),
    };
    let k = a.k.unwrap_or(manifold.dim());
    if k != manifold.dim() {
        return Err(usage(format!("--k {k} does not match manifold {} of dimension {}", manifold.label(), manifold.dim())));
    }
    let params = ProblemParams::new(a.n, k, a.alpha)?;
    let (gn, warnings) = resolve_constants(&params, &manifold, &overrides)?;
    let gs = GroundStateData::new(params.alpha(), params.n())?;
    let report = ThresholdReport::compute(&params, &manifold, &gn, &gs, warnings)?;
    let sv = match a.rho {
        Some(rho) => Some(second_variation(&params, manifold.mu1(), rho / manifold.vol().sqrt(), &gs)?),
        None => None,
    };
    match a.out {
        OutFormat::Json => {
            let mut v = serde_json::to_value(&report).map_err(|e| CliError { code: 1, message: e.to_string() })?;
            v["schema"] = json!(SCHEMA);
            v["command"] = json!("thresholds");
            v["formulas"] = serde_json::to_value(report.rows()).unwrap_or_default();
            if let Some(s) = sv {
                v["second_variation"] = json!({"rho": a.rho, "value": s});
            }
            write_json(out, &v)
        }
        OutFormat::Text | OutFormat::Csv => {
            let mut rows: Vec<Row> = report
                .rows()
                .into_iter()
                .map(|t| Row { name: t.name.to_string(), value: t.value, formula: t.formula.to_string() })
                .collect();
            if let Some(s) = sv {
                rows.push(row("second_variation", s, "second-variation"));
            }
            if a.out == OutFormat::Csv {
                writeln!(out, "name,value,formula")?;
                for r in &rows {
                    writeln!(out, "{},{},{}", r.name, r.value, r.formula)?;
                }
            } else {
                writeln!(out, "# {} N={} k={} alpha={}", report.manifold, report.n, report.k, report.alpha)?;
                write_rows(out, &rows)?;
                for w in &report.warnings {
                    writeln!(out, "# {w}")?;
                }
            }
            Ok(())
        }
    }
}

fn cmd_sphere_scan(a: &SphereScanArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let rows = sphere_scan(parse_k_range(&a.k)?, a.alpha_step)?;
    match a.out {
        OutFormat::Json => write_json(out, &json!({"schema": SCHEMA, "command": "sphere-scan", "rows": rows})),
        OutFormat::Csv | OutFormat::Text => {
            writeln!(out, "{SPHERE_CSV_HEADER}")?;
            for r in &rows {
                writeln!(out, "{}", r.csv_line())?;
            }
            Ok(())
        }
    }
}

fn cmd_bifurcation(a: &BifurcationArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if a.n != 1 || a.k != 1 {
        return Err(usage("the field solver covers N = 1, k = 1 (R x circle) only"));
    }
    let (manifold, _) = parse_manifold(&a.manifold, Some(1))?;
    let length = match &manifold {
        ManifoldSpec::FlatTorus { lengths } if lengths.len() == 1 => lengths[0],
        _ => return Err(usage("bifurcation needs --manifold torus:L with a single length")),
    };
    ProblemParams::new(1, 1, a.alpha)?;
    let bound = rho_tr_upper_torus(a.alpha, length)?;
    let grid = match &a.rho_grid {
        Some(s) => parse_rho_grid(s)?,
        None => linspace(0.3 * bound, 1.5 * bound, 12),
    };
    let mut cfg = ScanConfig::new(a.alpha, length)?;
    cfg.grid = Grid::new(a.x_half_width, a.nx, length, a.ny)?;
    cfg.epsilon = a.epsilon;
    cfg.t_star_cap = a.t_cap;
    cfg.flow.max_iter = a.max_iter;
    let report = bifurcation_scan(&grid, &cfg)?;
    let summary = json!({
        "schema": SCHEMA,
        "command": "bifurcation",
        "alpha": report.alpha,
        "length": report.length,
        "grid": report.grid,
        "rho_tr_upper": report.rho_tr_upper,
        "rho_tr_estimate": report.rho_tr_estimate,
        "monotone": report.monotone,
        "rows": report.rows.len(),
    });
    match a.out {
        OutFormat::Json => {
            let mut v = summary;
            v["rows"] = serde_json::to_value(&report.rows).unwrap_or_default();
            write_json(out, &v)?;
        }
        OutFormat::Csv | OutFormat::Text => {
            writeln!(out, "{}", field_solver::SCAN_CSV_HEADER)?;
            for r in &report.rows {
                writeln!(out, "{}", r.csv_line())?;
            }
            if let Some(p) = &a.summary {
                let s = serde_json::to_string_pretty(&summary).map_err(|e| CliError { code: 1, message: e.to_string() })?;
                std::fs::write(p, s + "\n")?;
            } else if a.out == OutFormat::Text {
                writeln!(out, "# rho_tr_upper = {:.12e}", report.rho_tr_upper)?;
                match report.rho_tr_estimate {
                    Some(r) => writeln!(out, "# rho_tr_estimate = {r:.12e}")?,
                    None => writeln!(out, "# rho_tr_estimate = none (no converged nontrivial row)")?,
                }
            }
        }
    }
    Ok(())
}

fn cmd_selftest(a: &SelftestArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let report = crate::selftest::run(a.seed, a.inject_fault);
    match a.out {
        OutFormat::Json => {
            let mut v = serde_json::to_value(&report).map_err(|e| CliError { code: 1, message: e.to_string() })?;
            v["schema"] = json!(SCHEMA);
            write_json(out, &v)?;
        }
        _ => report.write_text(out)?,
    }
    if report.passed() {
        Ok(())
    } else {
        Err(CliError { code: 1, message: format!("{} selftest check(s) failed", report.failures()) })
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run(args: Vec<OsString>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let args = match merge_config(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            return e.code;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match &cli.command {
        Command::GroundState(a) => cmd_ground_state(a, out),
        Command::Thresholds(a) => cmd_thresholds(a, out),
        Command::SphereScan(a) => cmd_sphere_scan(a, out),
        Command::Bifurcation(a) => cmd_bifurcation(a, out),
        Command::Selftest(a) => cmd_selftest(a, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            if !e.message.is_empty() {
                let _ = writeln!(err, "error: {}", e.message);
            }
            e.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifold_strings() {
        let (m, o) = parse_manifold("sphere:3", None).unwrap();
        assert_eq!(m, ManifoldSpec::Sphere { k: 3 });
        assert_eq!(o, GnOverrides::default());
        let (m, _) = parse_manifold("torus:1,2", None).unwrap();
        assert_eq!(m.dim(), 2);
        let (m, o) = parse_manifold("generic:2.0,3.0,0.5,1.5", Some(2)).unwrap();
        assert_eq!(m.vol(), 2.0);
        assert_eq!(o.b, Some(1.5));
        assert!(parse_manifold("generic:1,1", None).is_err());
        assert!(parse_manifold("cube:3", None).is_err());
        assert!(parse_manifold("torus:-1", None).is_err());
    }

    #[test]
    fn rho_grids() {
        let g = parse_rho_grid("1:2:3").unwrap();
        assert_eq!(g, vec![1.0, 1.5, 2.0]);
        assert!(parse_rho_grid("2:1:3").is_err());
        assert!(parse_rho_grid("1:2").is_err());
    }

    #[test]
    fn config_lines() {
        let c = read_config("# c\nalpha = 2.5\n\nk=3 # trailing\n").unwrap();
        assert_eq!(c["alpha"], "2.5");
        assert_eq!(c["k"], "3");
        assert!(read_config("alpha").is_err());
    }
}
