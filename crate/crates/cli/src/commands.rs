use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, ensure, Context, Result};
use serde::Serialize;
use serde_json::{json, Value};
use ssf_core::oracles::{bound_states, oracle_sweep, xi_oracle};
use ssf_core::specfun::{identity_suite, IdentityCheck};
use ssf_core::ssf::{read_curve_csv, validate_trace_formula, write_curve_csv, xi_sweep, CurveHeader, PointStatus};
use ssf_core::triple_lab::fuzz;
use ssf_core::{c64, ComplexEnergy, FuzzSizes, FuzzThresholds, OracleGeometry, SsfCurve, TraceReport, ValidateOptions, WeylMode};

use crate::config::LoadedConfig;

pub const SCHEMA_VERSION: u32 = 1;
const VERSION: &str = env!("CARGO_PKG_VERSION");

/// How a command finished when it did not hit a hard error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    /// Outputs were written but some numerical check failed.
    SoftFailure,
}

impl Outcome {
    pub fn exit_code(self) -> u8 {
        match self {
            Self::Success => 0,
            Self::SoftFailure => 2,
        }
    }

    fn from_pass(pass: bool) -> Self {
        if pass {
            Self::Success
        } else {
            Self::SoftFailure
        }
    }
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut out = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn timings_path(path: &Path) -> PathBuf {
    path.with_extension("timings.json")
}

fn compute_curve(loaded: &LoadedConfig) -> Result<SsfCurve> {
    let config = &loaded.config;
    let lambdas = config.grid.lambdas();
    ensure!(!lambdas.is_empty(), "grid.segments must describe at least one lambda");
    match config.setup()? {
        Some(setup) => Ok(xi_sweep(&lambdas, &config.schedule, &setup)?),
        None => {
            let geom = config.geometry.oracle().expect("non-boundary geometry has an oracle");
            let alpha = config.alpha.as_constant().expect("checked at parse time");
            Ok(oracle_sweep(geom, alpha, config.mode, &lambdas, config.discretization.m_max, config.tolerances.exclusion_radius)?)
        }
    }
}

fn curve_header(loaded: &LoadedConfig, curve: &SsfCurve) -> Result<CurveHeader> {
    let mut header = CurveHeader::default();
    header.insert("schema_version", SCHEMA_VERSION.to_string());
    header.insert("config_sha256", loaded.sha256.clone());
    header.insert("ssf_version", VERSION);
    header.insert("provenance", serde_json::to_string(&curve.provenance)?);
    Ok(header)
}

fn curve_summary(curve: &SsfCurve) -> Value {
    let count = |s: PointStatus| curve.points.iter().filter(|p| p.status == s).count();
    json!({
        "points": curve.points.len(),
        "converged": count(PointStatus::Converged),
        "not_converged": count(PointStatus::NotConverged),
        "excluded": count(PointStatus::Excluded),
        "max_err_est": curve.points.iter().filter(|p| p.status != PointStatus::Excluded).map(|p| p.err).fold(0.0, f64::max),
        "jumps": curve.jumps,
    })
}

/// Runs the sweep and writes the curve CSV, a manifest and a timings sidecar
/// into `out`.
pub fn sweep(loaded: &LoadedConfig, out: &Path) -> Result<Outcome> {
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let start = Instant::now();
    let curve = compute_curve(loaded)?;
    let elapsed = start.elapsed().as_secs_f64();
    let config = &loaded.config;
    let curve_path = out.join(&config.output.curve);
    let file = File::create(&curve_path).with_context(|| format!("creating {}", curve_path.display()))?;
    write_curve_csv(BufWriter::new(file), &curve, &curve_header(loaded, &curve)?)?;
    let manifest = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "sweep",
        "config_sha256": loaded.sha256,
        "versions": { "ssf": VERSION },
        "config": config,
        "outputs": { "curve": config.output.curve },
        "summary": curve_summary(&curve),
    });
    let manifest_path = out.join(&config.output.manifest);
    write_json(&manifest_path, &manifest)?;
    write_json(&timings_path(&manifest_path), &json!({ "config_sha256": loaded.sha256, "sweep_seconds": elapsed }))?;
    Ok(Outcome::from_pass(curve.points.iter().all(|p| p.status != PointStatus::NotConverged)))
}

/// Reads a curve written by `sweep`, refusing it unless it came from the same
/// config bytes.
pub fn load_curve(loaded: &LoadedConfig, path: &Path) -> Result<SsfCurve> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let (header, points, jumps) = read_curve_csv(BufReader::new(file), loaded.config.tolerances.exclusion_radius)?;
    match header.get("config_sha256") {
        Some(h) if h == loaded.sha256 => {}
        Some(h) => bail!("{} was produced by config {h}, not {}", path.display(), loaded.sha256),
        None => bail!("{} carries no config_sha256 header", path.display()),
    }
    let setup = loaded.config.setup()?.context("validate needs a boundary geometry")?;
    Ok(SsfCurve { points, schedule: loaded.config.schedule, provenance: setup.provenance(), jumps })
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidateOutput {
    pub schema_version: u32,
    pub command: &'static str,
    pub config_sha256: String,
    pub curve_source: String,
    pub passed: bool,
    pub report: TraceReport,
}

/// Trace formula check at every `z`, against `curve` or a fresh sweep.
pub fn validate(
    loaded: &LoadedConfig,
    out: &Path,
    curve: Option<&Path>,
    z_override: &[c64],
    tolerance: Option<f64>,
) -> Result<(Outcome, ValidateOutput)> {
    let config = &loaded.config;
    let setup = config.setup()?.context("geometry: validate needs a boundary geometry")?;
    let start = Instant::now();
    let (curve, source) = match curve {
        Some(path) => (load_curve(loaded, path)?, path.display().to_string()),
        None => (compute_curve(loaded)?, "sweep".to_string()),
    };
    let sweep_seconds = start.elapsed().as_secs_f64();
    let z_list: Vec<c64> = if z_override.is_empty() {
        config.validate.z.iter().map(|z| c64::new(z[0], z[1])).collect()
    } else {
        z_override.to_vec()
    };
    let options = ValidateOptions {
        tolerance: tolerance.unwrap_or(config.tolerances.validate),
        coverage_tol: config.tolerances.coverage,
    };
    let start = Instant::now();
    let report = validate_trace_formula(&curve, &z_list, &setup, &options)?;
    let output = ValidateOutput {
        schema_version: SCHEMA_VERSION,
        command: "validate",
        config_sha256: loaded.sha256.clone(),
        curve_source: source,
        passed: report.passed(),
        report,
    };
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let path = out.join(&config.output.report);
    write_json(&path, &output)?;
    write_json(
        &timings_path(&path),
        &json!({ "config_sha256": loaded.sha256, "sweep_seconds": sweep_seconds, "validate_seconds": start.elapsed().as_secs_f64() }),
    )?;
    Ok((Outcome::from_pass(output.passed), output))
}

/// Single-layer mode values `e_m(z)` for `m` in `orders`, as CSV.
pub fn oracle_modes<W: Write + ?Sized>(out: &mut W, geom: OracleGeometry, z: c64, orders: (usize, usize)) -> Result<Outcome> {
    let energy = ComplexEnergy::new(z)?;
    let modes = geom.single_layer_modes(orders.1, energy)?;
    writeln!(out, "m,multiplicity,re,im")?;
    for (m, e) in modes.iter().enumerate().skip(orders.0) {
        writeln!(out, "{m},{},{:.16e},{:.16e}", geom.multiplicity(m), e.re, e.im)?;
    }
    Ok(Outcome::Success)
}

/// Mode-sum `ξ(λ + iε)` at each `λ`, as CSV.
pub fn oracle_xi<W: Write + ?Sized>(
    out: &mut W,
    geom: OracleGeometry,
    alpha: f64,
    mode: WeylMode,
    lambdas: &[f64],
    eps: f64,
    m_max: usize,
) -> Result<Outcome> {
    writeln!(out, "lambda,xi,tail_bound")?;
    for &lambda in lambdas {
        let sum = xi_oracle(geom, lambda, eps, alpha, mode, m_max).with_context(|| format!("lambda = {lambda}"))?;
        writeln!(out, "{:.16e},{:.16e},{:.16e}", lambda, sum.value, sum.tail_bound)?;
    }
    Ok(Outcome::Success)
}

pub fn oracle_bound_states<W: Write + ?Sized>(out: &mut W, geom: OracleGeometry, alpha: f64, m_max: usize) -> Result<Outcome> {
    let states = if alpha > 0.0 { bound_states(geom, alpha, m_max)? } else { Vec::new() };
    serde_json::to_writer_pretty(&mut *out, &json!({ "schema_version": SCHEMA_VERSION, "geometry": geom, "alpha": alpha, "states": states }))?;
    writeln!(out)?;
    Ok(Outcome::Success)
}

/// Runs the fuzz suite and writes its JSON report to `out`.
pub fn fuzz_cmd<W: Write + ?Sized>(out: &mut W, seed: u64, trials: u64, sizes: FuzzSizes, thresholds: FuzzThresholds) -> Result<Outcome> {
    let report = fuzz(seed, trials, sizes, thresholds);
    let passed = report.passed;
    serde_json::to_writer_pretty(&mut *out, &json!({ "schema_version": SCHEMA_VERSION, "command": "fuzz", "report": report }))?;
    writeln!(out)?;
    Ok(Outcome::from_pass(passed))
}

pub fn specfun_check<W: Write + ?Sized>(out: &mut W) -> Result<Outcome> {
    let checks: Vec<IdentityCheck> = identity_suite()?;
    let passed = checks.iter().all(|c| c.passed);
    let by_name: BTreeMap<&str, &IdentityCheck> = checks.iter().map(|c| (c.name.as_str(), c)).collect();
    serde_json::to_writer_pretty(&mut *out, &json!({ "schema_version": SCHEMA_VERSION, "passed": passed, "checks": by_name }))?;
    writeln!(out)?;
    Ok(Outcome::from_pass(passed))
}

/// `-1`, `2+2i`, `0.5-1e-3i`, `3i`.
pub fn parse_complex(s: &str) -> Result<c64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || anyhow::anyhow!("cannot parse {s:?} as a complex number");
    let Some(body) = t.strip_suffix('i') else {
        return Ok(c64::new(t.parse().map_err(|_| bad())?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        v => v.parse().map_err(|_| bad())?,
    };
    Ok(c64::new(re.parse().map_err(|_| bad())?, im))
}

/// `k` or the inclusive range `a..b`.
pub fn parse_orders(s: &str) -> Result<(usize, usize)> {
    let range = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse()?, b.trim().trim_start_matches('=').parse()?),
        None => {
            let k = s.trim().parse()?;
            (k, k)
        }
    };
    ensure!(range.0 <= range.1, "empty order range {s:?}");
    Ok(range)
}
