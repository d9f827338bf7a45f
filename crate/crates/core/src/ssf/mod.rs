//! The spectral shift function pipeline: `ξ` at `λ + iε`, the `ε ↓ 0` limit,
//! sweeps over a `λ` grid, and the resolvent trace formula check.

mod io;
mod quad;

use std::f64::consts::PI;
use std::sync::Arc;

use faer::{c64, Mat};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SsfError};
use crate::geometry::{discretize_curve, sample_alpha, AlphaSpec, BoundaryGrid, Curve2D};
use crate::layer::{assemble_single_layer, assemble_single_layer_dz};
use crate::linalg::{negative_count, re_part};
use crate::oplog::{im_trace_log, LogRoute};
use crate::specfun::ComplexEnergy;
use crate::weyl::{m_alpha_matrix, m_neg_matrix, m_zero_matrix, resolvent_trace, WeylConfig, WeylMode};

pub use io::{read_curve_csv, write_curve_csv, CurveHeader};
pub use quad::gauss_legendre;

/// Default exclusion radius around `λ = 0` and detected jumps.
pub const EXCLUSION_RADIUS: f64 = 1e-3;
/// Default ceiling on the extrapolation error before a point is flagged.
pub const ERR_CEILING: f64 = 1e-5;
/// The first `ε` never exceeds this fraction of the distance to the nearest
/// singular point, so the schedule stays inside the disc of analyticity.
pub const EPS_DISTANCE_FRACTION: f64 = 0.25;
/// Number of `κ = √(-λ)` samples used to bracket jumps below zero.
pub const JUMP_SCAN_POINTS: usize = 256;
/// Bisection tolerance on jump locations.
pub const JUMP_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsSchedule {
    pub eps0: f64,
    pub ratio: f64,
    pub count: usize,
}

impl Default for EpsSchedule {
    fn default() -> Self {
        Self { eps0: 0.1, ratio: 0.5, count: 6 }
    }
}

impl EpsSchedule {
    pub fn new(eps0: f64, ratio: f64, count: usize) -> Result<Self> {
        let s = Self { eps0, ratio, count };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps0 > 0.0 && self.eps0.is_finite()) {
            return Err(SsfError::InvalidInput(format!("schedule.eps0 must be positive, got {}", self.eps0)));
        }
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return Err(SsfError::InvalidInput(format!("schedule.ratio must lie in (0, 1), got {}", self.ratio)));
        }
        if self.count < 3 {
            return Err(SsfError::InvalidInput(format!("schedule.count must be at least 3, got {}", self.count)));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        std::iter::successors(Some(self.eps0), |e| Some(e * self.ratio)).take(self.count).collect()
    }

    /// Same schedule with `ε_0` lowered to at most `cap`.
    pub fn capped(&self, cap: f64) -> Self {
        Self { eps0: self.eps0.min(cap), ..*self }
    }
}

/// Degree-2 polynomial extrapolation to `ε = 0` over each consecutive triple;
/// returns the last extrapolant and its distance to the previous one (or to
/// the smallest-`ε` sample when there is only one triple).
pub fn richardson(eps: &[f64], values: &[f64]) -> Result<(f64, f64)> {
    if eps.len() != values.len() || eps.len() < 3 {
        return Err(SsfError::InvalidInput("extrapolation needs at least three samples".into()));
    }
    let extrapolants: Vec<f64> = eps
        .windows(3)
        .zip(values.windows(3))
        .map(|(e, v)| {
            (0..3)
                .map(|i| {
                    let w: f64 = (0..3).filter(|&j| j != i).map(|j| e[j] / (e[j] - e[i])).product();
                    w * v[i]
                })
                .sum()
        })
        .collect();
    let last = extrapolants[extrapolants.len() - 1];
    let prev = if extrapolants.len() > 1 { extrapolants[extrapolants.len() - 2] } else { values[values.len() - 1] };
    Ok((last, (last - prev).abs()))
}

/// Discretized boundary, interaction strength and pipeline tolerances.
#[derive(Debug, Clone)]
pub struct SsfSetup {
    grid: Arc<BoundaryGrid>,
    alpha: AlphaSpec,
    weyl: WeylConfig,
    route: LogRoute,
    exclusion_radius: f64,
    err_ceiling: f64,
    jumps: Vec<Jump>,
}

impl SsfSetup {
    pub fn new(curve: &Curve2D, n: usize, alpha: AlphaSpec, mode: WeylMode) -> Result<Self> {
        curve.validate()?;
        Self::from_grid(Arc::new(discretize_curve(curve, n)?), alpha, mode)
    }

    pub fn from_grid(grid: Arc<BoundaryGrid>, alpha: AlphaSpec, mode: WeylMode) -> Result<Self> {
        let weyl = WeylConfig::new(sample_alpha(&alpha, &grid), mode)?;
        Ok(Self {
            grid,
            alpha,
            weyl,
            route: LogRoute::default(),
            exclusion_radius: EXCLUSION_RADIUS,
            err_ceiling: ERR_CEILING,
            jumps: Vec::new(),
        })
    }

    pub fn with_route(mut self, route: LogRoute) -> Self {
        self.route = route;
        self
    }

    pub fn with_exclusion_radius(mut self, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(SsfError::InvalidInput(format!("exclusion radius must be positive, got {radius}")));
        }
        self.exclusion_radius = radius;
        Ok(self)
    }

    pub fn with_err_ceiling(mut self, ceiling: f64) -> Result<Self> {
        if !(ceiling > 0.0) {
            return Err(SsfError::InvalidInput(format!("error ceiling must be positive, got {ceiling}")));
        }
        self.err_ceiling = ceiling;
        Ok(self)
    }

    /// Registers jump points so that `xi_limit` keeps away from them.
    pub fn with_jumps(mut self, jumps: Vec<Jump>) -> Self {
        self.jumps = jumps;
        self
    }

    pub fn grid(&self) -> &Arc<BoundaryGrid> {
        &self.grid
    }

    pub fn alpha(&self) -> &AlphaSpec {
        &self.alpha
    }

    pub fn weyl(&self) -> &WeylConfig {
        &self.weyl
    }

    pub fn route(&self) -> LogRoute {
        self.route
    }

    pub fn exclusion_radius(&self) -> f64 {
        self.exclusion_radius
    }

    pub fn err_ceiling(&self) -> f64 {
        self.err_ceiling
    }

    pub fn jumps(&self) -> &[Jump] {
        &self.jumps
    }

    pub fn provenance(&self) -> Provenance {
        Provenance::Boundary { n: self.grid.len(), mode: self.weyl.mode(), alpha: self.alpha.clone() }
    }

    /// Distance from `λ` to the threshold and to every registered jump.
    fn singular_distance(&self, lambda: f64) -> (f64, f64) {
        self.jumps
            .iter()
            .map(|j| j.lambda)
            .chain(std::iter::once(0.0))
            .map(|p| ((lambda - p).abs(), p))
            .fold((f64::INFINITY, 0.0), |a, b| if b.0 < a.0 { b } else { a })
    }
}

/// Where a curve came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Boundary { n: usize, mode: WeylMode, alpha: AlphaSpec },
    KreinModel { n: usize, m: usize },
    ModeOracle { geometry: crate::oracles::OracleGeometry, m_max: usize, mode: WeylMode, alpha: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Jump {
    pub lambda: f64,
    /// `ξ(λ+) - ξ(λ-)`.
    pub size: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointStatus {
    Converged,
    NotConverged,
    /// Inside the exclusion radius of the threshold or a jump.
    Excluded,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SsfPoint {
    pub lambda: f64,
    pub xi: f64,
    pub err: f64,
    pub status: PointStatus,
}

impl SsfPoint {
    pub fn converged(&self) -> bool {
        self.status == PointStatus::Converged
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SsfCurve {
    pub points: Vec<SsfPoint>,
    pub schedule: EpsSchedule,
    pub provenance: Provenance,
    pub jumps: Vec<Jump>,
}

impl SsfCurve {
    pub fn lambdas(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.lambda).collect()
    }

    pub fn xis(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.xi).collect()
    }

    pub fn all_converged(&self) -> bool {
        self.points.iter().all(|p| p.status != PointStatus::NotConverged)
    }

    pub fn check(&self) -> Result<()> {
        if self.points.windows(2).any(|w| !(w[0].lambda < w[1].lambda)) {
            return Err(SsfError::InvalidInput("curve grid must be strictly increasing".into()));
        }
        if self.points.iter().any(|p| !p.xi.is_finite() || !(p.err >= 0.0)) {
            return Err(SsfError::InvalidInput("curve values must be finite with nonnegative errors".into()));
        }
        Ok(())
    }
}

/// `(1/π) Im tr` of the log-difference defining `ξ` at `λ + iε`.
pub fn xi_at(lambda: f64, eps: f64, setup: &SsfSetup) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(SsfError::InvalidInput(format!("xi_at needs eps > 0, got {eps}")));
    }
    if setup.weyl.is_trivial() {
        return Ok(0.0);
    }
    let e = assemble_single_layer(&setup.grid, ComplexEnergy::from_parts(lambda, eps)?)?;
    let alpha = setup.weyl.alpha();
    let im = match setup.weyl.mode() {
        WeylMode::AlphaNegative => im_trace_log(m_neg_matrix(e.matrix(), alpha)?.as_ref(), setup.route)?,
        WeylMode::PairWithC { c } => {
            let ma = m_alpha_matrix(e.matrix(), alpha, c)?;
            let m0 = m_zero_matrix(e.matrix(), c)?;
            im_trace_log(ma.as_ref(), setup.route)? - im_trace_log(m0.as_ref(), setup.route)?
        }
    };
    Ok(im / PI)
}

/// `ξ(λ)` below zero from the inertia of the self-adjoint Weyl matrices on the
/// real axis: each negative eigenvalue contributes `arg = π`.
pub fn xi_real_axis(lambda: f64, setup: &SsfSetup) -> Result<i64> {
    if !(lambda < 0.0) {
        return Err(SsfError::Domain(format!("real-axis counting needs λ < 0, got {lambda}")));
    }
    if setup.weyl.is_trivial() {
        return Ok(0);
    }
    let e = assemble_single_layer(&setup.grid, ComplexEnergy::upper_rim(lambda)?)?;
    let alpha = setup.weyl.alpha();
    let neg = |m: Mat<c64>| -> Result<i64> { Ok(negative_count(re_part(m.as_ref()).as_ref())? as i64) };
    match setup.weyl.mode() {
        WeylMode::AlphaNegative => neg(m_neg_matrix(e.matrix(), alpha)?),
        WeylMode::PairWithC { c } => Ok(neg(m_alpha_matrix(e.matrix(), alpha, c)?)? - neg(m_zero_matrix(e.matrix(), c)?)?),
    }
}

/// Jumps of `ξ` in `[lo, hi] ∩ (-∞, -radius]`, bracketed on a grid uniform in
/// `κ = √(-λ)` and refined by bisection.
pub fn detect_jumps(setup: &SsfSetup, lo: f64, hi: f64) -> Result<Vec<Jump>> {
    let hi = hi.min(-setup.exclusion_radius);
    if !(lo < hi) || setup.weyl.is_trivial() {
        return Ok(Vec::new());
    }
    let (k_hi, k_lo) = ((-lo).sqrt(), (-hi).sqrt());
    let lambdas: Vec<f64> = (0..JUMP_SCAN_POINTS)
        .map(|i| {
            let k = k_hi + (k_lo - k_hi) * i as f64 / (JUMP_SCAN_POINTS - 1) as f64;
            -k * k
        })
        .collect();
    let counts = lambdas.par_iter().map(|&l| xi_real_axis(l, setup)).collect::<Result<Vec<_>>>()?;
    let mut jumps = Vec::new();
    for i in 0..lambdas.len() - 1 {
        if counts[i] == counts[i + 1] {
            continue;
        }
        let (mut a, mut b) = (lambdas[i], lambdas[i + 1]);
        while b - a > JUMP_TOL {
            let mid = 0.5 * (a + b);
            if xi_real_axis(mid, setup)? == counts[i] {
                a = mid;
            } else {
                b = mid;
            }
        }
        jumps.push(Jump { lambda: 0.5 * (a + b), size: counts[i + 1] - counts[i] });
    }
    Ok(jumps)
}

/// Result of the `ε ↓ 0` extrapolation at one `λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XiEstimate {
    pub xi: f64,
    pub err: f64,
    pub converged: bool,
    /// First `ε` actually used.
    pub eps0: f64,
}

fn extrapolate(lambda: f64, schedule: &EpsSchedule, setup: &SsfSetup) -> Result<XiEstimate> {
    if setup.weyl.is_trivial() {
        return Ok(XiEstimate { xi: 0.0, err: 0.0, converged: true, eps0: schedule.eps0 });
    }
    let eps = schedule.values();
    let values = eps.iter().map(|&e| xi_at(lambda, e, setup)).collect::<Result<Vec<_>>>()?;
    let (xi, err) = richardson(&eps, &values)?;
    Ok(XiEstimate { xi, err, converged: err <= setup.err_ceiling, eps0: schedule.eps0 })
}

/// `lim_{ε↓0} ξ(λ + iε)` by degree-2 extrapolation. The schedule's `ε_0` is
/// lowered to a quarter of the distance to the nearest singular point.
pub fn xi_limit(lambda: f64, schedule: &EpsSchedule, setup: &SsfSetup) -> Result<XiEstimate> {
    schedule.validate()?;
    let (dist, point) = setup.singular_distance(lambda);
    if dist < setup.exclusion_radius {
        return Err(SsfError::Excluded { lambda, point, radius: setup.exclusion_radius });
    }
    extrapolate(lambda, &schedule.capped(EPS_DISTANCE_FRACTION * dist), setup)
}

/// Sweeps `xi_limit` over a strictly increasing grid. Jumps below zero are
/// detected first; points inside an exclusion window are still evaluated and
/// recorded with status `Excluded`.
pub fn xi_sweep(lambdas: &[f64], schedule: &EpsSchedule, setup: &SsfSetup) -> Result<SsfCurve> {
    schedule.validate()?;
    if lambdas.windows(2).any(|w| !(w[0] < w[1])) || lambdas.iter().any(|l| !l.is_finite()) {
        return Err(SsfError::InvalidInput("lambda grid must be finite and strictly increasing".into()));
    }
    let jumps = match lambdas.first() {
        Some(&lo) if lo < 0.0 => detect_jumps(setup, lo - setup.exclusion_radius, *lambdas.last().unwrap())?,
        _ => Vec::new(),
    };
    let setup = setup.clone().with_jumps(jumps.clone());
    let points = lambdas
        .par_iter()
        .map(|&lambda| {
            let (dist, _) = setup.singular_distance(lambda);
            if dist < setup.exclusion_radius {
                let cap = EPS_DISTANCE_FRACTION * setup.exclusion_radius;
                let est = extrapolate(lambda, &schedule.capped(cap), &setup)?;
                return Ok(SsfPoint { lambda, xi: est.xi, err: est.err, status: PointStatus::Excluded });
            }
            let est = xi_limit(lambda, schedule, &setup)?;
            let status = if est.converged { PointStatus::Converged } else { PointStatus::NotConverged };
            Ok(SsfPoint { lambda, xi: est.xi, err: est.err, status })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SsfCurve { points, schedule: *schedule, provenance: setup.provenance(), jumps })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidateOptions {
    /// Pass threshold on the relative error.
    pub tolerance: f64,
    /// Largest admissible tail bound relative to `|RHS|`.
    pub coverage_tol: f64,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self { tolerance: 1e-2, coverage_tol: 1e-2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceCheck {
    pub z: [f64; 2],
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    pub abs_err: f64,
    pub rel_err: f64,
    pub tail_bound: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceReport {
    pub checks: Vec<TraceCheck>,
    pub tolerance: f64,
    pub tail_fit: TailFit,
}

impl TraceReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// `ξ(λ) ≈ a + b/√λ` fitted on the top of the curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    pub a: f64,
    pub b: f64,
    pub from: f64,
    pub max_residual: f64,
}

/// Minimum number of positive-λ points used in the tail fit.
pub const TAIL_FIT_MIN: usize = 4;

fn fit_tail(points: &[SsfPoint]) -> Result<TailFit> {
    let positive: Vec<&SsfPoint> = points.iter().filter(|p| p.lambda > 0.0).collect();
    if positive.len() < TAIL_FIT_MIN {
        return Err(SsfError::Coverage { bound: f64::INFINITY, tol: 0.0 });
    }
    let used = &positive[positive.len() - (positive.len() / 4).max(TAIL_FIT_MIN)..];
    // normal equations for the basis {1, λ^{-1/2}}
    let (mut s11, mut s12, mut s22, mut r1, mut r2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for p in used {
        let g = 1.0 / p.lambda.sqrt();
        s11 += 1.0;
        s12 += g;
        s22 += g * g;
        r1 += p.xi;
        r2 += g * p.xi;
    }
    let det = s11 * s22 - s12 * s12;
    if det.abs() <= 1e-14 * s11 * s22 {
        return Err(SsfError::Coverage { bound: f64::INFINITY, tol: 0.0 });
    }
    let a = (s22 * r1 - s12 * r2) / det;
    let b = (s11 * r2 - s12 * r1) / det;
    let max_residual = used.iter().map(|p| (a + b / p.lambda.sqrt() - p.xi).abs()).fold(0.0, f64::max);
    Ok(TailFit { a, b, from: used[used.len() - 1].lambda, max_residual })
}

/// `∫_Λ^∞ (a + b λ^{-1/2}) (λ - z)^{-2} dλ`, with `λ = Λ/s²`.
fn tail_integral(fit: &TailFit, z: c64) -> c64 {
    let big = fit.from;
    let (nodes, weights) = gauss_legendre(48);
    nodes
        .iter()
        .zip(&weights)
        .map(|(&x, &w)| {
            let s = 0.5 * (x + 1.0);
            let denom = c64::new(big, 0.0) - z * (s * s);
            (fit.a + fit.b * s / big.sqrt()) * 2.0 * s * big / (denom * denom) * (0.5 * w)
        })
        .sum()
}

/// `∫_a^b ξ(λ)(λ - z)^{-2} dλ` for `ξ` linear between the endpoint values.
fn linear_cell(a: f64, b: f64, xa: f64, xb: f64, z: c64) -> c64 {
    if xa == 0.0 && xb == 0.0 {
        return c64::new(0.0, 0.0);
    }
    let s = (xb - xa) / (b - a);
    let cst = xa + s * (z - a);
    let (ua, ub) = (a - z, b - z);
    -cst * (ub.inv() - ua.inv()) + s * (ub / ua).ln()
}

fn constant_cell(a: f64, b: f64, x: f64, z: c64) -> c64 {
    -x * ((b - z).inv() - (a - z).inv())
}

/// `∫ ξ(λ)(λ - z)^{-2} dλ` over the curve plus the fitted tail. Points within
/// an exclusion window are skipped; cells containing a jump are integrated
/// as constants on either side of it.
fn integrate_curve(curve: &SsfCurve, fit: &TailFit, z: c64) -> c64 {
    let pts: Vec<&SsfPoint> = curve.points.iter().filter(|p| p.status != PointStatus::Excluded).collect();
    let mut total = c64::new(0.0, 0.0);
    for w in pts.windows(2) {
        let (p, q) = (w[0], w[1]);
        match curve.jumps.iter().find(|j| j.lambda > p.lambda && j.lambda < q.lambda) {
            Some(j) => {
                total += constant_cell(p.lambda, j.lambda, p.xi, z) + constant_cell(j.lambda, q.lambda, q.xi, z);
            }
            None => total += linear_cell(p.lambda, q.lambda, p.xi, q.xi, z),
        }
    }
    total + tail_integral(fit, z)
}

/// Compares `tr(R_{H_{δ,α}} - R_H)` from the Weyl functions with
/// `-∫ ξ(λ)(λ - z)^{-2} dλ` from the curve.
pub fn validate_trace_formula(
    curve: &SsfCurve,
    z_list: &[c64],
    setup: &SsfSetup,
    options: &ValidateOptions,
) -> Result<TraceReport> {
    curve.check()?;
    if curve.provenance != setup.provenance() {
        return Err(SsfError::InvalidInput("curve was produced by a different setup".into()));
    }
    let trivial = setup.weyl.is_trivial();
    let first = curve
        .points
        .first()
        .ok_or_else(|| SsfError::InvalidInput("cannot validate against an empty curve".into()))?;
    if !trivial && !(first.lambda < 0.0 && first.xi.round() == 0.0) {
        // nothing is known about ξ below the first point unless it already vanishes there
        return Err(SsfError::Coverage { bound: first.xi.abs().max(1.0), tol: options.coverage_tol });
    }
    let bottom = curve.jumps.iter().map(|j| j.lambda).fold(0.0, f64::min);
    let fit = if trivial {
        TailFit { a: 0.0, b: 0.0, from: curve.points.last().unwrap().lambda.max(1.0), max_residual: 0.0 }
    } else {
        fit_tail(&curve.points)?
    };
    let last = *curve.points.iter().rfind(|p| p.lambda == fit.from).unwrap_or(first);
    let mut checks = Vec::with_capacity(z_list.len());
    for &z in z_list {
        if z.im == 0.0 && z.re >= bottom {
            return Err(SsfError::Domain(format!("real z = {} is not below the spectrum (bottom {bottom})", z.re)));
        }
        if z.im == 0.0 && curve.points.windows(2).any(|w| w[0].lambda <= z.re && z.re <= w[1].lambda && (w[0].xi != 0.0 || w[1].xi != 0.0)) {
            return Err(SsfError::Domain(format!("real z = {} lies inside a cell where the curve is nonzero", z.re)));
        }
        let energy = ComplexEnergy::new(z)?;
        let lhs = if trivial {
            c64::new(0.0, 0.0)
        } else {
            let e = assemble_single_layer(&setup.grid, energy)?;
            let e_dz = assemble_single_layer_dz(&setup.grid, energy)?;
            resolvent_trace(&e, &e_dz, &setup.weyl)?
        };
        let rhs = -integrate_curve(curve, &fit, z);
        let constant_tail = last.xi / (fit.from - z);
        let tail_bound = if trivial {
            0.0
        } else {
            (tail_integral(&fit, z) - constant_tail).norm() + fit.max_residual / (fit.from - z).norm()
        };
        if tail_bound > options.coverage_tol * rhs.norm().max(lhs.norm()) {
            return Err(SsfError::Coverage { bound: tail_bound, tol: options.coverage_tol });
        }
        let abs_err = (lhs - rhs).norm();
        let rel_err = if lhs.norm() > 0.0 { abs_err / lhs.norm() } else { abs_err };
        checks.push(TraceCheck {
            z: [z.re, z.im],
            lhs: [lhs.re, lhs.im],
            rhs: [rhs.re, rhs.im],
            abs_err,
            rel_err,
            tail_bound,
            passed: rel_err < options.tolerance,
        });
    }
    Ok(TraceReport { checks, tolerance: options.tolerance, tail_fit: fit })
}
