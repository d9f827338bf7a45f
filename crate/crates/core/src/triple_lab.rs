//! Finite-dimensional Krein model: `B = A + G X G*` with `γ(z) = (A - z)^{-1} G`
//! and `M(z) = X^{-1} + G*(A - z)^{-1} G`. It carries the γ-field, Weyl
//! function and resolvent formula exactly, so the abstract `ξ` formula and
//! trace identity can be checked against eigenvalue counting.

use std::f64::consts::PI;

use faer::{c64, Mat, MatRef, Scale};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SsfError};
use crate::linalg::{haar_unitary, hermitian_eigenvalues, inverse_checked, op_norm, orthonormalize_columns, trace_of_product};
use crate::oplog::{im_trace_log, LogRoute};
use crate::oracles::counting_xi;
use crate::ssf::{richardson, EpsSchedule, PointStatus, Provenance, SsfCurve, SsfPoint, EPS_DISTANCE_FRACTION};

/// Relative tolerance for the Hermitian checks on `A` and `X`.
const HERMITIAN_TOL: f64 = 1e-12;
/// Column-rank threshold on `σ_min(G)/σ_max(G)`.
const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct KreinModel {
    a: Mat<c64>,
    g: Mat<c64>,
    x: Mat<c64>,
    x_inv: Mat<c64>,
    b: Mat<c64>,
}

fn hermitian_defect(a: MatRef<'_, c64>) -> f64 {
    let mut d: f64 = 0.0;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            d = d.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    d
}

fn shift(a: MatRef<'_, c64>, z: c64) -> Mat<c64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| if i == j { a[(i, j)] - z } else { a[(i, j)] })
}

impl KreinModel {
    pub fn new(a: Mat<c64>, g: Mat<c64>, x: Mat<c64>) -> Result<Self> {
        let (n, m) = (a.nrows(), g.ncols());
        if a.ncols() != n || g.nrows() != n || x.nrows() != m || x.ncols() != m || m == 0 || m > n {
            return Err(SsfError::InvalidInput(format!(
                "shapes do not fit: A {}x{}, G {}x{}, X {}x{}",
                a.nrows(),
                a.ncols(),
                g.nrows(),
                g.ncols(),
                x.nrows(),
                x.ncols()
            )));
        }
        for (name, mat) in [("A", &a), ("X", &x)] {
            if hermitian_defect(mat.as_ref()) > HERMITIAN_TOL * op_norm(mat.as_ref()).max(1.0) {
                return Err(SsfError::InvalidInput(format!("{name} is not Hermitian")));
            }
        }
        let s = g.singular_values().map_err(|e| SsfError::Eigen(format!("{e:?}")))?;
        let (lo, hi) = s.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &v| (l.min(v), h.max(v)));
        if !(lo > RANK_TOL * hi) {
            return Err(SsfError::InvalidInput("G must have full column rank".into()));
        }
        let x_inv = inverse_checked(x.as_ref())?;
        let gxg = &g * &x * g.adjoint();
        let b = Mat::from_fn(n, n, |i, j| {
            let v = a[(i, j)] + gxg[(i, j)];
            let w = a[(j, i)] + gxg[(j, i)];
            0.5 * (v + w.conj())
        });
        Ok(Self { a, g, x, x_inv, b })
    }

    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    pub fn m(&self) -> usize {
        self.g.ncols()
    }

    pub fn a(&self) -> MatRef<'_, c64> {
        self.a.as_ref()
    }

    pub fn b(&self) -> MatRef<'_, c64> {
        self.b.as_ref()
    }

    pub fn g(&self) -> MatRef<'_, c64> {
        self.g.as_ref()
    }

    pub fn x(&self) -> MatRef<'_, c64> {
        self.x.as_ref()
    }

    pub fn spectrum_a(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(self.a.as_ref())
    }

    pub fn spectrum_b(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(self.b.as_ref())
    }

    fn resolvent_a(&self, z: c64) -> Result<Mat<c64>> {
        inverse_checked(shift(self.a.as_ref(), z).as_ref()).map_err(|_| pole(z))
    }

    fn resolvent_b(&self, z: c64) -> Result<Mat<c64>> {
        inverse_checked(shift(self.b.as_ref(), z).as_ref()).map_err(|_| pole(z))
    }
}

fn pole(z: c64) -> SsfError {
    SsfError::Pole { value: z.norm() }
}

/// `(A - z)^{-1} G`.
pub fn gamma_field(model: &KreinModel, z: c64) -> Result<Mat<c64>> {
    Ok(model.resolvent_a(z)? * &model.g)
}

/// `d^k γ/dz^k = k! (A - z)^{-k} γ(z)`.
pub fn gamma_field_derivative(model: &KreinModel, z: c64, k: usize) -> Result<Mat<c64>> {
    let r = model.resolvent_a(z)?;
    let mut out = &r * &model.g;
    let mut fact = 1.0;
    for j in 1..=k {
        out = &r * &out;
        fact *= j as f64;
    }
    Ok(Scale(c64::new(fact, 0.0)) * &out)
}

/// `X^{-1} + G*(A - z)^{-1} G`.
pub fn weyl_m(model: &KreinModel, z: c64) -> Result<Mat<c64>> {
    Ok(&model.x_inv + model.g.adjoint() * gamma_field(model, z)?)
}

/// `M^{(k)}(z) = k! γ(z̄)* (A - z)^{-(k-1)} γ(z)` for `k ≥ 1`.
pub fn weyl_m_derivative(model: &KreinModel, z: c64, k: usize) -> Result<Mat<c64>> {
    if k == 0 {
        return weyl_m(model, z);
    }
    let gamma = gamma_field(model, z)?;
    let gamma_bar_star = gamma_field(model, z.conj())?.adjoint().to_owned();
    let r = model.resolvent_a(z)?;
    let mut inner = gamma;
    let mut fact = 1.0;
    for j in 1..k {
        inner = &r * &inner;
        fact *= (j + 1) as f64;
    }
    Ok(Scale(c64::new(fact, 0.0)) * (gamma_bar_star * inner))
}

/// `‖(B - z)^{-1} - (A - z)^{-1} + γ(z) M(z)^{-1} γ(z̄)*‖ / (‖(A - z)^{-1}‖ + ‖(B - z)^{-1}‖)`.
pub fn krein_check(model: &KreinModel, z: c64) -> Result<f64> {
    let ra = model.resolvent_a(z)?;
    let rb = model.resolvent_b(z)?;
    let m_inv = inverse_checked(weyl_m(model, z)?.as_ref())?;
    let gamma = gamma_field(model, z)?;
    let gamma_bar_star = gamma_field(model, z.conj())?.adjoint().to_owned();
    let residual = &rb - &ra + gamma * m_inv * gamma_bar_star;
    Ok(op_norm(residual.as_ref()) / (op_norm(ra.as_ref()) + op_norm(rb.as_ref())))
}

/// `tr((B - z)^{-1} - (A - z)^{-1})` computed directly.
pub fn resolvent_trace_direct(model: &KreinModel, z: c64) -> Result<c64> {
    let d = model.resolvent_b(z)? - model.resolvent_a(z)?;
    Ok((0..d.nrows()).map(|i| d[(i, i)]).sum())
}

/// `-tr(M(z)^{-1} M'(z))`.
pub fn resolvent_trace_weyl(model: &KreinModel, z: c64) -> Result<c64> {
    let m_inv = inverse_checked(weyl_m(model, z)?.as_ref())?;
    Ok(-trace_of_product(m_inv.as_ref(), weyl_m_derivative(model, z, 1)?.as_ref()))
}

/// `(1/π) Im tr log M(λ + iε)`.
pub fn model_xi_at(model: &KreinModel, lambda: f64, eps: f64, route: LogRoute) -> Result<f64> {
    Ok(im_trace_log(weyl_m(model, c64::new(lambda, eps))?.as_ref(), route)? / PI)
}

/// `ξ` by degree-2 extrapolation in `ε`; at each `λ` the first `ε` is capped
/// at a quarter of the distance to the nearest eigenvalue of `A` or `B`.
/// Points with extrapolation error above `1e-3` are flagged.
pub fn model_xi(model: &KreinModel, lambdas: &[f64], schedule: &EpsSchedule) -> Result<SsfCurve> {
    model_xi_with(model, lambdas, schedule, LogRoute::default())
}

/// Extrapolation error above which a model point is flagged.
pub const MODEL_XI_CEILING: f64 = 1e-3;

pub fn model_xi_with(model: &KreinModel, lambdas: &[f64], schedule: &EpsSchedule, route: LogRoute) -> Result<SsfCurve> {
    schedule.validate()?;
    if lambdas.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(SsfError::InvalidInput("lambda grid must be strictly increasing".into()));
    }
    let mut poles = model.spectrum_a()?;
    poles.extend(model.spectrum_b()?);
    let mut points = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let dist = poles.iter().map(|p| (p - lambda).abs()).fold(f64::INFINITY, f64::min);
        if dist == 0.0 {
            return Err(SsfError::Excluded { lambda, point: lambda, radius: 0.0 });
        }
        let eps = schedule.capped(EPS_DISTANCE_FRACTION * dist).values();
        let values = eps.iter().map(|&e| model_xi_at(model, lambda, e, route)).collect::<Result<Vec<_>>>()?;
        let (xi, err) = richardson(&eps, &values)?;
        let status = if err <= MODEL_XI_CEILING { PointStatus::Converged } else { PointStatus::NotConverged };
        points.push(SsfPoint { lambda, xi, err, status });
    }
    Ok(SsfCurve {
        points,
        schedule: *schedule,
        provenance: Provenance::KreinModel { n: model.n(), m: model.m() },
        jumps: Vec::new(),
    })
}

/// Sorted union of the two spectra, merging values closer than `tol`.
fn merged_spectrum(a: &[f64], b: &[f64], tol: f64) -> Vec<f64> {
    let mut all: Vec<f64> = a.iter().chain(b).copied().collect();
    all.sort_by(|x, y| x.total_cmp(y));
    all.dedup_by(|x, y| (*x - *y).abs() < tol);
    all
}

/// `|tr(R_B - R_A) + ∫ ξ(λ)(λ - z)^{-2} dλ|` with `ξ` constant between
/// consecutive eigenvalues (value `xi[k]` on the `k`-th gap) and zero outside.
pub fn trace_residual(model: &KreinModel, breaks: &[f64], xi: &[f64], z: c64) -> Result<f64> {
    if xi.len() + 1 != breaks.len() {
        return Err(SsfError::InvalidInput("need one ξ value per gap".into()));
    }
    let lhs = resolvent_trace_direct(model, z)?;
    let integral: c64 = breaks.windows(2).zip(xi).map(|(w, &x)| x * ((w[0] - z).inv() - (w[1] - z).inv())).sum();
    Ok((lhs + integral).norm())
}

/// Residual thresholds for the fuzz suite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FuzzThresholds {
    pub krein: f64,
    pub derivative: f64,
    pub trace: f64,
    pub xi_extrapolation: f64,
}

impl Default for FuzzThresholds {
    fn default() -> Self {
        Self { krein: 1e-10, derivative: 1e-7, trace: 1e-6, xi_extrapolation: 1e-3 }
    }
}

impl FuzzThresholds {
    pub fn uniform(value: f64) -> Self {
        Self { krein: value, derivative: value, trace: value, xi_extrapolation: value }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FuzzSizes {
    pub n_max: usize,
    pub m_max: usize,
}

impl Default for FuzzSizes {
    fn default() -> Self {
        Self { n_max: 16, m_max: 4 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub index: u64,
    pub n: usize,
    pub m: usize,
    pub krein_residual: f64,
    pub derivative_residual: f64,
    pub trace_residual: f64,
    pub xi_max_extrapolation_err: f64,
    pub midpoints: usize,
    pub xi_mismatches: usize,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub seed: u64,
    pub trials: u64,
    pub sizes: FuzzSizes,
    pub thresholds: FuzzThresholds,
    pub max_krein_residual: f64,
    pub max_derivative_residual: f64,
    pub max_trace_residual: f64,
    pub max_xi_extrapolation_err: f64,
    pub xi_mismatches: usize,
    pub failures: Vec<String>,
    pub passed: bool,
    pub trial_reports: Vec<TrialReport>,
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Mat<c64> {
    Mat::from_fn(rows, cols, |_, _| c64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal)))
}

/// `A = QΛQ*` with `Λ` uniform on `[-5, 5]` and `Q` Haar, `G` Gaussian with
/// orthonormalized columns, `X = Y*Y + 1e-3 I`.
pub fn random_model<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> Result<KreinModel> {
    let q = haar_unitary(rng, n);
    let lambda: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
    let ql = Mat::from_fn(n, n, |i, j| q[(i, j)] * lambda[j]);
    let a_raw = &ql * q.adjoint();
    let a = Mat::from_fn(n, n, |i, j| 0.5 * (a_raw[(i, j)] + a_raw[(j, i)].conj()));
    let mut g = complex_gaussian(rng, n, m);
    orthonormalize_columns(&mut g);
    let y = complex_gaussian(rng, m, m);
    let yy = y.adjoint() * &y;
    let x = Mat::from_fn(m, m, |i, j| {
        let v = 0.5 * (yy[(i, j)] + yy[(j, i)].conj());
        if i == j {
            v + 1e-3
        } else {
            v
        }
    });
    KreinModel::new(a, g, x)
}

fn rel(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> f64 {
    op_norm((a - b).as_ref()) / op_norm(b).max(f64::MIN_POSITIVE)
}

/// Largest relative defect over the conjugation identity and the `k = 1, 2`
/// derivative laws for `γ` and `M`, against fourth-order finite differences.
pub fn derivative_residual(model: &KreinModel, z: c64) -> Result<f64> {
    let gstar = gamma_field(model, z.conj())?.adjoint().to_owned();
    let direct = model.g.adjoint() * model.resolvent_a(z)?;
    let mut worst = rel(gstar.as_ref(), direct.as_ref());
    let fd = |f: &dyn Fn(c64) -> Result<Mat<c64>>, k: usize, h: f64| -> Result<Mat<c64>> {
        let at = |t: f64| f(z + c64::new(t, 0.0));
        let (p2, p1, m1, m2) = (at(2.0 * h)?, at(h)?, at(-h)?, at(-2.0 * h)?);
        Ok(match k {
            1 => Scale(c64::new(1.0 / (12.0 * h), 0.0)) * (&m2 - &p2 + Scale(c64::new(8.0, 0.0)) * (&p1 - &m1)),
            _ => {
                let f0 = f(z)?;
                Scale(c64::new(1.0 / (12.0 * h * h), 0.0))
                    * (Scale(c64::new(16.0, 0.0)) * (&p1 + &m1) - &p2 - &m2 - Scale(c64::new(30.0, 0.0)) * &f0)
            }
        })
    };
    let gamma = |w: c64| gamma_field(model, w);
    // the constant X^{-1} is left out of the differenced values; it only adds roundoff
    let weyl = |w: c64| -> Result<Mat<c64>> { Ok(model.g.adjoint() * gamma_field(model, w)?) };
    // the spectrum is real, so |Im z| bounds the distance to the nearest singularity
    let h = 3e-3 * z.im.abs();
    for k in [1usize, 2] {
        worst = worst.max(rel(fd(&gamma, k, h)?.as_ref(), gamma_field_derivative(model, z, k)?.as_ref()));
        worst = worst.max(rel(fd(&weyl, k, h)?.as_ref(), weyl_m_derivative(model, z, k)?.as_ref()));
    }
    Ok(worst)
}

fn run_trial(seed: u64, index: u64, sizes: FuzzSizes, thresholds: &FuzzThresholds) -> Result<TrialReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let n = rng.random_range(2..=sizes.n_max.max(2));
    let m = rng.random_range(1..=sizes.m_max.clamp(1, n));
    let model = random_model(&mut rng, n, m)?;
    let spec_a = model.spectrum_a()?;
    let spec_b = model.spectrum_b()?;
    let bottom = spec_a[0].min(spec_b[0]);
    let z_list = [
        c64::new(rng.random_range(-5.0..5.0), rng.random_range(0.5..2.0)),
        c64::new(rng.random_range(-5.0..5.0), -rng.random_range(0.5..2.0)),
        c64::new(bottom - 1.0, 0.0),
    ];
    let mut krein: f64 = 0.0;
    let mut deriv: f64 = 0.0;
    for &z in &z_list {
        krein = krein.max(krein_check(&model, z)?);
    }
    for &z in &z_list[..2] {
        deriv = deriv.max(derivative_residual(&model, z)?);
    }

    let breaks = merged_spectrum(&spec_a, &spec_b, 1e-9);
    let mids: Vec<f64> = breaks.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    let curve = model_xi(&model, &mids, &EpsSchedule::default())?;
    let mut mismatches = 0;
    let mut xi_err: f64 = 0.0;
    let mut exact = Vec::with_capacity(mids.len());
    for p in &curve.points {
        let count = counting_xi(&spec_a, &spec_b, p.lambda);
        xi_err = xi_err.max(p.err);
        if p.xi.round() as i64 != count || (p.xi - count as f64).abs() > thresholds.xi_extrapolation {
            mismatches += 1;
        }
        exact.push(p.xi.round());
    }
    let mut trace: f64 = 0.0;
    for &z in &z_list {
        let scale = resolvent_trace_direct(&model, z)?.norm().max(1.0);
        trace = trace.max(trace_residual(&model, &breaks, &exact, z)? / scale);
    }

    let mut failures = Vec::new();
    let mut flag = |name: &str, value: f64, limit: f64| {
        if !(value < limit) {
            failures.push(format!("trial {index}: {name} {value:.3e} exceeds {limit:.1e}"));
        }
    };
    flag("krein residual", krein, thresholds.krein);
    flag("derivative residual", deriv, thresholds.derivative);
    flag("trace residual", trace, thresholds.trace);
    flag("xi extrapolation error", xi_err, thresholds.xi_extrapolation);
    if mismatches > 0 {
        failures.push(format!("trial {index}: {mismatches} midpoints where ξ differs from eigenvalue counting"));
    }
    Ok(TrialReport {
        index,
        n,
        m,
        krein_residual: krein,
        derivative_residual: deriv,
        trace_residual: trace,
        xi_max_extrapolation_err: xi_err,
        midpoints: mids.len(),
        xi_mismatches: mismatches,
        failures,
    })
}

/// Random models checked against every identity; trial `i` draws from ChaCha8
/// stream `i` of `seed`, so the report is independent of scheduling.
pub fn fuzz(seed: u64, trials: u64, sizes: FuzzSizes, thresholds: FuzzThresholds) -> FuzzReport {
    let reports: Vec<TrialReport> = (0..trials)
        .into_par_iter()
        .map(|i| {
            run_trial(seed, i, sizes, &thresholds).unwrap_or_else(|e| TrialReport {
                index: i,
                n: 0,
                m: 0,
                krein_residual: f64::NAN,
                derivative_residual: f64::NAN,
                trace_residual: f64::NAN,
                xi_max_extrapolation_err: f64::NAN,
                midpoints: 0,
                xi_mismatches: 0,
                failures: vec![format!("trial {i}: {e}")],
            })
        })
        .collect();
    let max = |f: fn(&TrialReport) -> f64| reports.iter().map(f).fold(0.0, f64::max);
    let failures: Vec<String> = reports.iter().flat_map(|r| r.failures.iter().cloned()).collect();
    FuzzReport {
        seed,
        trials,
        sizes,
        thresholds,
        max_krein_residual: max(|r| r.krein_residual),
        max_derivative_residual: max(|r| r.derivative_residual),
        max_trace_residual: max(|r| r.trace_residual),
        max_xi_extrapolation_err: max(|r| r.xi_max_extrapolation_err),
        xi_mismatches: reports.iter().map(|r| r.xi_mismatches).sum(),
        passed: failures.is_empty(),
        failures,
        trial_reports: reports,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(v: f64) -> Mat<c64> {
        Mat::from_fn(1, 1, |_, _| c64::new(v, 0.0))
    }

    fn one_by_one(x: f64) -> KreinModel {
        KreinModel::new(scalar(0.0), scalar(1.0), scalar(x)).unwrap()
    }

    #[test]
    fn scalar_weyl_function() {
        let model = one_by_one(1.0);
        for z in [c64::new(0.3, 0.7), c64::new(-2.0, 0.0), c64::new(4.0, -1.0)] {
            let m = weyl_m(&model, z).unwrap()[(0, 0)];
            assert!((m - (1.0 - z.inv())).norm() < 1e-15);
            let mb = weyl_m(&model, z.conj()).unwrap()[(0, 0)];
            assert!((mb - m.conj()).norm() < 1e-15);
        }
    }

    #[test]
    fn gamma_field_identity_coupling() {
        let a = Mat::<c64>::zeros(3, 3);
        let g = Mat::<c64>::identity(3, 3);
        let model = KreinModel::new(a, g, Mat::identity(3, 3)).unwrap();
        let z = c64::new(0.5, 2.0);
        let gam = gamma_field(&model, z).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { -z.inv() } else { c64::new(0.0, 0.0) };
                assert!((gam[(i, j)] - expect).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn krein_scalar_closed_form() {
        for v in [0.5, 3.0, 1e4] {
            let model = one_by_one(v);
            let z = c64::new(0.2, 0.9);
            let rb = (v - z).inv();
            let ra = -z.inv();
            let expect = rb - ra;
            assert!((resolvent_trace_direct(&model, z).unwrap() - expect).norm() < 1e-14 * expect.norm().max(1.0));
            assert!(krein_check(&model, z).unwrap() < 1e-12);
        }
        let model = one_by_one(2.0);
        assert!(krein_check(&model, c64::new(1e3, 1e3)).unwrap() < 1e-12);
    }

    #[test]
    fn rejects_bad_data() {
        assert!(KreinModel::new(scalar(0.0), scalar(1.0), scalar(0.0)).is_err());
        let mut a = Mat::<c64>::zeros(2, 2);
        a[(0, 1)] = c64::new(1.0, 0.0);
        assert!(KreinModel::new(a, Mat::identity(2, 1), scalar(1.0)).is_err());
        assert!(KreinModel::new(Mat::zeros(2, 2), Mat::zeros(2, 1), scalar(1.0)).is_err());
        let model = one_by_one(1.0);
        assert!(gamma_field(&model, c64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn scalar_xi_calibration() {
        let model = one_by_one(1.0);
        let curve = model_xi(&model, &[-0.5, 0.25, 0.5, 0.75, 1.5], &EpsSchedule::default()).unwrap();
        let expect = [0.0, 1.0, 1.0, 1.0, 0.0];
        for (p, e) in curve.points.iter().zip(expect) {
            assert!((p.xi - e).abs() < 1e-6, "{p:?}");
            assert!(p.converged());
        }
    }

    #[test]
    fn xi_vanishes_as_coupling_shrinks() {
        let model = one_by_one(1e-6);
        let curve = model_xi(&model, &[-0.5, 0.5], &EpsSchedule::default()).unwrap();
        assert!(curve.points.iter().all(|p| p.xi.abs() < 1e-6));
    }

    #[test]
    fn rank_one_update_matches_counting() {
        let a = Mat::from_fn(2, 2, |i, j| if i == j { c64::new((i + 1) as f64, 0.0) } else { c64::new(0.0, 0.0) });
        let g = Mat::identity(2, 1);
        let model = KreinModel::new(a, g, scalar(1.0)).unwrap();
        let sa = model.spectrum_a().unwrap();
        let sb = model.spectrum_b().unwrap();
        let breaks = merged_spectrum(&sa, &sb, 1e-12);
        let mids: Vec<f64> = breaks.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        let curve = model_xi(&model, &mids, &EpsSchedule::default()).unwrap();
        for p in &curve.points {
            assert!((p.xi - counting_xi(&sa, &sb, p.lambda) as f64).abs() < 1e-6);
        }
        let xi: Vec<f64> = curve.points.iter().map(|p| p.xi.round()).collect();
        assert!(trace_residual(&model, &breaks, &xi, c64::new(0.5, 1.0)).unwrap() < 1e-12);
    }

    #[test]
    fn weyl_derivative_is_gram_of_gamma() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let model = random_model(&mut rng, 6, 2).unwrap();
        let z = c64::new(0.4, 0.8);
        assert!(derivative_residual(&model, z).unwrap() < 1e-7);
        let lhs = resolvent_trace_direct(&model, z).unwrap();
        let rhs = resolvent_trace_weyl(&model, z).unwrap();
        assert!((lhs - rhs).norm() < 1e-12 * lhs.norm().max(1.0));
    }

    #[test]
    fn fuzz_is_deterministic_and_empty_when_no_trials() {
        let empty = fuzz(0, 0, FuzzSizes::default(), FuzzThresholds::default());
        assert!(empty.passed && empty.trial_reports.is_empty());
        let a = serde_json::to_string(&fuzz(3, 4, FuzzSizes::default(), FuzzThresholds::default())).unwrap();
        let b = serde_json::to_string(&fuzz(3, 4, FuzzSizes::default(), FuzzThresholds::default())).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unattainable_threshold_is_reported() {
        let r = fuzz(0, 2, FuzzSizes::default(), FuzzThresholds::uniform(1e-20));
        assert!(!r.passed && !r.failures.is_empty());
    }
}
