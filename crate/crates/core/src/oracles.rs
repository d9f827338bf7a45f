//! Mode-space references on the circle and the sphere.
//!
//! Rotation invariance diagonalizes the single-layer operator: on the circle
//! of radius `R` the Fourier mode `e^{imt}` has eigenvalue
//! `e_m(z) = (iπR/2) J_m(wR) H_m(wR)` (multiplicity 2 for `m ≥ 1`), on the
//! sphere of radius `a` the degree-ℓ harmonics have
//! `e_ℓ(z) = i w a² j_ℓ(wa) h_ℓ(wa)` (multiplicity `2ℓ + 1`). Every scalar
//! Weyl function then follows mode by mode.

use std::f64::consts::PI;

use faer::c64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SsfError};
use crate::oplog::arg_branch;
use crate::specfun::{
    bessel_jy_seq, derivative_from_seq, hankel1_seq, mod_bessel_ik_seq, spherical_jh_seq, ComplexEnergy,
};
use crate::ssf::{EpsSchedule, Jump, PointStatus, Provenance, SsfCurve, SsfPoint};
use crate::weyl::WeylMode;

const I: c64 = c64 { re: 0.0, im: 1.0 };

/// Mode sums are refused when the estimated truncation error exceeds this.
pub const TAIL_TOL: f64 = 1e-4;

/// Bisection tolerance on `κ` for bound states.
pub const ROOT_TOL: f64 = 1e-12;

/// The DtN maps refuse `|J_m(x)| < POLE_TOL · |x J_m'(x)| / (m + 1)`.
pub const POLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OracleGeometry {
    Circle { radius: f64 },
    Sphere { radius: f64 },
}

impl OracleGeometry {
    pub fn radius(&self) -> f64 {
        match *self {
            Self::Circle { radius } | Self::Sphere { radius } => radius,
        }
    }

    pub fn multiplicity(&self, m: usize) -> usize {
        match self {
            Self::Circle { .. } => {
                if m == 0 {
                    1
                } else {
                    2
                }
            }
            Self::Sphere { .. } => 2 * m + 1,
        }
    }

    fn check(&self) -> Result<()> {
        let r = self.radius();
        if r > 0.0 && r.is_finite() {
            Ok(())
        } else {
            Err(SsfError::InvalidInput(format!("oracle radius must be positive, got {r}")))
        }
    }

    /// `e_m(z)` for `m = 0..=m_max`.
    pub fn single_layer_modes(&self, m_max: usize, z: ComplexEnergy) -> Result<Vec<c64>> {
        self.check()?;
        match *self {
            Self::Circle { radius } => circle_modes(m_max, z, radius),
            Self::Sphere { radius } => {
                let x = z.w() * radius;
                let (j, h) = spherical_jh_seq(m_max, x)?;
                Ok(j.iter().zip(&h).map(|(j, h)| I * z.w() * radius * radius * j * h).collect())
            }
        }
    }

    /// `d e_m / dz` for `m = 0..=m_max`.
    pub fn single_layer_modes_dz(&self, m_max: usize, z: ComplexEnergy) -> Result<Vec<c64>> {
        self.check()?;
        let w = z.w();
        match *self {
            Self::Circle { radius } => {
                let x = w * radius;
                let (j, _) = bessel_jy_seq(m_max + 1, x)?;
                let h = hankel1_seq(m_max + 1, x)?;
                Ok((0..=m_max)
                    .map(|m| {
                        let jp = derivative_from_seq(&j, m, x);
                        let hp = derivative_from_seq(&h, m, x);
                        // d/dw of (iπR/2) J(wR) H(wR), times dw/dz = 1/(2w)
                        (I * PI * radius / 2.0) * radius * (jp * h[m] + j[m] * hp) / (2.0 * w)
                    })
                    .collect())
            }
            Self::Sphere { radius } => {
                let x = w * radius;
                let (j, h) = spherical_jh_seq(m_max + 1, x)?;
                Ok((0..=m_max)
                    .map(|l| {
                        let jp = spherical_derivative(&j, l, x);
                        let hp = spherical_derivative(&h, l, x);
                        let a2 = radius * radius;
                        let de_dw = I * a2 * (j[l] * h[l] + w * radius * (jp * h[l] + j[l] * hp));
                        de_dw / (2.0 * w)
                    })
                    .collect())
            }
        }
    }
}

fn spherical_derivative(f: &[c64], l: usize, x: c64) -> c64 {
    if l == 0 {
        -f[1]
    } else {
        f[l - 1] - f[l] * ((l + 1) as f64) / x
    }
}

fn circle_modes(m_max: usize, z: ComplexEnergy, radius: f64) -> Result<Vec<c64>> {
    let w = z.w();
    if w.re == 0.0 {
        // purely imaginary wavenumber: (iπR/2) J_m(iκR) H_m(iκR) = R I_m(κR) K_m(κR)
        let (i, k) = mod_bessel_ik_seq(m_max, w.im * radius)?;
        return Ok(i.iter().zip(&k).map(|(i, k)| c64::new(radius * i * k, 0.0)).collect());
    }
    let x = w * radius;
    let (j, _) = bessel_jy_seq(m_max, x)?;
    let h = hankel1_seq(m_max, x)?;
    Ok(j.iter().zip(&h).map(|(j, h)| (I * PI * radius / 2.0) * j * h).collect())
}

/// `e_m(z)` on the circle of radius `R`.
pub fn circle_mode_singlelayer(m: usize, z: ComplexEnergy, radius: f64) -> Result<c64> {
    Ok(OracleGeometry::Circle { radius }.single_layer_modes(m, z)?[m])
}

/// `e_ℓ(z)` on the sphere of radius `a`.
pub fn sphere_mode_singlelayer(l: usize, z: ComplexEnergy, radius: f64) -> Result<c64> {
    Ok(OracleGeometry::Sphere { radius }.single_layer_modes(l, z)?[l])
}

/// Interior and exterior DtN eigenvalues on the circle, each with the normal
/// pointing out of its own domain: `d_i = wJ'/J`, `d_e = -wH'/H`.
pub fn circle_dtn_modes(m: usize, z: ComplexEnergy, radius: f64) -> Result<(c64, c64)> {
    let w = z.w();
    let x = w * radius;
    let (j, _) = bessel_jy_seq(m + 1, x)?;
    let h = hankel1_seq(m + 1, x)?;
    let jp = derivative_from_seq(&j, m, x);
    check_pole(j[m], x * jp, m)?;
    let di = w * jp / j[m];
    let de = -w * derivative_from_seq(&h, m, x) / h[m];
    Ok((di, de))
}

fn check_pole(j: c64, xjp: c64, m: usize) -> Result<()> {
    if j.norm() * (m + 1) as f64 <= POLE_TOL * xjp.norm() {
        return Err(SsfError::Pole { value: j.norm() });
    }
    Ok(())
}

/// Spherical analogue of [`circle_dtn_modes`].
pub fn sphere_dtn_modes(l: usize, z: ComplexEnergy, radius: f64) -> Result<(c64, c64)> {
    let w = z.w();
    let x = w * radius;
    let (j, h) = spherical_jh_seq(l + 1, x)?;
    let jp = spherical_derivative(&j, l, x);
    check_pole(j[l], x * jp, l)?;
    Ok((w * jp / j[l], -w * spherical_derivative(&h, l, x) / h[l]))
}

/// Scalar Weyl functions of one mode.
fn mode_weyl(e: c64, alpha: f64, mode: WeylMode) -> (c64, Option<c64>) {
    match mode {
        WeylMode::AlphaNegative => (e - 1.0 / alpha, None),
        WeylMode::PairWithC { c } => {
            let p = c * e - 1.0;
            ((alpha * e - 1.0) / ((c - alpha) * p), Some(-1.0 / (c * p)))
        }
    }
}

fn check_regime(alpha: f64, mode: WeylMode) -> Result<()> {
    match mode {
        WeylMode::AlphaNegative if !(alpha < 0.0) => {
            Err(SsfError::Regime(format!("alpha_negative needs alpha < 0, got {alpha}")))
        }
        WeylMode::PairWithC { c } if !(alpha < c && c > 0.0) => {
            Err(SsfError::Regime(format!("pair_with_c needs 0 < c and alpha < c, got alpha = {alpha}, c = {c}")))
        }
        _ => Ok(()),
    }
}

/// Truncated mode sum with its tail estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeSum {
    pub value: f64,
    pub tail_bound: f64,
}

/// Energy at `λ + iε`, or the boundary value `λ + i0` when `ε = 0`.
fn energy(lambda: f64, eps: f64) -> Result<ComplexEnergy> {
    if eps < 0.0 || !eps.is_finite() {
        return Err(SsfError::InvalidInput(format!("eps must be nonnegative, got {eps}")));
    }
    if eps == 0.0 {
        ComplexEnergy::upper_rim(lambda)
    } else {
        ComplexEnergy::from_parts(lambda, eps)
    }
}

/// `(1/π) Σ_m mult_m [arg m_α,m - arg m_0,m]` (pair mode) or
/// `(1/π) Σ_m mult_m arg(e_m - 1/α)`, with `m ≤ m_max`. The tail estimate
/// assumes the per-mode terms decay at least like `1/m²`.
pub fn xi_oracle(geom: OracleGeometry, lambda: f64, eps: f64, alpha: f64, mode: WeylMode, m_max: usize) -> Result<ModeSum> {
    check_regime(alpha, mode)?;
    if alpha == 0.0 {
        return Ok(ModeSum { value: 0.0, tail_bound: 0.0 });
    }
    let e = geom.single_layer_modes(m_max, energy(lambda, eps)?)?;
    let mut total = 0.0;
    let mut last = 0.0;
    for (m, &em) in e.iter().enumerate() {
        let (ma, m0) = mode_weyl(em, alpha, mode);
        let mut t = arg_branch(ma)?;
        if let Some(m0) = m0 {
            t -= arg_branch(m0)?;
        }
        let t = t / PI;
        total += geom.multiplicity(m) as f64 * t;
        last = t;
    }
    let tail_bound = (geom.multiplicity(m_max) as f64 * last).abs() * m_max as f64;
    if tail_bound > TAIL_TOL {
        return Err(SsfError::Truncation { bound: tail_bound, tol: TAIL_TOL });
    }
    Ok(ModeSum { value: total, tail_bound })
}

pub fn circle_xi_oracle(lambda: f64, eps: f64, alpha: f64, mode: WeylMode, radius: f64, m_max: usize) -> Result<ModeSum> {
    xi_oracle(OracleGeometry::Circle { radius }, lambda, eps, alpha, mode, m_max)
}

pub fn sphere_xi_oracle(lambda: f64, eps: f64, alpha: f64, mode: WeylMode, radius: f64, l_max: usize) -> Result<ModeSum> {
    xi_oracle(OracleGeometry::Sphere { radius }, lambda, eps, alpha, mode, l_max)
}

/// Mode sum of `tr(R_{H_{δ,α}} - R_H)`: `Σ_m mult_m (-m'/m)` over the
/// relevant Weyl functions (difference of two in pair mode).
pub fn trace_oracle(geom: OracleGeometry, z: ComplexEnergy, alpha: f64, mode: WeylMode, m_max: usize) -> Result<c64> {
    check_regime(alpha, mode)?;
    let e = geom.single_layer_modes(m_max, z)?;
    let de = geom.single_layer_modes_dz(m_max, z)?;
    let mut total = c64::new(0.0, 0.0);
    for m in 0..=m_max {
        total += geom.multiplicity(m) as f64 * mode_trace_term(e[m], de[m], alpha, mode);
    }
    Ok(total)
}

/// Modes summed explicitly by [`trace_tail_circle`].
pub const TAIL_MODES: usize = 200_000;

/// Contribution of the circle modes `m > m_max` to [`trace_oracle`] from the
/// large-order form `e_m ≈ R / (2√(m² - zR²))`, whose relative error is
/// `O(|z|R²/m⁴)`.
pub fn trace_tail_circle(radius: f64, z: ComplexEnergy, alpha: f64, mode: WeylMode, m_max: usize) -> Result<c64> {
    check_regime(alpha, mode)?;
    let zr2 = z.z() * (radius * radius);
    let mut total = c64::new(0.0, 0.0);
    // smallest terms first
    for m in (m_max + 1..=TAIL_MODES).rev() {
        let root = (c64::new((m * m) as f64, 0.0) - zr2).sqrt();
        let e = radius / (2.0 * root);
        let de = radius * radius * radius / (4.0 * root * root * root);
        total += 2.0 * mode_trace_term(e, de, alpha, mode);
    }
    Ok(total)
}

fn mode_trace_term(e: c64, de: c64, alpha: f64, mode: WeylMode) -> c64 {
    match mode {
        WeylMode::AlphaNegative => -de / (e - 1.0 / alpha),
        WeylMode::PairWithC { c } => {
            let (ma, m0) = mode_weyl(e, alpha, mode);
            let m0 = m0.expect("pair mode has a comparison function");
            let p = c * e - 1.0;
            let dm = de / (p * p);
            -dm / ma + dm / m0
        }
    }
}

/// A discrete eigenvalue of `H_{δ,α}` below zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundState {
    pub mode: usize,
    pub kappa: f64,
    pub lambda: f64,
    pub multiplicity: usize,
}

/// `e_m(0^-)`: the supremum of `e_m(-κ²)` over `κ > 0`.
fn threshold_value(geom: OracleGeometry, m: usize) -> f64 {
    match geom {
        OracleGeometry::Circle { radius } => {
            if m == 0 {
                f64::INFINITY
            } else {
                radius / (2.0 * m as f64)
            }
        }
        OracleGeometry::Sphere { radius } => radius / (2 * m + 1) as f64,
    }
}

fn mode_at_kappa(geom: OracleGeometry, m: usize, kappa: f64) -> Result<f64> {
    let z = ComplexEnergy::upper_rim(-kappa * kappa)?;
    Ok(geom.single_layer_modes(m, z)?[m].re)
}

/// Bound states of constant `α > 0`: per mode the root of `α e_m(-κ²) = 1`,
/// bracketed in `(1e-8, α]` since `e_m(-κ²) ≤ 1/(2κ)`.
pub fn bound_states(geom: OracleGeometry, alpha: f64, m_max: usize) -> Result<Vec<BoundState>> {
    geom.check()?;
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(SsfError::InvalidInput(format!("bound states need alpha > 0, got {alpha}")));
    }
    let mut out = Vec::new();
    for m in 0..=m_max {
        if alpha * threshold_value(geom, m) <= 1.0 {
            continue;
        }
        let f = |k: f64| -> Result<f64> { Ok(alpha * mode_at_kappa(geom, m, k)? - 1.0) };
        let (mut lo, mut hi) = (1e-8, alpha.max(1e-8));
        if f(lo)? <= 0.0 || f(hi)? >= 0.0 {
            continue;
        }
        while hi - lo > ROOT_TOL {
            let mid = 0.5 * (lo + hi);
            if f(mid)? > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let kappa = 0.5 * (lo + hi);
        out.push(BoundState { mode: m, kappa, lambda: -kappa * kappa, multiplicity: geom.multiplicity(m) });
    }
    Ok(out)
}

/// `ξ` on the real axis straight from the mode sums, for geometries without a
/// boundary discretization. Jumps sit at the bound states (pair mode only);
/// points within `exclusion_radius` of zero or a jump are marked `Excluded`
/// and evaluated slightly above the axis.
pub fn oracle_sweep(
    geom: OracleGeometry,
    alpha: f64,
    mode: WeylMode,
    lambdas: &[f64],
    m_max: usize,
    exclusion_radius: f64,
) -> Result<SsfCurve> {
    geom.check()?;
    check_regime(alpha, mode)?;
    if lambdas.windows(2).any(|w| !(w[0] < w[1])) || lambdas.iter().any(|l| !l.is_finite()) {
        return Err(SsfError::InvalidInput("lambda grid must be finite and strictly increasing".into()));
    }
    let jumps = match mode {
        WeylMode::PairWithC { .. } if alpha > 0.0 => bound_states(geom, alpha, m_max)?
            .into_iter()
            .map(|b| Jump { lambda: b.lambda, size: -(b.multiplicity as i64) })
            .collect(),
        _ => Vec::new(),
    };
    let mut jumps: Vec<Jump> = jumps;
    jumps.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    let points = lambdas
        .iter()
        .map(|&lambda| {
            let near = std::iter::once(0.0).chain(jumps.iter().map(|j| j.lambda)).any(|p| (lambda - p).abs() < exclusion_radius);
            let eps = if near { 0.25 * exclusion_radius } else { 0.0 };
            let sum = xi_oracle(geom, lambda, eps, alpha, mode, m_max)?;
            let status = if near { PointStatus::Excluded } else { PointStatus::Converged };
            Ok(SsfPoint { lambda, xi: sum.value, err: sum.tail_bound, status })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SsfCurve {
        points,
        schedule: EpsSchedule::default(),
        provenance: Provenance::ModeOracle { geometry: geom, m_max, mode, alpha },
        jumps,
    })
}

/// `N_A(λ) - N_B(λ)`, counting eigenvalues `≤ λ`.
pub fn counting_xi(eigs_a: &[f64], eigs_b: &[f64], lambda: f64) -> i64 {
    let count = |v: &[f64]| v.iter().filter(|&&e| e <= lambda).count() as i64;
    count(eigs_a) - count(eigs_b)
}
