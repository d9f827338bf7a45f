//! Logarithm of a boundedly invertible dissipative matrix.
//!
//! The defining integral `log K = -i ∫_0^∞ [(K + iλ)^{-1} - (1 + iλ)^{-1}] dλ`
//! is evaluated after the substitution `λ = e^u`. For dissipative `K` the
//! integrand is analytic in the strip `|Im u| < π/2`, so the trapezoid rule
//! converges geometrically; the step is halved (reusing nodes) until two
//! successive sums agree. The two ends of the `u` range are closed with the
//! first-order expansions `∫_0^{λ_0} ≈ -iλ_0 (K^{-1} - I)` and
//! `∫_Λ^∞ ≈ -i (K - I)/Λ`.
//!
//! For scalars the formula reproduces the logarithm whose cut is the negative
//! imaginary axis, i.e. `arg ∈ (-π/2, 3π/2]`. The spectral route uses the same
//! branch so that the two routes agree whenever both apply.

use std::f64::consts::PI;

use faer::{c64, Mat, MatRef, Scale};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SsfError};
use crate::linalg::{hermitian_eigenvalues, im_part, inverse_checked, max_abs_diff, op_norm, trace};

/// Dissipativity is accepted down to `-DISSIPATIVE_TOL · max(1, ‖K‖)`.
pub const DISSIPATIVE_TOL: f64 = 1e-10;

/// Successive trapezoid refinements must agree to this (relative to `max(1, ‖log K‖)`).
pub const QUADRATURE_TOL: f64 = 1e-10;

/// Eigenbases with a larger condition number are refused by the spectral route.
pub const MAX_EIGENBASIS_CONDITION: f64 = 1e8;

const MAX_LEVELS: usize = 10;

/// How `Im tr log K` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LogRoute {
    /// The integral definition.
    Integral,
    /// Eigendecomposition `V diag(log μ) V^{-1}`.
    Spectral,
    /// `Σ arg μ_j` over the eigenvalues only; no logarithm matrix is formed.
    #[default]
    Eigenvalues,
}

/// Scalar logarithm on the branch `arg ∈ (-π/2, 3π/2]`.
pub fn log_branch(mu: c64) -> Result<c64> {
    Ok(c64::new(mu.norm().ln(), arg_branch(mu)?))
}

/// `arg μ` in `(-π/2, 3π/2]`.
pub fn arg_branch(mu: c64) -> Result<f64> {
    if mu.re == 0.0 && mu.im <= 0.0 {
        return Err(SsfError::BranchCut(mu));
    }
    let a = mu.im.atan2(mu.re);
    Ok(if a <= -PI / 2.0 { a + 2.0 * PI } else { a })
}

/// Smallest eigenvalue of `(K - K*)/(2i)`.
pub fn dissipativity(k: MatRef<'_, c64>) -> Result<f64> {
    Ok(hermitian_eigenvalues(im_part(k).as_ref())?.first().copied().unwrap_or(0.0))
}

fn check_square(k: MatRef<'_, c64>) -> Result<()> {
    if k.nrows() != k.ncols() || k.nrows() == 0 {
        return Err(SsfError::InvalidInput(format!(
            "logarithm needs a nonempty square matrix, got {}x{}",
            k.nrows(),
            k.ncols()
        )));
    }
    Ok(())
}

fn shifted_inverse(k: MatRef<'_, c64>, lambda: f64) -> Result<Mat<c64>> {
    let mut s = k.to_owned();
    for i in 0..s.nrows() {
        s[(i, i)] += c64::new(0.0, lambda);
    }
    inverse_checked(s.as_ref())
}

/// `F(u) = -i e^u [(K + ie^u)^{-1} - (1 + ie^u)^{-1} I]`.
fn integrand(k: MatRef<'_, c64>, u: f64) -> Result<Mat<c64>> {
    let lambda = u.exp();
    let mut inv = shifted_inverse(k, lambda)?;
    let scalar = c64::new(1.0, lambda).inv();
    for i in 0..inv.nrows() {
        inv[(i, i)] -= scalar;
    }
    Ok(Scale(c64::new(0.0, -lambda)) * &inv)
}

/// Logarithm from the integral definition, for dissipative `K`.
pub fn log_dissipative_integral(k: MatRef<'_, c64>) -> Result<Mat<c64>> {
    check_square(k)?;
    let min_eig = dissipativity(k)?;
    if min_eig < -DISSIPATIVE_TOL * op_norm(k).max(1.0) {
        return Err(SsfError::NotDissipative { min_eig });
    }
    log_integral(k)
}

/// The same quadrature without the dissipativity gate. The integral still
/// converges when no eigenvalue lies on the closed negative imaginary axis,
/// but the strip of analyticity, and with it the convergence rate, is then
/// only controlled by the distance of the spectrum to that axis.
pub fn log_integral(k: MatRef<'_, c64>) -> Result<Mat<c64>> {
    check_square(k)?;
    let n = k.nrows();
    let norm = op_norm(k);
    let k_inv = inverse_checked(k)?;
    let inv_norm = op_norm(k_inv.as_ref());

    let lambda0 = 1e-8 / inv_norm.max(1e-300);
    let lambda1 = 1e8 * norm.max(1.0);
    let (u0, u1) = (lambda0.ln(), lambda1.ln());

    // tails
    let mut tails = Mat::<c64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let id = if i == j { 1.0 } else { 0.0 };
            tails[(i, j)] = c64::new(0.0, -lambda0) * (k_inv[(i, j)] - id)
                + c64::new(0.0, -1.0 / lambda1) * (k[(i, j)] - id);
        }
    }

    let mut cells = ((u1 - u0) / 2.0).ceil().max(4.0) as usize;
    let mut h = (u1 - u0) / cells as f64;
    let mut sum = Scale(c64::new(0.5, 0.0)) * (integrand(k, u0)? + integrand(k, u1)?);
    for j in 1..cells {
        sum += integrand(k, u0 + j as f64 * h)?;
    }
    let mut estimate = Scale(c64::new(h, 0.0)) * &sum;

    for _ in 0..MAX_LEVELS {
        for j in 0..cells {
            sum += integrand(k, u0 + (j as f64 + 0.5) * h)?;
        }
        cells *= 2;
        h *= 0.5;
        let refined = Scale(c64::new(h, 0.0)) * &sum;
        let change = max_abs_diff(refined.as_ref(), estimate.as_ref());
        let scale = refined.norm_max().max(1.0);
        estimate = refined;
        if change < QUADRATURE_TOL * scale {
            return Ok(estimate + tails);
        }
    }
    Err(SsfError::Quadrature(format!(
        "trapezoid refinements of the log integral did not settle after {MAX_LEVELS} halvings"
    )))
}

/// Logarithm through the eigendecomposition `K = V diag(μ) V^{-1}`.
pub fn log_via_spectrum(k: MatRef<'_, c64>) -> Result<Mat<c64>> {
    check_square(k)?;
    let eig = k.eigen().map_err(|e| SsfError::Eigen(format!("{e:?}")))?;
    let v = eig.U().to_owned();
    let mu: Vec<c64> = eig.S().column_vector().iter().copied().collect();
    let sv = v.singular_values().map_err(|e| SsfError::Eigen(format!("{e:?}")))?;
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(cond < MAX_EIGENBASIS_CONDITION) {
        return Err(SsfError::IllConditionedEigenbasis { cond });
    }
    let logs = mu.iter().map(|&m| log_branch(m)).collect::<Result<Vec<_>>>()?;
    let v_inv = inverse_checked(v.as_ref())?;
    let scaled = Mat::from_fn(v.nrows(), v.ncols(), |i, j| v[(i, j)] * logs[j]);
    Ok(&scaled * &v_inv)
}

/// `tr((L - L*)/(2i)) = Im tr L`.
pub fn im_trace(l: MatRef<'_, c64>) -> f64 {
    trace(l).im
}

/// `Im tr log K` by the chosen route.
pub fn im_trace_log(k: MatRef<'_, c64>, route: LogRoute) -> Result<f64> {
    match route {
        LogRoute::Integral => Ok(im_trace(log_dissipative_integral(k)?.as_ref())),
        LogRoute::Spectral => Ok(im_trace(log_via_spectrum(k)?.as_ref())),
        LogRoute::Eigenvalues => {
            check_square(k)?;
            let mu = crate::linalg::eigenvalues(k)?;
            mu.into_iter().map(arg_branch).sum()
        }
    }
}

/// `Q diag(μ) Q*` with `Q` Haar unitary, `Re μ ∈ [-3, 3)`, `Im μ ∈ [0.1, 3)`.
pub fn random_normal_dissipative<R: rand::Rng + ?Sized>(rng: &mut R, n: usize) -> Mat<c64> {
    let q = crate::linalg::haar_unitary(rng, n);
    let mu: Vec<c64> = (0..n)
        .map(|_| c64::new(rng.random_range(-3.0..3.0), rng.random_range(0.1..3.0)))
        .collect();
    let d = Mat::from_fn(n, n, |i, j| if i == j { mu[i] } else { c64::new(0.0, 0.0) });
    &(&q * &d) * q.adjoint()
}
