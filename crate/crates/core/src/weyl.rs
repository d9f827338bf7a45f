//! Discrete Weyl functions built from the single-layer matrix.
//!
//! With `P = cE - I`:
//! `M_0 = -c^{-1} P^{-1}`, `M_α = (c-α)^{-1}(αE - I) P^{-1}` and, for
//! `α < 0`, `M = E - α^{-1}`. All matrices are in the symmetrized convention.

use faer::{c64, Mat, MatRef, Scale};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SsfError};
use crate::layer::{BoundaryOperator, OperatorRole};
use crate::linalg::{inverse_checked, trace_of_product};

/// Which pair of operators the Weyl function describes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeylMode {
    /// `{H_{δ,c}, H}` against `{H_{δ,c}, H_{δ,α}}` with a comparison strength `c > max α`.
    PairWithC { c: f64 },
    /// Single Weyl function `E - α^{-1}`, valid when `α < 0` everywhere.
    AlphaNegative,
}

/// Sampled interaction strength together with a mode that its values satisfy.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylConfig {
    alpha: Vec<f64>,
    mode: WeylMode,
}

/// `max α + 1`, or `1` when that would not be positive.
pub fn default_c(alpha: &[f64]) -> f64 {
    let top = alpha.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top + 1.0 > 0.0 {
        top + 1.0
    } else {
        1.0
    }
}

impl WeylConfig {
    pub fn new(alpha: Vec<f64>, mode: WeylMode) -> Result<Self> {
        if alpha.is_empty() || alpha.iter().any(|a| !a.is_finite()) {
            return Err(SsfError::InvalidInput("alpha samples must be finite and nonempty".into()));
        }
        let top = alpha.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        match mode {
            WeylMode::PairWithC { c } => {
                if !(c > 0.0 && c.is_finite()) {
                    return Err(SsfError::Regime(format!("mode.c must be positive, got {c}")));
                }
                if top >= c {
                    return Err(SsfError::Regime(format!("max alpha = {top} must be below c = {c}")));
                }
            }
            WeylMode::AlphaNegative => {
                if top >= 0.0 {
                    return Err(SsfError::Regime(format!(
                        "alpha_negative mode needs alpha < 0 everywhere, max alpha = {top}"
                    )));
                }
            }
        }
        Ok(Self { alpha, mode })
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn mode(&self) -> WeylMode {
        self.mode
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self.mode, WeylMode::PairWithC { .. }) && self.alpha.iter().all(|&a| a == 0.0)
    }
}

fn identity_shift(e: MatRef<'_, c64>, scale: f64) -> Mat<c64> {
    let mut p = Scale(c64::new(scale, 0.0)) * e;
    for i in 0..p.nrows() {
        p[(i, i)] -= c64::new(1.0, 0.0);
    }
    p
}

fn scale_rows(a: MatRef<'_, c64>, d: &[f64]) -> Mat<c64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * d[i])
}

/// `-c^{-1}(cE - I)^{-1}`.
pub fn m_zero_matrix(e: MatRef<'_, c64>, c: f64) -> Result<Mat<c64>> {
    let p_inv = inverse_checked(identity_shift(e, c).as_ref())?;
    Ok(Scale(c64::new(-1.0 / c, 0.0)) * &p_inv)
}

/// `diag(c-α)^{-1} (diag(α)E - I)(cE - I)^{-1}`.
pub fn m_alpha_matrix(e: MatRef<'_, c64>, alpha: &[f64], c: f64) -> Result<Mat<c64>> {
    check_below(alpha, c)?;
    let p_inv = inverse_checked(identity_shift(e, c).as_ref())?;
    let mut ae = scale_rows(e, alpha);
    for i in 0..ae.nrows() {
        ae[(i, i)] -= c64::new(1.0, 0.0);
    }
    let d: Vec<f64> = alpha.iter().map(|a| 1.0 / (c - a)).collect();
    Ok(scale_rows((&ae * &p_inv).as_ref(), &d))
}

/// `E - diag(1/α)`.
pub fn m_neg_matrix(e: MatRef<'_, c64>, alpha: &[f64]) -> Result<Mat<c64>> {
    if let Some(a) = alpha.iter().find(|&&a| !(a < 0.0)) {
        return Err(SsfError::Regime(format!("alpha_negative needs alpha < 0, found {a}")));
    }
    let mut m = e.to_owned();
    for (i, a) in alpha.iter().enumerate() {
        m[(i, i)] -= c64::new(1.0 / a, 0.0);
    }
    Ok(m)
}

fn check_below(alpha: &[f64], c: f64) -> Result<()> {
    match alpha.iter().find(|&&a| !(a < c)) {
        Some(a) => Err(SsfError::Regime(format!("alpha = {a} is not below c = {c}"))),
        None => Ok(()),
    }
}

/// Derivative of `M_α` by the product rule:
/// `M_α' = D^{-1}[α E' P^{-1} - (αE - I) P^{-1} c E' P^{-1}]`.
pub fn m_alpha_dz_matrix(e: MatRef<'_, c64>, e_dz: MatRef<'_, c64>, alpha: &[f64], c: f64) -> Result<Mat<c64>> {
    check_below(alpha, c)?;
    let p_inv = inverse_checked(identity_shift(e, c).as_ref())?;
    let mut ae = scale_rows(e, alpha);
    for i in 0..ae.nrows() {
        ae[(i, i)] -= c64::new(1.0, 0.0);
    }
    let ep = e_dz * &p_inv;
    let first = scale_rows(ep.as_ref(), alpha);
    let second = Scale(c64::new(c, 0.0)) * (&ae * &p_inv * &ep);
    let d: Vec<f64> = alpha.iter().map(|a| 1.0 / (c - a)).collect();
    Ok(scale_rows((first - second).as_ref(), &d))
}

pub fn m_zero(e: &BoundaryOperator, c: f64) -> Result<BoundaryOperator> {
    Ok(e.with_matrix(m_zero_matrix(e.matrix(), c)?, OperatorRole::Weyl))
}

pub fn m_alpha(e: &BoundaryOperator, alpha: &[f64], c: f64) -> Result<BoundaryOperator> {
    Ok(e.with_matrix(m_alpha_matrix(e.matrix(), alpha, c)?, OperatorRole::Weyl))
}

pub fn m_neg(e: &BoundaryOperator, alpha: &[f64]) -> Result<BoundaryOperator> {
    Ok(e.with_matrix(m_neg_matrix(e.matrix(), alpha)?, OperatorRole::Weyl))
}

/// `z`-derivative of the builder selected by `mode`. In pair mode this is the
/// derivative of `M_α`; pass a zero `alpha` for `M_0`.
pub fn weyl_dz(e: &BoundaryOperator, e_dz: &BoundaryOperator, alpha: &[f64], mode: WeylMode) -> Result<BoundaryOperator> {
    let m = match mode {
        WeylMode::AlphaNegative => {
            m_neg_matrix(e.matrix(), alpha)?;
            e_dz.matrix().to_owned()
        }
        WeylMode::PairWithC { c } => m_alpha_dz_matrix(e.matrix(), e_dz.matrix(), alpha, c)?,
    };
    Ok(e.with_matrix(m, OperatorRole::WeylDz))
}

/// `-tr(M^{-1} M')`.
pub fn trace_resolvent_diff_matrix(m: MatRef<'_, c64>, m_dz: MatRef<'_, c64>) -> Result<c64> {
    let inv = inverse_checked(m)?;
    Ok(-trace_of_product(inv.as_ref(), m_dz))
}

pub fn trace_resolvent_diff(m: &BoundaryOperator, m_dz: &BoundaryOperator) -> Result<c64> {
    trace_resolvent_diff_matrix(m.matrix(), m_dz.matrix())
}

/// `tr(R_{H_{δ,α}} - R_H)` at the energy of `e`: a single trace in
/// `alpha_negative` mode, the difference of the `M_α` and `M_0` traces in pair mode.
pub fn resolvent_trace(e: &BoundaryOperator, e_dz: &BoundaryOperator, config: &WeylConfig) -> Result<c64> {
    match config.mode() {
        WeylMode::AlphaNegative => {
            let m = m_neg(e, config.alpha())?;
            trace_resolvent_diff(&m, e_dz)
        }
        WeylMode::PairWithC { c } => {
            let ma = m_alpha(e, config.alpha(), c)?;
            let ma_dz = weyl_dz(e, e_dz, config.alpha(), config.mode())?;
            let zeros = vec![0.0; config.alpha().len()];
            let m0 = m_zero(e, c)?;
            let m0_dz = weyl_dz(e, e_dz, &zeros, config.mode())?;
            Ok(trace_resolvent_diff(&ma, &ma_dz)? - trace_resolvent_diff(&m0, &m0_dz)?)
        }
    }
}
