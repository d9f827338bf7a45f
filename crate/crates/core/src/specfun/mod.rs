//! Special functions and the free resolvent kernel `G(z, x, y)` of `-Δ`.

mod bessel;
mod check;
mod modified;
mod spherical;

use std::f64::consts::PI;

use faer::c64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SsfError};

pub use bessel::{
    bessel_jy, bessel_jy_seq, derivative_from_seq, hankel1, hankel1_seq, kernel_bessel,
    y01_asymptotic, y01_neumann, KernelBessel, ASYMPTOTIC_THRESHOLD, EULER_GAMMA, MAX_MODULUS,
    MAX_ORDER,
};
pub use modified::{k01_by_fraction, k01_by_series, mod_bessel_ik, mod_bessel_ik_deriv, mod_bessel_ik_seq};
pub use spherical::spherical_jh_seq;
pub use check::{identity_suite, ik_wronskian, jy_wronskian, k_overlap, log_grid, y_overlap, IdentityCheck};

const I: c64 = c64 { re: 0.0, im: 1.0 };

/// Square root on the branch with `Im w > 0`.
pub fn sqrt_upper(z: c64) -> Result<c64> {
    if z.im == 0.0 && z.re >= 0.0 {
        return Err(SsfError::Domain(format!(
            "sqrt_upper is undefined on [0, ∞), got z = {z}"
        )));
    }
    let w = z.sqrt();
    Ok(if w.im < 0.0 { -w } else { w })
}

/// A spectral parameter `z` together with its wavenumber `w`, `w² = z`.
///
/// Off the real axis `w = sqrt_upper(z)`. On the positive half-line the
/// boundary value from the upper half-plane is used (`w = √λ > 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexEnergy {
    z: c64,
    w: c64,
}

impl ComplexEnergy {
    pub fn new(z: c64) -> Result<Self> {
        Ok(Self { z, w: sqrt_upper(z)? })
    }

    pub fn from_parts(lambda: f64, eps: f64) -> Result<Self> {
        Self::new(c64::new(lambda, eps))
    }

    /// Boundary value at `λ + i0`.
    pub fn upper_rim(lambda: f64) -> Result<Self> {
        if lambda == 0.0 || !lambda.is_finite() {
            return Err(SsfError::Domain(format!("no boundary wavenumber at λ = {lambda}")));
        }
        let w = if lambda > 0.0 {
            c64::new(lambda.sqrt(), 0.0)
        } else {
            c64::new(0.0, (-lambda).sqrt())
        };
        Ok(Self { z: c64::new(lambda, 0.0), w })
    }

    pub fn z(&self) -> c64 {
        self.z
    }

    pub fn w(&self) -> c64 {
        self.w
    }

    /// The energy `z̄` with wavenumber `-conj(w)`.
    pub fn conj(&self) -> Self {
        Self { z: self.z.conj(), w: -self.w.conj() }
    }
}

/// Space dimension of the kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dimension {
    Two,
    Three,
}

impl TryFrom<u32> for Dimension {
    type Error = SsfError;

    fn try_from(n: u32) -> Result<Self> {
        match n {
            2 => Ok(Self::Two),
            3 => Ok(Self::Three),
            _ => Err(SsfError::InvalidInput(format!("dimension must be 2 or 3, got {n}"))),
        }
    }
}

fn check_distance(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(SsfError::Domain(format!("kernel distance must be positive, got r = {r}")))
    }
}

/// Resolvent kernel `G(z, r)`: `(i/4) H_0(wr)` in the plane, `e^{iwr}/(4πr)` in space.
pub fn green_kernel(n: Dimension, z: ComplexEnergy, r: f64) -> Result<c64> {
    check_distance(r)?;
    match n {
        Dimension::Two => Ok(0.25 * I * hankel1(0, z.w * r)?),
        Dimension::Three => Ok((I * z.w * r).exp() / (4.0 * PI * r)),
    }
}

/// `∂G/∂z` at fixed `r`, using `dw/dz = 1/(2w)`.
pub fn green_kernel_dz(n: Dimension, z: ComplexEnergy, r: f64) -> Result<c64> {
    check_distance(r)?;
    match n {
        Dimension::Two => Ok(-(I * r / (8.0 * z.w)) * hankel1(1, z.w * r)?),
        Dimension::Three => Ok((I * r / (2.0 * z.w)) * green_kernel(n, z, r)?),
    }
}
