use std::f64::consts::PI;

use faer::c64;
use serde::{Deserialize, Serialize};

use super::{bessel_jy_seq, k01_by_fraction, k01_by_series, mod_bessel_ik_seq, y01_asymptotic, y01_neumann};
use crate::error::Result;

pub const WRONSKIAN_TOL: f64 = 1e-12;
pub const OVERLAP_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub samples: usize,
    pub max_rel_err: f64,
    pub worst_at: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl IdentityCheck {
    fn new(name: &str, tolerance: f64, errs: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let mut samples = 0;
        let (mut max_rel_err, mut worst_at) = (0.0_f64, f64::NAN);
        for (x, e) in errs {
            samples += 1;
            if !(e <= max_rel_err) {
                max_rel_err = e;
                worst_at = x;
            }
        }
        Self { name: name.into(), samples, max_rel_err, worst_at, tolerance, passed: max_rel_err <= tolerance }
    }
}

pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..count).map(|k| (a + (b - a) * k as f64 / (count - 1) as f64).exp()).collect()
}

fn rel(a: c64, b: c64) -> f64 {
    (a - b).norm() / b.norm()
}

/// `J_{m+1} Y_m - J_m Y_{m+1} = 2/(πx)` on `[1e-2, 1e2]`, `m < 10`.
pub fn jy_wronskian() -> Result<IdentityCheck> {
    let mut errs = Vec::new();
    for x in log_grid(1e-2, 1e2, 61) {
        let w = c64::new(x, 0.0);
        let (j, y) = bessel_jy_seq(10, w)?;
        let exact = c64::new(2.0 / (PI * x), 0.0);
        errs.extend((0..10).map(|m| (x, rel(j[m + 1] * y[m] - j[m] * y[m + 1], exact))));
    }
    Ok(IdentityCheck::new("jy_wronskian", WRONSKIAN_TOL, errs))
}

/// `I_m K_{m+1} + I_{m+1} K_m = 1/x` on `[1e-2, 1e2]`, `m < 10`.
pub fn ik_wronskian() -> Result<IdentityCheck> {
    let mut errs = Vec::new();
    for x in log_grid(1e-2, 1e2, 61) {
        let (i, k) = mod_bessel_ik_seq(10, x)?;
        errs.extend((0..10).map(|m| (x, ((i[m] * k[m + 1] + i[m + 1] * k[m]) * x - 1.0).abs())));
    }
    Ok(IdentityCheck::new("ik_wronskian", WRONSKIAN_TOL, errs))
}

/// Neumann series against the Hankel asymptotic expansion for `Y_0, Y_1`
/// around the switch-over modulus, on three rays of the upper half plane.
pub fn y_overlap() -> Result<IdentityCheck> {
    let mut errs = Vec::new();
    for r in log_grid(14.0, 22.0, 17) {
        for theta in [0.0, PI / 4.0, PI / 2.0] {
            let w = c64::from_polar(r, theta);
            let (s0, s1) = y01_neumann(w)?;
            let (a0, a1) = y01_asymptotic(w)?;
            errs.push((r, rel(s0, a0)));
            errs.push((r, rel(s1, a1)));
        }
    }
    Ok(IdentityCheck::new("y01_series_vs_asymptotic", OVERLAP_TOL, errs))
}

/// Series against continued fraction for `K_0, K_1` around `x = 2`.
pub fn k_overlap() -> Result<IdentityCheck> {
    let mut errs = Vec::new();
    for x in log_grid(1.5, 2.5, 21) {
        let (a0, a1) = k01_by_series(x);
        let (b0, b1) = k01_by_fraction(x)?;
        errs.push((x, (a0 - b0).abs() / b0));
        errs.push((x, (a1 - b1).abs() / b1));
    }
    Ok(IdentityCheck::new("k01_series_vs_fraction", OVERLAP_TOL, errs))
}

pub fn identity_suite() -> Result<Vec<IdentityCheck>> {
    Ok(vec![jy_wronskian()?, ik_wronskian()?, y_overlap()?, k_overlap()?])
}
