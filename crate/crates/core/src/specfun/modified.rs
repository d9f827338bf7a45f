//! Modified Bessel functions `I_m`, `K_m` of positive real argument.

use std::f64::consts::PI;

use super::bessel::{EULER_GAMMA, MAX_MODULUS, MAX_ORDER};
use crate::error::{Result, SsfError};

fn i_series(m: usize, x: f64) -> f64 {
    let mut t = 1.0;
    for j in 1..=m {
        t *= 0.5 * x / j as f64;
    }
    let y = 0.25 * x * x;
    let mut sum = t;
    for k in 1..10_000 {
        t *= y / (k as f64 * (k + m) as f64);
        sum += t;
        if t < 1e-17 * sum {
            break;
        }
    }
    sum
}

/// Small-argument series for `K_0` and `K_1`.
fn k01_series(x: f64) -> (f64, f64) {
    let y = 0.25 * x * x;
    let l = (0.5 * x).ln();
    let i0 = i_series(0, x);
    let i1 = i_series(1, x);

    let mut t = 1.0;
    let mut h = 0.0;
    let mut s0 = 0.0;
    for k in 1..200 {
        t *= y / (k as f64 * k as f64);
        h += 1.0 / k as f64;
        s0 += t * h;
        if t * h < 1e-18 * s0 {
            break;
        }
    }
    let k0 = -(l + EULER_GAMMA) * i0 + s0;

    // digamma(k+1) + digamma(k+2) with digamma(n+1) = -gamma + H_n
    let mut t = 1.0;
    let mut hk = 0.0;
    let mut s1 = (-EULER_GAMMA) + (1.0 - EULER_GAMMA);
    for k in 1..200 {
        t *= y / (k as f64 * (k + 1) as f64);
        hk += 1.0 / k as f64;
        let psi_sum = (-EULER_GAMMA + hk) + (-EULER_GAMMA + hk + 1.0 / (k + 1) as f64);
        s1 += t * psi_sum;
        if (t * psi_sum).abs() < 1e-18 * s1.abs() {
            break;
        }
    }
    let k1 = 1.0 / x + l * i1 - 0.25 * x * s1;
    (k0, k1)
}

/// Steed's continued fraction for `K_0` and `K_1` (Temme's normalization).
fn k01_continued_fraction(x: f64) -> Result<(f64, f64)> {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    let mut converged = false;
    for i in 2..=100_000 {
        a -= 2.0 * (i - 1) as f64;
        c = -a * c / i as f64;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(SsfError::Quadrature(format!(
            "continued fraction for K_0({x}) did not converge"
        )));
    }
    h *= a1;
    let k0 = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    Ok((k0, k1))
}

fn check(m: usize, x: f64) -> Result<()> {
    if m > MAX_ORDER {
        return Err(SsfError::InvalidInput(format!(
            "order {m} exceeds the supported maximum {MAX_ORDER}"
        )));
    }
    if !(x > 0.0) {
        return Err(SsfError::Domain(format!(
            "modified Bessel functions need x > 0, got {x}"
        )));
    }
    if !x.is_finite() || x > MAX_MODULUS {
        return Err(SsfError::Overflow { modulus: x });
    }
    Ok(())
}

/// `(I_0..=I_m, K_0..=K_m)` at `x > 0`.
pub fn mod_bessel_ik_seq(m_max: usize, x: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    check(m_max, x)?;
    let i: Vec<f64> = (0..=m_max).map(|m| i_series(m, x)).collect();
    let (k0, k1) = if x <= 2.0 { k01_series(x) } else { k01_continued_fraction(x)? };
    let mut k = vec![k0, k1];
    for m in 1..m_max {
        let next = k[m - 1] + (2.0 * m as f64 / x) * k[m];
        k.push(next);
    }
    k.truncate(m_max + 1);
    if i.iter().chain(&k).any(|v| !v.is_finite()) {
        return Err(SsfError::Overflow { modulus: x });
    }
    Ok((i, k))
}

/// `(I_m(x), K_m(x))`.
pub fn mod_bessel_ik(m: usize, x: f64) -> Result<(f64, f64)> {
    let (i, k) = mod_bessel_ik_seq(m, x)?;
    Ok((i[m], k[m]))
}

/// `(I_m'(x), K_m'(x))` from the order recurrences.
pub fn mod_bessel_ik_deriv(m: usize, x: f64) -> Result<(f64, f64)> {
    let (i, k) = mod_bessel_ik_seq(m + 1, x)?;
    if m == 0 {
        return Ok((i[1], -k[1]));
    }
    Ok((i[m - 1] - (m as f64 / x) * i[m], -k[m - 1] - (m as f64 / x) * k[m]))
}

/// Forced routes for the `K_0` crossover check.
pub fn k01_by_series(x: f64) -> (f64, f64) {
    k01_series(x)
}

pub fn k01_by_fraction(x: f64) -> Result<(f64, f64)> {
    k01_continued_fraction(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        let (i0, k0) = mod_bessel_ik(0, 1.0).unwrap();
        let (i1, k1) = mod_bessel_ik(1, 1.0).unwrap();
        assert!((i0 - 1.266_065_877_752_008_4).abs() < 1e-15);
        assert!((k0 - 0.421_024_438_240_708_3).abs() < 1e-15);
        assert!((i1 - 0.565_159_103_992_485).abs() < 1e-15);
        assert!((k1 - 0.601_907_230_197_234_6).abs() < 1e-15);
        let (_, k0) = mod_bessel_ik(0, 3.0).unwrap();
        let (_, k1) = mod_bessel_ik(1, 3.0).unwrap();
        assert!((k0 - 0.034_739_504_386_279_25).abs() < 1e-16);
        assert!((k1 - 0.040_156_431_128_194_18).abs() < 1e-16);
    }

    #[test]
    fn routes_agree_at_crossover() {
        for &x in &[1.5, 2.0, 2.5] {
            let (a0, a1) = k01_by_series(x);
            let (b0, b1) = k01_by_fraction(x).unwrap();
            assert!((a0 - b0).abs() < 5e-14 * a0, "x={x}");
            assert!((a1 - b1).abs() < 5e-14 * a1, "x={x}");
        }
    }

    #[test]
    fn wronskian_holds() {
        for &x in &[0.01, 0.7, 2.0, 5.0, 30.0, 200.0] {
            let (i, k) = mod_bessel_ik_seq(10, x).unwrap();
            for m in 0..10 {
                // I_m K_{m+1} + I_{m+1} K_m = 1/x
                let w = i[m] * k[m + 1] + i[m + 1] * k[m];
                assert!((w * x - 1.0).abs() < 1e-13, "x={x} m={m}");
            }
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(mod_bessel_ik(0, 0.0), Err(SsfError::Domain(_))));
        assert!(matches!(mod_bessel_ik(0, -1.0), Err(SsfError::Domain(_))));
        assert!(matches!(mod_bessel_ik(0, 800.0), Err(SsfError::Overflow { .. })));
    }
}
