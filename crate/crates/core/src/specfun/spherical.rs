//! Spherical Bessel `j_ℓ` and spherical Hankel `h_ℓ^(1)` of complex argument.

use faer::c64;

use super::bessel::{check_argument, safe_div, MAX_ORDER};
use crate::error::{Result, SsfError};

const I: c64 = c64 { re: 0.0, im: 1.0 };

/// `(j_0..=j_ℓ, h_0..=h_ℓ)`.
pub fn spherical_jh_seq(l_max: usize, x: c64) -> Result<(Vec<c64>, Vec<c64>)> {
    if l_max > MAX_ORDER {
        return Err(SsfError::InvalidInput(format!(
            "order {l_max} exceeds the supported maximum {MAX_ORDER}"
        )));
    }
    check_argument(x)?;
    let a = x.norm();
    let start = (l_max as f64).max(a.ceil()) as usize + 25 + (10.0 * a.cbrt()).ceil() as usize;
    let inv_x = x.inv();
    let mut f = vec![c64::new(0.0, 0.0); start + 2];
    f[start] = c64::new(1.0, 0.0);
    for l in (1..=start).rev() {
        let next = f[l] * (2 * l + 1) as f64 * inv_x - f[l + 1];
        f[l - 1] = next;
        if next.norm() > 1e100 {
            for v in f[l - 1..].iter_mut() {
                *v *= 1e-100;
            }
        }
    }
    let j0 = x.sin() * inv_x;
    let j1 = x.sin() * inv_x * inv_x - x.cos() * inv_x;
    let scale = if j0.norm() >= j1.norm() { safe_div(j0, f[0]) } else { safe_div(j1, f[1]) };
    let j: Vec<c64> = f[..=l_max].iter().map(|v| v * scale).collect();

    let e = (I * x).exp();
    let mut h = vec![-I * e * inv_x];
    if l_max >= 1 {
        h.push(-e * (x + I) * inv_x * inv_x);
    }
    for l in 1..l_max {
        let next = h[l] * (2 * l + 1) as f64 * inv_x - h[l - 1];
        h.push(next);
    }
    if j.iter().chain(&h).any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(SsfError::Overflow { modulus: a });
    }
    Ok((j, h))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms_for_low_orders() {
        let x = c64::new(2.5, 0.3);
        let (j, h) = spherical_jh_seq(3, x).unwrap();
        let j2 = (3.0 / (x * x) - 1.0) * x.sin() / x - 3.0 * x.cos() / (x * x);
        assert!((j[2] - j2).norm() < 1e-14);
        // at real argument Im h_l = y_l
        let xr = c64::new(1.3, 0.0);
        let (jr, hr) = spherical_jh_seq(1, xr).unwrap();
        assert!((hr[0].re - jr[0].re).abs() < 1e-15);
        assert!((hr[0].im - (-(1.3f64).cos() / 1.3)).abs() < 1e-15);
        assert!(h[3].norm() > 0.0);
    }

    #[test]
    fn cross_product_identity() {
        // j_l h_{l+1} - j_{l+1} h_l = -i / x^2 (Wronskian-type identity)
        let x = c64::new(4.0, 0.7);
        let (j, h) = spherical_jh_seq(10, x).unwrap();
        for l in 0..10 {
            let w = j[l] * h[l + 1] - j[l + 1] * h[l];
            assert!((w * x * x + I).norm() < 1e-12, "l={l}");
        }
    }
}
