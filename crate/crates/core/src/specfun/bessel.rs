//! Integer-order Bessel and Hankel functions of complex argument.
//!
//! `J_m` comes from Miller's downward recurrence, normalized with the
//! generating-function identity `e^{∓iw} = J_0 + 2 Σ (∓i)^k J_k`, whose terms
//! never cancel catastrophically (the sign follows `Im w`). `Y_0`, `Y_1` come
//! from the Neumann expansions in even/odd `J_k` for `|w| ≤ ASYMPTOTIC_THRESHOLD`
//! and from the Hankel asymptotic expansion above it. Higher `Y_m` and `H_m`
//! use upward recurrence, which is stable for the dominant solutions.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use faer::c64;

use crate::error::{Result, SsfError};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Largest supported integer order.
pub const MAX_ORDER: usize = 64;

/// Arguments with `|w|` (or `|Im w|`) above this overflow `e^{|Im w|}`.
pub const MAX_MODULUS: f64 = 700.0;

/// Crossover between the Neumann-series route and the Hankel asymptotic route.
pub const ASYMPTOTIC_THRESHOLD: f64 = 17.0;

const I: c64 = c64 { re: 0.0, im: 1.0 };

const RESCALE: f64 = 1e100;

/// `a / b` without forming `|b|²`, which overflows for the unnormalized
/// Miller sequences.
pub(crate) fn safe_div(a: c64, b: c64) -> c64 {
    let s = b.re.abs().max(b.im.abs());
    (a / s) / (b / s)
}

pub(crate) fn check_argument(w: c64) -> Result<()> {
    if w.re == 0.0 && w.im == 0.0 {
        return Err(SsfError::Domain("Bessel argument must be nonzero".into()));
    }
    let modulus = w.norm();
    if !modulus.is_finite() || modulus > MAX_MODULUS {
        return Err(SsfError::Overflow { modulus });
    }
    Ok(())
}

fn check_order(m: usize) -> Result<()> {
    if m > MAX_ORDER {
        return Err(SsfError::InvalidInput(format!(
            "order {m} exceeds the supported maximum {MAX_ORDER}"
        )));
    }
    Ok(())
}

/// `J_0 ..= J_start` by Miller's algorithm; the vector is longer than
/// `m_max + 1` so that the Neumann sums can use the tail.
fn miller_j(w: c64, m_max: usize) -> Vec<c64> {
    let a = w.norm();
    let mut start = (m_max as f64).max(a.ceil()) as usize + 25 + (10.0 * a.cbrt()).ceil() as usize;
    if start % 2 == 1 {
        start += 1;
    }
    let inv_w = w.inv();
    let mut f = vec![c64::new(0.0, 0.0); start + 2];
    f[start] = c64::new(1.0, 0.0);
    for k in (1..=start).rev() {
        let next = f[k] * (2.0 * k as f64) * inv_w - f[k + 1];
        f[k - 1] = next;
        if next.norm() > RESCALE {
            for v in f[k - 1..].iter_mut() {
                *v /= RESCALE;
            }
        }
    }
    let (phase, rot) = if w.im >= 0.0 {
        ((-I * w).exp(), -I)
    } else {
        ((I * w).exp(), I)
    };
    let mut sum = f[0];
    let mut p = c64::new(1.0, 0.0);
    for v in f.iter().take(start + 1).skip(1) {
        p *= rot;
        sum += 2.0 * p * v;
    }
    let scale = safe_div(phase, sum);
    for v in f.iter_mut() {
        *v *= scale;
    }
    f
}

/// Neumann expansions of `Y_0` and `Y_1` in terms of `J_k`.
fn neumann_y01(w: c64, j: &[c64]) -> (c64, c64) {
    let log_term = (w * 0.5).ln() + EULER_GAMMA;
    let mut s0 = c64::new(0.0, 0.0);
    let mut s1 = c64::new(0.0, 0.0);
    let mut k = 1;
    while 2 * k + 1 < j.len() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        s0 += sign * j[2 * k] / k as f64;
        s1 += sign * (j[2 * k - 1] - j[2 * k + 1]) / k as f64;
        k += 1;
    }
    let two_over_pi = 2.0 / PI;
    let y0 = two_over_pi * (log_term * j[0] - 2.0 * s0);
    let y1 = two_over_pi * (-j[0] / w + log_term * j[1] + s1);
    (y0, y1)
}

/// Hankel asymptotic expansion for `H^(1)_ν(w)` and `H^(2)_ν(w)`.
pub(crate) fn hankel_asymptotic(nu: u32, w: c64) -> (c64, c64) {
    let mu = 4.0 * (nu as f64) * (nu as f64);
    let mut term = c64::new(1.0, 0.0);
    let mut sum1 = term;
    let mut sum2 = term;
    let mut i_pow = c64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        term = term * (mu - odd * odd) / (8.0 * k as f64 * w);
        let size = term.norm();
        if size == 0.0 || size > last {
            break;
        }
        i_pow *= I;
        sum1 += i_pow * term;
        sum2 += i_pow.conj() * term;
        last = size;
        if size < 1e-17 * sum1.norm().min(sum2.norm()) {
            break;
        }
    }
    let chi = w - nu as f64 * FRAC_PI_2 - FRAC_PI_4;
    let pref = (2.0 / (PI * w)).sqrt();
    (pref * (I * chi).exp() * sum1, pref * (-I * chi).exp() * sum2)
}

/// `Y_0, Y_1` and `H_0, H_1` for a single argument.
struct LowOrders {
    j: Vec<c64>,
    y0: c64,
    y1: c64,
    h0: c64,
    h1: c64,
}

fn low_orders(w: c64, m_max: usize) -> LowOrders {
    let j = miller_j(w, m_max.max(1));
    if w.norm() <= ASYMPTOTIC_THRESHOLD {
        let (y0, y1) = neumann_y01(w, &j);
        LowOrders { h0: j[0] + I * y0, h1: j[1] + I * y1, j, y0, y1 }
    } else {
        let (h10, h20) = hankel_asymptotic(0, w);
        let (h11, h21) = hankel_asymptotic(1, w);
        let y0 = (h10 - h20) / (2.0 * I);
        let y1 = (h11 - h21) / (2.0 * I);
        LowOrders { j, y0, y1, h0: h10, h1: h11 }
    }
}

fn upward(w: c64, f0: c64, f1: c64, m_max: usize) -> Vec<c64> {
    let mut out = Vec::with_capacity(m_max + 1);
    out.push(f0);
    if m_max >= 1 {
        out.push(f1);
    }
    let inv_w = w.inv();
    for m in 1..m_max {
        let next = out[m] * (2.0 * m as f64) * inv_w - out[m - 1];
        out.push(next);
    }
    out
}

fn ensure_finite(values: &[c64], w: c64) -> Result<()> {
    if values.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
        Ok(())
    } else {
        Err(SsfError::Overflow { modulus: w.norm() })
    }
}

/// `(J_0..=J_m, Y_0..=Y_m)`.
pub fn bessel_jy_seq(m_max: usize, w: c64) -> Result<(Vec<c64>, Vec<c64>)> {
    check_order(m_max)?;
    check_argument(w)?;
    let low = low_orders(w, m_max);
    let j: Vec<c64> = low.j[..=m_max].to_vec();
    let y = upward(w, low.y0, low.y1, m_max);
    ensure_finite(&j, w)?;
    ensure_finite(&y, w)?;
    Ok((j, y))
}

/// `(J_m(w), Y_m(w))` for integer order `0 ≤ m ≤ 64`.
pub fn bessel_jy(m: usize, w: c64) -> Result<(c64, c64)> {
    let (j, y) = bessel_jy_seq(m, w)?;
    Ok((j[m], y[m]))
}

/// `H^(1)_0 ..= H^(1)_m`.
pub fn hankel1_seq(m_max: usize, w: c64) -> Result<Vec<c64>> {
    check_order(m_max)?;
    check_argument(w)?;
    let low = low_orders(w, m_max);
    let h = if w.norm() <= ASYMPTOTIC_THRESHOLD {
        let y = upward(w, low.y0, low.y1, m_max);
        low.j.iter().zip(&y).map(|(j, y)| j + I * y).collect::<Vec<_>>()
    } else {
        upward(w, low.h0, low.h1, m_max)
    };
    ensure_finite(&h, w)?;
    Ok(h)
}

/// Hankel function of the first kind `H^(1)_m(w) = J_m(w) + i Y_m(w)`.
pub fn hankel1(m: usize, w: c64) -> Result<c64> {
    Ok(hankel1_seq(m, w)?[m])
}

/// The four values the two-dimensional kernel and its energy derivative need.
#[derive(Debug, Clone, Copy)]
pub struct KernelBessel {
    pub j0: c64,
    pub j1: c64,
    pub h0: c64,
    pub h1: c64,
}

pub fn kernel_bessel(w: c64) -> Result<KernelBessel> {
    check_argument(w)?;
    let low = low_orders(w, 1);
    let out = KernelBessel { j0: low.j[0], j1: low.j[1], h0: low.h0, h1: low.h1 };
    ensure_finite(&[out.j0, out.j1, out.h0, out.h1], w)?;
    Ok(out)
}

/// Forced series route for `Y_0, Y_1` (overlap diagnostics).
pub fn y01_neumann(w: c64) -> Result<(c64, c64)> {
    check_argument(w)?;
    let j = miller_j(w, 1);
    Ok(neumann_y01(w, &j))
}

/// Forced asymptotic route for `Y_0, Y_1` (overlap diagnostics).
pub fn y01_asymptotic(w: c64) -> Result<(c64, c64)> {
    check_argument(w)?;
    let (h10, h20) = hankel_asymptotic(0, w);
    let (h11, h21) = hankel_asymptotic(1, w);
    Ok(((h10 - h20) / (2.0 * I), (h11 - h21) / (2.0 * I)))
}

/// Derivative from the order recurrence: `f_m' = f_{m-1} - (m/w) f_m`,
/// with `f_0' = -f_1`.
pub fn derivative_from_seq(seq: &[c64], m: usize, w: c64) -> c64 {
    if m == 0 {
        -seq[1]
    } else {
        seq[m - 1] - seq[m] * (m as f64) / w
    }
}
