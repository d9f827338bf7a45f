//! Dense complex linear-algebra helpers on top of `faer`.

use faer::linalg::solvers::DenseSolveCore;
use faer::{c64, Mat, MatRef, Side};

use crate::error::{Result, SsfError};

/// Inverses whose 1-norm condition estimate exceeds this are refused.
pub const MAX_CONDITION: f64 = 1e13;

pub fn norm_one(a: MatRef<'_, c64>) -> f64 {
    (0..a.ncols())
        .map(|j| (0..a.nrows()).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Inverse by LU with partial pivoting, plus the 1-norm condition number.
pub fn inverse_with_condition(a: MatRef<'_, c64>) -> (Mat<c64>, f64) {
    let inv = a.partial_piv_lu().inverse();
    let finite = (0..inv.ncols()).all(|j| (0..inv.nrows()).all(|i| inv[(i, j)].is_finite()));
    let cond = norm_one(a) * norm_one(inv.as_ref());
    (inv, if finite && cond.is_finite() { cond } else { f64::INFINITY })
}

/// Inverse refusing matrices with condition estimate above [`MAX_CONDITION`].
pub fn inverse_checked(a: MatRef<'_, c64>) -> Result<Mat<c64>> {
    let (inv, cond) = inverse_with_condition(a);
    if !(cond <= MAX_CONDITION) {
        return Err(SsfError::Singular { cond });
    }
    Ok(inv)
}

pub fn trace(a: MatRef<'_, c64>) -> c64 {
    (0..a.nrows().min(a.ncols())).map(|i| a[(i, i)]).sum()
}

/// `tr(A B)` without forming the product.
pub fn trace_of_product(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> c64 {
    let mut s = c64::new(0.0, 0.0);
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            s += a[(i, k)] * b[(k, i)];
        }
    }
    s
}

/// `(A - A*) / (2i)`.
pub fn im_part(a: MatRef<'_, c64>) -> Mat<c64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| {
        let d = a[(i, j)] - a[(j, i)].conj();
        c64::new(0.5 * d.im, -0.5 * d.re)
    })
}

/// `(A + A*) / 2`.
pub fn re_part(a: MatRef<'_, c64>) -> Mat<c64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| 0.5 * (a[(i, j)] + a[(j, i)].conj()))
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(a: MatRef<'_, c64>) -> Result<Vec<f64>> {
    let mut v = a
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| SsfError::Eigen(format!("{e:?}")))?;
    v.sort_by(|x, y| x.total_cmp(y));
    Ok(v)
}

pub fn eigenvalues(a: MatRef<'_, c64>) -> Result<Vec<c64>> {
    a.eigenvalues().map_err(|e| SsfError::Eigen(format!("{e:?}")))
}

/// Spectral norm.
pub fn op_norm(a: MatRef<'_, c64>) -> f64 {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0.0;
    }
    match a.singular_values() {
        Ok(s) => s.into_iter().fold(0.0, f64::max),
        Err(_) => f64::NAN,
    }
}

pub fn max_abs_diff(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> f64 {
    let mut m: f64 = 0.0;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    m
}

pub fn conj_entrywise(a: MatRef<'_, c64>) -> Mat<c64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)].conj())
}

/// Number of negative eigenvalues of a Hermitian matrix.
pub fn negative_count(a: MatRef<'_, c64>) -> Result<usize> {
    Ok(hermitian_eigenvalues(a)?.into_iter().filter(|&x| x < 0.0).count())
}

/// Haar-distributed unitary matrix: Gram-Schmidt (applied twice) on complex
/// Gaussian columns.
pub fn haar_unitary<R: rand::Rng + ?Sized>(rng: &mut R, n: usize) -> Mat<c64> {
    let normal = rand_distr::StandardNormal;
    let mut q = Mat::<c64>::from_fn(n, n, |_, _| {
        c64::new(rng.sample::<f64, _>(normal), rng.sample::<f64, _>(normal))
    });
    orthonormalize_columns(&mut q);
    q
}

/// In-place Gram-Schmidt with reorthogonalization.
pub fn orthonormalize_columns(q: &mut Mat<c64>) {
    let (rows, cols) = (q.nrows(), q.ncols());
    for j in 0..cols {
        for _ in 0..2 {
            for k in 0..j {
                let mut dot = c64::new(0.0, 0.0);
                for i in 0..rows {
                    dot += q[(i, k)].conj() * q[(i, j)];
                }
                for i in 0..rows {
                    let v = q[(i, k)];
                    q[(i, j)] -= dot * v;
                }
            }
        }
        let norm = (0..rows).map(|i| q[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        for i in 0..rows {
            q[(i, j)] /= norm;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_condition() {
        let a = Mat::from_fn(3, 3, |i, j| c64::new(if i == j { 2.0 } else { 0.5 }, (i + j) as f64 * 0.1));
        let inv = inverse_checked(a.as_ref()).unwrap();
        let p = &a * &inv;
        assert!(max_abs_diff(p.as_ref(), Mat::<c64>::identity(3, 3).as_ref()) < 1e-14);
        let s = Mat::from_fn(2, 2, |i, _| c64::new(1.0 + i as f64 * 1e-16, 0.0));
        assert!(matches!(inverse_checked(s.as_ref()), Err(SsfError::Singular { .. })));
    }

    #[test]
    fn im_part_of_hermitian_vanishes() {
        let a = Mat::from_fn(3, 3, |i, j| c64::new((i + j) as f64, i as f64 - j as f64));
        let h = im_part(a.as_ref());
        assert!(h.norm_l2() < 1e-15);
    }

    #[test]
    fn haar_unitary_is_unitary() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let q = haar_unitary(&mut rng, 7);
        let p = q.adjoint() * &q;
        assert!(max_abs_diff(p.as_ref(), Mat::<c64>::identity(7, 7).as_ref()) < 1e-14);
    }

    #[test]
    fn traces() {
        let a = Mat::from_fn(3, 3, |i, j| c64::new(i as f64, j as f64));
        let b = Mat::from_fn(3, 3, |i, j| c64::new(1.0, (i * j) as f64));
        let p = &a * &b;
        assert!((trace(p.as_ref()) - trace_of_product(a.as_ref(), b.as_ref())).norm() < 1e-12);
    }
}
