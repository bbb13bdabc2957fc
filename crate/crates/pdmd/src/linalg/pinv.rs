//! Moore-Penrose pseudo-inverse via the SVD, real and complex.

use super::dense::{CMatrix, Matrix};
use super::svd::{svd_complex, thin_svd};
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Default relative cutoff for discarded singular values.
pub const DEFAULT_PINV_TOL: f64 = 1.0e-12;

fn check_tol(rel_tol: f64) -> Result<()> {
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        return Err(Error::invalid(format!("pinv tolerance must lie in (0, 1), got {rel_tol}")));
    }
    Ok(())
}

/// Pseudo-inverse of a real matrix; singular values below
/// `rel_tol * sigma_max` are treated as zero. An all-zero matrix maps to
/// the zero matrix of transposed shape.
pub fn pinv(m: &Matrix, rel_tol: f64) -> Result<Matrix> {
    check_tol(rel_tol)?;
    let f = thin_svd(m)?;
    let cutoff = rel_tol * f.sigma.first().copied().unwrap_or(0.0);
    let k = f.sigma.len();
    // V * diag(sigma^+) * U^T assembled as scaled columns times U^T.
    let mut scaled_v = f.v.clone();
    let inv: Vec<f64> = (0..k)
        .map(|j| if f.sigma[j] > cutoff && f.sigma[j] > 0.0 { 1.0 / f.sigma[j] } else { 0.0 })
        .collect();
    scaled_v.scale_columns(&inv);
    Ok(scaled_v.mul(&f.u.transpose()))
}

/// Pseudo-inverse of a complex matrix with the same cutoff convention.
pub fn pinv_complex(m: &CMatrix, rel_tol: f64) -> Result<CMatrix> {
    check_tol(rel_tol)?;
    if !m.all_finite() {
        return Err(Error::invalid("pinv input has a non-finite entry"));
    }
    let (u, sigma, v) = svd_complex(m)?;
    let cutoff = rel_tol * sigma.first().copied().unwrap_or(0.0);
    let k = sigma.len();
    let mut scaled_v = v.clone();
    for j in 0..k {
        let s = if sigma[j] > cutoff && sigma[j] > 0.0 { 1.0 / sigma[j] } else { 0.0 };
        for z in scaled_v.col_mut(j) {
            *z *= s;
        }
    }
    Ok(scaled_v.mul(&u.conj_transpose()))
}

/// Least-squares coefficients `pinv(m) * y` without forming the full
/// pseudo-inverse product when only one application is needed.
pub fn pinv_apply_complex(m: &CMatrix, y: &[Complex64], rel_tol: f64) -> Result<Vec<Complex64>> {
    check_tol(rel_tol)?;
    if !m.all_finite() {
        return Err(Error::invalid("pinv input has a non-finite entry"));
    }
    let (u, sigma, v) = svd_complex(m)?;
    let cutoff = rel_tol * sigma.first().copied().unwrap_or(0.0);
    // coeff = V * diag(sigma^+) * U^H y
    let uty = u.conj_transpose().matvec(y);
    let scaled: Vec<Complex64> = uty
        .iter()
        .zip(&sigma)
        .map(|(z, &s)| if s > cutoff && s > 0.0 { z / s } else { Complex64::ZERO })
        .collect();
    Ok(v.matvec(&scaled))
}
