//! Thin singular value decomposition.
//!
//! Tall inputs are first reduced by Householder QR, then the square factor
//! is diagonalized by one-sided Jacobi rotations. Jacobi converges to high
//! relative accuracy and, with a fixed pivot order, is deterministic for a
//! fixed input. Wide inputs go through the transpose.

use super::dense::{CMatrix, Matrix};
use super::qr::{householder_qr, householder_qr_complex};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::sync::atomic::{AtomicU64, Ordering};

/// Counts `thin_svd` invocations process-wide; lets callers verify how many
/// snapshot decompositions a code path actually performed.
static SVD_INVOCATIONS: AtomicU64 = AtomicU64::new(0);

pub fn svd_invocations() -> u64 {
    SVD_INVOCATIONS.load(Ordering::SeqCst)
}

const JACOBI_MAX_SWEEPS: usize = 64;
const JACOBI_TOL: f64 = 1.0e-15;

/// Thin SVD factors: `m ~ u * diag(sigma) * v^T`.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    /// Left singular vectors, rows x k, orthonormal columns.
    pub u: Matrix,
    /// Singular values, length k, nonincreasing and nonnegative.
    pub sigma: Vec<f64>,
    /// Right singular vectors, cols x k, orthonormal columns.
    pub v: Matrix,
}

impl SvdFactors {
    /// Number of singular values above `rel_tol * sigma[0]`.
    pub fn usable_rank(&self, rel_tol: f64) -> usize {
        let cutoff = rel_tol * self.sigma.first().copied().unwrap_or(0.0);
        self.sigma.iter().filter(|&&s| s > cutoff).count()
    }
}

/// Thin SVD with `k = min(rows, cols)` retained triplets.
pub fn thin_svd(m: &Matrix) -> Result<SvdFactors> {
    SVD_INVOCATIONS.fetch_add(1, Ordering::SeqCst);
    m.check_finite("svd input")?;
    svd_impl(m)
}

fn svd_impl(m: &Matrix) -> Result<SvdFactors> {
    if m.rows() < m.cols() {
        let t = svd_impl(&m.transpose())?;
        return Ok(SvdFactors { u: t.v, sigma: t.sigma, v: t.u });
    }
    if m.rows() > m.cols() {
        let (q, r) = householder_qr(m);
        let inner = jacobi_svd(&r)?;
        return Ok(SvdFactors { u: q.mul(&inner.u), sigma: inner.sigma, v: inner.v });
    }
    jacobi_svd(m)
}

/// One-sided Jacobi on `a` with `rows >= cols`; returns thin factors.
fn jacobi_svd(a: &Matrix) -> Result<SvdFactors> {
    let n = a.rows();
    let m = a.cols();
    let mut work = a.clone();
    let mut v = Matrix::identity(m);

    let mut converged = false;
    let mut sweeps = 0;
    while sweeps < JACOBI_MAX_SWEEPS {
        sweeps += 1;
        let mut rotated = false;
        for p in 0..m {
            for q in (p + 1)..m {
                let (alpha, beta, gamma) = column_moments(&work, p, q);
                if gamma.abs() <= JACOBI_TOL * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_columns(&mut work, p, q, c, s);
                rotate_columns(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NumericalFailure(format!(
            "one-sided Jacobi SVD did not converge within {JACOBI_MAX_SWEEPS} sweeps ({m} columns)"
        )));
    }

    let mut sigma: Vec<f64> = (0..m)
        .map(|j| work.col(j).iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();

    // Sort triplets by descending singular value, stable in the original
    // column index so equal values keep a fixed order.
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| sigma[j].partial_cmp(&sigma[i]).unwrap().then(i.cmp(&j)));

    let mut u = Matrix::zeros(n, m);
    let mut v_sorted = Matrix::zeros(m, m);
    let mut sigma_sorted = vec![0.0; m];
    for (dst, &src) in order.iter().enumerate() {
        sigma_sorted[dst] = sigma[src];
        v_sorted.col_mut(dst).copy_from_slice(v.col(src));
        if sigma[src] > 0.0 {
            let inv = 1.0 / sigma[src];
            let col = work.col(src);
            let out = u.col_mut(dst);
            for i in 0..n {
                out[i] = col[i] * inv;
            }
        }
    }
    sigma = sigma_sorted;

    // Null-space columns of U get a deterministic orthonormal completion so
    // the factor keeps orthonormal columns even for rank-deficient input.
    complete_orthonormal(&mut u, sigma.iter().filter(|&&s| s > 0.0).count());

    Ok(SvdFactors { u, sigma, v: v_sorted })
}

fn column_moments(m: &Matrix, p: usize, q: usize) -> (f64, f64, f64) {
    let cp = m.col(p);
    let cq = m.col(q);
    let mut alpha = 0.0;
    let mut beta = 0.0;
    let mut gamma = 0.0;
    for i in 0..cp.len() {
        alpha += cp[i] * cp[i];
        beta += cq[i] * cq[i];
        gamma += cp[i] * cq[i];
    }
    (alpha, beta, gamma)
}

fn rotate_columns(m: &mut Matrix, p: usize, q: usize, c: f64, s: f64) {
    let rows = m.rows();
    debug_assert!(p < q);
    let (head, tail) = m.data_mut().split_at_mut(q * rows);
    let cp = &mut head[p * rows..(p + 1) * rows];
    let cq = &mut tail[..rows];
    for i in 0..rows {
        let xp = cp[i];
        let xq = cq[i];
        cp[i] = c * xp - s * xq;
        cq[i] = s * xp + c * xq;
    }
}

/// Fill columns `rank..` of `u` with vectors orthonormal to all others,
/// chosen from canonical basis directions in index order.
fn complete_orthonormal(u: &mut Matrix, rank: usize) {
    let n = u.rows();
    let k = u.cols();
    let mut filled = rank;
    let mut candidate = 0;
    while filled < k && candidate < n {
        let mut w = vec![0.0; n];
        w[candidate] = 1.0;
        // Two projection passes keep the defect near machine precision.
        for _ in 0..2 {
            for j in 0..filled {
                let col = u.col(j);
                let dot: f64 = col.iter().zip(&w).map(|(a, b)| a * b).sum();
                for i in 0..n {
                    w[i] -= dot * col[i];
                }
            }
        }
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.5 {
            let out = u.col_mut(filled);
            for i in 0..n {
                out[i] = w[i] / norm;
            }
            filled += 1;
        }
        candidate += 1;
    }
    debug_assert_eq!(filled, k, "orthonormal completion exhausted candidates");
}

/// Complex thin SVD; used by the pseudo-inverse of complex mode matrices.
pub(crate) fn svd_complex(m: &CMatrix) -> Result<(CMatrix, Vec<f64>, CMatrix)> {
    if m.rows() < m.cols() {
        let (u, sigma, v) = svd_complex(&m.conj_transpose())?;
        return Ok((v, sigma, u));
    }
    if m.rows() > m.cols() {
        let (q, r) = householder_qr_complex(m);
        let (ur, sigma, v) = jacobi_svd_complex(&r)?;
        return Ok((q.mul(&ur), sigma, v));
    }
    jacobi_svd_complex(m)
}

fn jacobi_svd_complex(a: &CMatrix) -> Result<(CMatrix, Vec<f64>, CMatrix)> {
    let n = a.rows();
    let m = a.cols();
    let mut work = a.clone();
    let mut v = CMatrix::zeros(m, m);
    for j in 0..m {
        v[(j, j)] = Complex64::new(1.0, 0.0);
    }

    let mut converged = false;
    let mut sweeps = 0;
    while sweeps < JACOBI_MAX_SWEEPS {
        sweeps += 1;
        let mut rotated = false;
        for p in 0..m {
            for q in (p + 1)..m {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = Complex64::ZERO;
                for i in 0..n {
                    let zp = work[(i, p)];
                    let zq = work[(i, q)];
                    alpha += zp.norm_sqr();
                    beta += zq.norm_sqr();
                    gamma += zp.conj() * zq;
                }
                let g = gamma.norm();
                if g <= JACOBI_TOL * (alpha * beta).sqrt() || g == 0.0 {
                    continue;
                }
                rotated = true;
                // Absorb the phase of gamma so the 2x2 problem is real.
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_columns_complex(&mut work, p, q, c, s, phase);
                rotate_columns_complex(&mut v, p, q, c, s, phase);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NumericalFailure(format!(
            "complex Jacobi SVD did not converge within {JACOBI_MAX_SWEEPS} sweeps ({m} columns)"
        )));
    }

    let sigma_raw: Vec<f64> = (0..m)
        .map(|j| work.col(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| sigma_raw[j].partial_cmp(&sigma_raw[i]).unwrap().then(i.cmp(&j)));

    let mut u = CMatrix::zeros(n, m);
    let mut v_sorted = CMatrix::zeros(m, m);
    let mut sigma = vec![0.0; m];
    for (dst, &src) in order.iter().enumerate() {
        sigma[dst] = sigma_raw[src];
        v_sorted.col_mut(dst).copy_from_slice(v.col(src));
        if sigma[dst] > 0.0 {
            let inv = 1.0 / sigma[dst];
            let col = work.col(src);
            let out = u.col_mut(dst);
            for i in 0..n {
                out[i] = col[i] * inv;
            }
        }
    }
    complete_orthonormal_complex(&mut u, sigma.iter().filter(|&&s| s > 0.0).count());

    Ok((u, sigma, v_sorted))
}

fn rotate_columns_complex(m: &mut CMatrix, p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    let n = m.rows();
    for i in 0..n {
        let zp = m[(i, p)];
        let zq = m[(i, q)];
        m[(i, p)] = c * zp - s * (phase.conj() * zq);
        m[(i, q)] = s * (phase * zp) + c * zq;
    }
}

fn complete_orthonormal_complex(u: &mut CMatrix, rank: usize) {
    let n = u.rows();
    let k = u.cols();
    let mut filled = rank;
    let mut candidate = 0;
    while filled < k && candidate < n {
        let mut w = vec![Complex64::ZERO; n];
        w[candidate] = Complex64::new(1.0, 0.0);
        for _ in 0..2 {
            for j in 0..filled {
                let col = u.col(j);
                let mut dot = Complex64::ZERO;
                for i in 0..n {
                    dot += col[i].conj() * w[i];
                }
                for i in 0..n {
                    w[i] -= dot * col[i];
                }
            }
        }
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.5 {
            let out = u.col_mut(filled);
            for i in 0..n {
                out[i] = w[i] / norm;
            }
            filled += 1;
        }
        candidate += 1;
    }
    debug_assert_eq!(filled, k, "orthonormal completion exhausted candidates");
}
