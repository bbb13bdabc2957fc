//! Householder QR with explicit thin factors.
//!
//! Tall matrices are reduced to their square triangular factor before any
//! iterative SVD work; forming thin `Q` costs one extra backward pass. The
//! complex variant keeps `tau` real by absorbing the pivot phase into the
//! reflection target, so one code shape serves both fields.

use super::dense::{CMatrix, Matrix};
use crate::par;
use num_complex::Complex64;

/// Thin QR of a real matrix with `rows >= cols`: returns `(q, r)` with
/// `q` rows x cols having orthonormal columns and `r` upper triangular.
pub fn householder_qr(a: &Matrix) -> (Matrix, Matrix) {
    let n = a.rows();
    let m = a.cols();
    assert!(n >= m, "householder_qr requires rows >= cols");

    let mut work = a.clone();
    // Reflector k lives in work[k.., k] with implicit unit pivot; taus[k]
    // scales H_k = I - tau v v^T.
    let mut taus = vec![0.0_f64; m];
    let mut betas = vec![0.0_f64; m];

    for k in 0..m {
        let (norm, pivot) = {
            let col = work.col(k);
            let mut s = 0.0;
            for &x in &col[k..] {
                s += x * x;
            }
            (s.sqrt(), col[k])
        };
        if norm == 0.0 {
            taus[k] = 0.0;
            betas[k] = 0.0;
            continue;
        }
        let beta = if pivot >= 0.0 { -norm } else { norm };
        let v0 = pivot - beta;
        {
            let col = work.col_mut(k);
            col[k] = v0;
        }
        // tau = 2 / v^T v with the unnormalized v stored in place.
        let vtv = {
            let col = work.col(k);
            let mut s = 0.0;
            for &x in &col[k..] {
                s += x * x;
            }
            s
        };
        let tau = if vtv == 0.0 { 0.0 } else { 2.0 / vtv };
        taus[k] = tau;
        betas[k] = beta;

        if tau != 0.0 && k + 1 < m {
            let (head, tail) = split_columns(&mut work, k + 1);
            let v = &head[k * n..(k + 1) * n];
            par::for_each_chunk_mut(tail, n, |_, col| {
                let mut dot = 0.0;
                for i in k..n {
                    dot += v[i] * col[i];
                }
                let scale = tau * dot;
                for i in k..n {
                    col[i] -= scale * v[i];
                }
            });
        }
    }

    // Above-diagonal entries stayed in place during the factorization; the
    // diagonal is the reflection target, or the untouched pivot when the
    // subcolumn was already zero.
    let mut r = Matrix::zeros(m, m);
    for j in 0..m {
        for i in 0..j {
            r[(i, j)] = work[(i, j)];
        }
        r[(j, j)] = if taus[j] == 0.0 { work[(j, j)] } else { betas[j] };
    }

    // Accumulate thin Q by applying H_0..H_{m-1} to the first m identity
    // columns, back to front.
    let mut q = Matrix::zeros(n, m);
    for j in 0..m {
        q[(j, j)] = 1.0;
    }
    for k in (0..m).rev() {
        let tau = taus[k];
        if tau == 0.0 {
            continue;
        }
        let v: Vec<f64> = work.col(k)[k..].to_vec();
        par::for_each_chunk_mut(q.data_mut(), n, |_, col| {
            let mut dot = 0.0;
            for (i, vi) in v.iter().enumerate() {
                dot += vi * col[k + i];
            }
            let scale = tau * dot;
            for (i, vi) in v.iter().enumerate() {
                col[k + i] -= scale * vi;
            }
        });
    }

    (q, r)
}

/// Thin QR of a complex matrix with `rows >= cols`.
pub fn householder_qr_complex(a: &CMatrix) -> (CMatrix, CMatrix) {
    let n = a.rows();
    let m = a.cols();
    assert!(n >= m, "householder_qr_complex requires rows >= cols");

    let mut work = a.clone();
    let mut taus = vec![0.0_f64; m];
    let mut betas = vec![Complex64::ZERO; m];

    for k in 0..m {
        let (norm, pivot) = {
            let col = work.col(k);
            let mut s = 0.0;
            for z in &col[k..] {
                s += z.norm_sqr();
            }
            (s.sqrt(), col[k])
        };
        if norm == 0.0 {
            taus[k] = 0.0;
            continue;
        }
        // beta = -phase(pivot) * norm keeps v^H x real.
        let phase = if pivot.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { pivot / pivot.norm() };
        let beta = -phase * norm;
        {
            let col = work.col_mut(k);
            col[k] = pivot - beta;
        }
        let vtv = {
            let col = work.col(k);
            let mut s = 0.0;
            for z in &col[k..] {
                s += z.norm_sqr();
            }
            s
        };
        let tau = if vtv == 0.0 { 0.0 } else { 2.0 / vtv };
        taus[k] = tau;
        betas[k] = beta;

        if tau != 0.0 {
            for j in (k + 1)..m {
                let mut dot = Complex64::ZERO;
                for i in k..n {
                    dot += work[(i, k)].conj() * work[(i, j)];
                }
                let scale = tau * dot;
                for i in k..n {
                    let vi = work[(i, k)];
                    let w = work[(i, j)] - scale * vi;
                    work[(i, j)] = w;
                }
            }
        }
    }

    let mut r = CMatrix::zeros(m, m);
    for j in 0..m {
        for i in 0..j {
            r[(i, j)] = work[(i, j)];
        }
        r[(j, j)] = if taus[j] == 0.0 { work[(j, j)] } else { betas[j] };
    }

    let mut q = CMatrix::zeros(n, m);
    for j in 0..m {
        q[(j, j)] = Complex64::new(1.0, 0.0);
    }
    for k in (0..m).rev() {
        let tau = taus[k];
        if tau == 0.0 {
            continue;
        }
        let v: Vec<Complex64> = work.col(k)[k..].to_vec();
        for j in 0..m {
            let col = q.col_mut(j);
            let mut dot = Complex64::ZERO;
            for (i, vi) in v.iter().enumerate() {
                dot += vi.conj() * col[k + i];
            }
            let scale = tau * dot;
            for (i, vi) in v.iter().enumerate() {
                col[k + i] -= scale * vi;
            }
        }
    }

    (q, r)
}

/// Split the backing store at column `at`: `(prefix, suffix)` slices.
fn split_columns(m: &mut Matrix, at: usize) -> (&[f64], &mut [f64]) {
    let rows = m.rows();
    let (head, tail) = m.data_mut().split_at_mut(at * rows);
    (&*head, tail)
}
