//! Eigendecomposition of real square matrices.
//!
//! Householder reduction to Hessenberg form followed by the Francis
//! double-shift QR iteration, with eigenvectors recovered by
//! back-substitution from the quasi-triangular form. The iteration is the
//! classic EISPACK/JAMA formulation, which is robust for the small reduced
//! operators this crate produces.
//!
//! Output is canonicalized: eigenvalues sorted by descending magnitude
//! (ties by descending argument), each eigenvector scaled to unit 2-norm
//! with its largest-magnitude component made real and positive. Nonreal
//! eigenvalues of a real matrix come out in exactly conjugate pairs.

use super::dense::{CMatrix, Matrix};
use super::lu::inverse_complex;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Condition estimate above which the eigenvector basis is flagged.
pub const DEFECTIVE_COND_BOUND: f64 = 1.0e12;

/// Eigenvalues and eigenvectors of a real matrix.
#[derive(Debug, Clone)]
pub struct EigenPair {
    /// Eigenvalues in canonical order.
    pub values: Vec<Complex64>,
    /// Unit-norm eigenvectors as columns, ordered like `values`.
    pub vectors: CMatrix,
    /// One-norm condition estimate of the eigenvector matrix.
    pub cond_estimate: f64,
    /// True when `cond_estimate` exceeds [`DEFECTIVE_COND_BOUND`].
    pub defective: bool,
}

/// Full eigendecomposition of a real square matrix.
pub fn eig_general(a: &Matrix) -> Result<EigenPair> {
    if a.rows() != a.cols() {
        return Err(Error::invalid(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    a.check_finite("eigendecomposition input")?;
    let n = a.rows();

    if n == 1 {
        let mut vectors = CMatrix::zeros(1, 1);
        vectors[(0, 0)] = Complex64::new(1.0, 0.0);
        return Ok(EigenPair {
            values: vec![Complex64::new(a[(0, 0)], 0.0)],
            vectors,
            cond_estimate: 1.0,
            defective: false,
        });
    }

    let mut h = a.clone();
    let mut v = Matrix::identity(n);
    orthes(n, &mut h, &mut v);
    let mut d = vec![0.0_f64; n];
    let mut e = vec![0.0_f64; n];
    hqr2(n, &mut h, &mut v, &mut d, &mut e)?;

    // Lift the packed real representation into complex pairs: a slot with
    // e[j] > 0 starts a conjugate pair whose vector is V[:,j] + i V[:,j+1].
    let mut values = Vec::with_capacity(n);
    let mut vectors = CMatrix::zeros(n, n);
    let mut j = 0;
    while j < n {
        if e[j] == 0.0 {
            values.push(Complex64::new(d[j], 0.0));
            for i in 0..n {
                vectors[(i, j)] = Complex64::new(v[(i, j)], 0.0);
            }
            j += 1;
        } else {
            values.push(Complex64::new(d[j], e[j]));
            values.push(Complex64::new(d[j + 1], e[j + 1]));
            for i in 0..n {
                let re = v[(i, j)];
                let im = v[(i, j + 1)];
                vectors[(i, j)] = Complex64::new(re, im);
                vectors[(i, j + 1)] = Complex64::new(re, -im);
            }
            j += 2;
        }
    }

    for k in 0..n {
        normalize_column(&mut vectors, k);
    }

    // Canonical order: descending |lambda|, ties by descending argument so
    // the positive-imaginary member of each pair leads.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        let (mi, mj) = (values[i].norm(), values[j].norm());
        mj.partial_cmp(&mi)
            .unwrap()
            .then(values[j].arg().partial_cmp(&values[i].arg()).unwrap())
            .then(i.cmp(&j))
    });
    let sorted_values: Vec<Complex64> = order.iter().map(|&k| values[k]).collect();
    let mut sorted_vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        sorted_vectors.col_mut(dst).copy_from_slice(vectors.col(src));
    }

    let cond_estimate = match inverse_complex(&sorted_vectors) {
        Some(inv) => sorted_vectors.one_norm() * inv.one_norm(),
        None => f64::INFINITY,
    };

    Ok(EigenPair {
        values: sorted_values,
        vectors: sorted_vectors,
        cond_estimate,
        defective: cond_estimate > DEFECTIVE_COND_BOUND,
    })
}

/// Scale a column to unit norm with its largest component real positive.
pub(crate) fn normalize_column(m: &mut CMatrix, k: usize) {
    let n = m.rows();
    let mut best = 0usize;
    let mut best_mag = -1.0;
    let mut norm_sq = 0.0;
    for i in 0..n {
        let mag = m[(i, k)].norm_sqr();
        norm_sq += mag;
        if mag > best_mag {
            best_mag = mag;
            best = i;
        }
    }
    let norm = norm_sq.sqrt();
    if norm == 0.0 {
        return;
    }
    let inv = 1.0 / norm;
    for i in 0..n {
        let z = m[(i, k)] * inv;
        m[(i, k)] = z;
    }
    apply_phase_convention(m, k, best);
}

/// Rotate column `k` by a unit scalar so component `pivot` is real positive.
/// Exact no-op when the pivot is already real positive.
pub(crate) fn apply_phase_convention(m: &mut CMatrix, k: usize, pivot: usize) {
    let z = m[(pivot, k)];
    if z.im == 0.0 && z.re >= 0.0 {
        return;
    }
    let mag = z.norm();
    if mag == 0.0 {
        return;
    }
    let phase = z.conj() / mag;
    let n = m.rows();
    for i in 0..n {
        let w = m[(i, k)] * phase;
        m[(i, k)] = w;
    }
    // z * conj(z) has an exactly zero imaginary part; pin the sign bit too.
    let pv = m[(pivot, k)];
    m[(pivot, k)] = Complex64::new(pv.re, 0.0);
}

/// Householder reduction to upper Hessenberg form, accumulating the
/// orthogonal transformation in `v`.
fn orthes(n: usize, h: &mut Matrix, v: &mut Matrix) {
    if n < 3 {
        return;
    }
    let low = 0usize;
    let high = n - 1;
    let mut ort = vec![0.0_f64; n];

    for m in (low + 1)..high {
        let mut scale = 0.0;
        for i in m..=high {
            scale += h[(i, m - 1)].abs();
        }
        if scale == 0.0 {
            continue;
        }
        let mut hh = 0.0;
        for i in (m..=high).rev() {
            ort[i] = h[(i, m - 1)] / scale;
            hh += ort[i] * ort[i];
        }
        let mut g = hh.sqrt();
        if ort[m] > 0.0 {
            g = -g;
        }
        hh -= ort[m] * g;
        ort[m] -= g;

        for j in m..n {
            let mut f = 0.0;
            for i in (m..=high).rev() {
                f += ort[i] * h[(i, j)];
            }
            f /= hh;
            for i in m..=high {
                let val = h[(i, j)] - f * ort[i];
                h[(i, j)] = val;
            }
        }
        for i in 0..=high {
            let mut f = 0.0;
            for j in (m..=high).rev() {
                f += ort[j] * h[(i, j)];
            }
            f /= hh;
            for j in m..=high {
                let val = h[(i, j)] - f * ort[j];
                h[(i, j)] = val;
            }
        }
        ort[m] *= scale;
        h[(m, m - 1)] = scale * g;
    }

    for m in ((low + 1)..high).rev() {
        if h[(m, m - 1)] == 0.0 {
            continue;
        }
        for i in (m + 1)..=high {
            ort[i] = h[(i, m - 1)];
        }
        for j in m..=high {
            let mut g = 0.0;
            for i in m..=high {
                g += ort[i] * v[(i, j)];
            }
            // Double division avoids possible underflow.
            g = (g / ort[m]) / h[(m, m - 1)];
            for i in m..=high {
                let val = v[(i, j)] + g * ort[i];
                v[(i, j)] = val;
            }
        }
    }
}

fn cdiv(xr: f64, xi: f64, yr: f64, yi: f64) -> (f64, f64) {
    if yr.abs() > yi.abs() {
        let r = yi / yr;
        let d = yr + r * yi;
        ((xr + r * xi) / d, (xi - r * xr) / d)
    } else {
        let r = yr / yi;
        let d = yi + r * yr;
        ((r * xr + xi) / d, (r * xi - xr) / d)
    }
}

/// Francis double-shift QR on a Hessenberg matrix with eigenvector
/// back-substitution; `d`/`e` receive eigenvalue real/imaginary parts and
/// `v` the eigenvectors in packed real form.
#[allow(clippy::too_many_lines)]
fn hqr2(nn: usize, h: &mut Matrix, v: &mut Matrix, d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let low: isize = 0;
    let high: isize = nn as isize - 1;
    let eps = 2.0_f64.powi(-52);
    let mut exshift = 0.0;
    let (mut p, mut q, mut r, mut s, mut z) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let (mut t, mut w, mut x, mut y);

    let mut norm = 0.0;
    for i in 0..nn {
        for j in i.saturating_sub(1)..nn {
            norm += h[(i, j)].abs();
        }
    }

    let mut n: isize = nn as isize - 1;
    let mut iter = 0usize;
    let mut total_iters = 0usize;
    let iter_cap = 64 * nn.max(8);

    while n >= low {
        let nu = n as usize;
        // Look for a single small subdiagonal element.
        let mut l = n;
        while l > low {
            let lu = l as usize;
            s = h[(lu - 1, lu - 1)].abs() + h[(lu, lu)].abs();
            if s == 0.0 {
                s = norm;
            }
            if h[(lu, lu - 1)].abs() < eps * s {
                break;
            }
            l -= 1;
        }

        if l == n {
            // One real root found.
            h[(nu, nu)] += exshift;
            d[nu] = h[(nu, nu)];
            e[nu] = 0.0;
            n -= 1;
            iter = 0;
        } else if l == n - 1 {
            // A pair of roots found.
            w = h[(nu, nu - 1)] * h[(nu - 1, nu)];
            p = (h[(nu - 1, nu - 1)] - h[(nu, nu)]) / 2.0;
            q = p * p + w;
            z = q.abs().sqrt();
            h[(nu, nu)] += exshift;
            h[(nu - 1, nu - 1)] += exshift;
            x = h[(nu, nu)];

            if q >= 0.0 {
                // Real pair.
                z = if p >= 0.0 { p + z } else { p - z };
                d[nu - 1] = x + z;
                d[nu] = d[nu - 1];
                if z != 0.0 {
                    d[nu] = x - w / z;
                }
                e[nu - 1] = 0.0;
                e[nu] = 0.0;
                x = h[(nu, nu - 1)];
                s = x.abs() + z.abs();
                p = x / s;
                q = z / s;
                r = (p * p + q * q).sqrt();
                p /= r;
                q /= r;
                for j in (nu - 1)..nn {
                    z = h[(nu - 1, j)];
                    h[(nu - 1, j)] = q * z + p * h[(nu, j)];
                    h[(nu, j)] = q * h[(nu, j)] - p * z;
                }
                for i in 0..=nu {
                    z = h[(i, nu - 1)];
                    h[(i, nu - 1)] = q * z + p * h[(i, nu)];
                    h[(i, nu)] = q * h[(i, nu)] - p * z;
                }
                for i in low as usize..=high as usize {
                    z = v[(i, nu - 1)];
                    v[(i, nu - 1)] = q * z + p * v[(i, nu)];
                    v[(i, nu)] = q * v[(i, nu)] - p * z;
                }
            } else {
                // Complex pair.
                d[nu - 1] = x + p;
                d[nu] = x + p;
                e[nu - 1] = z;
                e[nu] = -z;
            }
            n -= 2;
            iter = 0;
        } else {
            // No convergence yet; form an implicit shift.
            x = h[(nu, nu)];
            y = 0.0;
            w = 0.0;
            if l < n {
                y = h[(nu - 1, nu - 1)];
                w = h[(nu, nu - 1)] * h[(nu - 1, nu)];
            }

            // Wilkinson's original ad hoc shift.
            if iter == 10 {
                exshift += x;
                for i in low as usize..=nu {
                    h[(i, i)] -= x;
                }
                s = h[(nu, nu - 1)].abs() + h[(nu - 1, nu - 2)].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }

            // MATLAB's new ad hoc shift.
            if iter == 30 {
                s = (y - x) / 2.0;
                s = s * s + w;
                if s > 0.0 {
                    s = s.sqrt();
                    if y < x {
                        s = -s;
                    }
                    s = x - w / ((y - x) / 2.0 + s);
                    for i in low as usize..=nu {
                        h[(i, i)] -= s;
                    }
                    exshift += s;
                    x = 0.964;
                    y = x;
                    w = x;
                }
            }

            iter += 1;
            total_iters += 1;
            if total_iters > iter_cap {
                return Err(Error::NumericalFailure(format!(
                    "QR eigenvalue iteration exceeded {iter_cap} total steps on a {nn}x{nn} matrix \
                     ({} eigenvalues still unresolved)",
                    n + 1
                )));
            }

            // Look for two consecutive small sub-diagonal elements.
            let mut m = n - 2;
            while m >= l {
                let mu = m as usize;
                z = h[(mu, mu)];
                r = x - z;
                s = y - z;
                p = (r * s - w) / h[(mu + 1, mu)] + h[(mu, mu + 1)];
                q = h[(mu + 1, mu + 1)] - z - r - s;
                r = h[(mu + 2, mu + 1)];
                s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                if h[(mu, mu - 1)].abs() * (q.abs() + r.abs())
                    < eps * (p.abs() * (h[(mu - 1, mu - 1)].abs() + z.abs() + h[(mu + 1, mu + 1)].abs()))
                {
                    break;
                }
                m -= 1;
            }

            let mu = m as usize;
            for i in (mu + 2)..=nu {
                h[(i, i - 2)] = 0.0;
                if i > mu + 2 {
                    h[(i, i - 3)] = 0.0;
                }
            }

            // Double QR step involving rows l..n and columns m..n.
            for k in mu..nu {
                let notlast = k != nu - 1;
                if k != mu {
                    p = h[(k, k - 1)];
                    q = h[(k + 1, k - 1)];
                    r = if notlast { h[(k + 2, k - 1)] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x == 0.0 {
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                }
                s = (p * p + q * q + r * r).sqrt();
                if p < 0.0 {
                    s = -s;
                }
                if s != 0.0 {
                    if k != mu {
                        h[(k, k - 1)] = -s * x;
                    } else if l != m {
                        h[(k, k - 1)] = -h[(k, k - 1)];
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;

                    for j in k..nn {
                        p = h[(k, j)] + q * h[(k + 1, j)];
                        if notlast {
                            p += r * h[(k + 2, j)];
                            h[(k + 2, j)] -= p * z;
                        }
                        h[(k, j)] -= p * x;
                        h[(k + 1, j)] -= p * y;
                    }
                    for i in 0..=nu.min(k + 3) {
                        p = x * h[(i, k)] + y * h[(i, k + 1)];
                        if notlast {
                            p += z * h[(i, k + 2)];
                            h[(i, k + 2)] -= p * r;
                        }
                        h[(i, k)] -= p;
                        h[(i, k + 1)] -= p * q;
                    }
                    for i in low as usize..=high as usize {
                        p = x * v[(i, k)] + y * v[(i, k + 1)];
                        if notlast {
                            p += z * v[(i, k + 2)];
                            v[(i, k + 2)] -= p * r;
                        }
                        v[(i, k)] -= p;
                        v[(i, k + 1)] -= p * q;
                    }
                }
            }
        }
    }

    // Back-substitute to find vectors of the upper triangular form.
    if norm == 0.0 {
        return Ok(());
    }
    for n in (0..nn).rev() {
        p = d[n];
        q = e[n];

        if q == 0.0 {
            // Real vector.
            let mut l = n;
            h[(n, n)] = 1.0;
            for i in (0..n).rev() {
                w = h[(i, i)] - p;
                r = 0.0;
                for j in l..=n {
                    r += h[(i, j)] * h[(j, n)];
                }
                if e[i] < 0.0 {
                    z = w;
                    s = r;
                } else {
                    l = i;
                    if e[i] == 0.0 {
                        if w != 0.0 {
                            h[(i, n)] = -r / w;
                        } else {
                            h[(i, n)] = -r / (eps * norm);
                        }
                    } else {
                        // Solve the real 2x2 block equations.
                        x = h[(i, i + 1)];
                        y = h[(i + 1, i)];
                        q = (d[i] - p) * (d[i] - p) + e[i] * e[i];
                        t = (x * s - z * r) / q;
                        h[(i, n)] = t;
                        if x.abs() > z.abs() {
                            h[(i + 1, n)] = (-r - w * t) / x;
                        } else {
                            h[(i + 1, n)] = (-s - y * t) / z;
                        }
                    }
                    // Overflow control.
                    t = h[(i, n)].abs();
                    if (eps * t) * t > 1.0 {
                        for j in i..=n {
                            h[(j, n)] /= t;
                        }
                    }
                }
            }
        } else if q < 0.0 {
            // Complex vector; last component imaginary.
            let mut l = n - 1;
            if h[(n, n - 1)].abs() > h[(n - 1, n)].abs() {
                h[(n - 1, n - 1)] = q / h[(n, n - 1)];
                h[(n - 1, n)] = -(h[(n, n)] - p) / h[(n, n - 1)];
            } else {
                let (re, im) = cdiv(0.0, -h[(n - 1, n)], h[(n - 1, n - 1)] - p, q);
                h[(n - 1, n - 1)] = re;
                h[(n - 1, n)] = im;
            }
            h[(n, n - 1)] = 0.0;
            h[(n, n)] = 1.0;
            for i in (0..n.saturating_sub(1)).rev() {
                let mut ra = 0.0;
                let mut sa = 0.0;
                for j in l..=n {
                    ra += h[(i, j)] * h[(j, n - 1)];
                    sa += h[(i, j)] * h[(j, n)];
                }
                w = h[(i, i)] - p;

                if e[i] < 0.0 {
                    z = w;
                    r = ra;
                    s = sa;
                } else {
                    l = i;
                    if e[i] == 0.0 {
                        let (re, im) = cdiv(-ra, -sa, w, q);
                        h[(i, n - 1)] = re;
                        h[(i, n)] = im;
                    } else {
                        // Solve complex 2x2 block equations.
                        x = h[(i, i + 1)];
                        y = h[(i + 1, i)];
                        let mut vr = (d[i] - p) * (d[i] - p) + e[i] * e[i] - q * q;
                        let vi = (d[i] - p) * 2.0 * q;
                        if vr == 0.0 && vi == 0.0 {
                            vr = eps * norm * (w.abs() + q.abs() + x.abs() + y.abs() + z.abs());
                        }
                        let (re, im) =
                            cdiv(x * r - z * ra + q * sa, x * s - z * sa - q * ra, vr, vi);
                        h[(i, n - 1)] = re;
                        h[(i, n)] = im;
                        if x.abs() > z.abs() + q.abs() {
                            h[(i + 1, n - 1)] = (-ra - w * h[(i, n - 1)] + q * h[(i, n)]) / x;
                            h[(i + 1, n)] = (-sa - w * h[(i, n)] - q * h[(i, n - 1)]) / x;
                        } else {
                            let (re, im) =
                                cdiv(-r - y * h[(i, n - 1)], -s - y * h[(i, n)], z, q);
                            h[(i + 1, n - 1)] = re;
                            h[(i + 1, n)] = im;
                        }
                    }
                    // Overflow control.
                    t = h[(i, n - 1)].abs().max(h[(i, n)].abs());
                    if (eps * t) * t > 1.0 {
                        for j in i..=n {
                            h[(j, n - 1)] /= t;
                            h[(j, n)] /= t;
                        }
                    }
                }
            }
        }
    }

    // Back-transform to eigenvectors of the original matrix.
    for j in (0..nn).rev() {
        for i in 0..nn {
            z = 0.0;
            for k in 0..=j {
                z += v[(i, k)] * h[(k, j)];
            }
            v[(i, j)] = z;
        }
    }

    Ok(())
}
