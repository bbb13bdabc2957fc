//! Small complex linear solves via LU with partial pivoting.

use super::dense::CMatrix;
use num_complex::Complex64;

/// LU factorization with partial pivoting. Returns `None` when a pivot is
/// exactly zero (matrix singular to working precision).
fn lu_factor(a: &CMatrix) -> Option<(CMatrix, Vec<usize>)> {
    let n = a.rows();
    assert_eq!(n, a.cols(), "LU needs a square matrix");
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();

    for k in 0..n {
        let mut pivot = k;
        let mut best = lu[(k, k)].norm();
        for i in (k + 1)..n {
            let mag = lu[(i, k)].norm();
            if mag > best {
                best = mag;
                pivot = i;
            }
        }
        if best == 0.0 {
            return None;
        }
        if pivot != k {
            perm.swap(pivot, k);
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(pivot, j)];
                lu[(pivot, j)] = tmp;
            }
        }
        let diag = lu[(k, k)];
        for i in (k + 1)..n {
            let factor = lu[(i, k)] / diag;
            lu[(i, k)] = factor;
            for j in (k + 1)..n {
                let val = lu[(i, j)] - factor * lu[(k, j)];
                lu[(i, j)] = val;
            }
        }
    }
    Some((lu, perm))
}

/// Solve `a x = b` for several right-hand sides given as columns.
pub fn solve_complex(a: &CMatrix, rhs: &CMatrix) -> Option<CMatrix> {
    let n = a.rows();
    let (lu, perm) = lu_factor(a)?;
    let mut x = CMatrix::zeros(n, rhs.cols());
    for col in 0..rhs.cols() {
        let mut y = vec![Complex64::ZERO; n];
        for i in 0..n {
            let mut acc = rhs[(perm[i], col)];
            for j in 0..i {
                acc -= lu[(i, j)] * y[j];
            }
            y[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = y[i];
            for j in (i + 1)..n {
                acc -= lu[(i, j)] * x[(j, col)];
            }
            x[(i, col)] = acc / lu[(i, i)];
        }
    }
    Some(x)
}

/// Explicit inverse; `None` when singular.
pub fn inverse_complex(a: &CMatrix) -> Option<CMatrix> {
    let n = a.rows();
    let mut eye = CMatrix::zeros(n, n);
    for i in 0..n {
        eye[(i, i)] = Complex64::new(1.0, 0.0);
    }
    solve_complex(a, &eye)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        let a = CMatrix::from_fn(4, 4, |i, j| {
            Complex64::new((i as f64 + 1.0) * 0.3 + j as f64, (i as f64 - j as f64) * 0.5)
                + if i == j { Complex64::new(5.0, 0.0) } else { Complex64::ZERO }
        });
        let inv = inverse_complex(&a).expect("invertible");
        let prod = a.mul(&inv);
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::ZERO };
                assert!((prod[(i, j)] - expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn singular_detected() {
        let a = CMatrix::zeros(3, 3);
        assert!(inverse_complex(&a).is_none());
    }
}
