//! Classical single-parameter dynamic mode decomposition.
//!
//! Snapshot splitting, energy-based rank truncation, the reduced Koopman
//! operator, full-state modes, initial coefficients, and time
//! reconstruction.

use crate::error::{Error, Result};
use crate::linalg::{
    eig_general, pinv_apply_complex, thin_svd, CMatrix, Matrix, SvdFactors, DEFAULT_PINV_TOL,
};
use crate::snapshot::SnapshotSeries;
use num_complex::Complex64;

/// Singular values this far below the leading one are treated as zero rank.
pub const RANK_FLOOR_REL: f64 = 1.0e-14;

/// Relative tolerance for detecting integer time-step multiples.
const INTEGER_STEP_TOL: f64 = 1.0e-9;

/// Imaginary residue above this fraction of the real part is an error.
const IMAG_RESIDUE_BOUND: f64 = 1.0e-6;

/// Linear surrogate: modes, discrete eigenvalues, initial coefficients.
///
/// Evaluable at any `t >= 0` through `reconstruct`; the eigenvalue list is
/// conjugate-closed whenever the source data is real.
#[derive(Debug, Clone)]
pub struct DmdModel {
    /// Full-state modes, n x r.
    pub modes: CMatrix,
    /// Discrete-time eigenvalues, length r.
    pub eigenvalues: Vec<Complex64>,
    /// Initial coefficients, length r.
    pub init_coeffs: Vec<Complex64>,
    /// Snapshot spacing in seconds.
    pub dt: f64,
    /// Truncation rank r.
    pub rank: usize,
}

/// Split a series into the lagged and forward snapshot matrices: columns
/// `0..m` and `1..m+1` of the state matrix respectively.
pub fn split_snapshots(series: &SnapshotSeries) -> Result<(Matrix, Matrix)> {
    split_states(series.states())
}

pub(crate) fn split_states(states: &Matrix) -> Result<(Matrix, Matrix)> {
    let cols = states.cols();
    if cols < 3 {
        return Err(Error::invalid(format!(
            "need at least 3 snapshot columns to split, got {cols}"
        )));
    }
    let lagged = states.columns(0, cols - 1);
    let forward = states.columns(1, cols);
    Ok((lagged, forward))
}

/// Smallest rank whose cumulative singular-value fraction reaches `tau`,
/// clamped to `r_max` when given. An all-zero spectrum yields rank 1.
pub fn select_rank(sigma: &[f64], tau: f64, r_max: Option<usize>) -> Result<usize> {
    if sigma.is_empty() {
        return Err(Error::invalid("select_rank needs a nonempty spectrum"));
    }
    if !(tau > 0.0 && tau <= 1.0) {
        return Err(Error::invalid(format!("tau must lie in (0, 1], got {tau}")));
    }
    if sigma.iter().any(|s| !s.is_finite() || *s < 0.0) {
        return Err(Error::invalid("singular values must be finite and nonnegative"));
    }
    if sigma.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::invalid("singular values must be nonincreasing"));
    }
    if let Some(cap) = r_max {
        if cap == 0 {
            return Err(Error::invalid("rank cap must be at least 1"));
        }
    }
    let total: f64 = sigma.iter().sum();
    let mut r = 1;
    if total > 0.0 {
        let mut cum = 0.0;
        for (i, s) in sigma.iter().enumerate() {
            cum += s;
            if cum / total >= tau {
                r = i + 1;
                break;
            }
            r = i + 1;
        }
    }
    if let Some(cap) = r_max {
        r = r.min(cap);
    }
    Ok(r)
}

/// Reduced Koopman operator `U_r^T S+ V_r Sigma_r^-1` (r x r).
pub fn reduced_koopman(svd: &SvdFactors, forward: &Matrix, r: usize) -> Result<Matrix> {
    if r == 0 || r > svd.sigma.len() {
        return Err(Error::invalid(format!(
            "rank {r} outside the available {} singular values",
            svd.sigma.len()
        )));
    }
    let sigma_max = svd.sigma[0];
    if svd.sigma[r - 1] <= RANK_FLOOR_REL * sigma_max || svd.sigma[r - 1] == 0.0 {
        return Err(Error::RankDeficient(format!(
            "singular value {} at index {} is below {RANK_FLOOR_REL} of the leading value {}",
            svd.sigma[r - 1],
            r,
            sigma_max
        )));
    }
    let u_r = svd.u.columns(0, r);
    let v_r = svd.v.columns(0, r);
    let mut a = u_r.tr_mul(forward).mul(&v_r);
    let inv_sigma: Vec<f64> = svd.sigma[..r].iter().map(|s| 1.0 / s).collect();
    a.scale_columns(&inv_sigma);
    Ok(a)
}

/// Run the full decomposition on one series.
///
/// `r_override` bypasses the energy criterion; it must not exceed the
/// number of usable singular values.
pub fn fit_dmd(series: &SnapshotSeries, tau: f64, r_override: Option<usize>) -> Result<DmdModel> {
    let (lagged, forward) = split_snapshots(series)?;
    let svd = thin_svd(&lagged)?;
    let r = match r_override {
        Some(r) => {
            if r == 0 || r > svd.sigma.len() {
                return Err(Error::invalid(format!(
                    "rank override {r} outside the available {} singular values",
                    svd.sigma.len()
                )));
            }
            r
        }
        None => select_rank(&svd.sigma, tau, None)?,
    };
    let koopman = reduced_koopman(&svd, &forward, r)?;
    let eig = eig_general(&koopman)?;
    let u_r = svd.u.columns(0, r);
    let modes = eig.vectors.left_mul_real(&u_r);
    let y0: Vec<Complex64> =
        series.state_at(0).iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let init_coeffs = pinv_apply_complex(&modes, &y0, DEFAULT_PINV_TOL)?;

    let model = DmdModel {
        modes,
        eigenvalues: eig.values,
        init_coeffs,
        dt: series.dt(),
        rank: r,
    };
    // Real data must reproduce a (numerically) real state at t = 0.
    let at0 = model.modes.matvec(&model.init_coeffs);
    let re_norm: f64 = at0.iter().map(|z| z.re * z.re).sum::<f64>().sqrt();
    let im_norm: f64 = at0.iter().map(|z| z.im * z.im).sum::<f64>().sqrt();
    if im_norm > 1.0e-8 * re_norm.max(f64::MIN_POSITIVE) && im_norm > 0.0 {
        return Err(Error::NumericalFailure(format!(
            "initial-state reconstruction has imaginary norm {im_norm:.3e} vs real norm {re_norm:.3e}"
        )));
    }
    Ok(model)
}

/// `lambda^(t/dt)` with an exact integer-power path for on-grid times and
/// the principal logarithm otherwise.
pub(crate) fn eigen_power(lambda: Complex64, exponent: f64) -> Result<Complex64> {
    let rounded = exponent.round();
    if (exponent - rounded).abs() <= INTEGER_STEP_TOL * exponent.abs().max(1.0) {
        let k = rounded as i64;
        if k < 0 {
            return Err(Error::invalid("negative time steps are not supported"));
        }
        return Ok(powi_complex(lambda, k as u64));
    }
    if lambda == Complex64::ZERO {
        return Err(Error::invalid(
            "zero eigenvalue cannot be raised to a non-integer exponent",
        ));
    }
    Ok((lambda.ln() * exponent).exp())
}

fn powi_complex(base: Complex64, mut exp: u64) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    let mut b = base;
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= b;
        }
        b *= b;
        exp >>= 1;
    }
    acc
}

impl DmdModel {
    /// Complex state at time `t` before projection to reals.
    fn evaluate_complex(&self, t: f64) -> Result<Vec<Complex64>> {
        if !(t >= 0.0) {
            return Err(Error::invalid(format!("reconstruction time must be >= 0, got {t}")));
        }
        let exponent = t / self.dt;
        let coeffs: Vec<Complex64> = self
            .eigenvalues
            .iter()
            .zip(&self.init_coeffs)
            .map(|(&lam, &b)| eigen_power(lam, exponent).map(|p| p * b))
            .collect::<Result<_>>()?;
        Ok(self.modes.matvec(&coeffs))
    }

    /// Real state at time `t` plus the relative imaginary residue that was
    /// discarded by the projection.
    pub fn reconstruct_detailed(&self, t: f64) -> Result<(Vec<f64>, f64)> {
        let z = self.evaluate_complex(t)?;
        let re: Vec<f64> = z.iter().map(|v| v.re).collect();
        let re_norm: f64 = re.iter().map(|x| x * x).sum::<f64>().sqrt();
        let im_norm: f64 = z.iter().map(|v| v.im * v.im).sum::<f64>().sqrt();
        let ratio = if im_norm == 0.0 { 0.0 } else { im_norm / re_norm.max(f64::MIN_POSITIVE) };
        if im_norm > IMAG_RESIDUE_BOUND * re_norm {
            return Err(Error::NumericalFailure(format!(
                "imaginary residue {im_norm:.3e} exceeds {IMAG_RESIDUE_BOUND} of the real norm {re_norm:.3e} at t = {t}"
            )));
        }
        Ok((re, ratio))
    }

    /// Real state at time `t`.
    pub fn reconstruct(&self, t: f64) -> Result<Vec<f64>> {
        Ok(self.reconstruct_detailed(t)?.0)
    }

    /// States at several times as matrix columns, with the worst relative
    /// imaginary residue across the sweep.
    pub fn reconstruct_series(&self, times: &[f64]) -> Result<(Matrix, f64)> {
        if times.is_empty() {
            return Err(Error::invalid("need at least one reconstruction time"));
        }
        let n = self.modes.rows();
        let mut out = Matrix::zeros(n, times.len());
        let mut worst = 0.0_f64;
        for (j, &t) in times.iter().enumerate() {
            let (state, ratio) = self.reconstruct_detailed(t)?;
            worst = worst.max(ratio);
            out.col_mut(j).copy_from_slice(&state);
        }
        Ok((out, worst))
    }
}

/// Free-function form of [`DmdModel::reconstruct`].
pub fn reconstruct(model: &DmdModel, t: f64) -> Result<Vec<f64>> {
    model.reconstruct(t)
}
