//! Per-parameter decompositions and the rEPI / rKOI prediction schemes.

use super::neighbors::{
    extrapolation_diagnostics, interpolation_weights, nearest_neighbors, WeightScheme,
    DEFAULT_EXTRAPOLATION_WARN_FRACTION,
};
use super::pairing::hungarian;
use super::{LocalDecomposition, Method, ModelMeta, Prediction, TrainingSet};
use crate::dmd::{reduced_koopman, select_rank, split_snapshots, DmdModel, RANK_FLOOR_REL};
use crate::error::{Diagnostic, Error, Result};
use crate::linalg::{
    eig_general, pinv_apply_complex, thin_svd, CMatrix, Matrix, SvdFactors, DEFAULT_PINV_TOL,
};
use crate::par;
use crate::snapshot::{whole_state_layout, SnapshotSeries};
use num_complex::Complex64;

/// Pairing cost above this fraction of the total eigenvalue mass raises a
/// crossing warning.
pub const CROSSING_WARN_FACTOR: f64 = 0.5;

/// Decompose every training series at a shared rank: per-series thin SVD,
/// candidate rank by the energy criterion, global rank as the maximum,
/// reduced operators, eigen-pairs, and initial coefficients, followed by
/// sign alignment and eigen-pairing against series 0.
pub fn fit_local(
    ts: &TrainingSet,
    tau: f64,
    r_override: Option<usize>,
) -> Result<(Vec<LocalDecomposition>, Vec<Diagnostic>)> {
    let svds: Vec<Result<(SvdFactors, usize)>> = par::map_slice(ts.series(), |s| {
        let (lagged, _) = split_snapshots(s)?;
        let svd = thin_svd(&lagged)?;
        let candidate = match r_override {
            Some(r) => r,
            None => select_rank(&svd.sigma, tau, None)?,
        };
        Ok((svd, candidate))
    });
    let mut factors = Vec::with_capacity(ts.len());
    for r in svds {
        factors.push(r?);
    }

    let rank = factors.iter().map(|(_, c)| *c).max().unwrap();
    for (j, (svd, _)) in factors.iter().enumerate() {
        if rank > svd.usable_rank(RANK_FLOOR_REL) {
            return Err(Error::RankDeficient(format!(
                "series {j} supports rank {} but the shared rank is {rank}",
                svd.usable_rank(RANK_FLOOR_REL)
            )));
        }
    }

    let built: Vec<Result<LocalDecomposition>> = {
        let items: Vec<(usize, &SvdFactors)> =
            factors.iter().enumerate().map(|(j, (svd, _))| (j, svd)).collect();
        par::map_slice(&items, |(j, svd)| build_decomposition(&ts.series()[*j], svd, rank))
    };
    let mut decomps = Vec::with_capacity(ts.len());
    for d in built {
        decomps.push(d?);
    }

    let decomps = align_modes(decomps, 0);
    let (decomps, diagnostics) = pair_eigensystems(decomps, 0);
    Ok((decomps, diagnostics))
}

fn build_decomposition(
    series: &SnapshotSeries,
    svd: &SvdFactors,
    rank: usize,
) -> Result<LocalDecomposition> {
    let (_, forward) = split_snapshots(series)?;
    let koopman = reduced_koopman(svd, &forward, rank)?;
    let eig = eig_general(&koopman)?;
    let u = svd.u.columns(0, rank);
    let v = svd.v.columns(0, rank);
    let modes = eig.vectors.left_mul_real(&u);
    let y0: Vec<Complex64> =
        series.state_at(0).iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let init_coeffs = pinv_apply_complex(&modes, &y0, DEFAULT_PINV_TOL)?;
    Ok(LocalDecomposition {
        params: series.params().to_vec(),
        u,
        sigma: svd.sigma[..rank].to_vec(),
        v,
        koopman,
        eig_values: eig.values,
        eig_vectors: eig.vectors,
        init_coeffs,
        dt: series.dt(),
    })
}

/// Flip singular-vector column signs so every decomposition's left modes
/// have nonnegative inner products with the reference decomposition's.
/// The reduced operator, eigenvectors, and initial coefficients are updated
/// consistently, so reconstructions are unchanged and the spanned subspace
/// is untouched. Already-aligned input passes through bit-identically.
pub fn align_modes(
    mut decomps: Vec<LocalDecomposition>,
    ref_index: usize,
) -> Vec<LocalDecomposition> {
    assert!(ref_index < decomps.len(), "alignment reference out of range");
    let reference = decomps[ref_index].u.clone();
    let rank = reference.cols();
    for (j, d) in decomps.iter_mut().enumerate() {
        if j == ref_index {
            continue;
        }
        let mut signs = vec![1.0_f64; rank];
        let mut any = false;
        for k in 0..rank {
            let dot: f64 =
                d.u.col(k).iter().zip(reference.col(k)).map(|(a, b)| a * b).sum();
            if dot < 0.0 {
                signs[k] = -1.0;
                any = true;
            }
        }
        if !any {
            continue;
        }
        for k in 0..rank {
            if signs[k] < 0.0 {
                for x in d.u.col_mut(k) {
                    *x = -*x;
                }
                for x in d.v.col_mut(k) {
                    *x = -*x;
                }
            }
        }
        // U -> U D, V -> V D turns the reduced operator into D A D and the
        // eigenvectors into D W; the full modes U W and coefficients are
        // invariant once the phase convention is restored.
        for kc in 0..rank {
            for kr in 0..rank {
                let s = signs[kr] * signs[kc];
                if s < 0.0 {
                    d.koopman[(kr, kc)] = -d.koopman[(kr, kc)];
                }
            }
        }
        for k in 0..rank {
            for i in 0..rank {
                if signs[i] < 0.0 {
                    let z = d.eig_vectors[(i, k)];
                    d.eig_vectors[(i, k)] = -z;
                }
            }
            restore_phase(d, k);
        }
    }
    decomps
}

/// Re-apply the largest-component-real-positive convention to eigenvector
/// column `k`, rotating the matching initial coefficient so the
/// reconstruction is unchanged. Exact no-op for already-normalized columns.
fn restore_phase(d: &mut LocalDecomposition, k: usize) {
    let rank = d.eig_vectors.rows();
    let mut pivot = 0usize;
    let mut best = -1.0;
    for i in 0..rank {
        let mag = d.eig_vectors[(i, k)].norm_sqr();
        if mag > best {
            best = mag;
            pivot = i;
        }
    }
    let z = d.eig_vectors[(pivot, k)];
    if z.im == 0.0 && z.re >= 0.0 {
        return;
    }
    let mag = z.norm();
    if mag == 0.0 {
        return;
    }
    let phase = z.conj() / mag;
    for i in 0..rank {
        let w = d.eig_vectors[(i, k)] * phase;
        d.eig_vectors[(i, k)] = w;
    }
    let pv = d.eig_vectors[(pivot, k)];
    d.eig_vectors[(pivot, k)] = Complex64::new(pv.re, 0.0);
    // Modes pick up diag(phase); coefficients absorb the inverse rotation.
    d.init_coeffs[k] *= phase.conj();
}

/// Permute each decomposition's eigen-slots (values, vectors, coefficients)
/// by a minimum-total-cost matching against the reference eigenvalues under
/// `|lambda_a - lambda_b|`. Large matching costs flag possible eigenvalue
/// crossings but do not abort.
pub fn pair_eigensystems(
    mut decomps: Vec<LocalDecomposition>,
    ref_index: usize,
) -> (Vec<LocalDecomposition>, Vec<Diagnostic>) {
    assert!(ref_index < decomps.len(), "pairing reference out of range");
    let reference = decomps[ref_index].eig_values.clone();
    let rank = reference.len();
    let mass: f64 = reference.iter().map(|z| z.norm()).sum();
    let threshold = CROSSING_WARN_FACTOR * mass.max(f64::MIN_POSITIVE);
    let mut diagnostics = Vec::new();

    for (j, d) in decomps.iter_mut().enumerate() {
        if j == ref_index {
            continue;
        }
        let cost: Vec<Vec<f64>> = (0..rank)
            .map(|a| (0..rank).map(|b| (reference[a] - d.eig_values[b]).norm()).collect())
            .collect();
        let assignment = hungarian(&cost);
        let total: f64 = assignment.iter().enumerate().map(|(a, &b)| cost[a][b]).sum();
        if total > threshold {
            diagnostics.push(Diagnostic::EigenCrossing { cost: total, threshold });
        }
        let identity = assignment.iter().enumerate().all(|(a, &b)| a == b);
        if !identity {
            let values = assignment.iter().map(|&b| d.eig_values[b]).collect();
            let coeffs = assignment.iter().map(|&b| d.init_coeffs[b]).collect();
            let mut vectors = CMatrix::zeros(rank, rank);
            for (a, &b) in assignment.iter().enumerate() {
                vectors.col_mut(a).copy_from_slice(d.eig_vectors.col(b));
            }
            d.eig_values = values;
            d.init_coeffs = coeffs;
            d.eig_vectors = vectors;
        }
        for k in 0..rank {
            restore_phase(d, k);
        }
    }
    (decomps, diagnostics)
}

/// Interpolated surrogate at `theta` from a chosen neighbor subset.
fn interp_model(
    picked: &[&LocalDecomposition],
    weights: &[f64],
    method: Method,
) -> Result<(DmdModel, Vec<Diagnostic>)> {
    let first = picked[0];
    let rank = first.rank();
    let n = first.u.rows();
    let mut diagnostics = Vec::new();

    let mut u = Matrix::zeros(n, rank);
    for (d, &w) in picked.iter().zip(weights) {
        for j in 0..rank {
            let src = d.u.col(j);
            let dst = u.col_mut(j);
            for i in 0..n {
                dst[i] += w * src[i];
            }
        }
    }
    let mut init_coeffs = vec![Complex64::ZERO; rank];
    for (d, &w) in picked.iter().zip(weights) {
        for (acc, &b) in init_coeffs.iter_mut().zip(&d.init_coeffs) {
            *acc += b * w;
        }
    }

    let (eigenvalues, vectors) = match method {
        Method::Repi => {
            let mut values = vec![Complex64::ZERO; rank];
            let mut vectors = CMatrix::zeros(rank, rank);
            for (d, &w) in picked.iter().zip(weights) {
                for k in 0..rank {
                    values[k] += d.eig_values[k] * w;
                    let src = d.eig_vectors.col(k);
                    let dst = vectors.col_mut(k);
                    for i in 0..rank {
                        dst[i] += src[i] * w;
                    }
                }
            }
            (values, vectors)
        }
        Method::Rkoi => {
            let mut a = Matrix::zeros(rank, rank);
            for (d, &w) in picked.iter().zip(weights) {
                for j in 0..rank {
                    let src = d.koopman.col(j);
                    let dst = a.col_mut(j);
                    for i in 0..rank {
                        dst[i] += w * src[i];
                    }
                }
            }
            let eig = eig_general(&a)?;
            if eig.defective {
                diagnostics.push(Diagnostic::Defective { cond: eig.cond_estimate });
            }
            (eig.values, eig.vectors)
        }
        Method::Stacked => {
            return Err(Error::invalid("stacked prediction does not use local decompositions"))
        }
    };

    let modes = vectors.left_mul_real(&u);
    Ok((
        DmdModel { modes, eigenvalues, init_coeffs, dt: first.dt, rank },
        diagnostics,
    ))
}

fn model_at(
    decomps: &[LocalDecomposition],
    theta: &[f64],
    j: usize,
    method: Method,
) -> Result<(DmdModel, Vec<Diagnostic>, WeightScheme)> {
    if decomps.is_empty() {
        return Err(Error::invalid("no local decompositions available"));
    }
    let params: Vec<Vec<f64>> = decomps.iter().map(|d| d.params.clone()).collect();
    let picked_idx = nearest_neighbors(&params, theta, j)?;
    let picked: Vec<&LocalDecomposition> = picked_idx.iter().map(|&i| &decomps[i]).collect();
    let neighbor_params: Vec<&[f64]> = picked.iter().map(|d| d.params.as_slice()).collect();
    let (weights, scheme, mut diags) = interpolation_weights(&neighbor_params, theta)?;
    let (model, mut interp_diags) = interp_model(&picked, &weights, method)?;
    diags.append(&mut interp_diags);
    Ok((model, diags, scheme))
}

pub(crate) fn repi_model_at(
    decomps: &[LocalDecomposition],
    theta: &[f64],
    j: usize,
) -> Result<(DmdModel, Vec<Diagnostic>)> {
    let (m, d, _) = model_at(decomps, theta, j, Method::Repi)?;
    Ok((m, d))
}

pub(crate) fn rkoi_model_at(
    decomps: &[LocalDecomposition],
    theta: &[f64],
    j: usize,
) -> Result<(DmdModel, Vec<Diagnostic>)> {
    let (m, d, _) = model_at(decomps, theta, j, Method::Rkoi)?;
    Ok((m, d))
}

pub(crate) fn predict_with_meta(
    decomps: &[LocalDecomposition],
    theta: &[f64],
    times: &[f64],
    j: usize,
    method: Method,
    meta: Option<&ModelMeta>,
) -> Result<Prediction> {
    let (model, mut diagnostics, scheme) = model_at(decomps, theta, j, method)?;
    let params: Vec<Vec<f64>> = decomps.iter().map(|d| d.params.clone()).collect();
    let warn_fraction =
        meta.map_or(DEFAULT_EXTRAPOLATION_WARN_FRACTION, |m| m.extrapolation_warn_fraction);
    diagnostics.extend(extrapolation_diagnostics(&params, theta, warn_fraction));
    finish_prediction(&model, theta, times, meta, diagnostics, 0, scheme)
}

pub(crate) fn finish_prediction(
    model: &DmdModel,
    theta: &[f64],
    times: &[f64],
    meta: Option<&ModelMeta>,
    mut diagnostics: Vec<Diagnostic>,
    svd_calls: usize,
    weight_scheme: WeightScheme,
) -> Result<Prediction> {
    let (states, residue) = model.reconstruct_series(times)?;
    if residue > 1e-10 {
        diagnostics.push(Diagnostic::ImaginaryResidue { max_ratio: residue });
    }
    let layout = meta
        .map(|m| m.field_layout.clone())
        .unwrap_or_else(|| whole_state_layout(states.rows()));
    let series = SnapshotSeries::new(theta.to_vec(), times.to_vec(), states, layout)?;
    Ok(Prediction { series, diagnostics, svd_calls, weight_scheme })
}

/// Reduced eigen-pair interpolation over `j` nearest neighbors; the
/// decompositions must already be aligned and paired.
pub fn predict_repi(
    decomps: &[LocalDecomposition],
    theta: &[f64],
    times: &[f64],
    j: usize,
) -> Result<Prediction> {
    predict_with_meta(decomps, theta, times, j, Method::Repi, None)
}

/// Reduced Koopman operator interpolation over `j` nearest neighbors; the
/// decompositions must be aligned (pairing is not needed for operator
/// entries).
pub fn predict_rkoi(
    decomps: &[LocalDecomposition],
    theta: &[f64],
    times: &[f64],
    j: usize,
) -> Result<Prediction> {
    predict_with_meta(decomps, theta, times, j, Method::Rkoi, None)
}

/// End-to-end rKOI prediction straight from snapshot data: selects the
/// neighbors first and decomposes only those, so the cost is exactly `j`
/// snapshot SVDs regardless of the training-set size.
pub fn predict_rkoi_from_series(
    ts: &TrainingSet,
    theta: &[f64],
    times: &[f64],
    j: usize,
    tau: f64,
    r_override: Option<usize>,
) -> Result<Prediction> {
    predict_from_series(ts, theta, times, j, tau, r_override, Method::Rkoi)
}

/// End-to-end rEPI prediction straight from snapshot data (`j` SVDs).
pub fn predict_repi_from_series(
    ts: &TrainingSet,
    theta: &[f64],
    times: &[f64],
    j: usize,
    tau: f64,
    r_override: Option<usize>,
) -> Result<Prediction> {
    predict_from_series(ts, theta, times, j, tau, r_override, Method::Repi)
}

fn predict_from_series(
    ts: &TrainingSet,
    theta: &[f64],
    times: &[f64],
    j: usize,
    tau: f64,
    r_override: Option<usize>,
    method: Method,
) -> Result<Prediction> {
    let params = ts.params();
    let picked_idx = nearest_neighbors(&params, theta, j)?;

    let mut factors = Vec::with_capacity(picked_idx.len());
    let mut svd_calls = 0usize;
    for &idx in &picked_idx {
        let (lagged, _) = split_snapshots(&ts.series()[idx])?;
        let svd = thin_svd(&lagged)?;
        svd_calls += 1;
        let candidate = match r_override {
            Some(r) => r,
            None => select_rank(&svd.sigma, tau, None)?,
        };
        factors.push((idx, svd, candidate));
    }
    let rank = factors.iter().map(|(_, _, c)| *c).max().unwrap();
    for (idx, svd, _) in &factors {
        if rank > svd.usable_rank(RANK_FLOOR_REL) {
            return Err(Error::RankDeficient(format!(
                "series {idx} supports rank {} but the shared rank is {rank}",
                svd.usable_rank(RANK_FLOOR_REL)
            )));
        }
    }
    let mut decomps = Vec::with_capacity(factors.len());
    for (idx, svd, _) in &factors {
        decomps.push(build_decomposition(&ts.series()[*idx], svd, rank)?);
    }
    let decomps = align_modes(decomps, 0);
    let (decomps, mut diagnostics) = match method {
        Method::Repi => pair_eigensystems(decomps, 0),
        _ => (decomps, Vec::new()),
    };

    let neighbor_params: Vec<&[f64]> = decomps.iter().map(|d| d.params.as_slice()).collect();
    let (weights, scheme, mut weight_diags) = interpolation_weights(&neighbor_params, theta)?;
    diagnostics.append(&mut weight_diags);
    let picked: Vec<&LocalDecomposition> = decomps.iter().collect();
    let (model, mut interp_diags) = interp_model(&picked, &weights, method)?;
    diagnostics.append(&mut interp_diags);
    diagnostics.extend(extrapolation_diagnostics(
        &params,
        theta,
        DEFAULT_EXTRAPOLATION_WARN_FRACTION,
    ));
    finish_prediction(&model, theta, times, None, diagnostics, svd_calls, scheme)
}

/// Largest rank every series in the set can support, measured against the
/// relative singular-value floor.
pub fn usable_rank_cap(ts: &TrainingSet) -> Result<usize> {
    let caps: Vec<Result<usize>> = par::map_slice(ts.series(), |s| {
        let (lagged, _) = split_snapshots(s)?;
        let svd = thin_svd(&lagged)?;
        Ok(svd.usable_rank(RANK_FLOOR_REL))
    });
    let mut min_cap = usize::MAX;
    for c in caps {
        min_cap = min_cap.min(c?);
    }
    Ok(min_cap)
}
