//! Stacked parametric DMD: one decomposition over vertically concatenated
//! parameter realizations, with shared eigenvalues and per-parameter mode
//! blocks.

use super::local::finish_prediction;
use super::neighbors::{extrapolation_diagnostics, interpolation_weights, nearest_neighbors};
use super::{meta_from_training, FitOptions, ParametricModel, Prediction, StackedModel, TrainingSet};
use crate::dmd::{reduced_koopman, select_rank, split_states, DmdModel};
use crate::error::{Error, Result};
use crate::linalg::{eig_general, pinv_apply_complex, thin_svd, CMatrix, Matrix, DEFAULT_PINV_TOL};
use num_complex::Complex64;

/// Fit with default options.
pub fn fit_stacked(
    ts: &TrainingSet,
    tau: f64,
    r_override: Option<usize>,
) -> Result<ParametricModel> {
    fit_stacked_with(ts, tau, r_override, &FitOptions::default())
}

/// Fit the stacked scheme: build the vertically stacked snapshot matrix,
/// run one decomposition on it, partition the modes per parameter, and fit
/// per-parameter initial coefficients (or one global vector when
/// `options.global_init_coeffs` is set).
pub fn fit_stacked_with(
    ts: &TrainingSet,
    tau: f64,
    r_override: Option<usize>,
    options: &FitOptions,
) -> Result<ParametricModel> {
    let n = ts.series()[0].state_dim();
    let cols = ts.series()[0].n_times();
    let stacked_rows = n as u64 * ts.len() as u64;
    // Stacked matrix, its split copies, and the SVD's Q/U factors all live
    // at once; four dense copies bounds the working set.
    let estimate = stacked_rows * cols as u64 * 8 * 4;
    if estimate > options.memory_cap_bytes {
        return Err(Error::Resource(format!(
            "stacked decomposition needs about {estimate} bytes, above the configured cap of {} bytes",
            options.memory_cap_bytes
        )));
    }

    let blocks: Vec<&Matrix> = ts.series().iter().map(|s| s.states()).collect();
    let stacked = Matrix::vstack(&blocks);
    let (lagged, forward) = split_states(&stacked)?;
    let svd = thin_svd(&lagged)?;
    let rank = match r_override {
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
    let koopman = reduced_koopman(&svd, &forward, rank)?;
    let eig = eig_general(&koopman)?;
    let u_r = svd.u.columns(0, rank);
    let stacked_modes = eig.vectors.left_mul_real(&u_r);

    let mode_blocks: Vec<CMatrix> =
        (0..ts.len()).map(|j| stacked_modes.row_block(j * n, (j + 1) * n)).collect();

    let init_coeffs: Vec<Vec<Complex64>> = if options.global_init_coeffs {
        // Literal reading: one coefficient vector from the stacked initial
        // state, shared by every parameter.
        let y0: Vec<Complex64> = (0..ts.len())
            .flat_map(|j| ts.series()[j].state_at(0).iter().map(|&x| Complex64::new(x, 0.0)))
            .collect();
        let b = pinv_apply_complex(&stacked_modes, &y0, DEFAULT_PINV_TOL)?;
        vec![b; ts.len()]
    } else {
        let mut per_param = Vec::with_capacity(ts.len());
        for (j, block) in mode_blocks.iter().enumerate() {
            let y0: Vec<Complex64> =
                ts.series()[j].state_at(0).iter().map(|&x| Complex64::new(x, 0.0)).collect();
            per_param.push(pinv_apply_complex(block, &y0, DEFAULT_PINV_TOL)?);
        }
        per_param
    };

    let neighbors = options.neighbors_for(ts.param_dim(), ts.len());
    let meta = meta_from_training(ts, rank, neighbors, options.extrapolation_warn_fraction);
    Ok(ParametricModel::Stacked(StackedModel {
        meta,
        mode_blocks,
        eigenvalues: eig.values,
        init_coeffs,
        global_init_coeffs: options.global_init_coeffs,
    }))
}

/// Interpolated surrogate at `theta`: mode blocks and coefficients are
/// interpolated over the neighbor set, eigenvalues are shared.
pub(crate) fn stacked_model_at(
    model: &StackedModel,
    theta: &[f64],
) -> Result<(DmdModel, Vec<crate::error::Diagnostic>)> {
    let meta = &model.meta;
    let picked_idx = nearest_neighbors(&meta.train_params, theta, meta.neighbor_count)?;
    let neighbor_params: Vec<&[f64]> =
        picked_idx.iter().map(|&i| meta.train_params[i].as_slice()).collect();
    let (weights, _scheme, mut diags) = interpolation_weights(&neighbor_params, theta)?;

    let n = meta.state_dim;
    let rank = meta.rank;
    let mut modes = CMatrix::zeros(n, rank);
    let mut init_coeffs = vec![Complex64::ZERO; rank];
    for (&idx, &w) in picked_idx.iter().zip(&weights) {
        let block = &model.mode_blocks[idx];
        for k in 0..rank {
            let src = block.col(k);
            let dst = modes.col_mut(k);
            for i in 0..n {
                dst[i] += src[i] * w;
            }
        }
        for (acc, &b) in init_coeffs.iter_mut().zip(&model.init_coeffs[idx]) {
            *acc += b * w;
        }
    }
    diags.extend(extrapolation_diagnostics(
        &meta.train_params,
        theta,
        meta.extrapolation_warn_fraction,
    ));
    Ok((
        DmdModel {
            modes,
            eigenvalues: model.eigenvalues.clone(),
            init_coeffs,
            dt: meta.dt,
            rank,
        },
        diags,
    ))
}

/// Reconstruct the series at a new parameter value over `times`.
pub fn predict_stacked(model: &StackedModel, theta: &[f64], times: &[f64]) -> Result<Prediction> {
    let picked_idx =
        nearest_neighbors(&model.meta.train_params, theta, model.meta.neighbor_count)?;
    let neighbor_params: Vec<&[f64]> =
        picked_idx.iter().map(|&i| model.meta.train_params[i].as_slice()).collect();
    let (_, scheme, _) = interpolation_weights(&neighbor_params, theta)?;
    let (surrogate, diags) = stacked_model_at(model, theta)?;
    finish_prediction(&surrogate, theta, times, Some(&model.meta), diags, 0, scheme)
}
