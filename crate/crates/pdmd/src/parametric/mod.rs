//! Parametric surrogate schemes: stacked DMD, reduced eigen-pair
//! interpolation (rEPI), and reduced Koopman operator interpolation (rKOI),
//! plus the neighbor selection, mode sign alignment, and eigen-pairing
//! machinery that makes cross-parameter interpolation well-posed.

mod local;
mod neighbors;
mod pairing;
mod stacked;

pub use local::{
    align_modes, fit_local, pair_eigensystems, predict_repi, predict_repi_from_series,
    predict_rkoi, predict_rkoi_from_series, usable_rank_cap, CROSSING_WARN_FACTOR,
};
pub use neighbors::{
    extrapolation_diagnostics, inside_training_hull, interpolation_weights, nearest_neighbors,
    WeightScheme, DEFAULT_EXTRAPOLATION_WARN_FRACTION,
};
pub use stacked::{fit_stacked, fit_stacked_with, predict_stacked};

use crate::dmd::DmdModel;
use crate::error::{Diagnostic, Error, Result};
use crate::linalg::{CMatrix, Matrix};
use crate::snapshot::{FieldSpan, SnapshotSeries};
use num_complex::Complex64;

/// Snapshot series for several parameter values with uniform shapes.
#[derive(Debug, Clone)]
pub struct TrainingSet {
    series: Vec<SnapshotSeries>,
}

impl TrainingSet {
    pub fn new(series: Vec<SnapshotSeries>) -> Result<Self> {
        if series.is_empty() {
            return Err(Error::invalid("a training set needs at least one series"));
        }
        let first = &series[0];
        let dim = first.params().len();
        if dim == 0 {
            return Err(Error::invalid("training series must carry a parameter vector"));
        }
        for (i, s) in series.iter().enumerate() {
            if s.params().len() != dim {
                return Err(Error::invalid(format!(
                    "series {i} has parameter dimension {} but the set uses {dim}",
                    s.params().len()
                )));
            }
            if s.state_dim() != first.state_dim() || s.n_times() != first.n_times() {
                return Err(Error::invalid(format!(
                    "series {i} has shape {}x{} but the set uses {}x{}",
                    s.state_dim(),
                    s.n_times(),
                    first.state_dim(),
                    first.n_times()
                )));
            }
            if (s.dt() - first.dt()).abs() > 1e-12 * first.dt() {
                return Err(Error::invalid(format!("series {i} has a different time step")));
            }
            if s.field_layout() != first.field_layout() {
                return Err(Error::invalid(format!("series {i} has a different field layout")));
            }
        }
        for i in 0..series.len() {
            for j in (i + 1)..series.len() {
                if series[i].params() == series[j].params() {
                    return Err(Error::invalid(format!(
                        "series {i} and {j} share the parameter vector {:?}",
                        series[i].params()
                    )));
                }
            }
        }
        Ok(TrainingSet { series })
    }

    pub fn series(&self) -> &[SnapshotSeries] {
        &self.series
    }

    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }

    pub fn param_dim(&self) -> usize {
        self.series[0].params().len()
    }

    pub fn params(&self) -> Vec<Vec<f64>> {
        self.series.iter().map(|s| s.params().to_vec()).collect()
    }

    /// Keep only the first `count` series (manifest order).
    pub fn truncated(&self, count: usize) -> Result<TrainingSet> {
        TrainingSet::new(self.series[..count.min(self.series.len())].to_vec())
    }

    /// Restrict every series to one physics field.
    pub fn field_slice(&self, field: &str) -> Result<TrainingSet> {
        let sliced: Result<Vec<_>> = self.series.iter().map(|s| s.field_slice(field)).collect();
        TrainingSet::new(sliced?)
    }
}

/// Shape and provenance shared by every trained model.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelMeta {
    /// State dimension n.
    pub state_dim: usize,
    /// Training snapshot spacing.
    pub dt: f64,
    /// Training time levels (m + 1).
    pub n_times: usize,
    /// Shared truncation rank.
    pub rank: usize,
    /// Neighbor count J used by prediction.
    pub neighbor_count: usize,
    /// Physics packing of each state column.
    pub field_layout: Vec<FieldSpan>,
    /// Training parameter vectors in manifest order.
    pub train_params: Vec<Vec<f64>>,
    /// Extrapolation fraction before a warning is attached.
    pub extrapolation_warn_fraction: f64,
}

/// Per-parameter truncated factors, reduced operator, eigen-pair, and
/// initial coefficients.
#[derive(Debug, Clone)]
pub struct LocalDecomposition {
    pub params: Vec<f64>,
    /// Left singular vectors, n x r.
    pub u: Matrix,
    /// Leading singular values, length r.
    pub sigma: Vec<f64>,
    /// Right singular vectors, m x r.
    pub v: Matrix,
    /// Reduced Koopman operator, r x r.
    pub koopman: Matrix,
    pub eig_values: Vec<Complex64>,
    /// Eigenvectors as columns, r x r.
    pub eig_vectors: CMatrix,
    pub init_coeffs: Vec<Complex64>,
    /// Training snapshot spacing.
    pub dt: f64,
}

impl LocalDecomposition {
    pub fn rank(&self) -> usize {
        self.sigma.len()
    }
}

/// Stacked-DMD state: global eigenvalues plus per-parameter mode blocks
/// and initial coefficients.
#[derive(Debug, Clone)]
pub struct StackedModel {
    pub meta: ModelMeta,
    /// Per-parameter mode block, each n x r.
    pub mode_blocks: Vec<CMatrix>,
    /// Eigenvalues shared across all parameters.
    pub eigenvalues: Vec<Complex64>,
    /// Per-parameter initial coefficients, each length r.
    pub init_coeffs: Vec<Vec<Complex64>>,
    /// Whether a single global coefficient vector was used for all blocks.
    pub global_init_coeffs: bool,
}

/// Local-decomposition state shared by the rEPI and rKOI schemes.
#[derive(Debug, Clone)]
pub struct LocalModel {
    pub meta: ModelMeta,
    pub decomps: Vec<LocalDecomposition>,
    /// Warnings accumulated while fitting (eigenvalue crossings etc).
    pub fit_diagnostics: Vec<Diagnostic>,
}

/// A trained parametric surrogate: enough state to produce a classical
/// DMD model at any new parameter value.
#[derive(Debug, Clone)]
pub enum ParametricModel {
    Stacked(StackedModel),
    Repi(LocalModel),
    Rkoi(LocalModel),
}

/// Method tag used in CLIs, file headers, and reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Stacked,
    Repi,
    Rkoi,
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::Stacked => "stacked",
            Method::Repi => "repi",
            Method::Rkoi => "rkoi",
        }
    }

    pub fn parse(s: &str) -> Result<Method> {
        match s.trim().to_ascii_lowercase().as_str() {
            "stacked" => Ok(Method::Stacked),
            "repi" => Ok(Method::Repi),
            "rkoi" => Ok(Method::Rkoi),
            other => Err(Error::invalid(format!(
                "unknown method '{other}' (expected stacked, repi, or rkoi)"
            ))),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Fit-time knobs beyond the rank criterion.
#[derive(Debug, Clone)]
pub struct FitOptions {
    /// Neighbor count J; defaults to 2 per parameter dimension.
    pub neighbor_count: Option<usize>,
    /// Use one global coefficient vector instead of per-parameter fits
    /// (stacked scheme only; kept for comparison).
    pub global_init_coeffs: bool,
    /// Upper bound on the stacked-SVD working set.
    pub memory_cap_bytes: u64,
    /// Extrapolation fraction before predictions warn.
    pub extrapolation_warn_fraction: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            neighbor_count: None,
            global_init_coeffs: false,
            memory_cap_bytes: 8 << 30,
            extrapolation_warn_fraction: DEFAULT_EXTRAPOLATION_WARN_FRACTION,
        }
    }
}

impl FitOptions {
    pub(crate) fn neighbors_for(&self, param_dim: usize, available: usize) -> usize {
        let default = 1usize << param_dim.min(20);
        self.neighbor_count.unwrap_or(default).min(available).max(1)
    }
}

/// Outcome of a prediction: the reconstructed series plus bookkeeping.
#[derive(Debug, Clone)]
pub struct Prediction {
    pub series: SnapshotSeries,
    pub diagnostics: Vec<Diagnostic>,
    /// Snapshot-matrix SVDs performed inside this call.
    pub svd_calls: usize,
    pub weight_scheme: WeightScheme,
}

impl ParametricModel {
    pub fn method(&self) -> Method {
        match self {
            ParametricModel::Stacked(_) => Method::Stacked,
            ParametricModel::Repi(_) => Method::Repi,
            ParametricModel::Rkoi(_) => Method::Rkoi,
        }
    }

    pub fn meta(&self) -> &ModelMeta {
        match self {
            ParametricModel::Stacked(m) => &m.meta,
            ParametricModel::Repi(m) => &m.meta,
            ParametricModel::Rkoi(m) => &m.meta,
        }
    }

    /// Classical DMD surrogate at `theta`.
    pub fn model_at(&self, theta: &[f64]) -> Result<DmdModel> {
        match self {
            ParametricModel::Stacked(m) => stacked::stacked_model_at(m, theta).map(|(m, _)| m),
            ParametricModel::Repi(m) => {
                local::repi_model_at(&m.decomps, theta, m.meta.neighbor_count).map(|(m, _)| m)
            }
            ParametricModel::Rkoi(m) => {
                local::rkoi_model_at(&m.decomps, theta, m.meta.neighbor_count).map(|(m, _)| m)
            }
        }
    }

    /// Reconstructed series at `theta` over `times`.
    pub fn predict(&self, theta: &[f64], times: &[f64]) -> Result<Prediction> {
        match self {
            ParametricModel::Stacked(m) => stacked::predict_stacked(m, theta, times),
            ParametricModel::Repi(m) => local::predict_with_meta(
                &m.decomps,
                theta,
                times,
                m.meta.neighbor_count,
                Method::Repi,
                Some(&m.meta),
            ),
            ParametricModel::Rkoi(m) => local::predict_with_meta(
                &m.decomps,
                theta,
                times,
                m.meta.neighbor_count,
                Method::Rkoi,
                Some(&m.meta),
            ),
        }
    }

    /// Training time grid `0, dt, ..., m dt`.
    pub fn training_times(&self) -> Vec<f64> {
        let meta = self.meta();
        (0..meta.n_times).map(|i| i as f64 * meta.dt).collect()
    }
}

pub(crate) fn meta_from_training(
    ts: &TrainingSet,
    rank: usize,
    neighbor_count: usize,
    extrapolation_warn_fraction: f64,
) -> ModelMeta {
    let first = &ts.series()[0];
    ModelMeta {
        state_dim: first.state_dim(),
        dt: first.dt(),
        n_times: first.n_times(),
        rank,
        neighbor_count,
        field_layout: first.field_layout().to_vec(),
        train_params: ts.params(),
        extrapolation_warn_fraction,
    }
}

/// Fit any of the three schemes with shared options; the entry point used
/// by the training pipeline.
pub fn fit_parametric(
    method: Method,
    ts: &TrainingSet,
    tau: f64,
    r_override: Option<usize>,
    options: &FitOptions,
) -> Result<ParametricModel> {
    match method {
        Method::Stacked => fit_stacked_with(ts, tau, r_override, options),
        Method::Repi | Method::Rkoi => {
            let (decomps, fit_diagnostics) = fit_local(ts, tau, r_override)?;
            let rank = decomps[0].rank();
            let neighbors = options.neighbors_for(ts.param_dim(), ts.len());
            let meta =
                meta_from_training(ts, rank, neighbors, options.extrapolation_warn_fraction);
            let model = LocalModel { meta, decomps, fit_diagnostics };
            Ok(match method {
                Method::Repi => ParametricModel::Repi(model),
                Method::Rkoi => ParametricModel::Rkoi(model),
                Method::Stacked => unreachable!(),
            })
        }
    }
}

#[cfg(test)]
mod tests;
