//! Snapshot series: one parameter realization's full-order trajectory.

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// One named physics field packed into a state vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpan {
    pub name: String,
    pub offset: usize,
    pub len: usize,
}

impl FieldSpan {
    pub fn new(name: impl Into<String>, offset: usize, len: usize) -> Self {
        FieldSpan { name: name.into(), offset, len }
    }
}

/// A single-field layout covering the whole state vector.
pub fn whole_state_layout(n: usize) -> Vec<FieldSpan> {
    vec![FieldSpan::new("state", 0, n)]
}

/// Time series of full-order states at one parameter value.
///
/// Columns of `states` are the state vectors on a uniform time grid;
/// `field_layout` records how physics fields pack into each column.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotSeries {
    params: Vec<f64>,
    times: Vec<f64>,
    states: Matrix,
    field_layout: Vec<FieldSpan>,
}

impl SnapshotSeries {
    /// Validating constructor; see the type invariants in the crate docs.
    pub fn new(
        params: Vec<f64>,
        times: Vec<f64>,
        states: Matrix,
        field_layout: Vec<FieldSpan>,
    ) -> Result<Self> {
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::invalid("snapshot parameters must be finite"));
        }
        if times.len() != states.cols() {
            return Err(Error::invalid(format!(
                "time grid has {} entries but states matrix has {} columns",
                times.len(),
                states.cols()
            )));
        }
        if times.len() < 3 {
            return Err(Error::invalid("a snapshot series needs at least 3 time levels"));
        }
        let dt = times[1] - times[0];
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::invalid("snapshot times must be strictly increasing"));
        }
        for w in times.windows(2) {
            let step = w[1] - w[0];
            if !(step > 0.0) {
                return Err(Error::invalid("snapshot times must be strictly increasing"));
            }
            if (step - dt).abs() >= 1.0e-12 * dt {
                return Err(Error::invalid(format!(
                    "snapshot times are not uniform: step {} differs from dt {}",
                    step, dt
                )));
            }
        }
        states.check_finite("snapshot states")?;
        validate_layout(&field_layout, states.rows())?;
        Ok(SnapshotSeries { params, times, states, field_layout })
    }

    /// Build a series on the grid `t_i = i * dt`.
    pub fn from_dt(
        params: Vec<f64>,
        dt: f64,
        states: Matrix,
        field_layout: Vec<FieldSpan>,
    ) -> Result<Self> {
        let times: Vec<f64> = (0..states.cols()).map(|i| i as f64 * dt).collect();
        SnapshotSeries::new(params, times, states, field_layout)
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &Matrix {
        &self.states
    }

    pub fn field_layout(&self) -> &[FieldSpan] {
        &self.field_layout
    }

    /// State dimension n.
    pub fn state_dim(&self) -> usize {
        self.states.rows()
    }

    /// Number of stored time levels (m + 1).
    pub fn n_times(&self) -> usize {
        self.times.len()
    }

    pub fn dt(&self) -> f64 {
        self.times[1] - self.times[0]
    }

    pub fn state_at(&self, i: usize) -> &[f64] {
        self.states.col(i)
    }

    /// Restriction to one physics field; the result has that field at
    /// offset zero as its whole state.
    pub fn field_slice(&self, field: &str) -> Result<SnapshotSeries> {
        let span = self
            .field_layout
            .iter()
            .find(|s| s.name == field)
            .ok_or_else(|| Error::invalid(format!("unknown field '{field}'")))?;
        let states = self.states.row_block(span.offset, span.offset + span.len);
        SnapshotSeries::new(
            self.params.clone(),
            self.times.clone(),
            states,
            vec![FieldSpan::new(span.name.clone(), 0, span.len)],
        )
    }
}

fn validate_layout(layout: &[FieldSpan], n: usize) -> Result<()> {
    if layout.is_empty() {
        return Err(Error::invalid("field layout must name at least one field"));
    }
    let mut spans: Vec<&FieldSpan> = layout.iter().collect();
    spans.sort_by_key(|s| s.offset);
    let mut cursor = 0;
    for s in &spans {
        if s.len == 0 {
            return Err(Error::invalid(format!("field '{}' has zero length", s.name)));
        }
        if s.offset != cursor {
            return Err(Error::invalid(format!(
                "field layout must partition the state: gap or overlap at offset {}",
                s.offset
            )));
        }
        cursor += s.len;
    }
    if cursor != n {
        return Err(Error::invalid(format!(
            "field layout covers {cursor} rows but states have {n}"
        )));
    }
    let mut names: Vec<&str> = layout.iter().map(|s| s.name.as_str()).collect();
    names.sort_unstable();
    if names.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::invalid("field names must be unique"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series_3x4() -> SnapshotSeries {
        let states = Matrix::from_fn(3, 4, |i, j| (i + 1) as f64 * 10.0 + j as f64);
        SnapshotSeries::from_dt(
            vec![1.5],
            0.1,
            states,
            vec![FieldSpan::new("T", 0, 2), FieldSpan::new("E", 2, 1)],
        )
        .unwrap()
    }

    #[test]
    fn uniform_grid_enforced() {
        let states = Matrix::zeros(2, 3);
        let err = SnapshotSeries::new(
            vec![0.0],
            vec![0.0, 0.1, 0.3],
            states,
            whole_state_layout(2),
        );
        assert!(err.is_err());
    }

    #[test]
    fn too_few_columns_rejected() {
        let states = Matrix::zeros(2, 2);
        assert!(SnapshotSeries::from_dt(vec![0.0], 0.1, states, whole_state_layout(2)).is_err());
    }

    #[test]
    fn layout_must_partition() {
        let states = Matrix::zeros(3, 3);
        let bad = vec![FieldSpan::new("T", 0, 2), FieldSpan::new("E", 2, 2)];
        assert!(SnapshotSeries::from_dt(vec![0.0], 0.1, states, bad).is_err());
    }

    #[test]
    fn field_slices_partition_rows() {
        let s = series_3x4();
        let t = s.field_slice("T").unwrap();
        let e = s.field_slice("E").unwrap();
        assert_eq!(t.state_dim() + e.state_dim(), s.state_dim());
        assert_eq!(t.state_at(2), &[10.0 + 2.0, 20.0 + 2.0]);
        assert_eq!(e.state_at(3), &[33.0]);
        assert!(s.field_slice("missing").is_err());
    }

    #[test]
    fn slicing_single_field_is_identity() {
        let states = Matrix::from_fn(2, 3, |i, j| (i * 3 + j) as f64);
        let s = SnapshotSeries::from_dt(vec![0.0], 0.5, states, whole_state_layout(2)).unwrap();
        let sliced = s.field_slice("state").unwrap();
        assert_eq!(s, sliced);
    }

    #[test]
    fn interleave_of_slices_restores_original() {
        let s = series_3x4();
        let t = s.field_slice("T").unwrap();
        let e = s.field_slice("E").unwrap();
        // Index bookkeeping oracle: rebuild by stacking the slices at their
        // recorded offsets.
        for col in 0..s.n_times() {
            let mut rebuilt = vec![0.0; s.state_dim()];
            rebuilt[0..2].copy_from_slice(t.state_at(col));
            rebuilt[2..3].copy_from_slice(e.state_at(col));
            assert_eq!(rebuilt.as_slice(), s.state_at(col));
        }
    }
}
