//! Neighbor selection and interpolation weights over training parameters.

use crate::error::{Diagnostic, Error, Result};
use crate::linalg::lagrange_weights;

/// Fraction of the training range beyond which extrapolation is flagged.
pub const DEFAULT_EXTRAPOLATION_WARN_FRACTION: f64 = 0.1;

/// How the weights over the neighbor set were produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightScheme {
    /// One-dimensional Lagrange interpolation.
    Lagrange,
    /// Tensor-product Lagrange on a structured neighbor grid.
    TensorLagrange,
    /// Inverse-distance weights on a scattered neighbor set.
    InverseDistance,
}

impl WeightScheme {
    pub fn label(&self) -> &'static str {
        match self {
            WeightScheme::Lagrange => "lagrange",
            WeightScheme::TensorLagrange => "tensor-lagrange",
            WeightScheme::InverseDistance => "inverse-distance",
        }
    }
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Indices of the `j` training parameters closest to `theta` in Euclidean
/// distance, ties broken by ascending index, returned sorted by index.
///
/// In one dimension with `j == 2` and `theta` strictly inside the training
/// range, the result is the bracketing node pair even when plain nearest
/// neighbors would pick two nodes on the same side.
pub fn nearest_neighbors(train_params: &[Vec<f64>], theta: &[f64], j: usize) -> Result<Vec<usize>> {
    if j == 0 {
        return Err(Error::invalid("neighbor count must be at least 1"));
    }
    if j > train_params.len() {
        return Err(Error::invalid(format!(
            "requested {j} neighbors from {} training parameters",
            train_params.len()
        )));
    }
    let dim = theta.len();
    if train_params.iter().any(|p| p.len() != dim) {
        return Err(Error::invalid(format!(
            "query has dimension {dim} but training parameters differ"
        )));
    }

    if dim == 1 && j == 2 {
        if let Some(pair) = bracketing_pair(train_params, theta[0]) {
            return Ok(pair);
        }
    }

    let mut order: Vec<usize> = (0..train_params.len()).collect();
    order.sort_by(|&a, &b| {
        let da = squared_distance(&train_params[a], theta);
        let db = squared_distance(&train_params[b], theta);
        da.partial_cmp(&db).unwrap().then(a.cmp(&b))
    });
    let mut picked: Vec<usize> = order[..j].to_vec();
    picked.sort_unstable();
    Ok(picked)
}

/// The two nodes surrounding `theta`, or `None` when `theta` coincides with
/// a node or falls outside the open training range.
fn bracketing_pair(train_params: &[Vec<f64>], theta: f64) -> Option<Vec<usize>> {
    let mut below: Option<(usize, f64)> = None;
    let mut above: Option<(usize, f64)> = None;
    for (i, p) in train_params.iter().enumerate() {
        let x = p[0];
        if x == theta {
            return None;
        }
        if x < theta && below.map_or(true, |(_, bx)| x > bx) {
            below = Some((i, x));
        }
        if x > theta && above.map_or(true, |(_, ax)| x < ax) {
            above = Some((i, x));
        }
    }
    match (below, above) {
        (Some((bi, _)), Some((ai, _))) => {
            let mut pair = vec![bi, ai];
            pair.sort_unstable();
            Some(pair)
        }
        _ => None,
    }
}

/// Interpolation weights for `theta` over the chosen neighbor parameters.
///
/// One parameter dimension uses Lagrange weights. In higher dimensions the
/// neighbors are checked for tensor-grid structure (per-axis value sets
/// whose full product is present); otherwise inverse-distance weights are
/// used and flagged.
pub fn interpolation_weights(
    neighbor_params: &[&[f64]],
    theta: &[f64],
) -> Result<(Vec<f64>, WeightScheme, Vec<Diagnostic>)> {
    if neighbor_params.is_empty() {
        return Err(Error::invalid("weights need at least one neighbor"));
    }
    let dim = theta.len();
    if dim == 1 {
        let nodes: Vec<f64> = neighbor_params.iter().map(|p| p[0]).collect();
        let w = lagrange_weights(&nodes, theta[0])?;
        return Ok((w, WeightScheme::Lagrange, Vec::new()));
    }

    if let Some(w) = tensor_weights(neighbor_params, theta)? {
        return Ok((w, WeightScheme::TensorLagrange, Vec::new()));
    }
    let w = inverse_distance_weights(neighbor_params, theta);
    Ok((w, WeightScheme::InverseDistance, vec![Diagnostic::ScatteredWeights]))
}

fn tensor_weights(neighbor_params: &[&[f64]], theta: &[f64]) -> Result<Option<Vec<f64>>> {
    let dim = theta.len();
    let count = neighbor_params.len();
    let mut axis_values: Vec<Vec<f64>> = vec![Vec::new(); dim];
    for p in neighbor_params {
        for d in 0..dim {
            if !axis_values[d].contains(&p[d]) {
                axis_values[d].push(p[d]);
            }
        }
    }
    for vals in axis_values.iter_mut() {
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    }
    let product: usize = axis_values.iter().map(|v| v.len()).product();
    if product != count {
        return Ok(None);
    }
    // Every combination must occur exactly once.
    let mut seen = vec![false; count];
    for p in neighbor_params {
        let mut flat = 0usize;
        for d in 0..dim {
            let pos = axis_values[d].iter().position(|&x| x == p[d]).unwrap();
            flat = flat * axis_values[d].len() + pos;
        }
        if seen[flat] {
            return Ok(None);
        }
        seen[flat] = true;
    }
    if seen.iter().any(|s| !s) {
        return Ok(None);
    }

    let per_axis: Vec<Vec<f64>> = axis_values
        .iter()
        .zip(theta)
        .map(|(nodes, &x)| lagrange_weights(nodes, x))
        .collect::<Result<_>>()?;
    let weights = neighbor_params
        .iter()
        .map(|p| {
            let mut w = 1.0;
            for d in 0..dim {
                let pos = axis_values[d].iter().position(|&x| x == p[d]).unwrap();
                w *= per_axis[d][pos];
            }
            w
        })
        .collect();
    Ok(Some(weights))
}

fn inverse_distance_weights(neighbor_params: &[&[f64]], theta: &[f64]) -> Vec<f64> {
    let count = neighbor_params.len();
    let d2: Vec<f64> = neighbor_params.iter().map(|p| squared_distance(p, theta)).collect();
    // Exact hit collapses to that node.
    if let Some(hit) = d2.iter().position(|&d| d == 0.0) {
        let mut w = vec![0.0; count];
        w[hit] = 1.0;
        return w;
    }
    let raw: Vec<f64> = d2.iter().map(|&d| 1.0 / d).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// Extrapolation diagnostics for `theta` against the training hull.
pub fn extrapolation_diagnostics(
    train_params: &[Vec<f64>],
    theta: &[f64],
    warn_fraction: f64,
) -> Vec<Diagnostic> {
    let dim = theta.len();
    let mut out = Vec::new();
    for d in 0..dim {
        let lo = train_params.iter().map(|p| p[d]).fold(f64::INFINITY, f64::min);
        let hi = train_params.iter().map(|p| p[d]).fold(f64::NEG_INFINITY, f64::max);
        let span = (hi - lo).max(hi.abs().max(lo.abs()) * 1e-12).max(f64::MIN_POSITIVE);
        let slack = warn_fraction * span;
        if theta[d] < lo - slack || theta[d] > hi + slack {
            out.push(Diagnostic::Extrapolation { axis: d, value: theta[d], lo, hi });
        }
    }
    out
}

/// True when `theta` lies inside the axis-aligned training hull.
pub fn inside_training_hull(train_params: &[Vec<f64>], theta: &[f64]) -> bool {
    (0..theta.len()).all(|d| {
        let lo = train_params.iter().map(|p| p[d]).fold(f64::INFINITY, f64::min);
        let hi = train_params.iter().map(|p| p[d]).fold(f64::NEG_INFINITY, f64::max);
        theta[d] >= lo && theta[d] <= hi
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_1d(values: &[f64]) -> Vec<Vec<f64>> {
        values.iter().map(|&v| vec![v]).collect()
    }

    #[test]
    fn bracketing_inside_range() {
        let nodes = grid_1d(&[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(nearest_neighbors(&nodes, &[1.4], 2).unwrap(), vec![1, 2]);
    }

    #[test]
    fn bracketing_beats_plain_nearest_on_irregular_grid() {
        // Plain 2-nearest of 2.0 would give {0.0, 1.0}; the bracket is
        // {1.0, 10.0}.
        let nodes = grid_1d(&[0.0, 1.0, 10.0]);
        assert_eq!(nearest_neighbors(&nodes, &[2.0], 2).unwrap(), vec![1, 2]);
    }

    #[test]
    fn tie_at_node_prefers_lower_index() {
        let nodes = grid_1d(&[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(nearest_neighbors(&nodes, &[2.0], 2).unwrap(), vec![1, 2]);
    }

    #[test]
    fn four_corners_of_a_tensor_cell() {
        let mut nodes = Vec::new();
        for z in 5..=15 {
            for a in [2.5, 3.5] {
                nodes.push(vec![z as f64, a]);
            }
        }
        let picked = nearest_neighbors(&nodes, &[7.3, 3.14], 4).unwrap();
        // Exhaustive scan oracle.
        let mut order: Vec<usize> = (0..nodes.len()).collect();
        order.sort_by(|&a, &b| {
            squared_distance(&nodes[a], &[7.3, 3.14])
                .partial_cmp(&squared_distance(&nodes[b], &[7.3, 3.14]))
                .unwrap()
                .then(a.cmp(&b))
        });
        let mut expect = order[..4].to_vec();
        expect.sort_unstable();
        assert_eq!(picked, expect);
        let corner_params: Vec<&[f64]> = picked.iter().map(|&i| nodes[i].as_slice()).collect();
        for p in &corner_params {
            assert!(p[0] == 7.0 || p[0] == 8.0);
            assert!(p[1] == 2.5 || p[1] == 3.5);
        }
    }

    #[test]
    fn rejects_zero_or_excess_neighbors() {
        let nodes = grid_1d(&[0.0, 1.0]);
        assert!(nearest_neighbors(&nodes, &[0.5], 0).is_err());
        assert!(nearest_neighbors(&nodes, &[0.5], 3).is_err());
    }

    #[test]
    fn tensor_weights_reproduce_bilinear_function() {
        let corners = [vec![1.0, 10.0], vec![1.0, 20.0], vec![3.0, 10.0], vec![3.0, 20.0]];
        let refs: Vec<&[f64]> = corners.iter().map(|c| c.as_slice()).collect();
        let theta = [1.5, 17.0];
        let (w, scheme, diags) = interpolation_weights(&refs, &theta).unwrap();
        assert_eq!(scheme, WeightScheme::TensorLagrange);
        assert!(diags.is_empty());
        let f = |x: f64, y: f64| 2.0 * x + 0.25 * y + 0.5 * x * y - 3.0;
        let interp: f64 = w.iter().zip(&refs).map(|(wi, p)| wi * f(p[0], p[1])).sum();
        assert!((interp - f(theta[0], theta[1])).abs() < 1e-12);
    }

    #[test]
    fn scattered_neighbors_fall_back_to_inverse_distance() {
        let pts = [vec![0.0, 0.0], vec![1.0, 0.2], vec![0.3, 1.1]];
        let refs: Vec<&[f64]> = pts.iter().map(|c| c.as_slice()).collect();
        let (w, scheme, diags) = interpolation_weights(&refs, &[0.4, 0.4]).unwrap();
        assert_eq!(scheme, WeightScheme::InverseDistance);
        assert_eq!(diags, vec![Diagnostic::ScatteredWeights]);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(w.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn inverse_distance_collapses_at_exact_node() {
        let pts = [vec![0.0, 0.0], vec![1.0, 0.2], vec![0.3, 1.1]];
        let refs: Vec<&[f64]> = pts.iter().map(|c| c.as_slice()).collect();
        let (w, _, _) = interpolation_weights(&refs, &[1.0, 0.2]).unwrap();
        assert_eq!(w, vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn extrapolation_flags_only_beyond_slack() {
        let nodes = grid_1d(&[0.0, 1.0]);
        assert!(extrapolation_diagnostics(&nodes, &[1.05], 0.1).is_empty());
        assert_eq!(extrapolation_diagnostics(&nodes, &[1.2], 0.1).len(), 1);
        assert!(inside_training_hull(&nodes, &[0.4]));
        assert!(!inside_training_hull(&nodes, &[1.05]));
    }
}
