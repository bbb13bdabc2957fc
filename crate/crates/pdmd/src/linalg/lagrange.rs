//! Lagrange interpolation weights.

use crate::error::{Error, Result};

/// Barycentric-free Lagrange weights: `w[j] = prod_{k != j} (theta - x_k) /
/// (x_j - x_k)`. The weights sum to one and reproduce polynomials up to
/// degree `nodes.len() - 1` exactly.
pub fn lagrange_weights(nodes: &[f64], theta: f64) -> Result<Vec<f64>> {
    if nodes.is_empty() {
        return Err(Error::invalid("lagrange weights need at least one node"));
    }
    if !theta.is_finite() || nodes.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("lagrange nodes and query must be finite"));
    }
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            if nodes[i] == nodes[j] {
                return Err(Error::invalid(format!(
                    "duplicate interpolation node {} at positions {i} and {j}",
                    nodes[i]
                )));
            }
        }
    }
    let weights = nodes
        .iter()
        .enumerate()
        .map(|(j, &xj)| {
            let mut w = 1.0;
            for (k, &xk) in nodes.iter().enumerate() {
                if k != j {
                    w *= (theta - xk) / (xj - xk);
                }
            }
            w
        })
        .collect();
    Ok(weights)
}
