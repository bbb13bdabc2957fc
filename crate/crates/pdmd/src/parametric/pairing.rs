//! Eigenvalue assignment between neighboring decompositions.

/// Exact minimum-cost assignment (Hungarian algorithm, shortest augmenting
/// paths with potentials, O(n^3)). `cost[r][c]` is the cost of assigning
/// row `r` to column `c`; returns `assign[r] = c`.
pub(crate) fn hungarian(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    if n == 0 {
        return Vec::new();
    }
    debug_assert!(cost.iter().all(|row| row.len() == n));

    // 1-based potentials over rows (u) and columns (v); way[c] remembers the
    // augmenting predecessor column.
    let inf = f64::INFINITY;
    let mut u = vec![0.0_f64; n + 1];
    let mut v = vec![0.0_f64; n + 1];
    let mut assignment = vec![0usize; n + 1]; // column -> row (1-based, 0 = free)

    for row in 1..=n {
        assignment[0] = row;
        let mut j0 = 0usize;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        let mut way = vec![0usize; n + 1];
        loop {
            used[j0] = true;
            let i0 = assignment[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[assignment[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if assignment[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            assignment[j0] = assignment[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assign = vec![0usize; n];
    for col in 1..=n {
        if assignment[col] > 0 {
            assign[assignment[col] - 1] = col - 1;
        }
    }
    assign
}

#[cfg(test)]
mod tests {
    use super::*;

    fn total(cost: &[Vec<f64>], assign: &[usize]) -> f64 {
        assign.iter().enumerate().map(|(r, &c)| cost[r][c]).sum()
    }

    #[test]
    fn identity_when_diagonal_dominates() {
        let cost = vec![vec![0.01, 1.0], vec![1.0, 0.01]];
        assert_eq!(hungarian(&cost), vec![0, 1]);
    }

    #[test]
    fn swap_when_cheaper() {
        // Matching {0.6, 0.4} against {0.41, 0.59}: the swap costs 0.02,
        // the identity 0.38.
        let a: [f64; 2] = [0.6, 0.4];
        let b = [0.41, 0.59];
        let cost: Vec<Vec<f64>> =
            a.iter().map(|x| b.iter().map(|y| (x - y).abs()).collect()).collect();
        let assign = hungarian(&cost);
        assert_eq!(assign, vec![1, 0]);
        assert!((total(&cost, &assign) - 0.02).abs() < 1e-12);
    }

    #[test]
    fn beats_greedy_on_exhaustive_small_cases() {
        // Compare against brute-force enumeration of all permutations.
        let cases = [
            vec![vec![4.0, 1.0, 3.0], vec![2.0, 0.0, 5.0], vec![3.0, 2.0, 2.0]],
            vec![vec![1.0, 2.0, 3.0], vec![3.0, 1.0, 2.0], vec![2.0, 3.0, 1.0]],
        ];
        for cost in &cases {
            let n = cost.len();
            let mut best = f64::INFINITY;
            let mut perm: Vec<usize> = (0..n).collect();
            // Heap's algorithm over 3 elements: just enumerate.
            let all = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
            for p in all {
                let c: f64 = (0..n).map(|r| cost[r][p[r]]).sum();
                if c < best {
                    best = c;
                    perm = p.to_vec();
                }
            }
            let assign = hungarian(cost);
            assert!((total(cost, &assign) - best).abs() < 1e-12, "{assign:?} vs {perm:?}");
        }
    }
}
