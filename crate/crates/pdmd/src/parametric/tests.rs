//! Cross-scheme behavioral tests: node consistency, alignment and pairing
//! algebra, interpolation exactness on linear-in-parameter families, and
//! the lazy prediction paths.

use super::*;
use crate::dmd::fit_dmd;
use crate::linalg::householder_qr;
use crate::snapshot::whole_state_layout;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn series_from_states(params: Vec<f64>, states: Matrix, dt: f64) -> SnapshotSeries {
    let n = states.rows();
    SnapshotSeries::from_dt(params, dt, states, whole_state_layout(n)).unwrap()
}

fn linear_trajectory(g: &Matrix, y0: &[f64], steps: usize) -> Matrix {
    let n = g.rows();
    let mut states = Matrix::zeros(n, steps + 1);
    states.col_mut(0).copy_from_slice(y0);
    for k in 0..steps {
        let next = g.matvec(states.col(k));
        states.col_mut(k + 1).copy_from_slice(&next);
    }
    states
}

/// Family y_{k+1} = G(mu) y_k with G = [[0.9 - 0.2 mu, 0.05], [0, 0.5 + 0.1 mu]].
fn family_map(mu: f64) -> Matrix {
    Matrix::from_rows(&[&[0.9 - 0.2 * mu, 0.05], &[0.0, 0.5 + 0.1 * mu]])
}

fn family_set(mus: &[f64], steps: usize) -> TrainingSet {
    let series = mus
        .iter()
        .map(|&mu| {
            series_from_states(vec![mu], linear_trajectory(&family_map(mu), &[1.0, 0.8], steps), 0.1)
        })
        .collect();
    TrainingSet::new(series).unwrap()
}

fn relative_series_error(a: &SnapshotSeries, b: &Matrix) -> f64 {
    let mut err = 0.0;
    let mut norm = 0.0;
    for j in 0..a.n_times() {
        for (x, y) in a.state_at(j).iter().zip(b.col(j)) {
            err += (x - y) * (x - y);
            norm += y * y;
        }
    }
    (err / norm.max(f64::MIN_POSITIVE)).sqrt()
}

#[test]
fn stacked_single_series_matches_classical_dmd() {
    let ts = family_set(&[0.3], 20);
    let model = fit_stacked(&ts, 1.0, Some(2)).unwrap();
    let classical = fit_dmd(&ts.series()[0], 1.0, Some(2)).unwrap();
    let times = ts.series()[0].times().to_vec();
    let pred = model.predict(&[0.3], &times).unwrap();
    let (classical_states, _) = classical.reconstruct_series(&times).unwrap();
    assert!(relative_series_error(&pred.series, &classical_states) < 1e-10);
}

#[test]
fn stacked_shared_eigenvalues_recover_common_map() {
    // Two realizations of the same dynamics with different starts.
    let g = family_map(0.5);
    let s1 = series_from_states(vec![0.0], linear_trajectory(&g, &[1.0, 0.8], 20), 0.1);
    let s2 = series_from_states(vec![1.0], linear_trajectory(&g, &[-0.4, 1.3], 20), 0.1);
    let ts = TrainingSet::new(vec![s1, s2]).unwrap();
    let model = fit_stacked(&ts, 1.0, Some(2)).unwrap();
    let expect = crate::linalg::eig_general(&g).unwrap();
    let ParametricModel::Stacked(m) = &model else { panic!() };
    for (got, want) in m.eigenvalues.iter().zip(&expect.values) {
        assert!((got - want).norm() < 1e-8, "{got} vs {want}");
    }
}

#[test]
fn stacked_eigenvalues_shared_bitwise_across_queries() {
    let ts = family_set(&[0.0, 0.5, 1.0], 20);
    let model = fit_stacked(&ts, 1.0, Some(6)).unwrap();
    let a = model.model_at(&[0.2]).unwrap();
    let b = model.model_at(&[0.9]).unwrap();
    assert_eq!(a.eigenvalues, b.eigenvalues);
}

#[test]
fn stacked_node_prediction_equals_block_reconstruction() {
    let ts = family_set(&[0.0, 0.5, 1.0], 20);
    let model = fit_stacked(&ts, 1.0, Some(6)).unwrap();
    let times = ts.series()[1].times().to_vec();
    let pred = model.predict(&[0.5], &times).unwrap();
    let ParametricModel::Stacked(m) = &model else { panic!() };
    // Evaluate block 1 directly.
    let block_model = crate::dmd::DmdModel {
        modes: m.mode_blocks[1].clone(),
        eigenvalues: m.eigenvalues.clone(),
        init_coeffs: m.init_coeffs[1].clone(),
        dt: m.meta.dt,
        rank: m.meta.rank,
    };
    let (states, _) = block_model.reconstruct_series(&times).unwrap();
    assert!(relative_series_error(&pred.series, &states) < 1e-12);
}

#[test]
fn stacked_memory_cap_enforced() {
    let ts = family_set(&[0.0, 1.0], 20);
    let options = FitOptions { memory_cap_bytes: 64, ..FitOptions::default() };
    match fit_stacked_with(&ts, 1.0, Some(2), &options) {
        Err(Error::Resource(msg)) => assert!(msg.contains("64"), "cap not named: {msg}"),
        other => panic!("expected resource error, got {other:?}"),
    }
}

#[test]
fn stacked_global_coefficient_switch_changes_fit() {
    let ts = family_set(&[0.0, 1.0], 20);
    let per_param = fit_stacked_with(&ts, 1.0, Some(4), &FitOptions::default()).unwrap();
    let global = fit_stacked_with(
        &ts,
        1.0,
        Some(4),
        &FitOptions { global_init_coeffs: true, ..FitOptions::default() },
    )
    .unwrap();
    let (ParametricModel::Stacked(a), ParametricModel::Stacked(b)) = (&per_param, &global) else {
        panic!()
    };
    assert!(!a.global_init_coeffs && b.global_init_coeffs);
    assert_eq!(b.init_coeffs[0], b.init_coeffs[1]);
}

#[test]
fn interpolation_error_shrinks_with_node_spacing() {
    let theta = [0.25];
    let steps = 20;
    let truth = linear_trajectory(&family_map(theta[0]), &[1.0, 0.8], steps);
    let times: Vec<f64> = (0..=steps).map(|i| i as f64 * 0.1).collect();

    let mut errors = Vec::new();
    for nodes in [vec![0.0, 0.5], vec![0.125, 0.375]] {
        let ts = family_set(&nodes, steps);
        let model = fit_parametric(Method::Rkoi, &ts, 1.0, Some(2), &FitOptions::default()).unwrap();
        let pred = model.predict(&theta, &times).unwrap();
        errors.push(relative_series_error(&pred.series, &truth));
    }
    assert!(errors[0] < 0.1, "coarse interpolation error too large: {}", errors[0]);
    assert!(
        errors[1] < 0.6 * errors[0],
        "halving the spacing did not reduce the error second-order: {errors:?}"
    );

    let mut stacked_errors = Vec::new();
    for nodes in [vec![0.0, 0.5], vec![0.125, 0.375]] {
        let ts = family_set(&nodes, steps);
        let model = fit_stacked(&ts, 1.0, Some(4)).unwrap();
        let pred = model.predict(&theta, &times).unwrap();
        stacked_errors.push(relative_series_error(&pred.series, &truth));
    }
    assert!(stacked_errors[1] < 0.7 * stacked_errors[0], "{stacked_errors:?}");
}

#[test]
fn fit_local_identical_data_yields_identical_decompositions() {
    let states = linear_trajectory(&family_map(0.4), &[1.0, 0.8], 15);
    let s1 = series_from_states(vec![0.0], states.clone(), 0.1);
    let s2 = series_from_states(vec![1.0], states, 0.1);
    let ts = TrainingSet::new(vec![s1, s2]).unwrap();
    let (decomps, _) = fit_local(&ts, 1.0, Some(2)).unwrap();
    assert_eq!(decomps[0].u, decomps[1].u);
    assert_eq!(decomps[0].koopman, decomps[1].koopman);
    assert_eq!(decomps[0].eig_values, decomps[1].eig_values);
    assert_eq!(decomps[0].init_coeffs, decomps[1].init_coeffs);
}

#[test]
fn fit_local_pairs_parameter_dependent_eigenvalue_first() {
    let mus = [0.5, 0.7];
    let series: Vec<SnapshotSeries> = mus
        .iter()
        .map(|&mu| {
            let g = Matrix::from_rows(&[&[mu, 0.0], &[0.0, 0.3]]);
            series_from_states(vec![mu], linear_trajectory(&g, &[1.0, 0.8], 15), 0.1)
        })
        .collect();
    let ts = TrainingSet::new(series).unwrap();
    let (decomps, diags) = fit_local(&ts, 1.0, Some(2)).unwrap();
    for (d, &mu) in decomps.iter().zip(&mus) {
        assert!((d.eig_values[0] - Complex64::new(mu, 0.0)).norm() < 1e-10);
        assert!((d.eig_values[1] - Complex64::new(0.3, 0.0)).norm() < 1e-10);
    }
    assert!(diags.is_empty(), "unexpected crossing warnings: {diags:?}");
}

/// Synthesize a data matrix with a prescribed singular spectrum.
fn states_with_spectrum(n: usize, cols: usize, sigma: &[f64], seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = Matrix::from_fn(n, sigma.len(), |_, _| rng.random_range(-1.0..1.0));
    let (qu, _) = householder_qr(&a);
    let b = Matrix::from_fn(cols, sigma.len(), |_, _| rng.random_range(-1.0..1.0));
    let (qv, _) = householder_qr(&b);
    let mut scaled = qu;
    scaled.scale_columns(sigma);
    scaled.mul(&qv.transpose())
}

#[test]
fn fit_local_escalates_to_max_candidate_rank() {
    // Candidate ranks 2 and 3 under tau = 0.999; the shared rank is 3.
    let s1 = series_from_states(
        vec![0.0],
        states_with_spectrum(12, 9, &[1.0, 0.1, 1e-8], 5),
        0.1,
    );
    let s2 = series_from_states(
        vec![1.0],
        states_with_spectrum(12, 9, &[1.0, 0.5, 0.3], 6),
        0.1,
    );
    let ts = TrainingSet::new(vec![s1, s2]).unwrap();
    let (decomps, _) = fit_local(&ts, 0.999, None).unwrap();
    assert_eq!(decomps[0].rank(), 3);
    assert_eq!(decomps[1].rank(), 3);
}

#[test]
fn fit_local_names_rank_deficient_series() {
    let s1 = series_from_states(
        vec![0.0],
        states_with_spectrum(12, 9, &[1.0, 0.1], 7),
        0.1,
    );
    let s2 = series_from_states(
        vec![1.0],
        states_with_spectrum(12, 9, &[1.0, 0.5, 0.3, 0.2], 8),
        0.1,
    );
    let ts = TrainingSet::new(vec![s1, s2]).unwrap();
    match fit_local(&ts, 1.0, Some(4)) {
        Err(Error::RankDeficient(msg)) => assert!(msg.contains("series 0"), "{msg}"),
        other => panic!("expected rank deficiency, got {other:?}"),
    }
}

#[test]
fn align_modes_undoes_a_sign_flip_exactly() {
    let ts = family_set(&[0.0, 1.0], 15);
    let (decomps, _) = fit_local(&ts, 1.0, Some(2)).unwrap();
    let reference = decomps[0].clone();

    // Build a flipped copy as a consistent pipeline would produce it:
    // U D, V D, D A D, D W.
    let mut flipped = reference.clone();
    flipped.params = vec![2.0];
    let k = 1;
    for x in flipped.u.col_mut(k) {
        *x = -*x;
    }
    for x in flipped.v.col_mut(k) {
        *x = -*x;
    }
    for i in 0..flipped.koopman.rows() {
        if i != k {
            let a = flipped.koopman[(i, k)];
            flipped.koopman[(i, k)] = -a;
            let b = flipped.koopman[(k, i)];
            flipped.koopman[(k, i)] = -b;
        }
    }
    for col in 0..flipped.eig_vectors.cols() {
        let z = flipped.eig_vectors[(k, col)];
        flipped.eig_vectors[(k, col)] = -z;
    }

    let aligned = align_modes(vec![reference.clone(), flipped], 0);
    assert_eq!(aligned[1].u, reference.u);
    assert_eq!(aligned[1].v, reference.v);
    assert_eq!(aligned[1].koopman, reference.koopman);
    // Eigenvectors agree after the phase convention is restored.
    for col in 0..reference.eig_vectors.cols() {
        for row in 0..reference.eig_vectors.rows() {
            assert!(
                (aligned[1].eig_vectors[(row, col)] - reference.eig_vectors[(row, col)]).norm()
                    < 1e-14
            );
        }
    }
}

#[test]
fn align_modes_idempotent_bytes() {
    let ts = family_set(&[0.0, 0.5, 1.0], 15);
    let (decomps, _) = fit_local(&ts, 1.0, Some(2)).unwrap();
    let again = align_modes(decomps.clone(), 0);
    for (a, b) in decomps.iter().zip(&again) {
        assert_eq!(a.u, b.u);
        assert_eq!(a.v, b.v);
        assert_eq!(a.koopman, b.koopman);
        assert_eq!(a.eig_vectors, b.eig_vectors);
        assert_eq!(a.init_coeffs, b.init_coeffs);
    }
}

#[test]
fn align_modes_makes_inner_products_nonnegative_and_preserves_spans() {
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    let base = states_with_spectrum(16, 11, &[2.0, 1.0, 0.5, 0.25], 41);
    let mut series = vec![series_from_states(vec![0.0], base, 0.1)];
    for j in 1..4 {
        series.push(series_from_states(
            vec![j as f64],
            states_with_spectrum(16, 11, &[2.0, 1.0, 0.5, 0.25], 41 + j as u64),
            0.1,
        ));
    }
    let _ = &mut rng;
    let ts = TrainingSet::new(series).unwrap();
    let (decomps, _) = fit_local(&ts, 1.0, Some(4)).unwrap();
    let reference = &decomps[0];
    for d in &decomps[1..] {
        for k in 0..d.rank() {
            let dot: f64 = d.u.col(k).iter().zip(reference.u.col(k)).map(|(a, b)| a * b).sum();
            assert!(dot >= 0.0, "column {k} misaligned after fit_local");
        }
        // Projector is unchanged by column sign flips.
        let before = d.u.mul(&d.u.transpose());
        let mut flipped = d.clone();
        for x in flipped.u.col_mut(0) {
            *x = -*x;
        }
        let after = flipped.u.mul(&flipped.u.transpose());
        let mut diff = 0.0_f64;
        for j in 0..before.cols() {
            for i in 0..before.rows() {
                diff = diff.max((before[(i, j)] - after[(i, j)]).abs());
            }
        }
        assert!(diff < 1e-12);
    }
}

#[test]
fn pair_eigensystems_recovers_reference_order() {
    let ts = family_set(&[0.0, 1.0], 15);
    let (decomps, _) = fit_local(&ts, 1.0, Some(2)).unwrap();
    let mut shuffled = decomps.clone();
    // Swap the two eigen-slots of the second decomposition.
    shuffled[1].eig_values.swap(0, 1);
    shuffled[1].init_coeffs.swap(0, 1);
    let col0: Vec<Complex64> = shuffled[1].eig_vectors.col(0).to_vec();
    let col1: Vec<Complex64> = shuffled[1].eig_vectors.col(1).to_vec();
    shuffled[1].eig_vectors.col_mut(0).copy_from_slice(&col1);
    shuffled[1].eig_vectors.col_mut(1).copy_from_slice(&col0);

    let (paired, _) = pair_eigensystems(shuffled, 0);
    assert_eq!(paired[1].eig_values, decomps[1].eig_values);
    assert_eq!(paired[1].init_coeffs, decomps[1].init_coeffs);
}

#[test]
fn pair_eigensystems_preserves_multiset_and_warns_on_large_cost() {
    let ts = family_set(&[0.0, 1.0], 15);
    let (mut decomps, _) = fit_local(&ts, 1.0, Some(2)).unwrap();
    // Push the second spectrum far away to trigger the crossing warning.
    decomps[1].eig_values = vec![Complex64::new(5.0, 0.0), Complex64::new(-4.0, 0.0)];
    let before: Vec<Complex64> = {
        let mut v = decomps[1].eig_values.clone();
        v.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        v
    };
    let (paired, diags) = pair_eigensystems(decomps, 0);
    let after: Vec<Complex64> = {
        let mut v = paired[1].eig_values.clone();
        v.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        v
    };
    assert_eq!(before, after, "pairing changed the eigenvalue multiset");
    assert!(
        diags.iter().any(|d| matches!(d, Diagnostic::EigenCrossing { .. })),
        "expected a crossing warning"
    );
}

#[test]
fn repi_interpolates_linear_eigenvalue_family_exactly() {
    let mus = [0.0, 1.0];
    let series: Vec<SnapshotSeries> = mus
        .iter()
        .map(|&mu| {
            let g = Matrix::from_rows(&[&[0.5 + 0.1 * mu, 0.0], &[0.0, 0.3]]);
            series_from_states(vec![mu], linear_trajectory(&g, &[1.0, 0.8], 15), 0.1)
        })
        .collect();
    let ts = TrainingSet::new(series).unwrap();
    let model = fit_parametric(Method::Repi, &ts, 1.0, Some(2), &FitOptions::default()).unwrap();
    for theta in [0.25, 0.4, 0.75] {
        let surrogate = model.model_at(&[theta]).unwrap();
        let expect = 0.5 + 0.1 * theta;
        assert!(
            (surrogate.eigenvalues[0] - Complex64::new(expect, 0.0)).norm() < 1e-12,
            "theta {theta}: {} vs {expect}",
            surrogate.eigenvalues[0]
        );
    }
}

#[test]
fn rkoi_interpolates_operator_entries_exactly() {
    let ts = family_set(&[0.0, 1.0], 15);
    let (decomps, _) = fit_local(&ts, 1.0, Some(2)).unwrap();
    let theta = 0.35;
    let surrogate = match fit_parametric(Method::Rkoi, &ts, 1.0, Some(2), &FitOptions::default())
        .unwrap()
    {
        m @ ParametricModel::Rkoi(_) => m.model_at(&[theta]).unwrap(),
        _ => unreachable!(),
    };
    // Entrywise linear reproduction oracle.
    let w = [1.0 - theta, theta];
    let mut expect_a = Matrix::zeros(2, 2);
    for (d, &wi) in decomps.iter().zip(&w) {
        for j in 0..2 {
            for i in 0..2 {
                expect_a[(i, j)] += wi * d.koopman[(i, j)];
            }
        }
    }
    let expect_eig = crate::linalg::eig_general(&expect_a).unwrap();
    for (got, want) in surrogate.eigenvalues.iter().zip(&expect_eig.values) {
        assert!((got - want).norm() < 1e-10);
    }
}

#[test]
fn rkoi_scalar_two_node_average() {
    let mus = [0.0, 1.0];
    let rates: [f64; 2] = [0.9, 0.7];
    let series: Vec<SnapshotSeries> = mus
        .iter()
        .zip(&rates)
        .map(|(&mu, &rate)| {
            let states = Matrix::from_fn(1, 8, |_, j| rate.powi(j as i32));
            series_from_states(vec![mu], states, 0.1)
        })
        .collect();
    let ts = TrainingSet::new(series).unwrap();
    let model = fit_parametric(Method::Rkoi, &ts, 1.0, Some(1), &FitOptions::default()).unwrap();
    let surrogate = model.model_at(&[0.5]).unwrap();
    assert!((surrogate.eigenvalues[0] - Complex64::new(0.8, 0.0)).norm() < 1e-12);
}

#[test]
fn node_consistency_all_three_methods() {
    let ts = family_set(&[0.0, 0.5, 1.0], 20);
    let times = ts.series()[0].times().to_vec();
    let shared_rank = 2;

    for method in [Method::Repi, Method::Rkoi] {
        let model =
            fit_parametric(method, &ts, 1.0, Some(shared_rank), &FitOptions::default()).unwrap();
        for s in ts.series() {
            let pred = model.predict(s.params(), &times).unwrap();
            let node = fit_dmd(s, 1.0, Some(shared_rank)).unwrap();
            let (node_states, _) = node.reconstruct_series(&times).unwrap();
            let err = relative_series_error(&pred.series, &node_states);
            assert!(err < 1e-9, "{method} node consistency error {err}");
        }
    }

    let stacked = fit_stacked(&ts, 1.0, Some(6)).unwrap();
    let ParametricModel::Stacked(m) = &stacked else { panic!() };
    for (j, s) in ts.series().iter().enumerate() {
        let pred = stacked.predict(s.params(), &times).unwrap();
        let block_model = crate::dmd::DmdModel {
            modes: m.mode_blocks[j].clone(),
            eigenvalues: m.eigenvalues.clone(),
            init_coeffs: m.init_coeffs[j].clone(),
            dt: m.meta.dt,
            rank: m.meta.rank,
        };
        let (states, _) = block_model.reconstruct_series(&times).unwrap();
        let err = relative_series_error(&pred.series, &states);
        assert!(err < 1e-9, "stacked node consistency error {err}");
    }
}

#[test]
fn single_neighbor_returns_nearest_node_model() {
    let ts = family_set(&[0.0, 1.0], 15);
    let (decomps, _) = fit_local(&ts, 1.0, Some(2)).unwrap();
    let times = ts.series()[0].times().to_vec();
    let pred = predict_repi(&decomps, &[0.1], &times, 1).unwrap();
    let node = fit_dmd(&ts.series()[0], 1.0, Some(2)).unwrap();
    let (node_states, _) = node.reconstruct_series(&times).unwrap();
    assert!(relative_series_error(&pred.series, &node_states) < 1e-9);
}

#[test]
fn lazy_rkoi_does_exactly_j_svds_and_matches_eager() {
    let ts = family_set(&[0.0, 0.25, 0.5, 0.75, 1.0], 20);
    let times = ts.series()[0].times().to_vec();
    let theta = [0.6];

    let lazy = predict_rkoi_from_series(&ts, &theta, &times, 2, 1.0, Some(2)).unwrap();
    assert_eq!(lazy.svd_calls, 2);

    let model = fit_parametric(Method::Rkoi, &ts, 1.0, Some(2), &FitOptions::default()).unwrap();
    let eager = model.predict(&theta, &times).unwrap();
    assert_eq!(eager.svd_calls, 0);

    let mut diff = 0.0_f64;
    let mut norm = 0.0_f64;
    for j in 0..times.len() {
        for (a, b) in lazy.series.state_at(j).iter().zip(eager.series.state_at(j)) {
            diff += (a - b) * (a - b);
            norm += b * b;
        }
    }
    assert!((diff / norm.max(1e-300)).sqrt() < 1e-9);
}

#[test]
fn lazy_repi_counts_and_runs() {
    let ts = family_set(&[0.0, 0.5, 1.0], 15);
    let times = ts.series()[0].times().to_vec();
    let pred = predict_repi_from_series(&ts, &[0.3], &times, 2, 1.0, Some(2)).unwrap();
    assert_eq!(pred.svd_calls, 2);
    assert!(pred.series.state_at(0).iter().all(|x| x.is_finite()));
}

#[test]
fn extrapolation_warning_attached_beyond_range() {
    let ts = family_set(&[0.0, 0.5, 1.0], 15);
    let model = fit_parametric(Method::Rkoi, &ts, 1.0, Some(2), &FitOptions::default()).unwrap();
    let times = ts.series()[0].times().to_vec();
    let pred = model.predict(&[1.15], &times).unwrap();
    assert!(pred
        .diagnostics
        .iter()
        .any(|d| matches!(d, Diagnostic::Extrapolation { .. })));
    let inside = model.predict(&[0.7], &times).unwrap();
    assert!(!inside
        .diagnostics
        .iter()
        .any(|d| matches!(d, Diagnostic::Extrapolation { .. })));
}

#[test]
fn usable_rank_cap_reflects_data() {
    let s1 = series_from_states(vec![0.0], states_with_spectrum(10, 8, &[1.0, 0.5], 1), 0.1);
    let s2 =
        series_from_states(vec![1.0], states_with_spectrum(10, 8, &[1.0, 0.5, 0.25], 2), 0.1);
    let ts = TrainingSet::new(vec![s1, s2]).unwrap();
    assert_eq!(usable_rank_cap(&ts).unwrap(), 2);
}

#[test]
fn training_set_validation() {
    let a = series_from_states(vec![0.0], Matrix::zeros(2, 4), 0.1);
    let b = series_from_states(vec![0.0], Matrix::zeros(2, 4), 0.1);
    assert!(TrainingSet::new(vec![a.clone(), b]).is_err(), "duplicate parameters accepted");
    let c = series_from_states(vec![1.0], Matrix::zeros(3, 4), 0.1);
    assert!(TrainingSet::new(vec![a, c]).is_err(), "shape mismatch accepted");
}
