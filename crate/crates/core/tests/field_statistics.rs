use confdec_core::field::{
    estimate_g1, excess_kurtosis, g1_estimator_stderr, sample_field, CorrelationModel, Direction, FieldGrid,
    FieldSampler,
};
use proptest::prelude::*;

fn gaussian() -> CorrelationModel {
    CorrelationModel::gaussian(1.0).unwrap()
}

#[test]
fn same_seed_same_field() {
    let grid = FieldGrid::new(0.125, 4096, 0.0);
    let a = sample_field(&gaussian(), grid, 9).unwrap();
    let b = sample_field(&gaussian(), grid, 9).unwrap();
    let c = sample_field(&gaussian(), grid, 10).unwrap();
    assert_eq!(a.xi_plus, b.xi_plus);
    assert_eq!(a.xi_minus, b.xi_minus);
    assert_ne!(a.xi_plus, c.xi_plus);
    assert_ne!(a.xi_plus, a.xi_minus);
}

#[test]
fn ensemble_variance_is_one_everywhere() {
    // Pointwise variance over seeds: no edge effects from the embedding.
    let grid = FieldGrid::new(0.125, 512, 0.0);
    let sampler = FieldSampler::new(&gaussian(), grid).unwrap();
    let n = 2000;
    let mut sum_sq = vec![0.0; grid.n_steps];
    for seed in 0..n {
        let r = sampler.sample(seed);
        for (s, x) in sum_sq.iter_mut().zip(&r.xi_plus) {
            *s += x * x;
        }
    }
    // var of a chi-square mean over 2000 draws: sqrt(2 / 2000) ~ 0.032
    for k in [0, 1, 255, 510, 511] {
        let v = sum_sq[k] / n as f64;
        assert!((v - 1.0).abs() < 0.13, "variance {v} at step {k}");
    }
}

#[test]
fn ensemble_mean_g1_matches_model() {
    let model = gaussian();
    let grid = FieldGrid::new(0.125, 1 << 12, 0.0);
    let sampler = FieldSampler::new(&model, grid).unwrap();
    let seeds = 64;
    let mut acc = [0.0; 25];
    for seed in 0..seeds {
        let g1 = estimate_g1(&sampler.sample(seed), 3.0).unwrap();
        for (a, e) in acc.iter_mut().zip(&g1.plus) {
            *a += e.estimate;
        }
    }
    for (k, a) in acc.iter().enumerate() {
        let lag = k as f64 * 0.125;
        let mean = a / seeds as f64;
        let se = g1_estimator_stderr(&model, &grid, lag, false) / (seeds as f64).sqrt();
        assert!(
            (mean - model.g1(lag)).abs() < 4.0 * se,
            "lag {lag}: {mean} vs {}",
            model.g1(lag)
        );
    }
}

#[test]
fn tabulated_gaussian_matches_closed_form_statistics() {
    let table: Vec<(f64, f64)> = (0..=80)
        .map(|i| {
            let s = i as f64 * 0.1;
            (s, (-s * s).exp())
        })
        .collect();
    let model = CorrelationModel::tabulated(1.0, &table).unwrap();
    let grid = FieldGrid::new(0.125, 1 << 15, 0.0);
    let r = sample_field(&model, grid, 3).unwrap();
    let g1 = estimate_g1(&r, 2.0).unwrap();
    for e in g1.plus.iter().step_by(4) {
        let se = g1_estimator_stderr(&model, &grid, e.lag, false);
        assert!((e.estimate - (-e.lag * e.lag).exp()).abs() < 4.0 * se, "{e:?}");
    }
}

#[test]
fn field_is_gaussian() {
    let r = sample_field(&gaussian(), FieldGrid::new(0.125, 1 << 15, 0.0), 17).unwrap();
    let k = excess_kurtosis(&r);
    assert!(k.estimate.abs() < 4.0 * k.stderr, "{k:?}");
}

#[test]
fn counter_propagating_field_arguments() {
    let grid = FieldGrid::new(0.125, 800, -50.0);
    let r = sample_field(&gaussian(), grid, 1).unwrap();
    // xi_plus depends on t - x/c, xi_minus on t + x/c.
    let c = 1.0;
    let a = r.field_at(2.0, 5.0, Direction::Plus, c).unwrap();
    let b = r.field_at(0.0, 3.0, Direction::Plus, c).unwrap();
    assert_eq!(a, b);
    let a = r.field_at(2.0, 5.0, Direction::Minus, c).unwrap();
    let b = r.field_at(0.0, 7.0, Direction::Minus, c).unwrap();
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn spectrum_is_non_negative(tau in 0.2f64..5.0, steps in 8usize..32, n in 64usize..2048) {
        let dt = tau / steps as f64;
        let model = CorrelationModel::gaussian(tau).unwrap();
        let sampler = FieldSampler::new(&model, FieldGrid::new(dt, n, 0.0)).unwrap();
        prop_assert!(sampler.spectrum().iter().all(|l| *l >= 0.0));
        prop_assert!(sampler.embedding_size() >= n);
    }

    #[test]
    fn realization_has_requested_length(n in 16usize..4096, seed in any::<u64>()) {
        let r = sample_field(&gaussian(), FieldGrid::new(0.125, n, 0.0), seed).unwrap();
        prop_assert_eq!(r.xi_plus.len(), n);
        prop_assert_eq!(r.xi_minus.len(), n);
        prop_assert!(r.xi_plus.iter().chain(&r.xi_minus).all(|x| x.is_finite()));
    }
}
