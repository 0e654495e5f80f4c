use confdec_core::decoherence::{accumulate_phase, coherence_mc, fit_decoherence_rate, phase_history, McParams};
use confdec_core::field::FieldSampler;
use proptest::prelude::*;

const TIMES: [f64; 4] = [100.0, 200.0, 300.0, 400.0];

#[test]
fn result_does_not_depend_on_thread_count() {
    let p = McParams::natural(0.1, 3.0, TIMES.to_vec(), 600, 21);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| coherence_mc(&p).unwrap())
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn first_order_terms_cancel_on_average() {
    let p = McParams::natural(0.1, 5.0, TIMES.to_vec(), 10_000, 8);
    let est = coherence_mc(&p).unwrap();
    for r in &est.records {
        assert!(r.dphi_mean.abs() < 4.0 * r.dphi_stderr, "{r:?}");
    }
}

#[test]
fn single_position_phase_has_second_order_mean() {
    // A = A0 (xi_plus + xi_minus), so <A^2> = 2 A0^2 and
    // <phi> = -(M/hbar) int <A + A^2/2> dt = -M A0^2 T.
    let p = McParams::natural(0.1, 5.0, vec![200.0], 100, 0);
    let sampler = FieldSampler::new(&p.model().unwrap(), p.field_grid()).unwrap();
    let n = 4000;
    let phases: Vec<f64> = (0..n)
        .map(|i| accumulate_phase(&sampler.sample(1000 + i), 0.0, 200.0, &p).unwrap())
        .collect();
    let mean = phases.iter().sum::<f64>() / n as f64;
    let sd = (phases.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt();
    let expected = -p.mass * p.a0 * p.a0 * 200.0;
    assert!(
        (mean - expected).abs() < 4.0 * sd / (n as f64).sqrt(),
        "{mean} vs {expected}"
    );
}

#[test]
fn stderr_scales_as_inverse_root_n() {
    let se = |n| {
        let est = coherence_mc(&McParams::natural(0.1, 5.0, TIMES.to_vec(), n, 4)).unwrap();
        est.records[3].stderr
    };
    let ratio = se(1000) / se(16_000);
    assert!((ratio / 4.0 - 1.0).abs() < 0.1, "{ratio}");
}

#[test]
fn fitted_rate_tracks_analytic_kernel() {
    let p = McParams::natural(0.1, 1.0, TIMES.to_vec(), 20_000, 77);
    let fit = fit_decoherence_rate(&coherence_mc(&p).unwrap()).unwrap();
    let analytic = p.analytic_rate();
    assert!((fit.rate - analytic).abs() < 4.0 * fit.stderr, "{fit:?} vs {analytic}");
    assert!(fit.stderr < 0.1 * analytic);
}

#[test]
fn invalid_parameters_are_rejected() {
    assert!(coherence_mc(&McParams::natural(0.1, 5.0, TIMES.to_vec(), 99, 1)).is_err());
    assert!(coherence_mc(&McParams::natural(0.0, 5.0, TIMES.to_vec(), 100, 1)).is_err());
    assert!(coherence_mc(&McParams::natural(0.3, 5.0, TIMES.to_vec(), 100, 1)).is_err());
    assert!(coherence_mc(&McParams::natural(0.1, 50.0, TIMES.to_vec(), 100, 1)).is_err());
    let mut p = McParams::natural(0.1, 5.0, TIMES.to_vec(), 100, 1);
    p.dt = 0.25;
    assert!(coherence_mc(&p).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn phase_history_is_additive(seed in any::<u64>(), t1 in 10.0f64..60.0, t2 in 60.0f64..120.0) {
        let p = McParams::natural(0.1, 2.0, vec![t2], 100, seed);
        let sampler = FieldSampler::new(&p.model().unwrap(), p.field_grid()).unwrap();
        let r = sampler.sample(seed);
        let h = phase_history(&r, 2.0, &[t1, t2], &p).unwrap();
        let direct = accumulate_phase(&r, 2.0, t2, &p).unwrap();
        prop_assert!((h[1] - direct).abs() <= 1e-9 * direct.abs().max(1.0));
        prop_assert!((h[0] - accumulate_phase(&r, 2.0, t1, &p).unwrap()).abs() <= 1e-9 * h[0].abs().max(1.0));
    }

    #[test]
    fn coherence_magnitude_bounded(seed in any::<u64>(), dx in 0.1f64..4.0) {
        let est = coherence_mc(&McParams::natural(0.1, dx, vec![50.0, 100.0], 100, seed)).unwrap();
        for r in &est.records {
            prop_assert!(r.mean.norm() <= 1.0 + 1e-12);
            prop_assert!(r.stderr >= 0.0);
        }
    }
}
