use confdec_core::constants::PhysicalConstants;
use confdec_core::field::CorrelationModel;
use confdec_core::kernel::{
    decoherence_factor, evolve_pure_decoherence, evolve_with_free_hamiltonian, general_kernel, grw_params, io,
    DensityMatrix, GrwParams,
};
use confdec_core::Error;
use proptest::prelude::*;

fn natural() -> PhysicalConstants<f64> {
    PhysicalConstants::natural()
}

#[test]
fn coherence_between_peaks_follows_closed_form() {
    let grw = grw_params(1.0, 0.1, 1.0, &natural());
    let rho = DensityMatrix::cat(-10.0, 20.0 / 127.0, 128, (-3.0, 3.0), 0.8).unwrap();
    let t = 5_000.0;
    let out = evolve_pure_decoherence(&rho, &grw, t);
    let (i, j) = (19, 108);
    let dx = rho.x(j) - rho.x(i);
    let ratio = out.get(i, j).norm() / rho.get(i, j).norm();
    assert!((ratio - decoherence_factor(dx, t, &grw)).abs() < 1e-12);
    assert_eq!(out.get(i, i), rho.get(i, i));
}

#[test]
fn free_spreading_of_gaussian_packet() {
    let free = GrwParams::new(0.0, 1.0).unwrap();
    let (sigma, mass, t) = (0.7, 2.0, 3.0);
    let rho = DensityMatrix::gaussian(-30.0, 60.0 / 256.0, 256, 1.0, sigma).unwrap();
    let out = evolve_with_free_hamiltonian(&rho, &free, mass, &natural(), t / 60.0, 60).unwrap();
    let expected = sigma * sigma + (t / (2.0 * mass * sigma)).powi(2);
    assert!((out.position_variance() / expected - 1.0).abs() < 1e-4);
    assert!((out.position_mean() - 1.0).abs() < 1e-9);
}

#[test]
fn coarse_split_steps_are_rejected() {
    let grw = grw_params(1.0, 0.1, 1.0, &natural());
    let rho = DensityMatrix::cat(-10.0, 20.0 / 63.0, 64, (-4.0, 4.0), 1.0).unwrap();
    assert!(matches!(
        evolve_with_free_hamiltonian(&rho, &grw, 1.0, &natural(), 2.0, 2),
        Err(Error::StepTooLarge(_))
    ));
}

#[test]
fn json_and_csv_round_trips() {
    let rho = DensityMatrix::cat(-5.0, 0.25, 41, (-2.0, 2.0), 0.5).unwrap();
    let back = io::from_json(&io::to_json(&rho)).unwrap();
    assert_eq!(back.max_abs_diff(&rho), 0.0);
    let mut buf = Vec::new();
    io::write_csv(&mut buf, &rho, "m").unwrap();
    let back = io::read_csv(buf.as_slice()).unwrap();
    assert!(back.max_abs_diff(&rho) < 1e-15);
}

#[test]
fn general_kernel_with_tabulated_gaussian() {
    let table: Vec<(f64, f64)> = (0..=600)
        .map(|i| {
            let s = i as f64 * 0.01;
            (s, (-s * s).exp())
        })
        .collect();
    let tab = CorrelationModel::tabulated(1.0, &table).unwrap();
    let exact = CorrelationModel::gaussian(1.0).unwrap();
    let k = natural();
    for dx in [0.5, 2.0] {
        let a = general_kernel(&tab, dx, 200.0, 1.0, 0.1, &k).unwrap();
        let b = general_kernel(&exact, dx, 200.0, 1.0, 0.1, &k).unwrap();
        assert!((a / b - 1.0).abs() < 1e-4, "{a} vs {b}");
    }
}

fn cat_strategy() -> impl Strategy<Value = (DensityMatrix, GrwParams<f64>)> {
    (1.0f64..6.0, 0.3f64..1.5, 1e-4f64..1e-1, 0.5f64..10.0).prop_map(|(half, sigma, lambda, alpha)| {
        let rho = DensityMatrix::cat(-12.0, 24.0 / 95.0, 96, (-half, half), sigma).unwrap();
        (rho, GrwParams::new(lambda, alpha).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn decoherence_preserves_invariants((rho, grw) in cat_strategy(), t in 0.0f64..1e3) {
        let inv = evolve_pure_decoherence(&rho, &grw, t).invariants();
        prop_assert!((inv.trace - 1.0).abs() <= 1e-9);
        prop_assert!(inv.hermiticity_error <= 1e-12);
        prop_assert!(inv.min_eigenvalue >= -1e-9);
    }

    #[test]
    fn decoherence_is_a_semigroup((rho, grw) in cat_strategy(), t1 in 0.0f64..500.0, t2 in 0.0f64..500.0) {
        let once = evolve_pure_decoherence(&rho, &grw, t1 + t2);
        let twice = evolve_pure_decoherence(&evolve_pure_decoherence(&rho, &grw, t1), &grw, t2);
        prop_assert!(once.max_abs_diff(&twice) <= 1e-12);
    }

    #[test]
    fn factor_decreases_with_separation(a in 0.0f64..10.0, b in 0.0f64..10.0, t in 1.0f64..1e4) {
        let grw = grw_params(1.0, 0.1, 1.0, &natural());
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(decoherence_factor(hi, t, &grw) <= decoherence_factor(lo, t, &grw));
    }
}
