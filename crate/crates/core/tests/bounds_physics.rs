use std::f64::consts::PI;

use confdec_core::bounds::{
    bound_report, build_cutoff_model, contrast_loss, cosmological_feasibility, lambda_bound, predicted_contrast_loss,
    zero_point_energy_by_quadrature, zero_point_energy_density, CosmoSourceParams, ExperimentParams,
};
use confdec_core::conformal::{conformal_factor, newtonian_potential};
use confdec_core::{Constants, Constants32, Error};
use proptest::prelude::*;

#[test]
fn caesium_bound_against_independent_evaluation() {
    // Evaluated with mpmath from CODATA 2018 constants.
    let k = Constants::si();
    let lambda = lambda_bound(&ExperimentParams::caesium_fountain(), &k).unwrap();
    assert!((lambda / 30.664553259275692 - 1.0).abs() < 1e-12);
}

#[test]
fn cosmological_source_is_negligible() {
    let k = Constants::si();
    let loss = cosmological_feasibility(
        &CosmoSourceParams::closure_limit(),
        &ExperimentParams::caesium_fountain(),
        &k,
    )
    .unwrap();
    assert!((loss / 1.4186934503594983e-81 - 1.0).abs() < 1e-9);
    let report = bound_report(
        &ExperimentParams::caesium_fountain(),
        &CosmoSourceParams::closure_limit(),
        &k,
    )
    .unwrap();
    assert_eq!(report.cosmological_loss, loss);
    assert!(report.discrepancy);
}

#[test]
fn zero_point_density_in_si() {
    let k = Constants::si();
    let omega = 2.0 * PI / (100.0 * k.t_planck);
    let rho = zero_point_energy_density(omega, &k);
    assert!((rho / 4.572535203583924e106 - 1.0).abs() < 1e-12);
    assert!((zero_point_energy_by_quadrature(omega, &k).unwrap() / rho - 1.0).abs() < 1e-10);
}

#[test]
fn sub_planck_cutoff_rejected() {
    assert!(matches!(
        build_cutoff_model(0.5, &Constants::si()),
        Err(Error::SubPlanckCutoff(_))
    ));
}

#[test]
fn single_precision_closed_forms() {
    let k32 = Constants32::natural();
    let f: f32 = conformal_factor(0.1f32, 4).unwrap();
    assert!((f - 1.21).abs() < 1e-6);
    let v: f32 = newtonian_potential(0.1f32, 2.0, &k32, 4).unwrap();
    assert!((v - 0.21).abs() < 1e-6);
}

proptest! {
    #[test]
    fn bound_scales_as_seventh_root(t in 0.01f64..10.0, factor in 1.5f64..100.0) {
        let k = Constants::si();
        let a = lambda_bound(&ExperimentParams::new(132.9, t, 0.03).unwrap(), &k).unwrap();
        let b = lambda_bound(&ExperimentParams::new(132.9, t * factor, 0.03).unwrap(), &k).unwrap();
        prop_assert!((b / a / factor.powf(1.0 / 7.0) - 1.0).abs() < 1e-12);
        let c = lambda_bound(&ExperimentParams::new(132.9 * factor, t, 0.03).unwrap(), &k).unwrap();
        prop_assert!((c / a / factor.powf(2.0 / 7.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn loss_at_bound_reproduces_input(mass in 1.0f64..1e4, t in 1e-3f64..10.0, loss in 1e-4f64..0.9) {
        let k = Constants::si();
        let exp = ExperimentParams::new(mass, t, loss).unwrap();
        let lambda = lambda_bound(&exp, &k).unwrap();
        prop_assume!(lambda >= 1.0);
        let model = build_cutoff_model(lambda, &k).unwrap();
        prop_assert!((predicted_contrast_loss(&exp, &model, &k) / loss - 1.0).abs() < 1e-9);
    }

    #[test]
    fn contrast_loss_grows_with_amplitude(a in 1e-6f64..1e-2, tau in 1e-44f64..1e-40) {
        let k = Constants::si();
        let m = 132.9 * k.amu;
        let lo = contrast_loss(m, a, tau, 0.32, &k);
        let hi = contrast_loss(m, 2.0 * a, tau, 0.32, &k);
        prop_assert!((hi / lo / 16.0 - 1.0).abs() < 1e-12);
    }
}
