//! Monte Carlo checks of spectral windows, central values, tails and the
//! random-section experiments.

use chanlab::concentration::{
    central_value_estimate, eigen_window_experiment, lipschitz_restriction_test, levy_tail_experiment,
    omega_membership_experiment, oscillation_experiment, oscillation_from_extremes, sample_hs_spectra,
    singular_window_experiment, singular_window_report, CentralValues, ObjectiveFamily, SectionConfig,
    SectionExtremes,
};
use chanlab::matrix::{g_tilde, operator_norm, RectMatrix};
use chanlab::optimize::OptimizerConfig;
use chanlab::sampling::{uniform_hs_sphere, StreamRng};

#[test]
fn singular_window_at_both_widths() {
    let wide = singular_window_experiment(4, 256, 1000, 2.0, 1).unwrap();
    assert!(wide.pass_fraction >= 0.99, "{}", wide.pass_fraction);
    let narrow = singular_window_experiment(4, 256, 1000, 0.1, 1).unwrap();
    assert!(narrow.pass_fraction <= 0.5, "{}", narrow.pass_fraction);
    assert_eq!(wide.worst_deviation, narrow.worst_deviation);
}

#[test]
fn eigen_window_at_default_constant() {
    let r = eigen_window_experiment(4, 256, 1000, 6.0, 2).unwrap();
    assert!(r.pass_fraction >= 0.99, "{}", r.pass_fraction);
}

#[test]
fn spectra_replay_exactly() {
    assert_eq!(sample_hs_spectra(3, 20, 50, 3), sample_hs_spectra(3, 20, 50, 3));
    let spectra = sample_hs_spectra(3, 20, 50, 3);
    assert_eq!(
        singular_window_report(&spectra, 3, 20, 1.0),
        singular_window_experiment(3, 20, 50, 1.0, 3).unwrap()
    );
}

#[test]
fn opnorm_median_near_edge() {
    let (k, d) = (4, 256);
    let cv = central_value_estimate(
        |rng: &mut StreamRng| uniform_hs_sphere(k, d, rng),
        |m: &RectMatrix| operator_norm(m),
        2000,
        4,
    )
    .unwrap();
    let target = 0.5 + 1.0 / 16.0;
    assert!((cv.median - target).abs() <= 0.1 * target, "median {}", cv.median);
    assert!(cv.q1 <= cv.median && cv.median <= cv.q3);
}

#[test]
fn g_tilde_median_near_inverse_root_d() {
    let (k, d) = (4, 64);
    let cv = central_value_estimate(
        |rng: &mut StreamRng| uniform_hs_sphere(k, d, rng),
        |m: &RectMatrix| g_tilde(m).unwrap(),
        2000,
        5,
    )
    .unwrap();
    let target = (1.0 / d as f64).sqrt();
    assert!((cv.median - target).abs() <= 0.15 * target, "median {}", cv.median);
}

#[test]
fn opnorm_tail_is_small_beyond_window() {
    let (k, d) = (4, 64);
    let eps = 4.0 / ((k * d) as f64).sqrt();
    let curve = levy_tail_experiment(
        |rng: &mut StreamRng| uniform_hs_sphere(k, d, rng),
        |m: &RectMatrix| operator_norm(m),
        1.0,
        2 * k * d,
        &[eps / 4.0, eps / 2.0, eps],
        10_000,
        6,
    )
    .unwrap();
    assert!(curve.exceed_prob[2] < 0.05, "{:?}", curve.exceed_prob);
    assert!(curve.exceed_prob.windows(2).all(|w| w[1] <= w[0]));
    // every sample inside the eigenvalue window with C0 = 6 keeps ‖M‖∞ close to the median
    let window = singular_window_experiment(k, d, 10_000, 2.0, 6).unwrap();
    assert!(window.pass_fraction >= 0.95);
}

#[test]
fn lipschitz_restriction_has_no_violations() {
    let r = lipschitz_restriction_test(4, 64, 2000, 7).unwrap();
    assert_eq!(r.violations, 0);
    assert_eq!(r.chain_violations, 0);
    assert!(r.worst_ratio < 1.0);
}

fn quick_optimizer(starts: usize, max_iters: usize) -> OptimizerConfig {
    OptimizerConfig {
        starts,
        max_iters,
        ..OptimizerConfig::default()
    }
}

#[test]
fn small_sections_stay_inside_omega() {
    let cfg = SectionConfig {
        k: 4,
        d: 256,
        m: 16,
        subspace_trials: 100,
        probes: 10_000,
        optimizer: quick_optimizer(4, 100),
        seed: 8,
    };
    let r = omega_membership_experiment(&cfg).unwrap();
    assert!(r.fraction >= 0.95, "fraction {}", r.fraction);
}

#[test]
fn opnorm_oscillation_is_within_twice_inverse_root_k() {
    let cfg = SectionConfig {
        k: 4,
        d: 256,
        m: 16,
        subspace_trials: 10,
        probes: 1000,
        optimizer: quick_optimizer(4, 100),
        seed: 9,
    };
    let r = oscillation_experiment(ObjectiveFamily::OpNorm, &cfg, 500).unwrap();
    assert!(r.osc_values.iter().all(|&o| o <= 2.0 / 2.0), "{:?}", r.osc_values);
    assert!(r.extremes.iter().all(|e| e.min <= e.max));
}

#[test]
fn constant_family_has_zero_oscillation() {
    let center = CentralValues { median: 0.3, q1: 0.3, q3: 0.3, mean: 0.3 };
    let extremes = vec![SectionExtremes { max: 0.3, min: 0.3 }; 4];
    let r = oscillation_from_extremes(ObjectiveFamily::GTilde, center, extremes);
    assert!(r.osc_values.iter().all(|&o| o == 0.0));
}

#[test]
fn section_experiments_replay_exactly() {
    let cfg = SectionConfig {
        k: 2,
        d: 16,
        m: 4,
        subspace_trials: 3,
        probes: 50,
        optimizer: quick_optimizer(3, 50),
        seed: 10,
    };
    let a = oscillation_experiment(ObjectiveFamily::GTilde, &cfg, 100).unwrap();
    let b = oscillation_experiment(ObjectiveFamily::GTilde, &cfg, 100).unwrap();
    assert_eq!(a, b);
}
