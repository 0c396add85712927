//! Multistart search against dense random search and exact extremes.

use chanlab::channel::sample_channel;
use chanlab::matrix::{g_tilde, vector_to_matrix, CVector, SubspaceBasis};
use chanlab::optimize::{
    entropy_objective, finite_difference_check, g_objective, g_tilde_from_quartic, local_search, riemannian_extremize,
    Direction, OptimizerConfig, SphereObjective,
};
use chanlab::sampling::{haar_isometry, haar_unit_vector, RngStream};
use num_complex::Complex64;
use rayon::prelude::*;

fn random_search<O: SphereObjective>(obj: &O, points: usize, seed: u64) -> (f64, f64) {
    (0..points as u64)
        .into_par_iter()
        .map(|t| obj.evaluate(&haar_unit_vector(obj.dim(), &mut RngStream::new(seed, t).rng())))
        .fold(|| (f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
        .reduce(|| (f64::INFINITY, f64::NEG_INFINITY), |a, b| (a.0.min(b.0), a.1.max(b.1)))
}

#[test]
fn quartic_maximum_matches_dense_random_search() {
    let w = haar_isometry(6, 2, &mut RngStream::new(1, 0).rng()).unwrap();
    let obj = g_objective(w, 2, 3).unwrap();
    let best = riemannian_extremize(&obj, Direction::Max, &OptimizerConfig::default()).unwrap();
    let (_, oracle) = random_search(&obj, 1_000_000, 2);
    assert!((best.value - oracle).abs() <= 1e-4, "{} vs {oracle}", best.value);
    assert!(best.value >= oracle - 1e-12);
}

/// Roots of `det(M(1, z)) = 0` give the product vectors of a two-dimensional
/// subspace of `C² ⊗ C²`.
fn product_directions(w: &SubspaceBasis) -> Vec<CVector> {
    let mat = |a: usize| vector_to_matrix(w.columns().column(a).as_slice(), 2, 2).unwrap();
    let (a, b) = (mat(0), mat(1));
    let det2 = |p: Complex64, q: Complex64, r: Complex64, s: Complex64| p * s - q * r;
    // det(A + zB) = c0 + c1 z + c2 z²
    let c0 = det2(a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)]);
    let c2 = det2(b[(0, 0)], b[(0, 1)], b[(1, 0)], b[(1, 1)]);
    let c1 = a[(0, 0)] * b[(1, 1)] + b[(0, 0)] * a[(1, 1)] - a[(0, 1)] * b[(1, 0)] - b[(0, 1)] * a[(1, 0)];
    let disc = (c1 * c1 - c0 * c2 * 4.0).sqrt();
    [(-c1 + disc) / (c2 * 2.0), (-c1 - disc) / (c2 * 2.0)]
        .iter()
        .map(|&z| {
            let v = CVector::from_vec(vec![Complex64::new(1.0, 0.0), z]);
            v.unscale(v.norm())
        })
        .collect()
}

#[test]
fn two_qubit_sections_reach_exact_extremes() {
    let cfg = OptimizerConfig { starts: 64, ..OptimizerConfig::default() };
    for t in 0..3 {
        let ch = sample_channel(2, 2, 2, &mut RngStream::new(3, t).rng()).unwrap();
        let w = ch.isometry().clone();
        // exact oracle: the section contains product vectors, where g̃ = √(1/2)
        // and the output entropy vanishes
        for u in product_directions(&w) {
            let m = ch.output_matrix(&u).unwrap();
            assert!((g_tilde(&m).unwrap() - 0.5f64.sqrt()).abs() < 1e-9);
        }
        let quartic = g_objective(w, 2, 2).unwrap();
        let gmax = g_tilde_from_quartic(riemannian_extremize(&quartic, Direction::Max, &cfg).unwrap().value, 2);
        assert!((gmax - 0.5f64.sqrt()).abs() <= 1e-4, "max g̃ {gmax}");
        let (_, rs_q) = random_search(&quartic, 1_000_000, 4 + t);
        assert!(gmax >= g_tilde_from_quartic(rs_q, 2) - 1e-12);

        let ent = entropy_objective(&ch).unwrap();
        let smin = riemannian_extremize(&ent, Direction::Min, &cfg).unwrap().value;
        assert!(smin.abs() <= 1e-4, "min entropy {smin}");
        let (rs_s, _) = random_search(&ent, 1_000_000, 40 + t);
        assert!(smin <= rs_s + 1e-12);
    }
}

#[test]
fn ascent_never_decreases_the_objective() {
    let w = haar_isometry(24, 5, &mut RngStream::new(5, 0).rng()).unwrap();
    let obj = g_objective(w, 3, 8).unwrap();
    let cfg = OptimizerConfig::default();
    for t in 0..20 {
        let start = haar_unit_vector(5, &mut RngStream::new(5, 1 + t).rng());
        let f0 = obj.evaluate(&start);
        let up = local_search(&obj, Direction::Max, &cfg, start.clone(), 0).unwrap();
        let down = local_search(&obj, Direction::Min, &cfg, start, 0).unwrap();
        assert!(up.value >= f0 && down.value <= f0);
    }
}

#[test]
fn subspace_maximum_respects_global_bound() {
    for (k, d, m) in [(2, 8, 4), (3, 12, 9), (4, 4, 16)] {
        let w = haar_isometry(k * d, m, &mut RngStream::new(6, 0).rng()).unwrap();
        let obj = g_objective(w, k, d).unwrap();
        let cfg = OptimizerConfig { starts: 8, ..OptimizerConfig::default() };
        let g = g_tilde_from_quartic(riemannian_extremize(&obj, Direction::Max, &cfg).unwrap().value, k);
        assert!(g <= (1.0 - 1.0 / k as f64).sqrt() + 1e-9);
    }
    // the full space contains rank-one points
    let w = haar_isometry(16, 16, &mut RngStream::new(6, 1).rng()).unwrap();
    let obj = g_objective(w, 4, 4).unwrap();
    let g = g_tilde_from_quartic(riemannian_extremize(&obj, Direction::Max, &OptimizerConfig::default()).unwrap().value, 4);
    assert!((g - 0.75f64.sqrt()).abs() < 1e-6);
}

#[test]
fn quartic_gradient_validates_on_random_instances() {
    for t in 0..5 {
        let w = haar_isometry(30, 6, &mut RngStream::new(7, t).rng()).unwrap();
        let obj = g_objective(w, 3, 10).unwrap();
        let err = finite_difference_check(&obj, 20, 1e-5, RngStream::new(7, 200 + t)).unwrap();
        assert!(err <= 1e-5, "relative error {err}");
    }
}

#[test]
fn start_phase_does_not_change_result() {
    let w = haar_isometry(18, 4, &mut RngStream::new(8, 0).rng()).unwrap();
    let obj = g_objective(w, 3, 6).unwrap();
    let cfg = OptimizerConfig::default();
    for t in 0..10 {
        let start = haar_unit_vector(4, &mut RngStream::new(8, 1 + t).rng());
        let phased = &start * Complex64::from_polar(1.0, 0.37 * (t + 1) as f64);
        let a = local_search(&obj, Direction::Max, &cfg, start, 0).unwrap();
        let b = local_search(&obj, Direction::Max, &cfg, phased, 0).unwrap();
        assert!((a.value - b.value).abs() <= 1e-8);
    }
}
