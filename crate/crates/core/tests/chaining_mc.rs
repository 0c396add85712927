//! Nets on sampled spheres, Lipschitz extension, the ¼-net certificate,
//! pair tails and Dudley's bound against simulated processes.

use chanlab::chaining::{
    chaining_decomposition_check, covering_bound, covering_profile, dudley_bound, greedy_net, lipschitz_excess,
    max_gaussian_bound, net_opnorm_certificate, phase_align, subgaussian_pair_experiment, FiniteMetric,
    LipschitzExtension, PointCloud, SphereNet,
};
use chanlab::matrix::{g_tilde, hermitian_spectrum, matrix_to_vector, vector_to_matrix, CVector, RectMatrix};
use chanlab::sampling::{complex_gaussian, ginibre, haar_unit_vector, uniform_hs_sphere, RngStream};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

fn sphere_cloud(n: usize, count: usize, seed: u64) -> PointCloud {
    let mut rng = RngStream::new(seed, 0).rng();
    PointCloud::new((0..count).map(|_| haar_unit_vector(n, &mut rng)).collect()).unwrap()
}

/// Exhaustive covering radius and minimal pairwise net separation.
fn covering_and_packing(ps: &PointCloud, net: &[usize]) -> (f64, f64) {
    let cover = (0..ps.len())
        .map(|i| net.iter().map(|&j| ps.distance(i, j)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    let mut pack = f64::INFINITY;
    for (a, &i) in net.iter().enumerate() {
        for &j in &net[..a] {
            pack = pack.min(ps.distance(i, j));
        }
    }
    (cover, pack)
}

#[test]
fn greedy_net_on_three_sphere() {
    let ps = sphere_cloud(2, 10_000, 1);
    for eta in [1.0, 0.5, 0.25] {
        let net = greedy_net(&ps, eta).unwrap();
        let (cover, pack) = covering_and_packing(&ps, &net.net_indices);
        assert!(cover <= eta, "cover {cover} at eta {eta}");
        assert!(pack > eta, "pack {pack} at eta {eta}");
        assert_eq!(cover, net.covering_radius);
        assert!(net.covering_radius_checked);
        assert!(net.net_indices.len() as f64 <= covering_bound(2, eta));
    }
    assert!(greedy_net(&ps, 0.5).unwrap().net_indices.len() <= 625);
}

#[test]
fn extension_of_g_tilde_stays_two_lipschitz() {
    let (k, d) = (2, 3);
    for rep in 0..5 {
        let mut rng = RngStream::new(2, rep).rng();
        let ys: Vec<CVector> = (0..50).map(|_| matrix_to_vector(&uniform_hs_sphere(k, d, &mut rng))).collect();
        let vals: Vec<f64> = ys.iter().map(|y| g_tilde(&vector_to_matrix(y.as_slice(), k, d).unwrap()).unwrap()).collect();
        let ext = LipschitzExtension::new(ys.clone(), vals.clone(), 2.0).unwrap();
        for (y, v) in ys.iter().zip(&vals) {
            assert_eq!(ext.evaluate(y), *v);
        }
        let queries: Vec<CVector> = (0..200).map(|_| matrix_to_vector(&uniform_hs_sphere(k, d, &mut rng))).collect();
        let mut all = ys;
        all.extend(queries);
        let ext_vals: Vec<f64> = all.iter().map(|x| ext.evaluate(x)).collect();
        let (excess, _, _) = lipschitz_excess(&all, &ext_vals, 2.0);
        assert!(excess <= 1e-9, "excess {excess}");
    }
}

fn random_hermitian(k: usize, stream: RngStream) -> RectMatrix {
    let g = ginibre(k, k, &mut stream.rng());
    (&g + g.adjoint()).scale(0.5)
}

#[test]
fn quarter_net_certificate_brackets_operator_norm() {
    let net = SphereNet::from_cloud(&sphere_cloud(2, 100_000, 3), 0.25).unwrap();
    assert!(net.covering_radius() <= 0.25);
    for t in 0..100 {
        let delta = random_hermitian(2, RngStream::new(4, t));
        let eigs = hermitian_spectrum(&delta).unwrap();
        let op = eigs.iter().map(|x| x.abs()).fold(0.0, f64::max);
        let cert = net_opnorm_certificate(&delta, &net).unwrap();
        assert!(cert >= op && cert <= 2.0 * op + 1e-9, "{cert} vs {op}");
    }
}

fn pair_at_distance(n: usize, dist: f64, seed: u64) -> (CVector, CVector) {
    let mut rng = RngStream::new(seed, 0).rng();
    let x = haar_unit_vector(n, &mut rng);
    let z = haar_unit_vector(n, &mut rng);
    let z = &z - &x * x.dotc(&z);
    let z = z.unscale(z.norm());
    // |x − (cos θ x + sin θ z)| = 2 sin(θ/2)
    let theta = 2.0 * (dist / 2.0).asin();
    let y = &x * Complex64::new(theta.cos(), 0.0) + z * Complex64::new(theta.sin(), 0.0);
    (x, y * Complex64::from_polar(1.0, 1.1))
}

#[test]
fn pair_tails_shrink_with_threshold_and_grow_with_distance() {
    let f = |v: &CVector| v[0].norm();
    let (x, y) = pair_at_distance(32, 0.2, 5);
    let near = subgaussian_pair_experiment(f, &x, &y, 10_000, &[0.02, 0.05, 0.1, 0.2], 6).unwrap();
    assert!((near.aligned_distance - 0.2).abs() < 1e-12);
    let p = &near.curve.exceed_prob;
    assert!(p[3] < p[2] || p[2] == 0.0);
    assert!(p.windows(2).all(|w| w[1] <= w[0]));
    // circled 1-Lipschitz f cannot move by more than the aligned distance
    assert_eq!(p[3], 0.0);

    let (x2, y2) = pair_at_distance(32, 0.1, 5);
    let far_x = phase_align(&x2, &y2);
    assert!(((&x2 - far_x).norm() - 0.1).abs() < 1e-12);
    let half = subgaussian_pair_experiment(f, &x2, &y2, 10_000, &[0.02, 0.05, 0.1, 0.2], 6).unwrap();
    assert!(half.curve.exceed_prob[0] < near.curve.exceed_prob[0]);
}

#[test]
fn phase_multiple_gives_zero_differences_under_any_unitary() {
    let x = haar_unit_vector(8, &mut RngStream::new(7, 0).rng());
    let y = &x * Complex64::from_polar(1.0, 2.3);
    let u = chanlab::sampling::haar_unitary(8, &mut RngStream::new(7, 1).rng());
    let f = |v: &CVector| v[0].norm();
    assert!((f(&(&u * &x)) - f(&(&u * &y))).abs() < 1e-15);
    assert!(subgaussian_pair_experiment(f, &x, &y, 10, &[0.1], 0).is_err());
}

#[test]
fn max_of_gaussians_fact() {
    let beta = 1.5;
    for n in [10usize, 100, 1000] {
        let reps = 1000;
        let mut total = 0.0;
        for r in 0..reps {
            let mut rng = RngStream::new(8, (n * reps + r) as u64).rng();
            total += (0..n)
                .map(|_| (beta * rng.sample::<f64, _>(StandardNormal)).abs())
                .fold(0.0, f64::max);
        }
        let mean = total / reps as f64;
        assert!(mean <= max_gaussian_bound(n, beta, 2.0), "N = {n}: {mean}");
    }
}

/// `X_s = √(2/n) Re⟨g, s⟩` has increments `N(0, ρ²/n)`, so tails
/// `2 exp(−(n/2) λ²/ρ²)`.
fn process_draw(cloud: &PointCloud, n: usize, stream: RngStream) -> Vec<f64> {
    let mut rng = stream.rng();
    let g = CVector::from_fn(n, |_, _| complex_gaussian(&mut rng));
    let scale = (2.0 / n as f64).sqrt();
    cloud.points().iter().map(|s| scale * g.dotc(s).re).collect()
}

#[test]
fn dudley_bound_dominates_gaussian_process() {
    let n = 16;
    let cloud = sphere_cloud(n, 1000, 9);
    let profile = covering_profile(&cloud).unwrap();
    let bound = dudley_bound(&profile.covering_numbers(), 2.0, n as f64 / 2.0, profile.radius).unwrap();
    let draws = 200;
    let mean_sup = (0..draws)
        .map(|t| {
            let x = process_draw(&cloud, n, RngStream::new(10, t));
            let hi = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let lo = x.iter().cloned().fold(f64::INFINITY, f64::min);
            hi - lo
        })
        .sum::<f64>()
        / draws as f64;
    assert!(mean_sup <= bound, "{mean_sup} vs {bound}");
}

#[test]
fn chaining_identity_on_arbitrary_function() {
    let cloud = sphere_cloud(3, 100, 11);
    let profile = covering_profile(&cloud).unwrap();
    let levels: Vec<i32> = profile.nets.keys().cloned().collect();
    // four coarse dyadic levels plus the full set
    let mut nets: Vec<Vec<usize>> = levels.iter().take(4).map(|k| profile.nets[k].clone()).collect();
    nets.push((0..100).collect());
    let mut rng = RngStream::new(12, 0).rng();
    let values: Vec<f64> = (0..100).map(|_| rng.random::<f64>() * 1e3 - 500.0).collect();
    assert!(chaining_decomposition_check(&cloud, &values, &nets).unwrap() <= 1e-12 * 1e3);
    let unit: Vec<f64> = values.iter().map(|v| v / 1e3).collect();
    assert!(chaining_decomposition_check(&cloud, &unit, &nets).unwrap() <= 1e-12);
    let x = process_draw(&cloud, 3, RngStream::new(12, 1));
    assert!(chaining_decomposition_check(&cloud, &x, &profile.nets_by_level()).unwrap() <= 1e-12);
}

#[test]
fn nets_are_nested_across_levels() {
    let cloud = sphere_cloud(4, 300, 13);
    let profile = covering_profile(&cloud).unwrap();
    let nets = profile.nets_by_level();
    assert_eq!(nets[0].len(), 1);
    assert_eq!(nets.last().unwrap().len(), 300);
    for w in nets.windows(2) {
        assert!(w[1].starts_with(&w[0]));
    }
    for (&k, net) in &profile.nets {
        let (cover, _) = covering_and_packing(&cloud, net);
        assert!(cover <= 2f64.powi(-k));
    }
}
