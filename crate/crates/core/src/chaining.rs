//! Greedy nets, covering numbers, Lipschitz extension, the net-based
//! spectral-norm certificate, subgaussian pair tails and Dudley's bound
//! with explicit constants.
//!
//! Nets are built on finite point clouds; every covering statement here is
//! relative to the cloud it was computed on.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::concentration::{CentralKind, TailCurve};
use crate::error::{Error, Result};
use crate::matrix::{hermitian_deviation, CVector, RectMatrix};
use crate::sampling::{haar_unitary, RngStream};

/// Slack for pairwise Lipschitz and triangle-inequality checks.
pub const METRIC_TOL: f64 = 1e-9;
/// Covering radius required by [`net_opnorm_certificate`].
pub const CERTIFICATE_RADIUS: f64 = 0.25;
/// Smallest phase-aligned distance accepted by
/// [`subgaussian_pair_experiment`].
pub const ALIGNED_DISTANCE_FLOOR: f64 = 1e-12;

const MAX_DYADIC_LEVELS: usize = 64;
const TRIANGLE_SAMPLES: usize = 1_000_000;

/// A finite metric space indexed by `0..len()`.
pub trait FiniteMetric {
    fn len(&self) -> usize;
    fn distance(&self, i: usize, j: usize) -> f64;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Points of `C^n` with the Euclidean distance.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    points: Vec<CVector>,
}

impl PointCloud {
    pub fn new(points: Vec<CVector>) -> Result<Self> {
        if let Some(first) = points.first() {
            let n = first.len();
            if let Some(bad) = points.iter().find(|p| p.len() != n) {
                return Err(Error::DimensionMismatch { expected: n, got: bad.len() });
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[CVector] {
        &self.points
    }
}

impl FiniteMetric for PointCloud {
    fn len(&self) -> usize {
        self.points.len()
    }

    fn distance(&self, i: usize, j: usize) -> f64 {
        (&self.points[i] - &self.points[j]).norm()
    }
}

/// An explicit distance matrix, validated as a metric.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceTable {
    n: usize,
    entries: Vec<f64>,
}

impl DistanceTable {
    /// Checks zero diagonal, symmetry and nonnegativity exactly, and the
    /// triangle inequality on all triples for small tables or on a fixed
    /// pseudo-random sample of triples otherwise.
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, got: entries.len() });
        }
        let at = |i: usize, j: usize| entries[i * n + j];
        for i in 0..n {
            if at(i, i) != 0.0 {
                return Err(Error::Domain(format!("distance({i},{i}) = {} is not zero", at(i, i))));
            }
            for j in 0..i {
                if !(at(i, j) >= 0.0) || at(i, j) != at(j, i) {
                    return Err(Error::Domain(format!("distance({i},{j}) is negative or asymmetric")));
                }
            }
        }
        let violates = |i: usize, j: usize, l: usize| at(i, l) > at(i, j) + at(j, l) + METRIC_TOL;
        if n.saturating_pow(3) <= TRIANGLE_SAMPLES {
            for i in 0..n {
                for j in 0..n {
                    for l in 0..n {
                        if violates(i, j, l) {
                            return Err(Error::Domain(format!("triangle inequality fails on ({i},{j},{l})")));
                        }
                    }
                }
            }
        } else {
            let mut rng = RngStream::new(0x7472_6961, 0).rng();
            for _ in 0..TRIANGLE_SAMPLES {
                let (i, j, l) = (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n));
                if violates(i, j, l) {
                    return Err(Error::Domain(format!("triangle inequality fails on ({i},{j},{l})")));
                }
            }
        }
        Ok(Self { n, entries })
    }
}

impl FiniteMetric for DistanceTable {
    fn len(&self) -> usize {
        self.n
    }

    fn distance(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }
}

/// Output of [`greedy_net`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetResult {
    /// Net points in the order they were selected.
    pub net_indices: Vec<usize>,
    pub eta: f64,
    /// Exact covering radius of the net over the input set.
    pub covering_radius: f64,
    pub covering_radius_checked: bool,
}

/// Farthest-point traversal from index 0. Returns the selected indices,
/// the distance of each to the earlier selection at insertion time, and
/// the final covering radius. Stops once the covering radius is `≤ stop`.
fn farthest_point_traversal<M: FiniteMetric + ?Sized>(ps: &M, stop: f64) -> (Vec<usize>, Vec<f64>, f64) {
    let n = ps.len();
    let mut order = vec![0];
    let mut radii = vec![f64::INFINITY];
    let mut nearest: Vec<f64> = (0..n).map(|j| ps.distance(0, j)).collect();
    loop {
        let (far, &radius) = nearest
            .iter()
            .enumerate()
            .fold((0, &f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best });
        if radius <= stop {
            return (order, radii, radius.max(0.0));
        }
        order.push(far);
        radii.push(radius);
        for (j, slot) in nearest.iter_mut().enumerate() {
            let dist = ps.distance(far, j);
            if dist < *slot {
                *slot = dist;
            }
        }
    }
}

/// Farthest-point greedy net: starting from index 0, repeatedly add the
/// point farthest from the current net (ties to the lowest index) until
/// every point is within `eta`. Selected points are pairwise more than
/// `eta` apart.
pub fn greedy_net<M: FiniteMetric + ?Sized>(ps: &M, eta: f64) -> Result<NetResult> {
    if ps.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    if !(eta > 0.0) {
        return Err(Error::Domain(format!("net scale {eta} must be positive")));
    }
    let (net_indices, _, covering_radius) = farthest_point_traversal(ps, eta);
    Ok(NetResult {
        net_indices,
        eta,
        covering_radius,
        covering_radius_checked: covering_radius <= eta,
    })
}

/// Volumetric bound `(1 + 2/η)^{2n}` on the size of an `η`-packing of the
/// unit sphere of `C^n`.
pub fn covering_bound(n_complex_dim: usize, eta: f64) -> f64 {
    (1.0 + 2.0 / eta).powf(2.0 * n_complex_dim as f64)
}

/// Largest pairwise excess `|h(y_i) − h(y_j)| − L‖y_i − y_j‖`, with the pair
/// attaining it.
pub fn lipschitz_excess(points: &[CVector], values: &[f64], lipschitz: f64) -> (f64, usize, usize) {
    let mut worst = (f64::NEG_INFINITY, 0, 0);
    for i in 0..points.len() {
        for j in 0..i {
            let excess = (values[i] - values[j]).abs() - lipschitz * (&points[i] - &points[j]).norm();
            if excess > worst.0 {
                worst = (excess, i, j);
            }
        }
    }
    worst
}

/// McShane extension `h(x) = min_y [h̃(y) + L‖x − y‖]` of an `L`-Lipschitz
/// function on a finite set.
#[derive(Debug, Clone, PartialEq)]
pub struct LipschitzExtension {
    points: Vec<CVector>,
    values: Vec<f64>,
    lipschitz: f64,
}

impl LipschitzExtension {
    pub fn new(points: Vec<CVector>, values: Vec<f64>, lipschitz: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        if points.len() != values.len() {
            return Err(Error::DimensionMismatch { expected: points.len(), got: values.len() });
        }
        if !(lipschitz >= 0.0) {
            return Err(Error::Domain(format!("Lipschitz constant {lipschitz} must be nonnegative")));
        }
        PointCloud::new(points.clone())?;
        let (excess, i, j) = lipschitz_excess(&points, &values, lipschitz);
        if excess > METRIC_TOL {
            return Err(Error::NotLipschitz { lipschitz, i, j, excess });
        }
        Ok(Self { points, values, lipschitz })
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn evaluate(&self, x: &CVector) -> f64 {
        self.points
            .iter()
            .zip(&self.values)
            .map(|(y, &h)| h + self.lipschitz * (x - y).norm())
            .fold(f64::INFINITY, f64::min)
    }
}

/// One-shot form of [`LipschitzExtension::evaluate`].
pub fn lipschitz_extend(points: &[CVector], values: &[f64], lipschitz: f64, query: &CVector) -> Result<f64> {
    Ok(LipschitzExtension::new(points.to_vec(), values.to_vec(), lipschitz)?.evaluate(query))
}

/// A greedy net of a sampled unit sphere with its covering radius over the
/// sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereNet {
    points: Vec<CVector>,
    covering_radius: f64,
}

impl SphereNet {
    pub fn from_cloud(cloud: &PointCloud, eta: f64) -> Result<Self> {
        let net = greedy_net(cloud, eta)?;
        Ok(Self {
            points: net.net_indices.iter().map(|&i| cloud.points()[i].clone()).collect(),
            covering_radius: net.covering_radius,
        })
    }

    pub fn points(&self) -> &[CVector] {
        &self.points
    }

    pub fn covering_radius(&self) -> f64 {
        self.covering_radius
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// `2·max_{x̄ ∈ net} |⟨x̄, Δ x̄⟩|`, an upper bound on `‖Δ‖∞` for Hermitian `Δ`
/// when the net is a ¼-net.
pub fn net_opnorm_certificate(delta: &RectMatrix, net: &SphereNet) -> Result<f64> {
    if net.covering_radius() > CERTIFICATE_RADIUS {
        return Err(Error::NetTooCoarse {
            radius: net.covering_radius(),
            required: CERTIFICATE_RADIUS,
        });
    }
    let dev = hermitian_deviation(delta);
    if dev > 1e-10 {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let k = delta.nrows();
    if let Some(bad) = net.points().iter().find(|x| x.len() != k) {
        return Err(Error::DimensionMismatch { expected: k, got: bad.len() });
    }
    let max = net
        .points()
        .iter()
        .map(|x| x.dotc(&(delta * x)).re.abs())
        .fold(0.0, f64::max);
    Ok(2.0 * max)
}

/// Tail of `|f(Ux) − f(Uy)|` under Haar `U`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairTailReport {
    pub curve: TailCurve,
    /// `min_θ |x − e^{iθ} y|`.
    pub aligned_distance: f64,
}

/// `y` multiplied by the phase making `⟨x, y⟩` real and nonnegative.
pub fn phase_align(x: &CVector, y: &CVector) -> CVector {
    let overlap = x.dotc(y);
    let modulus = overlap.norm();
    if modulus > 0.0 {
        y * (overlap.conj() / modulus)
    } else {
        y.clone()
    }
}

/// Empirical `P(|f(Ux) − f(Uy)| > λ)` over Haar unitaries `U`. Trial `i`
/// uses stream `(seed, i)`.
pub fn subgaussian_pair_experiment<F>(
    f: F,
    x: &CVector,
    y: &CVector,
    trials: usize,
    lambda_grid: &[f64],
    seed: u64,
) -> Result<PairTailReport>
where
    F: Fn(&CVector) -> f64 + Sync,
{
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), got: y.len() });
    }
    if trials == 0 || lambda_grid.iter().any(|&l| !(l > 0.0)) {
        return Err(Error::Domain("pair tails need trials > 0 and positive thresholds".into()));
    }
    let aligned_distance = (x - phase_align(x, y)).norm();
    if aligned_distance < ALIGNED_DISTANCE_FLOOR {
        return Err(Error::Domain("x and y coincide after phase alignment".into()));
    }
    let n = x.len();
    let gaps: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let u = haar_unitary(n, &mut RngStream::new(seed, t as u64).rng());
            (f(&(&u * x)) - f(&(&u * y))).abs()
        })
        .collect();
    let curve = TailCurve::from_deviations(&gaps, lambda_grid.to_vec(), 0.0, CentralKind::Origin);
    Ok(PairTailReport { curve, aligned_distance })
}

/// `β(√(2 log N) + A)`, the explicit bound on the expected maximum of `N`
/// variables with tails `≤ C exp(−λ²/β²)`.
pub fn max_gaussian_bound(n: usize, beta: f64, a: f64) -> f64 {
    beta * ((2.0 * (n.max(1) as f64).ln()).sqrt() + a)
}

/// First dyadic level `k₀ = ⌊−log₂ r⌋`, so that `2^{−k₀} ≥ r`.
pub fn first_dyadic_level(radius: f64) -> i32 {
    let mut k0 = (-radius.log2()).floor() as i32;
    // guard against log2 rounding at exact powers of two
    while 2f64.powi(-k0) < radius {
        k0 -= 1;
    }
    k0
}

/// Dudley-type bound on `E sup |X_s − X_t|` for a process with increments
/// `P(|X_s − X_t| > λ) ≤ C exp(−α λ²/ρ(s,t)²)`:
/// `2 Σ_{k=k₀}^{K−1} β_k (√(2 log N_{k+1}²) + A)` with `β_k = 2^{−k+1}/√α`,
/// where `N_k` is the covering number at scale `2^{−k}` and `K` the deepest
/// level supplied. Levels must be present from `k₀` to `K`.
pub fn dudley_bound(covering_numbers: &BTreeMap<i32, usize>, a: f64, alpha: f64, radius: f64) -> Result<f64> {
    if !(alpha > 0.0) || !(a >= 0.0) || !(radius >= 0.0) {
        return Err(Error::Domain("Dudley bound needs alpha > 0, A >= 0, radius >= 0".into()));
    }
    if radius == 0.0 {
        return Ok(0.0);
    }
    let k0 = first_dyadic_level(radius);
    let deepest = match covering_numbers.keys().next_back() {
        Some(&k) if k >= k0 => k,
        _ => return Err(Error::InvalidLevels(format!("no covering numbers at or below scale 2^-{k0}"))),
    };
    let mut total = 0.0;
    for k in k0..=deepest {
        let n = *covering_numbers
            .get(&k)
            .ok_or_else(|| Error::InvalidLevels(format!("missing covering number at level {k}")))?;
        if n == 0 {
            return Err(Error::InvalidLevels(format!("covering number at level {k} is zero")));
        }
        if k > k0 {
            let beta = 2f64.powi(-(k - 1) + 1) / alpha.sqrt();
            total += beta * ((2.0 * ((n * n) as f64).ln()).sqrt() + a);
        }
    }
    Ok(2.0 * total)
}

/// Greedy nets at dyadic scales from `k₀` down to the first level whose net
/// is the whole set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoveringProfile {
    /// `max_j ρ(s₀, s_j)` with `s₀` the point of index 0.
    pub radius: f64,
    pub k0: i32,
    /// Level `k` to the net selected at scale `2^{−k}`.
    pub nets: BTreeMap<i32, Vec<usize>>,
}

impl CoveringProfile {
    pub fn covering_numbers(&self) -> BTreeMap<i32, usize> {
        self.nets.iter().map(|(&k, net)| (k, net.len())).collect()
    }

    pub fn nets_by_level(&self) -> Vec<Vec<usize>> {
        self.nets.values().cloned().collect()
    }
}

/// Builds the dyadic greedy nets of a finite metric space. Nets are
/// prefixes of a single farthest-point traversal, hence nested.
pub fn covering_profile<M: FiniteMetric + ?Sized>(ps: &M) -> Result<CoveringProfile> {
    if ps.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let n = ps.len();
    let radius = (0..n).map(|j| ps.distance(0, j)).fold(0.0, f64::max);
    let (order, radii, _) = farthest_point_traversal(ps, 0.0);
    if order.len() != n {
        return Err(Error::InvalidLevels("point set contains repeated points".into()));
    }
    let mut nets = BTreeMap::new();
    if radius == 0.0 {
        nets.insert(0, vec![0]);
        return Ok(CoveringProfile { radius, k0: 0, nets });
    }
    let k0 = first_dyadic_level(radius);
    for level in 0..MAX_DYADIC_LEVELS {
        let k = k0 + level as i32;
        let eta = 2f64.powi(-k);
        let size = radii.iter().take_while(|&&r| r > eta).count();
        nets.insert(k, order[..size].to_vec());
        if size == n {
            return Ok(CoveringProfile { radius, k0, nets });
        }
    }
    Err(Error::InvalidLevels(format!("points not separated within {MAX_DYADIC_LEVELS} dyadic levels")))
}

fn nearest_in<M: FiniteMetric + ?Sized>(ps: &M, net: &[usize], s: usize) -> usize {
    let mut best = (f64::INFINITY, usize::MAX);
    for &p in net {
        let cand = (ps.distance(p, s), p);
        if cand.0 < best.0 || (cand.0 == best.0 && cand.1 < best.1) {
            best = cand;
        }
    }
    best.1
}

/// Maximal residual of the chaining identity
/// `X_s = X_{s₀} + Σ_k (X_{π_{k+1}(s)} − X_{π_k(s)})`, with `π_k(s)` the
/// nearest point of `nets[k]` (ties to the lowest index). The first net
/// must be a single point and the deepest must resolve every point.
pub fn chaining_decomposition_check<M: FiniteMetric + ?Sized>(
    ps: &M,
    values: &[f64],
    nets: &[Vec<usize>],
) -> Result<f64> {
    if ps.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    if values.len() != ps.len() {
        return Err(Error::DimensionMismatch { expected: ps.len(), got: values.len() });
    }
    let (first, deepest) = match (nets.first(), nets.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(Error::InvalidLevels("no nets supplied".into())),
    };
    if nets.len() > 1 && first.len() != 1 {
        return Err(Error::InvalidLevels("coarsest net must be a single point".into()));
    }
    if nets.iter().flatten().any(|&i| i >= ps.len()) {
        return Err(Error::InvalidLevels("net index out of range".into()));
    }
    let mut worst: f64 = 0.0;
    for s in 0..ps.len() {
        if nearest_in(ps, deepest, s) != s {
            return Err(Error::InvalidLevels(format!("deepest net does not separate point {s}")));
        }
        let chain: Vec<usize> = nets.iter().map(|net| nearest_in(ps, net, s)).collect();
        let mut sum = values[chain[0]];
        for w in chain.windows(2) {
            sum += values[w[1]] - values[w[0]];
        }
        worst = worst.max((values[s] - sum).abs());
    }
    Ok(worst)
}
