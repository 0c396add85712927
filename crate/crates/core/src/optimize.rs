//! Multi-start projected-gradient search on complex unit spheres.
//!
//! Objectives are circled (`f(e^{iθ}u) = f(u)`) functions of a unit vector
//! `u ∈ C^m`. Gradients are Euclidean gradients for the real inner product
//! `Re⟨a, b⟩`, so that `f(u + δ) ≈ f(u) + Re⟨∇f(u), δ⟩`. The tangent
//! projection removes the full complex component along `u`, which is valid
//! because circled objectives have no derivative along `i·u`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::RandomChannel;
use crate::error::{Error, Result};
use crate::matrix::{
    hermitian_eigen, hermitian_part, CVector, RectMatrix,
    SubspaceBasis, EIGEN_CLIP,
};
use crate::sampling::{complex_gaussian, haar_unit_vector, RngStream};

/// Top-two singular value gap below which the operator norm is treated as
/// non-differentiable.
pub const SINGULAR_GAP_TOL: f64 = 1e-6;
/// Smallest output eigenvalue at which the entropy gradient is trusted.
pub const ENTROPY_EIGEN_TOL: f64 = 1e-8;
/// Relative error accepted by the construction-time gradient validation.
pub const GRADIENT_TOL: f64 = 1e-4;

const VALIDATION_POINTS: usize = 2;
const VALIDATION_STEP: f64 = 1e-5;
const VALIDATION_SEED: u64 = 0x6772_6164;
const DIRECTIONS_PER_POINT: usize = 10;
const MAX_SHRINKS: usize = 64;

/// A smooth (almost everywhere) circled function on the unit sphere of `C^m`.
pub trait SphereObjective: Sync {
    /// Complex dimension `m` of the sphere.
    fn dim(&self) -> usize;

    fn evaluate(&self, u: &CVector) -> f64;

    /// Euclidean gradient for `Re⟨·,·⟩`.
    fn gradient(&self, u: &CVector) -> CVector;

    fn value_and_gradient(&self, u: &CVector) -> (f64, CVector) {
        (self.evaluate(u), self.gradient(u))
    }

    /// Lipschitz constant on the sphere, when known.
    fn lipschitz_hint(&self) -> Option<f64> {
        None
    }

    /// Points where the analytic gradient is not a true derivative.
    fn is_degenerate(&self, _u: &CVector) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Max,
    Min,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Max => 1.0,
            Direction::Min => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub starts: usize,
    pub max_iters: usize,
    pub initial_step: f64,
    pub step_shrink: f64,
    pub grad_tol: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            starts: 32,
            max_iters: 500,
            initial_step: 0.1,
            step_shrink: 0.5,
            grad_tol: 1e-8,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.starts == 0 || self.max_iters == 0 {
            return Err(Error::Domain("starts and max_iters must be positive".into()));
        }
        if !(self.initial_step > 0.0) || !(self.grad_tol > 0.0) {
            return Err(Error::Domain("initial_step and grad_tol must be positive".into()));
        }
        if !(self.step_shrink > 0.0 && self.step_shrink < 1.0) {
            return Err(Error::Domain("step_shrink must lie in (0, 1)".into()));
        }
        Ok(())
    }

    /// Same settings with another seed.
    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremizeResult {
    pub value: f64,
    pub argpoint: CVector,
    pub iterations: usize,
    pub converged: bool,
    /// Index of the start that produced the result.
    pub start: usize,
}

fn tangent_part(u: &CVector, g: &CVector) -> CVector {
    g - u * u.dotc(g)
}

fn normalized(v: CVector) -> CVector {
    let n = v.norm();
    v.unscale(n)
}

/// Projected-gradient ascent (or descent) from a single start.
///
/// Steps are `u ← normalize(u ± t·g_T)`; a step is accepted only if it
/// strictly improves the objective, otherwise `t` shrinks by
/// `cfg.step_shrink`. After a first-try acceptance the step grows by
/// `1/step_shrink`.
pub fn local_search<O: SphereObjective + ?Sized>(
    obj: &O,
    direction: Direction,
    cfg: &OptimizerConfig,
    start: CVector,
    start_index: usize,
) -> Result<ExtremizeResult> {
    let sign = direction.sign();
    let mut u = normalized(start);
    let (mut f, mut g) = obj.value_and_gradient(&u);
    if !f.is_finite() || g.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite { start: start_index });
    }
    let mut step = cfg.initial_step;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < cfg.max_iters {
        let gt = tangent_part(&u, &g);
        if gt.norm() <= cfg.grad_tol {
            converged = true;
            break;
        }
        iterations += 1;
        let mut accepted = None;
        for attempt in 0..MAX_SHRINKS {
            let candidate = normalized(&u + &gt * Complex64::new(sign * step, 0.0));
            let fc = obj.evaluate(&candidate);
            if !fc.is_finite() {
                return Err(Error::NonFinite { start: start_index });
            }
            if sign * (fc - f) > 0.0 {
                accepted = Some((candidate, attempt == 0));
                break;
            }
            step *= cfg.step_shrink;
        }
        let Some((candidate, first_try)) = accepted else {
            // no improving step at working precision
            converged = true;
            break;
        };
        u = candidate;
        (f, g) = obj.value_and_gradient(&u);
        if !f.is_finite() || g.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { start: start_index });
        }
        if first_try {
            step /= cfg.step_shrink;
        }
    }
    Ok(ExtremizeResult {
        value: f,
        argpoint: u,
        iterations,
        converged,
        start: start_index,
    })
}

/// Best of `cfg.starts` local searches from Haar-random starts. Start `i`
/// draws from stream `(cfg.seed, i)`; ties go to the lowest start index.
pub fn riemannian_extremize<O: SphereObjective + ?Sized>(
    obj: &O,
    direction: Direction,
    cfg: &OptimizerConfig,
) -> Result<ExtremizeResult> {
    cfg.validate()?;
    let m = obj.dim();
    if m == 0 {
        return Err(Error::Domain("sphere dimension must be positive".into()));
    }
    let runs: Vec<Result<ExtremizeResult>> = (0..cfg.starts)
        .into_par_iter()
        .map(|i| {
            let start = haar_unit_vector(m, &mut RngStream::new(cfg.seed, i as u64).rng());
            local_search(obj, direction, cfg, start, i)
        })
        .collect();
    best_of(runs, direction)
}

/// Runs explicit starting points (start index = position in `starts`).
pub fn extremize_from<O: SphereObjective + ?Sized>(
    obj: &O,
    direction: Direction,
    cfg: &OptimizerConfig,
    starts: Vec<CVector>,
) -> Result<ExtremizeResult> {
    cfg.validate()?;
    let runs: Vec<Result<ExtremizeResult>> = starts
        .into_par_iter()
        .enumerate()
        .map(|(i, s)| local_search(obj, direction, cfg, s, i))
        .collect();
    best_of(runs, direction)
}

fn best_of(runs: Vec<Result<ExtremizeResult>>, direction: Direction) -> Result<ExtremizeResult> {
    let sign = direction.sign();
    let mut best: Option<ExtremizeResult> = None;
    for run in runs {
        let run = run?;
        let better = match &best {
            None => true,
            Some(b) => sign * (run.value - b.value) > 0.0,
        };
        if better {
            best = Some(run);
        }
    }
    best.ok_or(Error::NoIterate)
}

/// Largest relative discrepancy between `Re⟨∇f(u), δ⟩` and the central
/// difference `[f(R(u + hδ)) − f(R(u − hδ))] / 2h` (`R` = normalization),
/// over `points` random non-degenerate points and ten random unit tangent
/// directions per point.
pub fn finite_difference_check<O: SphereObjective + ?Sized>(
    obj: &O,
    points: usize,
    h: f64,
    stream: RngStream,
) -> Result<f64> {
    if !(h > 1e-8 && h < 1e-3) {
        return Err(Error::Domain(format!("finite-difference step {h} outside (1e-8, 1e-3)")));
    }
    let m = obj.dim();
    if m < 2 {
        // the tangent space modulo phase is trivial
        return Ok(0.0);
    }
    let mut rng = stream.rng();
    let mut worst: f64 = 0.0;
    let mut done = 0;
    let mut attempts = 0;
    while done < points && attempts < 100 * points.max(1) {
        attempts += 1;
        let u = haar_unit_vector(m, &mut rng);
        if obj.is_degenerate(&u) {
            continue;
        }
        done += 1;
        let grad = obj.gradient(&u);
        let grad_t = tangent_part(&u, &grad).norm();
        for _ in 0..DIRECTIONS_PER_POINT {
            let raw = CVector::from_fn(m, |_, _| complex_gaussian(&mut rng));
            let delta = normalized(tangent_part(&u, &raw));
            let analytic = grad.dotc(&delta).re;
            let plus = obj.evaluate(&normalized(&u + &delta * Complex64::new(h, 0.0)));
            let minus = obj.evaluate(&normalized(&u - &delta * Complex64::new(h, 0.0)));
            let numeric = (plus - minus) / (2.0 * h);
            let scale = analytic.abs().max(numeric.abs()).max(1e-3 * grad_t);
            if scale > 0.0 {
                worst = worst.max((numeric - analytic).abs() / scale);
            }
        }
    }
    Ok(worst)
}

fn validate_gradient<O: SphereObjective>(obj: O) -> Result<O> {
    let error = finite_difference_check(
        &obj,
        VALIDATION_POINTS,
        VALIDATION_STEP,
        RngStream::new(VALIDATION_SEED, 0),
    )?;
    if error > GRADIENT_TOL {
        return Err(Error::GradientCheck {
            error,
            tolerance: GRADIENT_TOL,
        });
    }
    Ok(obj)
}

/// `u ↦ Re⟨u, A u⟩` for Hermitian `A`.
#[derive(Debug, Clone)]
pub struct QuadraticForm {
    a: RectMatrix,
}

impl QuadraticForm {
    pub fn new(a: RectMatrix) -> Result<Self> {
        crate::matrix::hermitian_spectrum(&a)?;
        Ok(Self { a: hermitian_part(&a) })
    }

    /// `u ↦ |⟨a, u⟩|²`.
    pub fn rank_one(a: &CVector) -> Self {
        Self { a: a * a.adjoint() }
    }
}

impl SphereObjective for QuadraticForm {
    fn dim(&self) -> usize {
        self.a.nrows()
    }

    fn evaluate(&self, u: &CVector) -> f64 {
        u.dotc(&(&self.a * u)).re
    }

    fn gradient(&self, u: &CVector) -> CVector {
        (&self.a * u).scale(2.0)
    }
}

/// Shared plumbing for objectives of the form `F(mat(W u))`. The basis is
/// kept split into real and imaginary parts so both products run as real
/// matrix-vector kernels.
#[derive(Debug, Clone)]
struct SectionMap {
    basis: SubspaceBasis,
    re: DMatrix<f64>,
    im: DMatrix<f64>,
    k: usize,
    d: usize,
}

impl SectionMap {
    fn new(basis: SubspaceBasis, k: usize, d: usize) -> Result<Self> {
        if basis.ambient_dim() != k * d {
            return Err(Error::DimensionMismatch {
                expected: k * d,
                got: basis.ambient_dim(),
            });
        }
        let re = basis.columns().map(|z| z.re);
        let im = basis.columns().map(|z| z.im);
        Ok(Self { basis, re, im, k, d })
    }

    /// `mat(W u)`, one fused pass over the stored basis.
    fn matrix(&self, u: &CVector) -> RectMatrix {
        let n = self.k * self.d;
        let mut xr = vec![0.0; n];
        let mut xi = vec![0.0; n];
        for (j, z) in u.iter().enumerate() {
            let (re, im) = (self.re.column(j), self.im.column(j));
            for (((r, i), a), b) in xr.iter_mut().zip(xi.iter_mut()).zip(re.as_slice()).zip(im.as_slice()) {
                *r += a * z.re - b * z.im;
                *i += a * z.im + b * z.re;
            }
        }
        let d = self.d;
        RectMatrix::from_fn(self.k, d, |i, j| Complex64::new(xr[i * d + j], xi[i * d + j]))
    }

    /// `W† vec(B)` for a `k × d` matrix `B`.
    fn pull_back(&self, b: &RectMatrix) -> CVector {
        let d = self.d;
        let n = self.k * d;
        let xr: Vec<f64> = (0..n).map(|r| b[(r / d, r % d)].re).collect();
        let xi: Vec<f64> = (0..n).map(|r| b[(r / d, r % d)].im).collect();
        CVector::from_fn(self.re.ncols(), |j, _| {
            let (re, im) = (self.re.column(j), self.im.column(j));
            let (mut yr, mut yi) = (0.0, 0.0);
            for (((a, c), r), i) in re.as_slice().iter().zip(im.as_slice()).zip(&xr).zip(&xi) {
                yr += a * r + c * i;
                yi += a * i - c * r;
            }
            Complex64::new(yr, yi)
        })
    }
}

/// `u ↦ tr|M(u)|⁴` with `M(u) = mat(W u)`. On unit vectors
/// `g̃(M)² = tr|M|⁴ − 1/k`, so maximizing this smooth quartic maximizes `g̃`.
#[derive(Debug, Clone)]
pub struct QuarticObjective {
    map: SectionMap,
}

impl QuarticObjective {
    pub fn new(basis: SubspaceBasis, k: usize, d: usize) -> Result<Self> {
        Ok(Self {
            map: SectionMap::new(basis, k, d)?,
        })
    }

    pub fn k(&self) -> usize {
        self.map.k
    }
}

impl SphereObjective for QuarticObjective {
    fn dim(&self) -> usize {
        self.map.basis.dim()
    }

    fn evaluate(&self, u: &CVector) -> f64 {
        let m = self.map.matrix(u);
        crate::matrix::fourth_moment(&m)
    }

    fn gradient(&self, u: &CVector) -> CVector {
        self.value_and_gradient(u).1
    }

    fn value_and_gradient(&self, u: &CVector) -> (f64, CVector) {
        let m = self.map.matrix(u);
        let gram = &m * m.adjoint();
        let value: f64 = gram.iter().map(|z| z.norm_sqr()).sum();
        let grad = self.map.pull_back(&(gram * &m)).scale(4.0);
        (value, grad)
    }
}

/// `g̃` recovered from a value of the quartic objective.
pub fn g_tilde_from_quartic(quartic: f64, k: usize) -> f64 {
    (quartic - 1.0 / k as f64).max(0.0).sqrt()
}

/// Objective whose maximizer maximizes `g̃` over the section `S_HS ∩ W`.
pub fn g_objective(basis: SubspaceBasis, k: usize, d: usize) -> Result<QuarticObjective> {
    QuarticObjective::new(basis, k, d)
}

/// `u ↦ ‖M(u)‖₄ = (tr|M(u)|⁴)^{1/4}`.
#[derive(Debug, Clone)]
pub struct Schatten4Objective {
    quartic: QuarticObjective,
}

impl SphereObjective for Schatten4Objective {
    fn dim(&self) -> usize {
        self.quartic.dim()
    }

    fn evaluate(&self, u: &CVector) -> f64 {
        self.quartic.evaluate(u).powf(0.25)
    }

    fn gradient(&self, u: &CVector) -> CVector {
        self.value_and_gradient(u).1
    }

    fn value_and_gradient(&self, u: &CVector) -> (f64, CVector) {
        let (t, g) = self.quartic.value_and_gradient(u);
        (t.powf(0.25), g.scale(0.25 * t.powf(-0.75)))
    }

    fn lipschitz_hint(&self) -> Option<f64> {
        Some(1.0)
    }
}

pub fn schatten4_objective(basis: SubspaceBasis, k: usize, d: usize) -> Result<Schatten4Objective> {
    Ok(Schatten4Objective {
        quartic: QuarticObjective::new(basis, k, d)?,
    })
}

/// `u ↦ ‖M(u)‖∞`, gradient `W† vec(u₁ v₁†)` from the top singular pair.
#[derive(Debug, Clone)]
pub struct OpNormObjective {
    map: SectionMap,
}

impl OpNormObjective {
    fn top_pair(&self, u: &CVector) -> (f64, f64, RectMatrix) {
        let m = self.map.matrix(u);
        let svd = m.svd(true, true);
        let s = &svd.singular_values;
        let mut order: Vec<usize> = (0..s.len()).collect();
        order.sort_by(|&i, &j| s[j].total_cmp(&s[i]));
        let top = order[0];
        let second = order.get(1).map(|&i| s[i]).unwrap_or(0.0);
        let left = svd.u.as_ref().expect("requested").column(top).into_owned();
        let right_adj = svd.v_t.as_ref().expect("requested").row(top).into_owned();
        (s[top], second, left * right_adj)
    }
}

impl SphereObjective for OpNormObjective {
    fn dim(&self) -> usize {
        self.map.basis.dim()
    }

    fn evaluate(&self, u: &CVector) -> f64 {
        crate::matrix::operator_norm(&self.map.matrix(u))
    }

    fn gradient(&self, u: &CVector) -> CVector {
        self.value_and_gradient(u).1
    }

    fn value_and_gradient(&self, u: &CVector) -> (f64, CVector) {
        let (top, _, outer) = self.top_pair(u);
        (top, self.map.pull_back(&outer))
    }

    fn lipschitz_hint(&self) -> Option<f64> {
        Some(1.0)
    }

    fn is_degenerate(&self, u: &CVector) -> bool {
        let (top, second, _) = self.top_pair(u);
        top - second < SINGULAR_GAP_TOL
    }
}

/// Operator-norm objective; the analytic gradient is validated against
/// finite differences before returning.
pub fn opnorm_objective(basis: SubspaceBasis, k: usize, d: usize) -> Result<OpNormObjective> {
    validate_gradient(OpNormObjective {
        map: SectionMap::new(basis, k, d)?,
    })
}

/// `u ↦ S(M(u) M(u)†)`, gradient `−2 W† vec((log A + Id) M)`.
#[derive(Debug, Clone)]
pub struct EntropyObjective {
    map: SectionMap,
}

impl EntropyObjective {
    fn spectral(&self, u: &CVector) -> (RectMatrix, Vec<f64>, RectMatrix) {
        let m = self.map.matrix(u);
        let gram = hermitian_part(&(&m * m.adjoint()));
        let (vals, vecs) = hermitian_eigen(&gram).expect("gram matrix is Hermitian");
        (m, vals, vecs)
    }
}

impl SphereObjective for EntropyObjective {
    fn dim(&self) -> usize {
        self.map.basis.dim()
    }

    fn evaluate(&self, u: &CVector) -> f64 {
        let (_, vals, _) = self.spectral(u);
        crate::entropy::entropy_of_spectrum(&vals)
    }

    fn gradient(&self, u: &CVector) -> CVector {
        self.value_and_gradient(u).1
    }

    fn value_and_gradient(&self, u: &CVector) -> (f64, CVector) {
        let (m, vals, vecs) = self.spectral(u);
        let value = crate::entropy::entropy_of_spectrum(&vals);
        let k = vals.len();
        // log A + Id, with eigenvalues clipped before the logarithm
        let weights = RectMatrix::from_fn(k, k, |i, j| {
            if i == j {
                Complex64::new(vals[i].max(EIGEN_CLIP).ln() + 1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let log_plus_id = &vecs * weights * vecs.adjoint();
        let grad = self.map.pull_back(&(log_plus_id * m)).scale(-2.0);
        (value, grad)
    }

    fn is_degenerate(&self, u: &CVector) -> bool {
        let (_, vals, _) = self.spectral(u);
        vals.last().copied().unwrap_or(0.0) < ENTROPY_EIGEN_TOL
    }
}

/// Output-entropy objective of a channel over pure inputs; gradient
/// validated against finite differences before returning.
pub fn entropy_objective(channel: &RandomChannel) -> Result<EntropyObjective> {
    validate_gradient(EntropyObjective {
        map: SectionMap::new(channel.isometry().clone(), channel.k(), channel.d())?,
    })
}

/// Extreme values of `obj` over `probes` uniform random points.
pub fn random_probe_extremes<O: SphereObjective + ?Sized, R: Rng + ?Sized>(
    obj: &O,
    probes: usize,
    rng: &mut R,
) -> Option<(f64, f64)> {
    let m = obj.dim();
    (0..probes)
        .map(|_| obj.evaluate(&haar_unit_vector(m, rng)))
        .fold(None, |acc, v| match acc {
            None => Some((v, v)),
            Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
        })
}
