//! Monte Carlo experiments on concentration of measure for random matrices
//! on the Hilbert–Schmidt sphere and for random sections of it.
//!
//! Every experiment is a pure function of its arguments: trial `i` draws
//! from stream `(seed, i)` and results are gathered in trial order.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{
    g_tilde, hs_norm, operator_norm, schatten_norm, singular_values, vector_to_matrix, CVector, RectMatrix,
    SubspaceBasis, IDENTITY_TOL,
};
use crate::optimize::{
    g_objective, g_tilde_from_quartic, opnorm_objective, random_probe_extremes, riemannian_extremize,
    Direction, OptimizerConfig, SphereObjective,
};
use crate::sampling::{haar_isometry, uniform_hs_sphere, RngStream, StreamRng};

/// Retry cap for rejection sampling into `Ω`.
pub const OMEGA_REJECTION_CAP: usize = 10_000;
/// Slack for the Lipschitz chain inequalities.
pub const CHAIN_TOL: f64 = 1e-9;

const CENTER_SEED_MIX: u64 = 0xc3a5_c85c_97cb_3127;

/// `‖M‖∞ ≤ 3/√k`, the operator-norm threshold defining `Ω`.
pub fn omega_threshold(k: usize) -> f64 {
    3.0 / (k as f64).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CentralKind {
    Median,
    Mean,
    Quartile,
    /// Deviations are measured from zero.
    Origin,
}

/// Empirical exceedance probabilities `P(|X − μ| > ε)` on a grid of `ε`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailCurve {
    pub epsilons: Vec<f64>,
    pub exceed_prob: Vec<f64>,
    pub trials: usize,
    pub central_value: f64,
    pub central_kind: CentralKind,
    /// Largest `c` with `e·exp(−c n ε²/L²) ≥ P(ε)` at every grid point
    /// (`None` when every exceedance is zero).
    pub fitted_c1: Option<f64>,
}

impl TailCurve {
    pub(crate) fn from_deviations(
        deviations: &[f64],
        mut epsilons: Vec<f64>,
        central_value: f64,
        central_kind: CentralKind,
    ) -> Self {
        epsilons.sort_by(f64::total_cmp);
        let trials = deviations.len();
        let exceed_prob = epsilons
            .iter()
            .map(|&eps| deviations.iter().filter(|&&x| x > eps).count() as f64 / trials.max(1) as f64)
            .collect();
        Self {
            epsilons,
            exceed_prob,
            trials,
            central_value,
            central_kind,
            fitted_c1: None,
        }
    }
}

/// Spectral window statistics for uniform points of the HS sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowReport {
    pub k: usize,
    pub d: usize,
    pub trials: usize,
    pub window_constant: f64,
    pub pass_fraction: f64,
    /// Largest normalized deviation seen (`|s − 1/√k|·√d` for singular
    /// values, `|λ − 1/k|·√(kd)` for eigenvalues).
    pub worst_deviation: f64,
}

/// Singular values (descending) of `trials` uniform points of the HS sphere
/// of `k × d` matrices.
pub fn sample_hs_spectra(k: usize, d: usize, trials: usize, seed: u64) -> Vec<Vec<f64>> {
    (0..trials)
        .into_par_iter()
        .map(|t| singular_values(&uniform_hs_sphere(k, d, &mut RngStream::new(seed, t as u64).rng())))
        .collect()
}

fn check_window_dims(k: usize, d: usize) -> Result<()> {
    if k == 0 || d < k {
        return Err(Error::Domain(format!("window experiments need d >= k >= 1, got k = {k}, d = {d}")));
    }
    Ok(())
}

/// Window `|s − 1/√k| < C_win/√d` applied to precomputed spectra.
pub fn singular_window_report(spectra: &[Vec<f64>], k: usize, d: usize, c_win: f64) -> WindowReport {
    let center = 1.0 / (k as f64).sqrt();
    let half = c_win / (d as f64).sqrt();
    let mut passes = 0usize;
    let mut worst: f64 = 0.0;
    for s in spectra {
        // a k x d matrix with d >= k has exactly k singular values
        let dev = s.iter().map(|&x| (x - center).abs()).fold(0.0, f64::max);
        if dev < half {
            passes += 1;
        }
        worst = worst.max(dev * (d as f64).sqrt());
    }
    WindowReport {
        k,
        d,
        trials: spectra.len(),
        window_constant: c_win,
        pass_fraction: passes as f64 / spectra.len().max(1) as f64,
        worst_deviation: worst,
    }
}

/// Window `|λ − 1/k| < C0/√(kd)` on the eigenvalues `λ = s²` of `M M†`.
pub fn eigen_window_report(spectra: &[Vec<f64>], k: usize, d: usize, c0: f64) -> WindowReport {
    let center = 1.0 / k as f64;
    let scale = ((k * d) as f64).sqrt();
    let half = c0 / scale;
    let mut passes = 0usize;
    let mut worst: f64 = 0.0;
    for s in spectra {
        let dev = s.iter().map(|&x| (x * x - center).abs()).fold(0.0, f64::max);
        if dev < half {
            passes += 1;
        }
        worst = worst.max(dev * scale);
    }
    WindowReport {
        k,
        d,
        trials: spectra.len(),
        window_constant: c0,
        pass_fraction: passes as f64 / spectra.len().max(1) as f64,
        worst_deviation: worst,
    }
}

/// Fraction of uniform HS-sphere samples whose singular values all lie
/// within `C_win/√d` of `1/√k`.
pub fn singular_window_experiment(k: usize, d: usize, trials: usize, c_win: f64, seed: u64) -> Result<WindowReport> {
    check_window_dims(k, d)?;
    Ok(singular_window_report(&sample_hs_spectra(k, d, trials, seed), k, d, c_win))
}

/// Fraction of uniform HS-sphere samples whose `M M†` eigenvalues all lie
/// within `C0/√(kd)` of `1/k`.
pub fn eigen_window_experiment(k: usize, d: usize, trials: usize, c0: f64, seed: u64) -> Result<WindowReport> {
    check_window_dims(k, d)?;
    Ok(eigen_window_report(&sample_hs_spectra(k, d, trials, seed), k, d, c0))
}

/// Empirical order statistics of a sampled quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CentralValues {
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub mean: f64,
}

/// Linear-interpolation quantile of sorted data.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    match sorted.len() {
        0 => f64::NAN,
        1 => sorted[0],
        n => {
            let pos = q.clamp(0.0, 1.0) * (n - 1) as f64;
            let lo = pos.floor() as usize;
            let hi = pos.ceil() as usize;
            let frac = pos - lo as f64;
            sorted[lo] + (sorted[hi] - sorted[lo]) * frac
        }
    }
}

/// Median of unsorted data.
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    quantile_sorted(&v, 0.5)
}

pub fn central_values_of(values: &[f64]) -> CentralValues {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    CentralValues {
        median: quantile_sorted(&v, 0.5),
        q1: quantile_sorted(&v, 0.25),
        q3: quantile_sorted(&v, 0.75),
        mean: v.iter().sum::<f64>() / v.len().max(1) as f64,
    }
}

fn sample_values<T, S, F>(sampler: &S, f: &F, trials: usize, seed: u64) -> Vec<f64>
where
    S: Fn(&mut StreamRng) -> T + Sync,
    F: Fn(&T) -> f64 + Sync,
{
    (0..trials)
        .into_par_iter()
        .map(|t| f(&sampler(&mut RngStream::new(seed, t as u64).rng())))
        .collect()
}

/// Median, quartiles and mean of `f` over `trials` draws of `sampler`.
pub fn central_value_estimate<T, S, F>(sampler: S, f: F, trials: usize, seed: u64) -> Result<CentralValues>
where
    S: Fn(&mut StreamRng) -> T + Sync,
    F: Fn(&T) -> f64 + Sync,
{
    if trials < 100 {
        return Err(Error::Domain(format!("central value estimate needs >= 100 trials, got {trials}")));
    }
    Ok(central_values_of(&sample_values(&sampler, &f, trials, seed)))
}

/// Empirical Lévy tail of an `L`-Lipschitz `f` around its sample median.
/// `n_real_dim` is the real dimension of the ambient space of the sphere
/// and enters only the diagnostic fit of `c₁`.
pub fn levy_tail_experiment<T, S, F>(
    sampler: S,
    f: F,
    lipschitz: f64,
    n_real_dim: usize,
    eps_grid: &[f64],
    trials: usize,
    seed: u64,
) -> Result<TailCurve>
where
    S: Fn(&mut StreamRng) -> T + Sync,
    F: Fn(&T) -> f64 + Sync,
{
    if trials == 0 || eps_grid.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::Domain("Levy tails need trials > 0 and positive epsilons".into()));
    }
    if !(lipschitz > 0.0) {
        return Err(Error::Domain(format!("Lipschitz constant {lipschitz} must be positive")));
    }
    let values = sample_values(&sampler, &f, trials, seed);
    let mu = median(&values);
    let deviations: Vec<f64> = values.iter().map(|v| (v - mu).abs()).collect();
    let mut curve = TailCurve::from_deviations(&deviations, eps_grid.to_vec(), mu, CentralKind::Median);
    let n = n_real_dim as f64;
    curve.fitted_c1 = curve
        .epsilons
        .iter()
        .zip(&curve.exceed_prob)
        .filter(|(_, &p)| p > 0.0)
        .map(|(&eps, &p)| (1.0 - p.ln()) * lipschitz * lipschitz / (n * eps * eps))
        .reduce(f64::min);
    Ok(curve)
}

/// Outcome of the Lipschitz-on-`Ω` check for `g̃`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LipschitzReport {
    pub pairs: usize,
    /// Pairs violating `|g̃(M) − g̃(N)| ≤ (6/√k)‖M − N‖_HS`.
    pub violations: usize,
    /// Pairs violating `‖MM† − NN†‖_HS ≤ (‖M‖∞ + ‖N‖∞)‖M − N‖_HS`.
    pub chain_violations: usize,
    /// Largest `|g̃(M) − g̃(N)| / ((6/√k)‖M − N‖_HS)` over distinct pairs.
    pub worst_ratio: f64,
}

/// Uniform point of `S_HS ∩ Ω` by rejection.
pub fn sample_omega<R: Rng + ?Sized>(k: usize, d: usize, rng: &mut R) -> Result<RectMatrix> {
    let threshold = omega_threshold(k);
    for _ in 0..OMEGA_REJECTION_CAP {
        let m = uniform_hs_sphere(k, d, rng);
        if operator_norm(&m) <= threshold {
            return Ok(m);
        }
    }
    Err(Error::RejectionExhausted(OMEGA_REJECTION_CAP))
}

fn perturb_into_omega<R: Rng + ?Sized>(base: &RectMatrix, rng: &mut R) -> Result<RectMatrix> {
    let (k, d) = base.shape();
    let threshold = omega_threshold(k);
    for _ in 0..OMEGA_REJECTION_CAP {
        // log-uniform perturbation scale in [1e-3, 1]
        let scale = 10f64.powf(-3.0 * rng.random::<f64>());
        let step = uniform_hs_sphere(k, d, rng);
        let raw = base + step.scale(scale);
        let n = raw.unscale(hs_norm(&raw));
        if operator_norm(&n) <= threshold {
            return Ok(n);
        }
    }
    Err(Error::RejectionExhausted(OMEGA_REJECTION_CAP))
}

/// Per-pair outcome of the Lipschitz-on-`Ω` check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LipschitzPairRecord {
    pub chain_ok: bool,
    pub final_ok: bool,
    pub ratio: f64,
    pub distance: f64,
}

/// One record per pair drawn from `Ω`. Even trials use independent pairs,
/// odd trials a nearby pair (random perturbation of `M`).
pub fn lipschitz_restriction_records(k: usize, d: usize, trials: usize, seed: u64) -> Result<Vec<LipschitzPairRecord>> {
    let lip = 6.0 / (k as f64).sqrt();
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = RngStream::new(seed, t as u64).rng();
            let m = sample_omega(k, d, &mut rng)?;
            let n = if t % 2 == 0 {
                sample_omega(k, d, &mut rng)?
            } else {
                perturb_into_omega(&m, &mut rng)?
            };
            let (chain_ok, final_ok, ratio) = lipschitz_pair(&m, &n, lip)?;
            Ok(LipschitzPairRecord { chain_ok, final_ok, ratio, distance: hs_norm(&(&m - &n)) })
        })
        .collect()
}

/// Checks both the intermediate matrix inequality and the final
/// `6/√k`-Lipschitz bound for `g̃` on pairs drawn from `Ω`.
pub fn lipschitz_restriction_test(k: usize, d: usize, trials: usize, seed: u64) -> Result<LipschitzReport> {
    let records = lipschitz_restriction_records(k, d, trials, seed)?;
    let mut report = LipschitzReport {
        pairs: trials,
        violations: 0,
        chain_violations: 0,
        worst_ratio: 0.0,
    };
    for r in records {
        report.chain_violations += usize::from(!r.chain_ok);
        report.violations += usize::from(!r.final_ok);
        report.worst_ratio = report.worst_ratio.max(r.ratio);
    }
    Ok(report)
}

/// `(chain inequality holds, 6/√k bound holds, ratio)` for one pair.
pub fn lipschitz_pair(m: &RectMatrix, n: &RectMatrix, lip: f64) -> Result<(bool, bool, f64)> {
    let dist = hs_norm(&(m - n));
    let gap = (g_tilde(m)? - g_tilde(n)?).abs();
    let lhs = hs_norm(&(m * m.adjoint() - n * n.adjoint()));
    let chain_rhs = (operator_norm(m) + operator_norm(n)) * dist;
    let chain_ok = gap <= lhs + CHAIN_TOL && lhs <= chain_rhs + CHAIN_TOL && chain_rhs <= lip * dist + CHAIN_TOL;
    let final_ok = gap <= lip * dist + CHAIN_TOL;
    let ratio = if dist > 0.0 { gap / (lip * dist) } else { 0.0 };
    Ok((chain_ok, final_ok, ratio))
}

/// Function families evaluated on `S_HS` and on its random sections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectiveFamily {
    /// `g̃(M) = ‖MM† − Id/k‖_HS`.
    #[serde(rename = "g")]
    GTilde,
    /// `‖M‖∞`.
    OpNorm,
    /// `‖M‖₄`.
    Schatten4,
}

impl ObjectiveFamily {
    pub fn evaluate(self, m: &RectMatrix) -> f64 {
        match self {
            ObjectiveFamily::GTilde => g_tilde(m).expect("HS-sphere samples are unit"),
            ObjectiveFamily::OpNorm => operator_norm(m),
            ObjectiveFamily::Schatten4 => schatten_norm(m, 4.0).expect("p = 4 is valid"),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ObjectiveFamily::GTilde => "g",
            ObjectiveFamily::OpNorm => "opnorm",
            ObjectiveFamily::Schatten4 => "schatten4",
        }
    }
}

impl std::str::FromStr for ObjectiveFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "g" | "g_tilde" | "gtilde" => Ok(ObjectiveFamily::GTilde),
            "opnorm" | "op" => Ok(ObjectiveFamily::OpNorm),
            "schatten4" | "s4" => Ok(ObjectiveFamily::Schatten4),
            other => Err(Error::Domain(format!("unknown objective family '{other}'"))),
        }
    }
}

/// Parameters shared by the random-section experiments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionConfig {
    pub k: usize,
    pub d: usize,
    pub m: usize,
    pub subspace_trials: usize,
    /// Random probes per section, merged with the optimizer's estimates.
    pub probes: usize,
    pub optimizer: OptimizerConfig,
    pub seed: u64,
}

impl SectionConfig {
    fn validate(&self) -> Result<()> {
        if self.k == 0 || self.d == 0 || self.m == 0 || self.m > self.k * self.d {
            return Err(Error::Domain(format!(
                "sections need 1 <= m <= k·d, got k = {}, d = {}, m = {}",
                self.k, self.d, self.m
            )));
        }
        self.optimizer.validate()
    }
}

/// Estimated extremes of a family over one section `S_HS ∩ E`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectionExtremes {
    pub max: f64,
    pub min: f64,
}

fn section_stream(cfg: &SectionConfig, trial: usize) -> RngStream {
    RngStream::new(cfg.seed, trial as u64)
}

/// Runs the optimizer (and probes) on the objective built for each random
/// section. Without `search_min` the minimum comes from probes alone.
fn section_search<O, B, C>(cfg: &SectionConfig, build: B, check: C, search_min: bool) -> Result<Vec<SectionExtremes>>
where
    O: SphereObjective,
    B: Fn(SubspaceBasis) -> Result<O> + Sync,
    C: Fn(&SubspaceBasis, &CVector, f64) -> Result<()> + Sync,
{
    cfg.validate()?;
    (0..cfg.subspace_trials)
        .into_par_iter()
        .map(|t| {
            let stream = section_stream(cfg, t);
            let w = haar_isometry(cfg.k * cfg.d, cfg.m, &mut stream.rng())?;
            let obj = build(w.clone())?;
            let opt = cfg.optimizer.with_seed(stream.substream(1).stream_id);
            let best = riemannian_extremize(&obj, Direction::Max, &opt)?;
            check(&w, &best.argpoint, best.value)?;
            let mut hi = best.value;
            let mut lo = f64::INFINITY;
            if search_min {
                let worst = riemannian_extremize(&obj, Direction::Min, &opt)?;
                check(&w, &worst.argpoint, worst.value)?;
                lo = worst.value;
            }
            if let Some((plo, phi)) = random_probe_extremes(&obj, cfg.probes, &mut stream.substream(2).rng()) {
                hi = hi.max(phi);
                lo = lo.min(plo);
            }
            if !lo.is_finite() {
                lo = hi;
            }
            Ok(SectionExtremes { max: hi, min: lo })
        })
        .collect()
}

/// `g̃² = tr|M|⁴ − 1/k` at an optimizer output, via an independent evaluation.
fn check_fourth_moment(cfg: &SectionConfig, w: &SubspaceBasis, u: &CVector, quartic: f64) -> Result<()> {
    let m = vector_to_matrix(w.embed(u).as_slice(), cfg.k, cfg.d)?;
    let g = g_tilde(&m)?;
    let residual = (g * g - (quartic - 1.0 / cfg.k as f64)).abs();
    if residual > IDENTITY_TOL {
        return Err(Error::IdentityMismatch { residual });
    }
    Ok(())
}

/// Extremes of `tr|M|⁴` over each random section (optimizer plus probes).
pub fn quartic_section_extremes(cfg: &SectionConfig) -> Result<Vec<SectionExtremes>> {
    section_search(
        cfg,
        |w| g_objective(w, cfg.k, cfg.d),
        |w, u, q| check_fourth_moment(cfg, w, u, q),
        true,
    )
}

/// Extremes of `‖·‖∞` over each random section (optimizer plus probes).
pub fn opnorm_section_extremes(cfg: &SectionConfig) -> Result<Vec<SectionExtremes>> {
    section_search(cfg, |w| opnorm_objective(w, cfg.k, cfg.d), |_, _, _| Ok(()), true)
}

/// Extremes of `family` over each random section.
pub fn section_extremes(family: ObjectiveFamily, cfg: &SectionConfig) -> Result<Vec<SectionExtremes>> {
    match family {
        ObjectiveFamily::OpNorm => opnorm_section_extremes(cfg),
        ObjectiveFamily::GTilde => Ok(quartic_section_extremes(cfg)?
            .into_iter()
            .map(|e| SectionExtremes {
                max: g_tilde_from_quartic(e.max, cfg.k),
                min: g_tilde_from_quartic(e.min, cfg.k),
            })
            .collect()),
        ObjectiveFamily::Schatten4 => Ok(quartic_section_extremes(cfg)?
            .into_iter()
            .map(|e| SectionExtremes {
                max: e.max.powf(0.25),
                min: e.min.powf(0.25),
            })
            .collect()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmegaReport {
    pub threshold: f64,
    /// Estimated `max ‖M‖∞` over each section.
    pub max_opnorm: Vec<f64>,
    pub fraction: f64,
}

/// Fraction of random sections whose estimated maximal operator norm stays
/// below `3/√k`, i.e. sections estimated to lie inside `Ω`.
pub fn omega_membership_experiment(cfg: &SectionConfig) -> Result<OmegaReport> {
    let threshold = omega_threshold(cfg.k);
    let max_opnorm: Vec<f64> =
        section_search(cfg, |w| opnorm_objective(w, cfg.k, cfg.d), |_, _, _| Ok(()), false)?
            .into_iter()
            .map(|e| e.max)
            .collect();
    let members = max_opnorm.iter().filter(|&&v| v <= threshold).count();
    Ok(OmegaReport {
        threshold,
        fraction: members as f64 / max_opnorm.len().max(1) as f64,
        max_opnorm,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillationReport {
    pub family: ObjectiveFamily,
    /// Ambient central value (median over `S_HS`).
    pub center: CentralValues,
    pub extremes: Vec<SectionExtremes>,
    /// `max(|max − μ|, |min − μ|)` per section; lower estimates of the
    /// true oscillation.
    pub osc_values: Vec<f64>,
}

/// Ambient median of `family` over `S_HS`.
pub fn ambient_center(family: ObjectiveFamily, k: usize, d: usize, trials: usize, seed: u64) -> Result<CentralValues> {
    central_value_estimate(
        |rng: &mut StreamRng| uniform_hs_sphere(k, d, rng),
        move |m: &RectMatrix| family.evaluate(m),
        trials,
        seed ^ CENTER_SEED_MIX,
    )
}

/// Oscillation of `family` around its ambient median over random sections.
pub fn oscillation_from_extremes(
    family: ObjectiveFamily,
    center: CentralValues,
    extremes: Vec<SectionExtremes>,
) -> OscillationReport {
    let mu = center.median;
    let osc_values = extremes
        .iter()
        .map(|e| (e.max - mu).abs().max((e.min - mu).abs()))
        .collect();
    OscillationReport {
        family,
        center,
        extremes,
        osc_values,
    }
}

pub fn oscillation_experiment(
    family: ObjectiveFamily,
    cfg: &SectionConfig,
    center_trials: usize,
) -> Result<OscillationReport> {
    let center = ambient_center(family, cfg.k, cfg.d, center_trials, cfg.seed)?;
    Ok(oscillation_from_extremes(family, center, section_extremes(family, cfg)?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundnessReport {
    /// `max ‖M‖₄ / min ‖M‖₄` per section.
    pub ratios: Vec<f64>,
    pub extremes: Vec<SectionExtremes>,
    /// `k^{−1/4}`, the unconditional lower edge for `‖M‖₄` on `S_HS`.
    pub lower_edge: f64,
}

/// Roundness of random sections in the Schatten-4 norm, from quartic
/// extremes.
pub fn roundness_from_quartic(k: usize, quartic: &[SectionExtremes]) -> RoundnessReport {
    let extremes: Vec<SectionExtremes> = quartic
        .iter()
        .map(|e| SectionExtremes {
            max: e.max.powf(0.25),
            min: e.min.powf(0.25),
        })
        .collect();
    RoundnessReport {
        ratios: extremes.iter().map(|e| e.max / e.min).collect(),
        lower_edge: (k as f64).powf(-0.25),
        extremes,
    }
}

pub fn schatten4_section_roundness(cfg: &SectionConfig) -> Result<RoundnessReport> {
    Ok(roundness_from_quartic(cfg.k, &quartic_section_extremes(cfg)?))
}
