//! Von Neumann entropy and the two sides of the additivity comparison.
//!
//! All entropies are in nats.

use crate::channel::RandomChannel;
use crate::error::{Error, Result};
use crate::matrix::{hs_norm, CVector, DensityMatrix, RectMatrix, EIGEN_CLIP};
use crate::optimize::{entropy_objective, riemannian_extremize, Direction, OptimizerConfig, SphereObjective};

/// `−Σ λ log λ` over eigenvalues clipped at [`EIGEN_CLIP`] (`0·log 0 = 0`).
pub fn entropy_of_spectrum(eigenvalues: &[f64]) -> f64 {
    let s: f64 = eigenvalues
        .iter()
        .filter(|&&l| l > EIGEN_CLIP)
        .map(|&l| -l * l.ln())
        .sum();
    s.max(0.0)
}

/// `S(ρ) = −tr ρ log ρ`.
pub fn von_neumann(rho: &DensityMatrix) -> f64 {
    entropy_of_spectrum(&rho.eigenvalues())
}

/// `log k − k ‖σ − Id/k‖²_HS`, a lower bound on `S(σ)`.
pub fn hs_entropy_lower_bound(sigma: &DensityMatrix) -> f64 {
    let k = sigma.dim();
    let shifted = sigma.matrix() - RectMatrix::identity(k, k).scale(1.0 / k as f64);
    let dist = hs_norm(&shifted);
    (k as f64).ln() - k as f64 * dist * dist
}

/// `log k − k·g_max²`.
///
/// This is a certified lower bound on `S_min(Φ)` only when `g_max` is a
/// certified upper bound on `max g̃` over the unit sphere of the channel's
/// subspace. An optimizer estimate of that maximum is a lower estimate, so
/// feeding one in yields a heuristic value, not a bound.
pub fn smin_channel_bound_from_gmax(k: usize, g_max: f64) -> f64 {
    debug_assert!(g_max >= 0.0);
    (k as f64).ln() - k as f64 * g_max * g_max
}

/// Entropy of the `k²`-dimensional spectrum with one eigenvalue `λ` and the
/// remaining `k² − 1` equal: `−λ log λ − (1−λ) log((1−λ)/(k²−1))`.
///
/// By concavity this bounds the entropy of any state on `C^k ⊗ C^k` whose
/// largest eigenvalue is at least `λ`, provided `λ ≥ 1/k²`. Below that
/// threshold no constraint is active and the maximal entropy `2 log k` is
/// returned.
pub fn smin_product_upper_bound(k: usize, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::Domain(format!("eigenvalue bound {lambda} outside (0, 1]")));
    }
    if k < 2 {
        return Err(Error::Domain(format!("product bound needs k >= 2, got {k}")));
    }
    let dim = (k * k) as f64;
    if lambda <= 1.0 / dim {
        return Ok(dim.ln());
    }
    let rest = 1.0 - lambda;
    let tail = if rest > 0.0 { -rest * (rest / (dim - 1.0)).ln() } else { 0.0 };
    Ok(-lambda * lambda.ln() + tail)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropySearch {
    /// Smallest output entropy found; an upper bound on `S_min(Φ)`.
    pub value: f64,
    /// Unit input vector achieving `value`.
    pub witness: CVector,
}

/// Upper bound on `S_min(Φ)` by multi-start minimization of the output
/// entropy over pure inputs.
pub fn smin_upper_by_search(channel: &RandomChannel, cfg: &OptimizerConfig) -> Result<EntropySearch> {
    let obj = entropy_objective(channel)?;
    let best = riemannian_extremize(&obj, Direction::Min, cfg)?;
    // re-evaluate so the reported value is exactly what the witness gives
    let value = obj.evaluate(&best.argpoint);
    Ok(EntropySearch {
        value,
        witness: best.argpoint,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::SubspaceBasis;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn diag_state(vals: &[f64]) -> DensityMatrix {
        let n = vals.len();
        DensityMatrix::new(RectMatrix::from_fn(n, n, |i, j| {
            Complex64::new(if i == j { vals[i] } else { 0.0 }, 0.0)
        }))
        .unwrap()
    }

    #[test]
    fn von_neumann_examples() {
        assert_relative_eq!(von_neumann(&DensityMatrix::maximally_mixed(4)), 4f64.ln(), epsilon = 1e-12);
        assert_eq!(von_neumann(&diag_state(&[1.0, 0.0, 0.0])), 0.0);
        assert_relative_eq!(von_neumann(&diag_state(&[0.5, 0.5, 0.0, 0.0])), 2f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn hs_bound_examples() {
        for k in 2..6 {
            let mixed = DensityMatrix::maximally_mixed(k);
            assert_relative_eq!(hs_entropy_lower_bound(&mixed), (k as f64).ln(), epsilon = 1e-12);
        }
        let pure = diag_state(&[1.0, 0.0]);
        assert_relative_eq!(hs_entropy_lower_bound(&pure), 2f64.ln() - 1.0, epsilon = 1e-12);
        assert_relative_eq!(hs_entropy_lower_bound(&pure), -0.3068528194400547, epsilon = 1e-12);
    }

    #[test]
    fn gmax_bound_examples() {
        assert_relative_eq!(smin_channel_bound_from_gmax(5, 0.0), 5f64.ln());
        assert_relative_eq!(smin_channel_bound_from_gmax(4, 0.5), 4f64.ln() - 1.0, epsilon = 1e-12);
        assert_relative_eq!(smin_channel_bound_from_gmax(4, 0.5), 0.3862943611198906, epsilon = 1e-12);
        assert_relative_eq!(smin_channel_bound_from_gmax(10, 0.2), 10f64.ln() - 0.4, epsilon = 1e-12);
    }

    #[test]
    fn product_bound_examples() {
        assert_relative_eq!(smin_product_upper_bound(2, 0.25).unwrap(), 4f64.ln(), epsilon = 1e-12);
        let half = smin_product_upper_bound(2, 0.5).unwrap();
        assert_relative_eq!(half, 0.5 * 2f64.ln() + 0.5 * 6f64.ln(), epsilon = 1e-12);
        assert_relative_eq!(half, 1.2424533248940002, epsilon = 1e-12);
        assert!(half < 2.0 * 2f64.ln());
        assert_eq!(smin_product_upper_bound(3, 1.0).unwrap(), 0.0);
        assert!(smin_product_upper_bound(2, 0.0).is_err());
        assert!(smin_product_upper_bound(2, 1.5).is_err());
        assert!(smin_product_upper_bound(1, 0.5).is_err());
    }

    #[test]
    fn product_bound_decreases_above_uniform_point() {
        for k in 2..7 {
            let floor = 1.0 / (k * k) as f64;
            let grid: Vec<f64> = (0..=200).map(|i| floor + (1.0 - floor) * i as f64 / 200.0).collect();
            let vals: Vec<f64> = grid.iter().map(|&l| smin_product_upper_bound(k, l).unwrap()).collect();
            assert!(vals.windows(2).all(|w| w[1] < w[0]), "k = {k}");
            assert!(vals[1..].iter().all(|&v| v < 2.0 * (k as f64).ln()));
        }
    }

    #[test]
    fn search_on_single_input_channels() {
        let k = 3;
        let flat = crate::matrix::maximally_entangled(k);
        let w = SubspaceBasis::new(RectMatrix::from_column_slice(k * k, 1, flat.as_slice())).unwrap();
        let ch = RandomChannel::from_isometry(k, k, w).unwrap();
        let r = smin_upper_by_search(&ch, &OptimizerConfig::default()).unwrap();
        assert_relative_eq!(r.value, (k as f64).ln(), epsilon = 1e-12);

        let mut e = CVector::zeros(k * 4);
        e[5] = Complex64::new(0.0, 1.0);
        let w = SubspaceBasis::new(RectMatrix::from_column_slice(k * 4, 1, e.as_slice())).unwrap();
        let ch = RandomChannel::from_isometry(k, 4, w).unwrap();
        let r = smin_upper_by_search(&ch, &OptimizerConfig::default()).unwrap();
        assert!(r.value.abs() < 1e-12);
    }
}
