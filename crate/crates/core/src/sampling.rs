//! Seeded random sampling: Ginibre matrices, Haar vectors, isometries and
//! uniform points on Hilbert–Schmidt spheres.
//!
//! Every Monte Carlo routine in the crate derives its randomness from an
//! [`RngStream`]. Trial `i` of an experiment uses stream id `i` (or a
//! substream of it), so results do not depend on how trials are scheduled
//! across workers.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{hs_norm, CVector, RectMatrix, SubspaceBasis};

/// Generator type handed out by [`RngStream::rng`].
pub type StreamRng = ChaCha8Rng;

/// A `(seed, stream_id)` pair naming a reproducible random sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub const fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    /// A fresh generator positioned at the start of this stream.
    pub fn rng(&self) -> StreamRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }

    /// Derived stream for nested work (e.g. start `index` inside trial
    /// `self.stream_id`). Same seed, mixed stream id.
    pub fn substream(&self, index: u64) -> Self {
        let mixed = splitmix64(self.stream_id ^ splitmix64(index.wrapping_add(0x5851_f42d_4c95_7f2d)));
        Self::new(self.seed, mixed)
    }
}

/// Independent seed for the `index`-th member of a family of experiments
/// sharing `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Standard complex Gaussian: real and imaginary parts independent
/// `N(0, 1/2)`, so `E|g|² = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// `k × d` matrix of i.i.d. standard complex Gaussians.
pub fn ginibre<R: Rng + ?Sized>(k: usize, d: usize, rng: &mut R) -> RectMatrix {
    DMatrix::from_fn(k, d, |_, _| complex_gaussian(rng))
}

/// Uniform point on the unit sphere of `C^n`.
pub fn haar_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVector {
    loop {
        let g = CVector::from_fn(n, |_, _| complex_gaussian(rng));
        let norm = g.norm();
        if norm > 0.0 {
            return g.unscale(norm);
        }
    }
}

/// Haar-distributed isometry `C^m → C^n`: thin QR of an `n × m` Ginibre
/// matrix with the phases of `diag(R)` moved into `Q`.
pub fn haar_isometry<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<SubspaceBasis> {
    if m == 0 || m > n {
        return Err(Error::Domain(format!(
            "isometry needs 1 <= m <= n, got m = {m}, n = {n}"
        )));
    }
    let qr = ginibre(n, m, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..m {
        let rjj = r[(j, j)];
        let modulus = rjj.norm();
        let phase = if modulus > 0.0 { rjj / modulus } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    SubspaceBasis::new(q)
}

/// Haar unitary on `C^n`.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RectMatrix {
    haar_isometry(n, n, rng)
        .expect("n x n isometry is always valid for n >= 1")
        .columns()
        .clone()
}

/// Uniform point on the Hilbert–Schmidt unit sphere of `k × d` matrices.
pub fn uniform_hs_sphere<R: Rng + ?Sized>(k: usize, d: usize, rng: &mut R) -> RectMatrix {
    loop {
        let g = ginibre(k, d, rng);
        let norm = hs_norm(&g);
        if norm > 0.0 {
            return g.unscale(norm);
        }
    }
}

/// Uniform point on the unit sphere of `range(W)`, as a vector of `C^n`.
pub fn uniform_sphere_in_subspace<R: Rng + ?Sized>(w: &SubspaceBasis, rng: &mut R) -> CVector {
    let u = haar_unit_vector(w.dim(), rng);
    let x = w.embed(&u);
    let norm = x.norm();
    x.unscale(norm)
}
