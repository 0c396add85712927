//! Random channels `Φ(ρ) = tr_{C^d}(V ρ V†)` attached to random subspaces.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::{
    hermitian_part, maximally_entangled, vector_to_matrix, CVector, DensityMatrix, RectMatrix,
    SubspaceBasis,
};
use crate::sampling::haar_isometry;

/// Default cap on scalar operations for the product-channel output.
pub const DEFAULT_BUDGET: u128 = 1 << 31;

/// A channel `M_m → M_k` given by an isometry `V: C^m → C^k ⊗ C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomChannel {
    k: usize,
    d: usize,
    isometry: SubspaceBasis,
}

impl RandomChannel {
    /// Wraps an isometry whose ambient dimension must equal `k·d`.
    pub fn from_isometry(k: usize, d: usize, isometry: SubspaceBasis) -> Result<Self> {
        if k == 0 || d == 0 {
            return Err(Error::Domain("k and d must be positive".into()));
        }
        if isometry.ambient_dim() != k * d {
            return Err(Error::DimensionMismatch {
                expected: k * d,
                got: isometry.ambient_dim(),
            });
        }
        Ok(Self { k, d, isometry })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn m(&self) -> usize {
        self.isometry.dim()
    }

    pub fn isometry(&self) -> &SubspaceBasis {
        &self.isometry
    }

    /// Matrix form `A_a = mat(V e_a)` of the `a`-th input basis vector.
    fn column_matrix(&self, a: usize) -> RectMatrix {
        let col = self.isometry.columns().column(a);
        RectMatrix::from_fn(self.k, self.d, |i, j| col[i * self.d + j])
    }

    fn column_matrices(&self) -> Vec<RectMatrix> {
        (0..self.m()).map(|a| self.column_matrix(a)).collect()
    }

    /// `Φ(ρ) = Σ_{ab} ρ_ab A_a A_b†`.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.m() {
            return Err(Error::DimensionMismatch {
                expected: self.m(),
                got: rho.dim(),
            });
        }
        let cols = self.column_matrices();
        let r = rho.matrix();
        let mut out = RectMatrix::zeros(self.k, self.k);
        for (b, ab) in cols.iter().enumerate() {
            let mut mixed = RectMatrix::zeros(self.k, self.d);
            for (a, aa) in cols.iter().enumerate() {
                let w = r[(a, b)];
                if w != Complex64::new(0.0, 0.0) {
                    mixed += aa * w;
                }
            }
            out += mixed * ab.adjoint();
        }
        DensityMatrix::new(hermitian_part(&out))
    }

    /// Output on the pure input `u` in matrix form, `mat(V u)`.
    pub fn output_matrix(&self, u: &CVector) -> Result<RectMatrix> {
        if u.len() != self.m() {
            return Err(Error::DimensionMismatch {
                expected: self.m(),
                got: u.len(),
            });
        }
        vector_to_matrix(self.isometry.embed(u).as_slice(), self.k, self.d)
    }

    /// Channel built from the entrywise conjugate isometry.
    pub fn conjugate(&self) -> Self {
        Self {
            k: self.k,
            d: self.d,
            isometry: self.isometry.conj(),
        }
    }

    /// Scalar-operation estimate for [`Self::product_output_on_entangled`].
    pub fn product_workload(&self) -> u128 {
        let (k, d, m) = (self.k as u128, self.d as u128, self.m() as u128);
        m * m * (k * k * d + k * k * k * k)
    }

    /// `(Φ ⊗ Φ̄)(|χ_m⟩⟨χ_m|) = (1/m) Σ_{ij} Φ(E_ij) ⊗ conj(Φ(E_ij))`, a state on
    /// `C^k ⊗ C^k` with index `a·k + a'`.
    pub fn product_output_on_entangled(&self, budget: u128) -> Result<DensityMatrix> {
        let required = self.product_workload();
        if required > budget {
            return Err(Error::BudgetExceeded { required, budget });
        }
        let k = self.k;
        let m = self.m();
        let cols = self.column_matrices();
        let mut out = RectMatrix::zeros(k * k, k * k);
        for ai in &cols {
            for aj in &cols {
                let block = ai * aj.adjoint();
                for a in 0..k {
                    for b in 0..k {
                        let x = block[(a, b)];
                        for ap in 0..k {
                            for bp in 0..k {
                                out[(a * k + ap, b * k + bp)] += x * block[(ap, bp)].conj();
                            }
                        }
                    }
                }
            }
        }
        DensityMatrix::new(hermitian_part(&out.unscale(m as f64)))
    }

    /// `⟨χ_k| (Φ ⊗ Φ̄)(|χ_m⟩⟨χ_m|) |χ_k⟩`.
    pub fn entangled_overlap(&self, budget: u128) -> Result<f64> {
        let rho = self.product_output_on_entangled(budget)?;
        Ok(overlap_with_entangled(&rho, self.k))
    }
}

/// `⟨χ_k|ρ|χ_k⟩` for a state on `C^k ⊗ C^k`.
pub fn overlap_with_entangled(rho: &DensityMatrix, k: usize) -> f64 {
    let chi = maximally_entangled(k);
    chi.dotc(&(rho.matrix() * &chi)).re
}

/// Channel attached to a Haar-random `m`-dimensional subspace of `C^k ⊗ C^d`.
pub fn sample_channel<R: Rng + ?Sized>(k: usize, d: usize, m: usize, rng: &mut R) -> Result<RandomChannel> {
    if k == 0 || d == 0 || m == 0 || m > k * d {
        return Err(Error::Domain(format!(
            "channel dimensions need 1 <= m <= k·d, got k = {k}, d = {d}, m = {m}"
        )));
    }
    RandomChannel::from_isometry(k, d, haar_isometry(k * d, m, rng)?)
}
