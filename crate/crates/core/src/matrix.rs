//! Complex matrix primitives.
//!
//! A vector `x` of `C^k ⊗ C^d` is identified with the `k × d` matrix `M`
//! with `M[i][j] = x[i·d + j]`. Under this identification the partial trace
//! over the second factor of `|x⟩⟨x|` is `M M†`, and the Schmidt
//! coefficients of `x` are the singular values of `M`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// A complex `k × d` matrix. Square matrices (states, Hermitian
/// perturbations) use the same representation.
pub type RectMatrix = DMatrix<Complex64>;

/// A complex column vector.
pub type CVector = DVector<Complex64>;

/// Tolerance for the unit Hilbert–Schmidt norm precondition.
pub const UNIT_TOL: f64 = 1e-10;
/// Tolerance for algebraic identities checked at runtime.
pub const IDENTITY_TOL: f64 = 1e-9;
/// Eigenvalues below this are treated as zero before taking logarithms.
pub const EIGEN_CLIP: f64 = 1e-12;

const DENSITY_HERMITIAN_TOL: f64 = 1e-12;
const DENSITY_EIGEN_TOL: f64 = 1e-10;
const DENSITY_TRACE_TOL: f64 = 1e-10;
const SPECTRUM_HERMITIAN_TOL: f64 = 1e-10;
const ISOMETRY_TOL: f64 = 1e-10;

/// Hilbert–Schmidt (Frobenius) norm, `sqrt(Σ|a_ij|²)`.
pub fn hs_norm(a: &RectMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Singular values in descending order.
pub fn singular_values(a: &RectMatrix) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = a.singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Operator (spectral) norm, the largest singular value, from the top
/// eigenvalue of the smaller Gram matrix.
pub fn operator_norm(a: &RectMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    let gram = if a.nrows() <= a.ncols() { a * a.adjoint() } else { a.adjoint() * a };
    let top = hermitian_part(&gram).symmetric_eigenvalues().iter().copied().fold(0.0, f64::max);
    top.sqrt()
}

/// Schatten `p`-norm `(Σ sᵢ^p)^{1/p}`; `p = f64::INFINITY` gives the
/// operator norm.
pub fn schatten_norm(a: &RectMatrix, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::Domain(format!("Schatten exponent must be >= 1, got {p}")));
    }
    if p == 2.0 {
        return Ok(hs_norm(a));
    }
    let s = singular_values(a);
    if p.is_infinite() {
        return Ok(s.first().copied().unwrap_or(0.0));
    }
    // scale by the top singular value so large p does not overflow
    let top = s.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return Ok(0.0);
    }
    let sum: f64 = s.iter().map(|&x| (x / top).powf(p)).sum();
    Ok(top * sum.powf(1.0 / p))
}

/// Reshape `x ∈ C^{k·d}` into the `k × d` matrix with `M[i][j] = x[i·d + j]`.
pub fn vector_to_matrix(x: &[Complex64], k: usize, d: usize) -> Result<RectMatrix> {
    if k == 0 || d == 0 {
        return Err(Error::Domain("k and d must be positive".into()));
    }
    if x.len() != k * d {
        return Err(Error::DimensionMismatch {
            expected: k * d,
            got: x.len(),
        });
    }
    Ok(DMatrix::from_row_slice(k, d, x))
}

/// Inverse of [`vector_to_matrix`].
pub fn matrix_to_vector(m: &RectMatrix) -> CVector {
    let (k, d) = m.shape();
    DVector::from_fn(k * d, |idx, _| m[(idx / d, idx % d)])
}

/// `tr|M|⁴ = tr (M M†)² = ‖M M†‖²_HS`.
pub fn fourth_moment(m: &RectMatrix) -> f64 {
    let gram = m * m.adjoint();
    gram.iter().map(|z| z.norm_sqr()).sum()
}

fn ensure_unit(m: &RectMatrix) -> Result<()> {
    let norm = hs_norm(m);
    if (norm - 1.0).abs() > UNIT_TOL {
        return Err(Error::NotUnitNorm { norm });
    }
    Ok(())
}

/// The state `M M†` induced by a unit vector in matrix form.
pub fn output_state(m: &RectMatrix) -> Result<DensityMatrix> {
    ensure_unit(m)?;
    DensityMatrix::new(hermitian_part(&(m * m.adjoint())))
}

/// `g̃(M) = ‖M M† − Id/k‖_HS` for unit `M`.
///
/// Evaluated directly and cross-checked against `tr|M|⁴ − 1/k`; the two
/// squared values must agree to [`IDENTITY_TOL`].
pub fn g_tilde(m: &RectMatrix) -> Result<f64> {
    ensure_unit(m)?;
    let k = m.nrows();
    let mut gram = m * m.adjoint();
    let quartic: f64 = gram.iter().map(|z| z.norm_sqr()).sum();
    let shift = Complex64::new(1.0 / k as f64, 0.0);
    for i in 0..k {
        gram[(i, i)] -= shift;
    }
    let direct_sq: f64 = gram.iter().map(|z| z.norm_sqr()).sum();
    let residual = direct_sq - (quartic - 1.0 / k as f64);
    if residual.abs() > IDENTITY_TOL {
        return Err(Error::IdentityMismatch { residual });
    }
    Ok(direct_sq.sqrt())
}

/// Largest entrywise modulus of `A − A†`.
pub fn hermitian_deviation(a: &RectMatrix) -> f64 {
    let n = a.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `(A + A†)/2`.
pub fn hermitian_part(a: &RectMatrix) -> RectMatrix {
    (a + a.adjoint()).scale(0.5)
}

fn ensure_hermitian(a: &RectMatrix, tol: f64) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            got: a.ncols(),
        });
    }
    let deviation = hermitian_deviation(a);
    if deviation > tol {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

/// Eigenvalues of a Hermitian matrix, sorted descending.
pub fn hermitian_spectrum(a: &RectMatrix) -> Result<Vec<f64>> {
    ensure_hermitian(a, SPECTRUM_HERMITIAN_TOL)?;
    let mut vals: Vec<f64> = hermitian_part(a)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    vals.sort_by(|x, y| y.total_cmp(x));
    Ok(vals)
}

/// Eigen-decomposition `A = U Λ U†` of a Hermitian matrix with eigenvalues
/// sorted descending; column `i` of `U` pairs with `values[i]`.
pub fn hermitian_eigen(a: &RectMatrix) -> Result<(Vec<f64>, RectMatrix)> {
    ensure_hermitian(a, SPECTRUM_HERMITIAN_TOL)?;
    let eig = hermitian_part(a).symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = RectMatrix::from_fn(a.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    Ok((values, vectors))
}

/// `(1/√k) Σᵢ eᵢ ⊗ eᵢ` in `C^{k²}`.
pub fn maximally_entangled(k: usize) -> CVector {
    let amp = Complex64::new(1.0 / (k as f64).sqrt(), 0.0);
    let mut v = CVector::zeros(k * k);
    for i in 0..k {
        v[i * k + i] = amp;
    }
    v
}

/// Partial trace over the second factor of an operator on `C^k ⊗ C^d`.
pub fn partial_trace_second(x: &RectMatrix, k: usize, d: usize) -> Result<RectMatrix> {
    let n = k * d;
    if x.nrows() != n || x.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x.nrows(),
        });
    }
    Ok(RectMatrix::from_fn(k, k, |i, ip| {
        (0..d).map(|j| x[(i * d + j, ip * d + j)]).sum()
    }))
}

/// A Hermitian, positive semi-definite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    data: RectMatrix,
}

impl DensityMatrix {
    /// Validates and wraps `data`.
    pub fn new(data: RectMatrix) -> Result<Self> {
        if data.nrows() != data.ncols() || data.nrows() == 0 {
            return Err(Error::InvalidDensity(format!(
                "shape {}x{} is not square and non-empty",
                data.nrows(),
                data.ncols()
            )));
        }
        let deviation = hermitian_deviation(&data);
        if deviation > DENSITY_HERMITIAN_TOL {
            return Err(Error::InvalidDensity(format!(
                "not Hermitian (deviation {deviation:e})"
            )));
        }
        let trace = data.trace().re;
        if (trace - 1.0).abs() > DENSITY_TRACE_TOL {
            return Err(Error::InvalidDensity(format!("trace {trace} != 1")));
        }
        let min_eig = hermitian_part(&data)
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -DENSITY_EIGEN_TOL {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(Self { data })
    }

    /// `|ψ⟩⟨ψ|` for a unit vector `ψ`.
    pub fn pure(psi: &CVector) -> Result<Self> {
        let norm = psi.norm();
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnitNorm { norm });
        }
        Self::new(psi * psi.adjoint())
    }

    /// `Id/dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        let data = RectMatrix::identity(dim, dim).scale(1.0 / dim as f64);
        Self { data }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn matrix(&self) -> &RectMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> RectMatrix {
        self.data
    }

    /// Eigenvalues sorted descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut vals: Vec<f64> = hermitian_part(&self.data)
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        vals.sort_by(|x, y| y.total_cmp(x));
        vals
    }

    /// Entrywise complex conjugate (also a valid state).
    pub fn conj(&self) -> Self {
        Self {
            data: self.data.map(|z| z.conj()),
        }
    }
}

/// An `n × m` matrix with orthonormal columns spanning an `m`-dimensional
/// subspace of `C^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    columns: RectMatrix,
}

impl SubspaceBasis {
    /// Validates orthonormality of the columns.
    pub fn new(columns: RectMatrix) -> Result<Self> {
        let (n, m) = columns.shape();
        if m == 0 || m > n {
            return Err(Error::Domain(format!(
                "subspace dimension {m} must lie in [1, {n}]"
            )));
        }
        let gram = columns.adjoint() * &columns;
        let deviation = (0..m)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .map(|(i, j)| {
                let target = if i == j { 1.0 } else { 0.0 };
                (gram[(i, j)] - Complex64::new(target, 0.0)).norm()
            })
            .fold(0.0, f64::max);
        if deviation > ISOMETRY_TOL {
            return Err(Error::NotIsometry { deviation });
        }
        Ok(Self { columns })
    }

    pub fn ambient_dim(&self) -> usize {
        self.columns.nrows()
    }

    pub fn dim(&self) -> usize {
        self.columns.ncols()
    }

    pub fn columns(&self) -> &RectMatrix {
        &self.columns
    }

    /// `V u`.
    pub fn embed(&self, u: &CVector) -> CVector {
        &self.columns * u
    }

    /// `V† x`.
    pub fn pull_back(&self, x: &CVector) -> CVector {
        self.columns.ad_mul(x)
    }

    /// Basis of the conjugate subspace.
    pub fn conj(&self) -> Self {
        Self {
            columns: self.columns.map(|z| z.conj()),
        }
    }
}
