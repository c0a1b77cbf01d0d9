//! Validated Hermitian matrices, spectral splitting into signed
//! eigenprojections, norms, inertia, and the comparison-matrix test.
//!
//! The spectral split of a Hermitian `H` is the triple of orthogonal
//! projections `P+`, `P0`, `P-` onto the spans of eigenvectors with
//! positive, zero, and negative eigenvalues (classified against an
//! explicit `zero_tol`). All certification criteria in this crate are
//! functions of those three projectors, never of an individual
//! eigenvector basis, so degenerate eigenspaces are handled uniformly.

use nalgebra::SymmetricEigen;

use crate::error::{Error, Result};
use crate::{CMatrix, CVector, C64};

/// Iteration cap for the dense eigensolver. Generous: the QL sweeps for
/// the sizes this crate targets (n <= 1024) converge in far fewer.
const MAX_EIG_ITERS: usize = 100_000;

/// A dense n x n complex matrix validated to be Hermitian.
///
/// Construction symmetrizes `(A + A*)/2` when the asymmetry is below the
/// Hermiticity tolerance and rejects the input otherwise, so downstream
/// code never sees round-off-skewed matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    mat: CMatrix,
}

impl HermitianMatrix {
    /// Validates with the default tolerance `1e-9 * max(1, max |entry|)`.
    pub fn new(mat: CMatrix) -> Result<Self> {
        let max_abs = mat.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        Self::with_tolerance(mat, 1e-9 * max_abs.max(1.0))
    }

    /// Validates Hermiticity against an explicit absolute tolerance on
    /// `max_{i,j} |A_ij - conj(A_ji)|`, then symmetrizes.
    pub fn with_tolerance(mat: CMatrix, hermiticity_tol: f64) -> Result<Self> {
        let (r, c) = mat.shape();
        if r != c || r == 0 {
            return Err(Error::DimensionMismatch {
                expected: r.max(1),
                actual: c,
            });
        }
        let mut max_asymmetry = 0.0f64;
        for i in 0..r {
            for j in i..r {
                let d = (mat[(i, j)] - mat[(j, i)].conj()).norm();
                max_asymmetry = max_asymmetry.max(d);
            }
        }
        if max_asymmetry > hermiticity_tol {
            return Err(Error::NotHermitian {
                max_asymmetry,
                tol: hermiticity_tol,
            });
        }
        let sym = (&mat + mat.adjoint()).scale(0.5);
        Ok(Self { mat: sym })
    }

    /// Wraps a matrix that is Hermitian by construction (projectors,
    /// witness combinations). Symmetrizes without a tolerance gate.
    pub(crate) fn from_hermitian_unchecked(mat: CMatrix) -> Self {
        let sym = (&mat + mat.adjoint()).scale(0.5);
        Self { mat: sym }
    }

    /// Builds from real entries given in row-major order.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: row.len(),
                });
            }
        }
        let mat = CMatrix::from_fn(n, n, |i, j| C64::new(rows[i][j], 0.0));
        Self::new(mat)
    }

    /// Real diagonal matrix.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self {
            mat: CMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    C64::new(diag[i], 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }),
        }
    }

    /// The standard-basis rank-1 projector `e_j e_j*`.
    pub fn basis_projector(n: usize, j: usize) -> Self {
        let mut mat = CMatrix::zeros(n, n);
        mat[(j, j)] = C64::new(1.0, 0.0);
        Self { mat }
    }

    /// The rank-1 Hermitian `v v*` (not normalized).
    pub fn outer(v: &CVector) -> Self {
        Self {
            mat: v * v.adjoint(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            mat: CMatrix::identity(n, n),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            mat: CMatrix::zeros(n, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    /// Real trace (the trace of a Hermitian matrix is real).
    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.mat[(i, i)].re).sum()
    }

    /// Real diagonal entries.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.mat[(i, i)].re).collect()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.mat.iter().map(|z| z.norm()).fold(0.0f64, f64::max)
    }

    /// Frobenius norm.
    pub fn norm_fro(&self) -> f64 {
        self.mat.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            mat: &self.mat + &other.mat,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            mat: &self.mat - &other.mat,
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            mat: self.mat.scale(s),
        }
    }

    /// `self + diag(d)`.
    pub fn add_diagonal(&self, d: &[f64]) -> Result<Self> {
        if d.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: d.len(),
            });
        }
        let mut mat = self.mat.clone();
        for (i, &di) in d.iter().enumerate() {
            mat[(i, i)] += C64::new(di, 0.0);
        }
        Ok(Self { mat })
    }

    /// `Tr(self * other)`, real for a Hermitian pair.
    pub fn trace_product(&self, other: &Self) -> f64 {
        trace_product(&self.mat, &other.mat)
    }
}

/// `Tr(A B)` for Hermitian `A`, `B`: sum_ij A_ij conj(B_ij), real up to
/// round-off.
pub(crate) fn trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x * y.conj()).re)
        .sum()
}

/// Eigendecomposition of a Hermitian matrix with eigenvalues sorted
/// non-increasing and eigenvectors as the matching columns.
pub(crate) fn eig_sorted(mat: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let n = mat.nrows();
    if n == 1 {
        // The 1x1 tridiagonalization is a no-op; skip the solver.
        return Ok((vec![mat[(0, 0)].re], CMatrix::identity(1, 1)));
    }
    let fro = mat.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let eig = SymmetricEigen::try_new(mat.clone(), f64::EPSILON, MAX_EIG_ITERS).ok_or(
        Error::Eigensolver { dim: n, norm: fro },
    )?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok((values, vectors))
}

/// Full eigendecomposition with eigenvalues sorted non-increasing;
/// column `j` of the returned matrix is the eigenvector for value `j`.
pub fn eigendecompose(a: &HermitianMatrix) -> Result<(Vec<f64>, CMatrix)> {
    eig_sorted(a.matrix())
}

/// Eigenvalues only, sorted non-increasing.
pub(crate) fn eigvals_sorted(mat: &CMatrix) -> Result<Vec<f64>> {
    let n = mat.nrows();
    if n == 1 {
        return Ok(vec![mat[(0, 0)].re]);
    }
    // `symmetric_eigenvalues` panics on non-convergence inside nalgebra,
    // so route through the same fallible decomposition.
    let fro = mat.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let eig = SymmetricEigen::try_new(mat.clone(), f64::EPSILON, MAX_EIG_ITERS).ok_or(
        Error::Eigensolver { dim: n, norm: fro },
    )?;
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(values)
}

/// The signed eigenprojections of a Hermitian matrix.
///
/// Eigenvalues with `|lambda| <= zero_tol` contribute to `p_zero`; the
/// rest to `p_plus` or `p_minus` by sign. The three projectors are built
/// by summing eigenvector outer products over each class, so the basis
/// chosen inside a degenerate eigenspace never affects them.
#[derive(Debug, Clone)]
pub struct SpectralSplit {
    eigenvalues: Vec<f64>,
    p_plus: CMatrix,
    p_zero: CMatrix,
    p_minus: CMatrix,
    zero_tol: f64,
    mu_plus: usize,
    mu_zero: usize,
    mu_minus: usize,
}

impl SpectralSplit {
    /// Eigenvalues sorted non-increasing.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn p_plus(&self) -> &CMatrix {
        &self.p_plus
    }

    pub fn p_zero(&self) -> &CMatrix {
        &self.p_zero
    }

    pub fn p_minus(&self) -> &CMatrix {
        &self.p_minus
    }

    pub fn zero_tol(&self) -> f64 {
        self.zero_tol
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn mu_plus(&self) -> usize {
        self.mu_plus
    }

    pub fn mu_zero(&self) -> usize {
        self.mu_zero
    }

    pub fn mu_minus(&self) -> usize {
        self.mu_minus
    }

    /// `P+ - P-`, the Hermitian part of the polar unitary.
    pub fn signature_matrix(&self) -> CMatrix {
        &self.p_plus - &self.p_minus
    }

    /// Sum of positive eigenvalues minus sum of negative ones.
    pub fn trace_norm(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l.abs()).sum()
    }

    pub fn operator_norm(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l.abs()).fold(0.0, f64::max)
    }

    /// Verifies the structural invariants (projector idempotence,
    /// orthogonality, resolution of the identity) at `numeric_tol`.
    pub fn validate(&self, numeric_tol: f64) -> Result<()> {
        let n = self.dim();
        let id = CMatrix::identity(n, n);
        let parts = [&self.p_plus, &self.p_zero, &self.p_minus];
        for p in parts {
            let idem = (p * p - p).iter().map(|z| z.norm()).fold(0.0f64, f64::max);
            let herm = (p - p.adjoint()).iter().map(|z| z.norm()).fold(0.0f64, f64::max);
            if idem > numeric_tol || herm > numeric_tol {
                return Err(Error::NotProjection {
                    defect: idem.max(herm),
                });
            }
        }
        for (i, a) in parts.iter().enumerate() {
            for b in parts.iter().skip(i + 1) {
                let cross = (*a * *b).iter().map(|z| z.norm()).fold(0.0f64, f64::max);
                if cross > numeric_tol {
                    return Err(Error::NotProjection { defect: cross });
                }
            }
        }
        let resolution = (&self.p_plus + &self.p_zero + &self.p_minus - id)
            .iter()
            .map(|z| z.norm())
            .fold(0.0f64, f64::max);
        if resolution > numeric_tol {
            return Err(Error::NotProjection { defect: resolution });
        }
        Ok(())
    }
}

/// Scale-invariant default for eigenvalue zero classification:
/// `n * machine_epsilon * operator_norm`.
pub fn default_zero_tol(n: usize, operator_norm: f64) -> f64 {
    n as f64 * f64::EPSILON * operator_norm
}

/// Default tolerance for projector/witness invariant checks:
/// `1e-9 * max(1, operator_norm)`.
pub fn default_numeric_tol(operator_norm: f64) -> f64 {
    1e-9 * operator_norm.max(1.0)
}

/// Splits `H` into eigenvalues and the three signed eigenprojections.
///
/// `zero_tol = None` uses [`default_zero_tol`] evaluated at the computed
/// spectrum.
pub fn spectral_split(h: &HermitianMatrix, zero_tol: Option<f64>) -> Result<SpectralSplit> {
    let n = h.dim();
    let (values, vectors) = eig_sorted(h.matrix())?;
    let opnorm = values.iter().map(|l| l.abs()).fold(0.0, f64::max);
    let zero_tol = match zero_tol {
        Some(t) => {
            if t < 0.0 {
                return Err(Error::Domain(format!("zero_tol must be >= 0, got {t}")));
            }
            t
        }
        None => default_zero_tol(n, opnorm),
    };

    let one = C64::new(1.0, 0.0);
    let mut p_plus = CMatrix::zeros(n, n);
    let mut p_zero = CMatrix::zeros(n, n);
    let mut p_minus = CMatrix::zeros(n, n);
    let (mut mu_plus, mut mu_zero, mut mu_minus) = (0usize, 0usize, 0usize);
    for (idx, &lambda) in values.iter().enumerate() {
        let v = vectors.column(idx);
        let target = if lambda.abs() <= zero_tol {
            mu_zero += 1;
            &mut p_zero
        } else if lambda > 0.0 {
            mu_plus += 1;
            &mut p_plus
        } else {
            mu_minus += 1;
            &mut p_minus
        };
        target.gerc(one, &v, &v, one);
    }

    Ok(SpectralSplit {
        eigenvalues: values,
        p_plus,
        p_zero,
        p_minus,
        zero_tol,
        mu_plus,
        mu_zero,
        mu_minus,
    })
}

/// Trace norm: sum of absolute eigenvalues.
pub fn trace_norm(a: &HermitianMatrix) -> Result<f64> {
    Ok(eigvals_sorted(a.matrix())?.iter().map(|l| l.abs()).sum())
}

/// Operator norm: max absolute eigenvalue.
pub fn operator_norm(a: &HermitianMatrix) -> Result<f64> {
    Ok(eigvals_sorted(a.matrix())?
        .iter()
        .map(|l| l.abs())
        .fold(0.0, f64::max))
}

/// Eigenvalue sign counts `(mu_plus, mu_zero, mu_minus)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inertia {
    pub mu_plus: usize,
    pub mu_zero: usize,
    pub mu_minus: usize,
}

pub fn inertia(split: &SpectralSplit) -> Inertia {
    Inertia {
        mu_plus: split.mu_plus(),
        mu_zero: split.mu_zero(),
        mu_minus: split.mu_minus(),
    }
}

/// Comparison matrix: keeps `|A_ii|` on the diagonal and negates
/// `|A_ij|` off it. Always real symmetric.
pub fn comparison_matrix(a: &HermitianMatrix) -> HermitianMatrix {
    let n = a.dim();
    let m = a.matrix();
    let mat = CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(m[(i, i)].norm(), 0.0)
        } else {
            C64::new(-m[(i, j)].norm(), 0.0)
        }
    });
    HermitianMatrix::from_hermitian_unchecked(mat)
}

/// True iff the comparison matrix of `A` is PSD within `tol` (min
/// eigenvalue >= -tol).
pub fn is_h_matrix(a: &HermitianMatrix, tol: f64) -> Result<bool> {
    let values = eigvals_sorted(comparison_matrix(a).matrix())?;
    Ok(*values.last().expect("n >= 1") >= -tol)
}

/// The Hermitian unitary `P+ - P-` from the unique polar decomposition
/// of an invertible Hermitian matrix.
pub fn hermitian_polar_unitary(split: &SpectralSplit) -> Result<HermitianMatrix> {
    if split.mu_zero() > 0 {
        return Err(Error::SingularInput {
            mu_zero: split.mu_zero(),
        });
    }
    Ok(HermitianMatrix::from_hermitian_unchecked(
        split.signature_matrix(),
    ))
}

/// Reassembles `H` from the split: eigenvalue-weighted restriction to
/// each projector range. Used by invariant tests.
pub fn reconstruct(split: &SpectralSplit, h: &HermitianMatrix) -> CMatrix {
    // H = P+ H P+  +  P0 H P0  +  P- H P-  when the split is exact.
    let m = h.matrix();
    split.p_plus() * m * split.p_plus()
        + split.p_zero() * m * split.p_zero()
        + split.p_minus() * m * split.p_minus()
}
