//! Resource-theory layer for coherence and k-coherence: maximality of
//! the modified trace distance, the principal-submatrix norm, rank
//! bounds, distance to the diagonal PSD cone, and factor-width-2
//! testing.
//!
//! A state has modified trace distance 1 from the incoherent cone
//! exactly when every diagonal entry of its range projection is at most
//! 1/2; for k-coherence the diagonal entries become operator norms of
//! k x k principal submatrices. Both criteria are exact, so the
//! submatrix norm is computed by exhaustive enumeration and refuses
//! (rather than approximates) past its work budget.

use crate::diagmin::{minimize_diag_shift, DiagConstraint, DiagMinConfig, DiagMinResult};
use crate::error::{Error, Result};
use crate::hermitian::{eigvals_sorted, spectral_split, HermitianMatrix};
use crate::CMatrix;

/// A quantum state: PSD within tolerance, unit trace within `1e-9`.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    rho: HermitianMatrix,
}

impl DensityMatrix {
    /// Validates with PSD tolerance `1e-9 * max(1, ||rho||)`.
    pub fn new(rho: HermitianMatrix) -> Result<Self> {
        let trace = rho.trace();
        if (trace - 1.0).abs() > 1e-9 {
            return Err(Error::NotDensity {
                reason: format!("trace {trace} is not 1"),
            });
        }
        let eigs = eigvals_sorted(rho.matrix())?;
        let opnorm = eigs.iter().map(|l| l.abs()).fold(0.0, f64::max);
        let min_eig = *eigs.last().expect("n >= 1");
        if min_eig < -1e-9 * opnorm.max(1.0) {
            return Err(Error::NotDensity {
                reason: format!("min eigenvalue {min_eig:.3e} is negative"),
            });
        }
        Ok(Self { rho })
    }

    /// Pure state `|v><v| / <v|v>`.
    pub fn from_pure(v: &crate::CVector) -> Result<Self> {
        let norm_sq = v.norm_squared();
        if norm_sq == 0.0 {
            return Err(Error::NotDensity {
                reason: "zero vector".into(),
            });
        }
        let mat = (v * v.adjoint()).scale(1.0 / norm_sq);
        Self::new(HermitianMatrix::from_hermitian_unchecked(mat))
    }

    pub fn rho(&self) -> &HermitianMatrix {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    /// Orthogonal projection onto range(rho): the positive eigenspace
    /// projector under the shared `zero_tol` policy.
    pub fn range_projection(&self, zero_tol: Option<f64>) -> Result<HermitianMatrix> {
        let split = spectral_split(&self.rho, zero_tol)?;
        Ok(HermitianMatrix::from_hermitian_unchecked(
            split.p_plus().clone(),
        ))
    }

    /// rank(rho) under the `zero_tol` policy.
    pub fn rank(&self, zero_tol: Option<f64>) -> Result<usize> {
        let split = spectral_split(&self.rho, zero_tol)?;
        Ok(split.mu_plus())
    }
}

/// The closed convex cone a resource verdict refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeSpec {
    /// Nonnegative diagonal matrices (incoherent states).
    DiagonalPsd,
    /// Gram matrices of vectors with at most k nonzero entries.
    KCoherent { k: usize },
    /// Schmidt number at most k across an m x n cut.
    KEntangled { k: usize, m: usize, n: usize },
    /// Every PSD matrix.
    FullPsd,
}

impl ConeSpec {
    /// Checks the cone parameters against an ambient dimension.
    pub fn validate(&self, dim: usize) -> Result<()> {
        match *self {
            ConeSpec::DiagonalPsd | ConeSpec::FullPsd => Ok(()),
            ConeSpec::KCoherent { k } => {
                if k == 0 || k > dim {
                    return Err(Error::Domain(format!("k = {k} outside 1..={dim}")));
                }
                Ok(())
            }
            ConeSpec::KEntangled { k, m, n } => {
                if m * n != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        actual: m * n,
                    });
                }
                if k == 0 || k > m.min(n) {
                    return Err(Error::Domain(format!(
                        "k = {k} outside 1..={}",
                        m.min(n)
                    )));
                }
                Ok(())
            }
        }
    }
}

/// True iff the modified trace distance of coherence is maximal
/// (`D_coh = 1`): every diagonal entry of the range projection is at
/// most `1/2 + tol`.
pub fn is_max_coherent(rho: &DensityMatrix, tol: Option<f64>) -> Result<bool> {
    let tol = tol.unwrap_or(1e-9);
    let p = rho.range_projection(None)?;
    Ok(p.diagonal().iter().all(|&d| d <= 0.5 + tol))
}

/// Default work budget for the principal-submatrix enumeration:
/// `C(n,k) * k^3` elementary steps.
pub const DEFAULT_PNORM_BUDGET: u128 = 200_000_000;

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    let mut out: u128 = 1;
    for i in 0..k {
        out = out * (n - i) as u128 / (i + 1) as u128;
    }
    out
}

/// Maximal operator norm over all k x k principal submatrices of a
/// projection, by exhaustive enumeration (ties resolve to the
/// lexicographically first index set scanned).
pub fn pnorm_k(p: &HermitianMatrix, k: usize) -> Result<f64> {
    pnorm_k_budgeted(p, k, DEFAULT_PNORM_BUDGET)
}

/// As [`pnorm_k`] with an explicit work budget; refuses rather than
/// approximates when `C(n,k) * k^3` exceeds it.
pub fn pnorm_k_budgeted(p: &HermitianMatrix, k: usize, budget: u128) -> Result<f64> {
    let n = p.dim();
    if k == 0 || k > n {
        return Err(Error::Domain(format!("k = {k} outside 1..={n}")));
    }
    let idem = (p.matrix() * p.matrix() - p.matrix()).norm();
    if idem > 1e-9 * (n as f64).sqrt().max(1.0) {
        return Err(Error::NotProjection { defect: idem });
    }
    let required = binomial(n, k) * (k as u128).pow(3);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }

    if k == 1 {
        return Ok(p.diagonal().iter().fold(0.0f64, |acc, &d| acc.max(d)));
    }

    let mat = p.matrix();
    let mut best = 0.0f64;
    let mut indices: Vec<usize> = (0..k).collect();
    loop {
        let sub = CMatrix::from_fn(k, k, |a, b| mat[(indices[a], indices[b])]);
        let norm = eigvals_sorted(&sub)?
            .iter()
            .map(|l| l.abs())
            .fold(0.0, f64::max);
        if norm > best {
            best = norm;
        }
        // next lexicographic combination
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(best);
            }
            i -= 1;
            if indices[i] != i + n - k {
                break;
            }
        }
        indices[i] += 1;
        for j in i + 1..k {
            indices[j] = indices[j - 1] + 1;
        }
    }
}

/// True iff the modified trace distance of k-coherence is maximal:
/// every k x k principal submatrix of the range projection has operator
/// norm at most `1/2 + tol`.
pub fn is_max_k_coherent(rho: &DensityMatrix, k: usize, tol: Option<f64>) -> Result<bool> {
    let tol = tol.unwrap_or(1e-9);
    let p = rho.range_projection(None)?;
    Ok(pnorm_k(&p, k)? <= 0.5 + tol)
}

/// Rank bound for maximally k-coherent states:
/// `floor(n(n + 1 - 2k) / (2(n - k)))`, clamped at zero (zero means no
/// such state exists).
pub fn coherence_rank_bound(n: usize, k: usize) -> Result<usize> {
    if k == 0 || k >= n {
        return Err(Error::Domain(format!(
            "rank bound needs 1 <= k < n, got k = {k}, n = {n}"
        )));
    }
    let numerator = n as f64 * (n as f64 + 1.0 - 2.0 * k as f64);
    let bound = numerator / (2.0 * (n - k) as f64);
    Ok(bound.max(0.0).floor() as usize)
}

/// Modified trace distance from `rho` to the diagonal PSD cone:
/// `min { ||rho - X||_tr : X diagonal, X >= 0 }` by projected descent.
pub fn distance_to_diag_cone(rho: &DensityMatrix, cfg: &DiagMinConfig) -> Result<DiagMinResult> {
    // X = -diag(d) with d <= 0 componentwise.
    let mut result = minimize_diag_shift(rho.rho(), DiagConstraint::Nonpositive, cfg)?;
    for x in result.d_star.iter_mut() {
        *x = -*x;
    }
    Ok(result)
}

/// 2-coherence is exactly the H-matrix property of the state.
pub fn is_two_coherent(rho: &DensityMatrix, tol: Option<f64>) -> Result<bool> {
    let tol = tol.unwrap_or(1e-9);
    crate::hermitian::is_h_matrix(rho.rho(), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::{CVector, C64};
    use approx::assert_abs_diff_eq;

    fn uniform_pure(n: usize) -> DensityMatrix {
        let v = CVector::from_element(n, C64::new(1.0 / (n as f64).sqrt(), 0.0));
        DensityMatrix::from_pure(&v).unwrap()
    }

    #[test]
    fn density_validation() {
        assert!(DensityMatrix::new(HermitianMatrix::identity(2)).is_err());
        assert!(DensityMatrix::new(HermitianMatrix::from_diagonal(&[1.5, -0.5])).is_err());
        assert!(DensityMatrix::new(HermitianMatrix::from_diagonal(&[0.5, 0.5])).is_ok());
    }

    #[test]
    fn max_coherent_examples() {
        assert!(is_max_coherent(&uniform_pure(2), None).unwrap());
        let maximally_mixed =
            DensityMatrix::new(HermitianMatrix::identity(3).scale(1.0 / 3.0)).unwrap();
        assert!(!is_max_coherent(&maximally_mixed, None).unwrap());
        let p = fixtures::example_410_projector();
        let rho = DensityMatrix::new(p.scale(0.5)).unwrap();
        assert!(is_max_coherent(&rho, None).unwrap());
    }

    #[test]
    fn pnorm_examples() {
        let id = HermitianMatrix::identity(4);
        for k in 1..=4 {
            assert_abs_diff_eq!(pnorm_k(&id, k).unwrap(), 1.0, epsilon = 1e-12);
        }
        let p = fixtures::example_410_projector();
        assert_abs_diff_eq!(pnorm_k(&p, 1).unwrap(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(pnorm_k(&p, 5).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn pnorm_rejects_non_projection() {
        let h = fixtures::example_42_h();
        assert!(matches!(
            pnorm_k(&h, 2),
            Err(Error::NotProjection { .. })
        ));
    }

    #[test]
    fn pnorm_budget_refusal() {
        let id = HermitianMatrix::identity(30);
        assert!(matches!(
            pnorm_k_budgeted(&id, 15, 1_000),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn k_coherent_uniform_four() {
        let rho = uniform_pure(4);
        // 2x2 principal submatrices of the range projection have norm
        // exactly 1/2; 3x3 reach 3/4.
        assert!(is_max_k_coherent(&rho, 2, Some(1e-9)).unwrap());
        assert!(!is_max_k_coherent(&rho, 3, None).unwrap());
        assert!(!is_max_k_coherent(&rho, 4, None).unwrap());
        assert_eq!(
            is_max_k_coherent(&rho, 1, None).unwrap(),
            is_max_coherent(&rho, None).unwrap()
        );
    }

    #[test]
    fn rank_bound_examples() {
        assert_eq!(coherence_rank_bound(4, 1).unwrap(), 2);
        assert_eq!(coherence_rank_bound(4, 2).unwrap(), 1);
        assert_eq!(coherence_rank_bound(5, 3).unwrap(), 0);
        assert!(coherence_rank_bound(4, 4).is_err());
    }

    #[test]
    fn distance_examples() {
        let diag = DensityMatrix::new(HermitianMatrix::from_diagonal(&[0.25, 0.75])).unwrap();
        let result = distance_to_diag_cone(&diag, &DiagMinConfig::default()).unwrap();
        assert_abs_diff_eq!(result.value, 0.0, epsilon = 1e-9);

        let result = distance_to_diag_cone(&uniform_pure(2), &DiagMinConfig::default()).unwrap();
        assert_abs_diff_eq!(result.value, 1.0, epsilon = 1e-4);

        let mixed = DensityMatrix::new(HermitianMatrix::identity(4).scale(0.25)).unwrap();
        let result = distance_to_diag_cone(&mixed, &DiagMinConfig::default()).unwrap();
        assert_abs_diff_eq!(result.value, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn two_coherence_examples() {
        let diag = DensityMatrix::new(HermitianMatrix::from_diagonal(&[0.3, 0.7])).unwrap();
        assert!(is_two_coherent(&diag, None).unwrap());
        assert!(is_two_coherent(&uniform_pure(2), None).unwrap());
        assert!(!is_two_coherent(&uniform_pure(3), None).unwrap());
    }

    #[test]
    fn cone_spec_validation() {
        assert!(ConeSpec::KCoherent { k: 3 }.validate(2).is_err());
        assert!(ConeSpec::KEntangled { k: 1, m: 2, n: 3 }.validate(6).is_ok());
        assert!(ConeSpec::KEntangled { k: 3, m: 2, n: 3 }.validate(6).is_err());
        assert!(ConeSpec::KEntangled { k: 1, m: 2, n: 2 }.validate(6).is_err());
    }
}
