use thiserror::Error;

/// Errors shared by all certification paths.
#[derive(Debug, Error)]
pub enum Error {
    /// Input failed Hermiticity validation beyond the stated tolerance.
    #[error("matrix is not Hermitian: max asymmetry {max_asymmetry:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { max_asymmetry: f64, tol: f64 },

    /// The dense eigensolver did not converge.
    #[error("eigensolver failed to converge on a {dim}x{dim} matrix with operator norm ~{norm:.3e}")]
    Eigensolver { dim: usize, norm: f64 },

    /// An operation that requires an invertible matrix was given a singular one.
    #[error("matrix is singular ({mu_zero} zero eigenvalue(s) at the working tolerance)")]
    SingularInput { mu_zero: usize },

    /// A positive semidefinite argument was required.
    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:.3e}")]
    NotPsd { min_eigenvalue: f64 },

    /// Witness construction was asked for a non-orthogonal pair.
    #[error("pair is not Birkhoff-James orthogonal (alpha = {alpha:.3e}, beta = {beta:.3e})")]
    NotOrthogonal { alpha: f64, beta: f64 },

    /// The perturbation direction is (numerically) zero.
    #[error("degenerate direction: B is zero at the working tolerance")]
    DegenerateDirection,

    /// An argument was required to be an orthogonal projection.
    #[error("matrix is not an orthogonal projection: idempotence defect {defect:.3e}")]
    NotProjection { defect: f64 },

    /// A density matrix failed its PSD / unit-trace validation.
    #[error("not a density matrix: {reason}")]
    NotDensity { reason: String },

    /// Parameters outside the mathematical domain of a formula.
    #[error("domain error: {0}")]
    Domain(String),

    /// A subsystem permutation was malformed.
    #[error("bad permutation: {0}")]
    BadPermutation(String),

    /// A construction would exceed the configured work budget.
    #[error("work budget exceeded: requires {required}, budget {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    /// Matrix/vector dimensions do not match.
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
