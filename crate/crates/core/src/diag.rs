//! Orthogonality to diagonal matrices: the PSD-diagonal criterion, the
//! decision cascade for *all* diagonal matrices, the zero-diagonal
//! witness feasibility solver, and the diagonal minimization oracle.
//!
//! The exact rules are (in firing order): failure of the PSD-diagonal
//! filter refutes; `n = 2` decides; invertible `H` decides; semidefinite
//! `H` with `n <= 4`, with rank in `{1, n/2, n}`, or with a
//! constant-diagonal range projection decides. Past the exact rules the
//! cascade tries zero-diagonal witness feasibility (Dykstra alternating
//! projections, one-sided: divergence is inconclusive) and finally the
//! convex oracle `min_d ||H + diag(d)||_tr`.

use num_complex::Complex64 as C64;

use crate::diagmin::{minimize_diag_shift, DiagConstraint, DiagMinConfig, DiagMinResult};
use crate::error::Result;
use crate::hermitian::{eig_sorted, spectral_split, HermitianMatrix, SpectralSplit};
use crate::CMatrix;

/// How certain a cascade verdict is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certainty {
    /// An exact rule proves orthogonality to every diagonal matrix.
    ProvenYes,
    /// An exact rule refutes it.
    ProvenNo,
    /// A verified numerical witness supports it (not a proof).
    NumericalYes,
    /// The numerical oracle found a strictly smaller trace norm.
    NumericalNo,
}

/// Which cascade stage produced the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleFired {
    /// The necessary PSD-diagonal filter failed (refutation).
    PsdDiagFilter,
    TwoByTwo,
    Invertible,
    PsdSmallDim,
    PsdRankCase,
    ConstantDiagonalRange,
    Feasibility,
    Oracle,
}

/// Verdict of [`check_all_diag`].
#[derive(Debug, Clone)]
pub struct DiagVerdict {
    /// Result of the necessary filter (orthogonality to every PSD
    /// diagonal matrix).
    pub psd_diag_orthogonal: bool,
    pub all_diag_orthogonal: Certainty,
    pub rule_fired: RuleFired,
    /// Zero-diagonal witness matrix, when one was constructed.
    pub witness: Option<HermitianMatrix>,
    /// A diagonal shift with `||H + diag(d)||_tr < ||H||_tr`, when the
    /// verdict is a refutation and the oracle located one.
    pub refuting_diagonal: Option<Vec<f64>>,
}

/// Cascade configuration; every tolerance is explicit.
#[derive(Debug, Clone)]
pub struct CascadeConfig {
    /// Slack for the diagonal-entry comparisons against 1/2.
    pub diag_tol: f64,
    /// Override for the eigenvalue zero classification.
    pub zero_tol: Option<f64>,
    /// Max diagonal residual accepted by the feasibility solver.
    pub feas_tol: f64,
    pub feas_max_iter: usize,
    /// Oracle slack: values within this of `||H||_tr` count as equal.
    pub oracle_tol: f64,
    pub oracle: DiagMinConfig,
}

impl Default for CascadeConfig {
    fn default() -> Self {
        Self {
            diag_tol: 1e-9,
            zero_tol: None,
            feas_tol: 1e-9,
            feas_max_iter: 4000,
            oracle_tol: 1e-6,
            oracle: DiagMinConfig::default(),
        }
    }
}

/// True iff every diagonal entry of `P+` and `P-` is at most
/// `1/2 + tol`: orthogonality to every PSD diagonal matrix.
pub fn check_psd_diag(h: &HermitianMatrix, tol: Option<f64>) -> Result<bool> {
    let split = spectral_split(h, None)?;
    Ok(check_psd_diag_split(&split, tol))
}

/// As [`check_psd_diag`] but reusing a precomputed split.
pub fn check_psd_diag_split(split: &SpectralSplit, tol: Option<f64>) -> bool {
    let tol = tol.unwrap_or(1e-9);
    let n = split.dim();
    (0..n).all(|j| {
        split.p_plus()[(j, j)].re <= 0.5 + tol && split.p_minus()[(j, j)].re <= 0.5 + tol
    })
}

/// Minimizes `d -> ||H + diag(d)||_tr` over all real diagonals.
///
/// The value is an exact evaluation at `d_star`, so it never exceeds
/// `||H||_tr`; `converged = false` flags a best iterate that the final
/// smoothing stages were still improving.
pub fn min_over_diagonal(h: &HermitianMatrix, cfg: &DiagMinConfig) -> Result<DiagMinResult> {
    minimize_diag_shift(h, DiagConstraint::Free, cfg)
}

/// Searches for `M = P+ - P- + P0 X P0` with `-I <= X <= I` and zero
/// main diagonal via Dykstra alternating projections between the order
/// interval and the zero-diagonal subspace.
///
/// Returns the witness when the iterate meets both constraints within
/// `tol`; `None` after `max_iter` sweeps is inconclusive, not a
/// refutation.
pub fn feasibility_zero_diag(
    split: &SpectralSplit,
    tol: f64,
    max_iter: usize,
) -> Result<Option<HermitianMatrix>> {
    let n = split.dim();
    let signature = split.signature_matrix();
    let lower = signature.clone() - split.p_zero(); // 2P+ - I
    let upper = signature.clone() + split.p_zero(); // I - 2P-

    // Frobenius projection onto the order interval: compress the offset
    // from P+ - P- onto the kernel and clip its eigenvalues to [-1, 1].
    let project_interval = |m: &CMatrix| -> Result<CMatrix> {
        let delta = split.p_zero() * (m - &signature) * split.p_zero();
        let (values, vectors) = eig_sorted(&delta)?;
        let mut clipped = CMatrix::zeros(n, n);
        let one = C64::new(1.0, 0.0);
        for (idx, &v) in values.iter().enumerate() {
            let c = v.clamp(-1.0, 1.0);
            if c != 0.0 {
                let col = vectors.column(idx);
                clipped.gerc(C64::new(c, 0.0), &col, &col, one);
            }
        }
        Ok(&signature + clipped)
    };
    let project_zero_diag = |m: &CMatrix| -> CMatrix {
        let mut out = m.clone();
        for i in 0..n {
            out[(i, i)] = C64::new(0.0, 0.0);
        }
        out
    };

    let mut x = signature.clone();
    let mut p = CMatrix::zeros(n, n);
    let mut q = CMatrix::zeros(n, n);
    for _ in 0..max_iter {
        let y = project_interval(&(&x + &p))?;
        p = &x + &p - &y;
        let x_next = project_zero_diag(&(&y + &q));
        q = &y + &q - &x_next;
        x = x_next;

        // x has an exactly zero diagonal; accept once it sits inside the
        // order interval within tol.
        let lower_gap = &x - &lower;
        let upper_gap = &upper - &x;
        let min_lower = crate::hermitian::eigvals_sorted(&lower_gap)?
            .last()
            .copied()
            .unwrap_or(0.0);
        let min_upper = crate::hermitian::eigvals_sorted(&upper_gap)?
            .last()
            .copied()
            .unwrap_or(0.0);
        if min_lower >= -tol && min_upper >= -tol {
            return Ok(Some(HermitianMatrix::from_hermitian_unchecked(x)));
        }
    }
    Ok(None)
}

/// Decision cascade for orthogonality to every diagonal matrix.
pub fn check_all_diag(h: &HermitianMatrix, cfg: &CascadeConfig) -> Result<DiagVerdict> {
    let split = spectral_split(h, cfg.zero_tol)?;
    let psd_diag_orthogonal = check_psd_diag_split(&split, Some(cfg.diag_tol));

    // Necessary filter: a PSD-diagonal violation refutes exactly.
    if !psd_diag_orthogonal {
        let refuting = refute_via_basis_direction(h, &split, cfg)?;
        return Ok(DiagVerdict {
            psd_diag_orthogonal,
            all_diag_orthogonal: Certainty::ProvenNo,
            rule_fired: RuleFired::PsdDiagFilter,
            witness: None,
            refuting_diagonal: refuting,
        });
    }

    let n = split.dim();
    let proven_yes = |rule: RuleFired, witness: Option<HermitianMatrix>| DiagVerdict {
        psd_diag_orthogonal,
        all_diag_orthogonal: Certainty::ProvenYes,
        rule_fired: rule,
        witness,
        refuting_diagonal: None,
    };

    if n == 2 {
        let witness = two_by_two_witness(&split, cfg.diag_tol)?;
        return Ok(proven_yes(RuleFired::TwoByTwo, witness));
    }

    if split.mu_zero() == 0 {
        // Invertible + filter passed forces all projector diagonals to
        // 1/2, so P+ - P- is a zero-diagonal Hermitian unitary witness.
        let witness = HermitianMatrix::from_hermitian_unchecked(split.signature_matrix());
        return Ok(proven_yes(RuleFired::Invertible, Some(witness)));
    }

    let semidefinite_sign = if split.mu_minus() == 0 {
        Some(1.0)
    } else if split.mu_plus() == 0 {
        Some(-1.0)
    } else {
        None
    };
    if let Some(sign) = semidefinite_sign {
        let rank = split.mu_plus() + split.mu_minus();
        if n <= 4 {
            let witness = semidefinite_witness(&split, sign, cfg.diag_tol)?;
            return Ok(proven_yes(RuleFired::PsdSmallDim, witness));
        }
        if rank == 1 || 2 * rank == n {
            let witness = semidefinite_witness(&split, sign, cfg.diag_tol)?;
            return Ok(proven_yes(RuleFired::PsdRankCase, witness));
        }
        let range_diag = range_projection_diagonal(&split);
        let spread = range_diag
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
                (lo.min(x), hi.max(x))
            });
        if spread.1 - spread.0 <= 2.0 * cfg.diag_tol {
            let witness = semidefinite_witness(&split, sign, cfg.diag_tol)?;
            return Ok(proven_yes(RuleFired::ConstantDiagonalRange, witness));
        }
    }

    if let Some(witness) = feasibility_zero_diag(&split, cfg.feas_tol, cfg.feas_max_iter)? {
        return Ok(DiagVerdict {
            psd_diag_orthogonal,
            all_diag_orthogonal: Certainty::NumericalYes,
            rule_fired: RuleFired::Feasibility,
            witness: Some(witness),
            refuting_diagonal: None,
        });
    }

    let h_trace_norm = split.trace_norm();
    let oracle = min_over_diagonal(h, &cfg.oracle)?;
    if oracle.value >= h_trace_norm - cfg.oracle_tol {
        Ok(DiagVerdict {
            psd_diag_orthogonal,
            all_diag_orthogonal: Certainty::NumericalYes,
            rule_fired: RuleFired::Oracle,
            witness: None,
            refuting_diagonal: None,
        })
    } else {
        Ok(DiagVerdict {
            psd_diag_orthogonal,
            all_diag_orthogonal: Certainty::NumericalNo,
            rule_fired: RuleFired::Oracle,
            witness: None,
            refuting_diagonal: Some(oracle.d_star),
        })
    }
}

/// Diagonal of the projection onto range(H) for semidefinite H.
fn range_projection_diagonal(split: &SpectralSplit) -> Vec<f64> {
    let n = split.dim();
    (0..n)
        .map(|j| split.p_plus()[(j, j)].re + split.p_minus()[(j, j)].re)
        .collect()
}

/// Line-search refutation along the worst-offending basis direction.
fn refute_via_basis_direction(
    h: &HermitianMatrix,
    split: &SpectralSplit,
    cfg: &CascadeConfig,
) -> Result<Option<Vec<f64>>> {
    let n = split.dim();
    let mut worst = (0usize, 0.0f64);
    for j in 0..n {
        let excess = (split.p_plus()[(j, j)].re - 0.5).max(split.p_minus()[(j, j)].re - 0.5);
        if excess > worst.1 {
            worst = (j, excess);
        }
    }
    let b = HermitianMatrix::basis_projector(n, worst.0);
    let (lambda, value) =
        crate::bj::oracle_line_search(h, &b, &crate::bj::LineSearchConfig::default())?;
    let h_trace_norm = split.trace_norm();
    if value < h_trace_norm - cfg.oracle_tol.min(1e-9) {
        let mut d = vec![0.0; n];
        d[worst.0] = lambda;
        Ok(Some(d))
    } else {
        Ok(None)
    }
}

/// Witness for the 2x2 rule: the polar unitary when invertible, the
/// phased rank-1 construction otherwise.
fn two_by_two_witness(split: &SpectralSplit, diag_tol: f64) -> Result<Option<HermitianMatrix>> {
    if split.mu_zero() == 0 {
        return Ok(Some(HermitianMatrix::from_hermitian_unchecked(
            split.signature_matrix(),
        )));
    }
    let sign = if split.mu_minus() == 0 { 1.0 } else { -1.0 };
    semidefinite_witness(split, sign, diag_tol)
}

/// Zero-diagonal witness for semidefinite `sign * H` in the proven
/// cases. Covers rank 0 (`M = 0`), constant-diagonal range (including
/// rank n/2, whose diagonal is pinned at 1/2), and rank 1 via phases.
fn semidefinite_witness(
    split: &SpectralSplit,
    sign: f64,
    diag_tol: f64,
) -> Result<Option<HermitianMatrix>> {
    let n = split.dim();
    let rank = split.mu_plus() + split.mu_minus();
    if rank == 0 {
        return Ok(Some(HermitianMatrix::zeros(n)));
    }
    let range_proj = if sign > 0.0 {
        split.p_plus().clone()
    } else {
        split.p_minus().clone()
    };

    let diag: Vec<f64> = (0..n).map(|j| range_proj[(j, j)].re).collect();
    let spread = diag
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
    if spread.1 - spread.0 <= 2.0 * diag_tol && spread.1 < 1.0 - 1e-6 {
        // M = 2P - I + (1-2c)/(1-c) (I - P): zero diagonal, eigenvalues
        // 1 on the range and (1-2c)/(1-c) - 1 in [-1, 0] off it.
        let c = 0.5 * (spread.0 + spread.1);
        let gamma = (1.0 - 2.0 * c) / (1.0 - c);
        let id = CMatrix::identity(n, n);
        let m = range_proj.scale(2.0) - &id + (&id - &range_proj).scale(gamma);
        return Ok(Some(HermitianMatrix::from_hermitian_unchecked(
            m.scale(sign),
        )));
    }
    if rank == 1 {
        return rank_one_witness(&range_proj, sign, diag_tol);
    }
    Ok(None)
}

/// Rank-1 witness `M = sign (u u* - w w*)` where `|w_j| = |u_j|` and
/// `<u, w> = 0`. The phases come from closing a triangle over a greedy
/// 3-partition of the weights `|u_j|^2`, which is possible exactly when
/// no weight exceeds 1/2 (the PSD-diagonal filter condition).
fn rank_one_witness(
    range_proj: &CMatrix,
    sign: f64,
    diag_tol: f64,
) -> Result<Option<HermitianMatrix>> {
    let n = range_proj.nrows();
    let (values, vectors) = eig_sorted(range_proj)?;
    debug_assert!(values[0] > 0.5, "rank-1 projector has a unit eigenvalue");
    let u = vectors.column(0).clone_owned();
    let weights: Vec<f64> = (0..n).map(|j| u[j].norm_sqr()).collect();
    if weights.iter().any(|&w| w > 0.5 + diag_tol) {
        return Ok(None);
    }

    // Greedy descending 3-partition: each bin ends at or below 1/2.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| weights[b].partial_cmp(&weights[a]).unwrap());
    let mut bins = [0.0f64; 3];
    let mut assignment = vec![0usize; n];
    for &j in &order {
        let smallest = (0..3).min_by(|&a, &b| bins[a].partial_cmp(&bins[b]).unwrap()).unwrap();
        assignment[j] = smallest;
        bins[smallest] += weights[j];
    }
    let mut bin_order = [0usize, 1, 2];
    bin_order.sort_by(|&a, &b| bins[b].partial_cmp(&bins[a]).unwrap());
    let (a, b, c) = (bins[bin_order[0]], bins[bin_order[1]], bins[bin_order[2]]);
    if a > b + c + diag_tol {
        return Ok(None);
    }

    // Close the triangle: bin A along +x, B at pi - gamma by the law of
    // cosines, C pointed back at the residual.
    let mut angles = [0.0f64; 3];
    if b > 0.0 {
        let cos_gamma = ((a * a + b * b - c * c) / (2.0 * a * b)).clamp(-1.0, 1.0);
        let phi_b = std::f64::consts::PI - cos_gamma.acos();
        angles[bin_order[1]] = phi_b;
        let bx = b * phi_b.cos();
        let by = b * phi_b.sin();
        angles[bin_order[2]] = (-by).atan2(-a - bx);
    }

    let w = crate::CVector::from_fn(n, |j, _| {
        let phase = C64::from_polar(1.0, angles[assignment[j]]);
        u[j] * phase
    });
    let mut m = CMatrix::zeros(n, n);
    let one = C64::new(1.0, 0.0);
    m.gerc(one, &u, &u, one);
    m.gerc(-one, &w, &w, one);
    Ok(Some(HermitianMatrix::from_hermitian_unchecked(
        m.scale(sign),
    )))
}
