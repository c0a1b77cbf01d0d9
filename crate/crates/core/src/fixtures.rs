//! Small reference inputs used by tests, the CLI fixtures, and the
//! acceptance suite.

use crate::hermitian::HermitianMatrix;
use crate::{CMatrix, CVector, C64};

/// The 3x3 indefinite matrix with eigenvalues {6, 0, -6} whose
/// eigenprojection diagonals all sit at or below 1/2: orthogonal to every
/// PSD diagonal matrix but not to every diagonal matrix.
pub fn example_42_h() -> HermitianMatrix {
    HermitianMatrix::from_real_rows(&[
        vec![-1.0, 5.0, 2.0],
        vec![5.0, -1.0, 2.0],
        vec![2.0, 2.0, 2.0],
    ])
    .expect("symmetric by construction")
}

/// The diagonal direction that drops the trace norm of
/// [`example_42_h`] from 12 to 54/5.
pub fn example_42_refuting_diagonal() -> Vec<f64> {
    vec![6.0, 6.0, -6.0 / 5.0]
}

/// Spanning vectors of the rank-2 subspace of C^5 whose orthogonal
/// projection has all diagonal entries <= 1/2 (the fifth exactly 1/2).
/// `alpha = sqrt((sqrt(10) - 1) / 3)`, evaluated on demand.
pub fn example_410_spanning_vectors() -> (Vec<f64>, Vec<f64>) {
    let alpha = ((10.0_f64.sqrt() - 1.0) / 3.0).sqrt();
    (
        vec![1.0, 1.0, 1.0, 0.0, 0.0],
        vec![0.0, 0.0, 1.0, alpha, 1.0 / alpha],
    )
}

/// The rank-2 orthogonal projection built from
/// [`example_410_spanning_vectors`] by Gram-Schmidt.
pub fn example_410_projector() -> HermitianMatrix {
    let (u1, u2) = example_410_spanning_vectors();
    let v1 = CVector::from_iterator(5, u1.iter().map(|&x| C64::new(x, 0.0)));
    let v2 = CVector::from_iterator(5, u2.iter().map(|&x| C64::new(x, 0.0)));
    let e1 = &v1 / C64::new(v1.norm(), 0.0);
    let mut w = v2.clone();
    let overlap = e1.dotc(&v2);
    w -= &e1 * overlap;
    let e2 = &w / C64::new(w.norm(), 0.0);
    let mut p = CMatrix::zeros(5, 5);
    let one = C64::new(1.0, 0.0);
    p.gerc(one, &e1, &e1, one);
    p.gerc(one, &e2, &e2, one);
    HermitianMatrix::new(p).expect("projector is Hermitian")
}

/// The diagonal direction `-diag(0, 0, 3, -1, 3)/40` that drops the trace
/// norm of [`example_410_projector`] below 2.
pub fn example_410_refuting_diagonal() -> Vec<f64> {
    vec![0.0, 0.0, -3.0 / 40.0, 1.0 / 40.0, -3.0 / 40.0]
}
