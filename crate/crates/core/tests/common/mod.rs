//! Seeded random generators shared by the integration suites.
#![allow(dead_code)] // each test target uses a different subset

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use traceorth::{CMatrix, CVector, HermitianMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u: f64 = rng.gen::<f64>().max(1e-300);
    let v: f64 = rng.gen();
    (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
}

/// Dense GUE-style Hermitian matrix with O(1) entries.
pub fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> HermitianMatrix {
    let a = CMatrix::from_fn(n, n, |_, _| C64::new(gaussian(rng), gaussian(rng)));
    HermitianMatrix::new((&a + a.adjoint()).scale(0.5)).expect("symmetrized")
}

/// Random PSD matrix `G G*` scaled to unit-ish operator norm.
pub fn random_psd(n: usize, rng: &mut ChaCha8Rng) -> HermitianMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| C64::new(gaussian(rng), gaussian(rng)));
    let p = &g * g.adjoint();
    HermitianMatrix::new(p.scale(1.0 / n as f64)).expect("gram matrix")
}

/// Haar-ish orthonormal frame of `rank` columns via Gram-Schmidt on
/// Gaussian vectors.
pub fn random_frame(n: usize, rank: usize, rng: &mut ChaCha8Rng) -> Vec<CVector> {
    let mut cols: Vec<CVector> = Vec::with_capacity(rank);
    while cols.len() < rank {
        let mut v = CVector::from_fn(n, |_, _| C64::new(gaussian(rng), gaussian(rng)));
        for c in &cols {
            let ip = c.dotc(&v);
            v -= c * ip;
        }
        let norm = v.norm();
        if norm > 1e-8 {
            v /= C64::new(norm, 0.0);
            cols.push(v);
        }
    }
    cols
}

/// Random rank-`rank` orthogonal projection.
pub fn random_projector(n: usize, rank: usize, rng: &mut ChaCha8Rng) -> HermitianMatrix {
    let cols = random_frame(n, rank, rng);
    let mut p = CMatrix::zeros(n, n);
    let one = C64::new(1.0, 0.0);
    for c in &cols {
        p.gerc(one, c, c, one);
    }
    HermitianMatrix::new(p).expect("projector")
}

/// Random Hermitian with prescribed inertia `(plus, zero, minus)` and
/// eigenvalues bounded away from the zero threshold.
pub fn random_with_inertia(
    n: usize,
    plus: usize,
    minus: usize,
    rng: &mut ChaCha8Rng,
) -> HermitianMatrix {
    assert!(plus + minus <= n);
    let cols = random_frame(n, plus + minus, rng);
    let mut h = CMatrix::zeros(n, n);
    for (idx, c) in cols.iter().enumerate() {
        let magnitude = 0.5 + rng.gen::<f64>();
        let sign = if idx < plus { 1.0 } else { -1.0 };
        h.gerc(C64::new(sign * magnitude, 0.0), c, c, C64::new(1.0, 0.0));
    }
    HermitianMatrix::new(h).expect("spectral assembly")
}

/// Random density matrix of the given rank.
pub fn random_density(n: usize, rank: usize, rng: &mut ChaCha8Rng) -> traceorth::DensityMatrix {
    let cols = random_frame(n, rank, rng);
    let mut weights: Vec<f64> = (0..rank).map(|_| rng.gen::<f64>() + 0.1).collect();
    let total: f64 = weights.iter().sum();
    for w in weights.iter_mut() {
        *w /= total;
    }
    let mut rho = CMatrix::zeros(n, n);
    for (c, &w) in cols.iter().zip(&weights) {
        rho.gerc(C64::new(w, 0.0), c, c, C64::new(1.0, 0.0));
    }
    traceorth::DensityMatrix::new(HermitianMatrix::new(rho).expect("assembled"))
        .expect("unit trace PSD")
}

/// Random real diagonal as a Hermitian matrix.
pub fn random_diagonal(n: usize, rng: &mut ChaCha8Rng) -> HermitianMatrix {
    let d: Vec<f64> = (0..n).map(|_| gaussian(rng)).collect();
    HermitianMatrix::from_diagonal(&d)
}

/// Zero-diagonal Hermitian unitary on even dimension: the off-diagonal
/// block form `[[0, W], [W*, 0]]` with `W` unitary.
pub fn zero_diag_hermitian_unitary(half: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let w_cols = random_frame(half, half, rng);
    let mut w = DMatrix::<C64>::zeros(half, half);
    for (j, c) in w_cols.iter().enumerate() {
        w.set_column(j, c);
    }
    let n = 2 * half;
    let mut u = CMatrix::zeros(n, n);
    for i in 0..half {
        for j in 0..half {
            u[(i, half + j)] = w[(i, j)];
            u[(half + j, i)] = w[(i, j)].conj();
        }
    }
    u
}
