//! Shared input generators for the criterion benches.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use traceorth::{CMatrix, HermitianMatrix, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u: f64 = rng.gen::<f64>().max(1e-300);
    let v: f64 = rng.gen();
    (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
}

pub fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> HermitianMatrix {
    let a = CMatrix::from_fn(n, n, |_, _| C64::new(gaussian(rng), gaussian(rng)));
    HermitianMatrix::new((&a + a.adjoint()).scale(0.5)).expect("symmetrized")
}

pub fn random_psd(n: usize, rng: &mut ChaCha8Rng) -> HermitianMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| C64::new(gaussian(rng), gaussian(rng)));
    HermitianMatrix::new((&g * g.adjoint()).scale(1.0 / n as f64)).expect("gram")
}
