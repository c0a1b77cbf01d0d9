//! Property suites for the spectral machinery and the orthogonality
//! criteria: trace pairings, projector structure, oracle consistency,
//! and the cascade's exact rules.

mod common;

use approx::assert_abs_diff_eq;
use common::*;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::Rng;
use traceorth::{
    check_all_diag, check_bj_general, check_bj_psd, check_psd_diag, comparison_matrix,
    hermitian::reconstruct, min_over_diagonal, operator_norm, oracle_line_search, spectral_split,
    trace_norm, verify_witness, witness_psd, CascadeConfig, Certainty, DiagMinConfig,
    HermitianMatrix, LineSearchConfig,
};

fn shifted_norm(h: &HermitianMatrix, b: &HermitianMatrix, lambda: f64) -> f64 {
    trace_norm(&h.add(&b.scale(lambda))).unwrap()
}

#[test]
fn trace_pairing_bounded_by_sorted_eigenvalue_products() {
    let mut rng = rng(11);
    for _ in 0..100 {
        let n = 2 + (rng.gen::<u64>() % 7) as usize;
        let h = random_hermitian(n, &mut rng);
        let m = random_hermitian(n, &mut rng);
        let h_eigs = spectral_split(&h, None).unwrap().eigenvalues().to_vec();
        let m_eigs = spectral_split(&m, None).unwrap().eigenvalues().to_vec();
        let pairing = h.trace_product(&m);
        let bound: f64 = h_eigs.iter().zip(&m_eigs).map(|(a, b)| a * b).sum();
        let scale = (1.0 + bound.abs()).max(pairing.abs());
        assert!(
            pairing <= bound + 1e-9 * scale,
            "Tr(HM) = {pairing} exceeded sorted bound {bound}"
        );

        // Equality at a monotone spectral function of H: f(H) = H^3 + 2H
        // shares the eigenbasis and preserves the eigenvalue ordering.
        let f = |x: f64| x * x * x + 2.0 * x;
        let hm = h.matrix();
        let m_fn = HermitianMatrix::new(hm * hm * hm + hm.scale(2.0)).unwrap();
        let pairing = h.trace_product(&m_fn);
        let expect: f64 = h_eigs.iter().map(|&l| l * f(l)).sum();
        assert_abs_diff_eq!(pairing, expect, epsilon = 1e-7 * (1.0 + expect.abs()));
    }
}

#[test]
fn split_reconstructs_and_pairs_to_the_trace_norm() {
    let mut rng = rng(13);
    for _ in 0..60 {
        let n = 2 + (rng.gen::<u64>() % 7) as usize;
        let h = random_hermitian(n, &mut rng);
        let split = spectral_split(&h, None).unwrap();
        split
            .validate(traceorth::hermitian::default_numeric_tol(
                split.operator_norm(),
            ))
            .unwrap();

        let rebuilt = reconstruct(&split, &h);
        let err = (rebuilt - h.matrix()).norm();
        assert!(
            err <= 1e-9 * operator_norm(&h).unwrap().max(1.0),
            "reconstruction error {err}"
        );

        let tn = trace_norm(&h).unwrap();
        let signature = HermitianMatrix::new(split.signature_matrix()).unwrap();
        let paired = h.trace_product(&signature);
        assert_abs_diff_eq!(paired, tn, epsilon = 1e-9 * tn.max(1.0));
    }
}

#[test]
fn compressed_projector_norms_agree() {
    let mut rng = rng(17);
    for _ in 0..60 {
        let n = 2 + (rng.gen::<u64>() % 7) as usize;
        let rank_p = 1 + (rng.gen::<u64>() % n as u64) as usize;
        let rank_q = 1 + (rng.gen::<u64>() % n as u64) as usize;
        let p = random_projector(n, rank_p, &mut rng);
        let q = random_projector(n, rank_q, &mut rng);
        let pqp = HermitianMatrix::new(p.matrix() * q.matrix() * p.matrix()).unwrap();
        let qpq = HermitianMatrix::new(q.matrix() * p.matrix() * q.matrix()).unwrap();
        let a = operator_norm(&pqp).unwrap();
        let b = operator_norm(&qpq).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-9);
    }
}

proptest! {
    #[test]
    fn comparison_matrix_is_idempotent(entries in proptest::collection::vec(-10.0f64..10.0, 1..=25)) {
        let n = (entries.len() as f64).sqrt().floor() as usize;
        prop_assume!(n >= 1);
        let a = traceorth::CMatrix::from_fn(n, n, |i, j| C64::new(entries[i * n + j], 0.0));
        let h = HermitianMatrix::new((&a + a.adjoint()).scale(0.5)).unwrap();
        let once = comparison_matrix(&h);
        let twice = comparison_matrix(&once);
        prop_assert!((once.matrix() - twice.matrix()).norm() < 1e-12);
    }
}

#[test]
fn general_check_agrees_with_psd_check_on_psd_directions() {
    let mut rng = rng(19);
    for trial in 0..500 {
        let n = 2 + (rng.gen::<u64>() % 5) as usize;
        // Half generic, half singular so the kernel branch is exercised.
        let h = if trial % 2 == 0 {
            random_hermitian(n, &mut rng)
        } else {
            let plus = 1 + (rng.gen::<u64>() % (n as u64 - 1)) as usize;
            let minus = (rng.gen::<u64>() % (n as u64 - plus as u64)) as usize;
            random_with_inertia(n, plus, minus, &mut rng)
        };
        let b = random_psd(n, &mut rng);
        let psd = check_bj_psd(&h, &b, None).unwrap();
        let general = check_bj_general(&h, &b, None).unwrap();
        assert_eq!(
            psd.orthogonal, general.orthogonal,
            "disagreement at trial {trial}"
        );
        if let Some(w) = general.witness {
            assert!(verify_witness(&h, &b, &w, Some(1e-8)).unwrap());
        }
    }
}

#[test]
fn psd_ray_reduction_matches_the_verdict() {
    let mut rng = rng(23);
    let mut checked_orthogonal = 0;
    for _ in 0..100 {
        let n = 2 + (rng.gen::<u64>() % 4) as usize;
        let rank = 1 + (rng.gen::<u64>() % (n as u64 / 2).max(1)) as usize;
        let rho = random_density(n, rank, &mut rng);
        let h = rho.rho().clone();
        let b = random_psd(n, &mut rng);
        let verdict = check_bj_psd(&h, &b, None).unwrap();
        let h_tn = trace_norm(&h).unwrap();

        // Positive multiples of a PSD direction never shrink a PSD state.
        for &lambda in &[0.1, 0.5, 1.0, 5.0] {
            assert!(shifted_norm(&h, &b, lambda) >= h_tn - 1e-9);
        }

        // The negative ray decides orthogonality.
        let ray_min = (0..200)
            .map(|i| shifted_norm(&h, &b, -(i as f64) * 0.02))
            .fold(f64::INFINITY, f64::min);
        if verdict.orthogonal {
            assert!(ray_min >= h_tn - 1e-7);
            checked_orthogonal += 1;
        }
        let (lambda_star, oracle_min) =
            oracle_line_search(&h, &b, &LineSearchConfig::default()).unwrap();
        if !verdict.orthogonal {
            assert!(oracle_min < h_tn - 1e-9, "margins {:+e}/{:+e}", verdict.margin_plus, verdict.margin_minus);
            assert!(lambda_star < 0.0);
        }
    }
    assert!(checked_orthogonal > 0, "generator never produced an orthogonal pair");
}

#[test]
fn witness_exists_exactly_when_orthogonal() {
    let mut rng = rng(29);
    for _ in 0..200 {
        let n = 2 + (rng.gen::<u64>() % 5) as usize;
        let plus = 1 + (rng.gen::<u64>() % (n as u64 - 1)) as usize;
        let minus = (rng.gen::<u64>() % (n as u64 - plus as u64 + 1)) as usize;
        let h = random_with_inertia(n, plus, minus.min(n - plus), &mut rng);
        let b = random_psd(n, &mut rng);
        let verdict = check_bj_psd(&h, &b, None).unwrap();
        if verdict.orthogonal {
            let w = verdict.witness.expect("orthogonal verdicts carry witnesses");
            assert!(verify_witness(&h, &b, &w, None).unwrap());
            assert_abs_diff_eq!(
                w.attained_trace_norm,
                trace_norm(&h).unwrap(),
                epsilon = 1e-8 * trace_norm(&h).unwrap().max(1.0)
            );
        } else {
            assert!(witness_psd(&h, &b).is_err());
        }
    }
}

#[test]
fn invertible_half_diagonal_condition_is_confirmed_by_the_oracle() {
    let mut rng = rng(31);
    for half in [1usize, 2, 3] {
        for _ in 0..12 {
            let n = 2 * half;
            let u = zero_diag_hermitian_unitary(half, &mut rng);
            let id = traceorth::CMatrix::identity(n, n);
            let p_plus = (&id + &u).scale(0.5);
            let p_minus = (&id - &u).scale(0.5);
            // H = P+ R+ P+ - P- R- P- has eigenprojections exactly P+/P-.
            let r_plus = random_psd(n, &mut rng);
            let r_minus = random_psd(n, &mut rng);
            let shift = traceorth::CMatrix::identity(n, n).scale(0.2);
            let h = HermitianMatrix::new(
                &p_plus * (r_plus.matrix() + &shift) * &p_plus
                    - &p_plus * traceorth::CMatrix::zeros(n, n) * &p_plus
                    - (&p_minus * (r_minus.matrix() + &shift) * &p_minus),
            )
            .unwrap();
            let split = spectral_split(&h, None).unwrap();
            assert_eq!(split.mu_zero(), 0, "construction kept H invertible");
            for j in 0..n {
                assert_abs_diff_eq!(split.p_plus()[(j, j)].re, 0.5, epsilon = 1e-9);
            }
            let result = min_over_diagonal(&h, &DiagMinConfig::default()).unwrap();
            let h_tn = trace_norm(&h).unwrap();
            assert!(
                result.value >= h_tn - 1e-6,
                "oracle found {} below ||H||_tr = {}",
                result.value,
                h_tn
            );
        }
    }
}

#[test]
fn feasibility_is_immediate_for_half_diagonal_invertible_matrices() {
    // With every projector diagonal pinned at 1/2 the signature matrix
    // P+ - P- is already the zero-diagonal witness; the kernel is empty
    // so the solver must land on it in one sweep.
    let mut rng = rng(97);
    let u = zero_diag_hermitian_unitary(2, &mut rng);
    let id = traceorth::CMatrix::identity(4, 4);
    let p_plus = (&id + &u).scale(0.5);
    let p_minus = (&id - &u).scale(0.5);
    let r_plus = random_psd(4, &mut rng);
    let r_minus = random_psd(4, &mut rng);
    let shift = traceorth::CMatrix::identity(4, 4).scale(0.3);
    let h = HermitianMatrix::new(
        &p_plus * (r_plus.matrix() + &shift) * &p_plus
            - (&p_minus * (r_minus.matrix() + &shift) * &p_minus),
    )
    .unwrap();
    let split = spectral_split(&h, None).unwrap();
    assert_eq!(split.mu_zero(), 0);
    let m = traceorth::feasibility_zero_diag(&split, 1e-9, 5)
        .unwrap()
        .expect("witness found immediately");
    for j in 0..4 {
        assert!(m.matrix()[(j, j)].norm() <= 1e-9);
    }
    assert_abs_diff_eq!(
        (m.matrix() - split.signature_matrix()).norm(),
        0.0,
        epsilon = 1e-9
    );
}

#[test]
fn cascade_verdicts_are_sound_against_the_oracle() {
    let mut rng = rng(37);
    let mut cfg = CascadeConfig::default();
    cfg.oracle.restarts = 3;
    let mut proven_yes = 0;
    let mut proven_no = 0;
    for _ in 0..60 {
        let n = 2 + (rng.gen::<u64>() % 5) as usize;
        let plus = 1 + (rng.gen::<u64>() % n as u64) as usize % n;
        let minus = (rng.gen::<u64>() % (n as u64 - plus as u64 + 1)) as usize;
        let h = random_with_inertia(n, plus.max(1), minus, &mut rng);
        let verdict = check_all_diag(&h, &cfg).unwrap();
        let h_tn = trace_norm(&h).unwrap();
        let oracle = min_over_diagonal(&h, &DiagMinConfig::default()).unwrap();
        match verdict.all_diag_orthogonal {
            Certainty::ProvenYes | Certainty::NumericalYes => {
                proven_yes += 1;
                assert!(
                    oracle.value >= h_tn - 1e-6,
                    "yes-verdict contradicted: oracle {} vs {}",
                    oracle.value,
                    h_tn
                );
                if let Some(w) = &verdict.witness {
                    // The witness certifies against an arbitrary PSD
                    // diagonal direction.
                    let b = HermitianMatrix::basis_projector(n, 0);
                    let bj = traceorth::BjWitness {
                        attained_trace_norm: h.trace_product(w),
                        b_pairing: b.trace_product(w),
                        m: w.clone(),
                    };
                    assert!(verify_witness(&h, &b, &bj, Some(1e-7)).unwrap());
                }
            }
            Certainty::ProvenNo => {
                proven_no += 1;
                // The filter violation for this generator is macroscopic,
                // so the oracle must find a genuinely smaller value.
                let split = spectral_split(&h, None).unwrap();
                let worst = (0..n)
                    .map(|j| {
                        (split.p_plus()[(j, j)].re - 0.5)
                            .max(split.p_minus()[(j, j)].re - 0.5)
                    })
                    .fold(f64::NEG_INFINITY, f64::max);
                if worst > 5e-2 {
                    assert!(
                        oracle.value < h_tn - 1e-6,
                        "no-verdict not confirmed: oracle {} vs {} (violation {})",
                        oracle.value,
                        h_tn,
                        worst
                    );
                }
            }
            Certainty::NumericalNo => {
                let d = verdict.refuting_diagonal.expect("numerical no carries d");
                let shifted = h.add_diagonal(&d).unwrap();
                assert!(trace_norm(&shifted).unwrap() < h_tn);
            }
        }
    }
    assert!(proven_yes > 0 && proven_no > 0, "generator covered both verdicts");
}

#[test]
fn psd_small_dimension_rule_matches_the_oracle() {
    let mut rng = rng(41);
    for _ in 0..80 {
        let n = 2 + (rng.gen::<u64>() % 3) as usize; // n in 2..=4
        let rank = 1 + (rng.gen::<u64>() % n as u64) as usize;
        let h = {
            let d = random_density(n, rank, &mut rng);
            d.rho().scale(1.0 + rng.gen::<f64>())
        };
        let passes = check_psd_diag(&h, None).unwrap();
        let oracle = min_over_diagonal(&h, &DiagMinConfig::default()).unwrap();
        let h_tn = trace_norm(&h).unwrap();
        let confirmed = oracle.value >= h_tn - 1e-6;
        let split = spectral_split(&h, None).unwrap();
        let boundary = (0..n)
            .map(|j| (split.p_plus()[(j, j)].re - 0.5).abs())
            .fold(f64::INFINITY, f64::min);
        if boundary > 1e-3 {
            assert_eq!(passes, confirmed, "PSD n <= 4 equivalence failed");
        }
    }
}
