//! Dephasing channel: Kraus structure and ancilla-assisted QFI.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thermoprobe_core::channel::{
    build_dephasing_matrix, cat_state_qfi, channel_qfi, channel_qfi_report, compare_timeopt_cat_vs_optimal,
    kraus_from_matrix, kraus_from_matrix_symmetric, kraus_from_matrix_with, kraus_qfi, DegeneracyPolicy,
};
use thermoprobe_core::dephasing::{DephasingEvaluator, DephasingMethod, Temperature};
use thermoprobe_core::linalg::symmetric_eigen;
use thermoprobe_core::spectral::{CutoffKind, SpectralDensity};
use thermoprobe_core::Error;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Haar-ish unitary from Gram-Schmidt on a Gaussian-like complex matrix.
fn random_unitary(rng: &mut ChaCha8Rng, r: usize) -> Vec<Complex64> {
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    while rows.len() < r {
        let mut v: Vec<Complex64> = (0..r).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        for u in &rows {
            let p: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= p * y;
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-3 {
            rows.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    rows.concat()
}

fn random_density(rng: &mut ChaCha8Rng, d: usize) -> Vec<Complex64> {
    let a: Vec<Complex64> = (0..d * d).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let mut rho = vec![c(0.0, 0.0); d * d];
    for i in 0..d {
        for j in 0..d {
            rho[i * d + j] = (0..d).map(|k| a[i * d + k] * a[j * d + k].conj()).sum();
        }
    }
    let tr: f64 = (0..d).map(|i| rho[i * d + i].re).sum();
    rho.into_iter().map(|z| z / tr).collect()
}

#[test]
fn qubit_channel_matches_closed_form() {
    for delta in [0.05, 0.1, 0.5, 1.0, 2.0] {
        let e = build_dephasing_matrix(2, delta, 1.0).unwrap();
        let q = channel_qfi(&e).unwrap();
        let want = 1.0 / (2.0 * delta).exp_m1();
        assert!(rel(q, want) < 1e-6, "Δ={delta}: {q} vs {want}");
    }
}

#[test]
fn kraus_sets_are_complete_and_reproduce_the_channel() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for d in [2, 3, 4] {
        for delta in [0.05, 0.3, 1.0] {
            let e = build_dephasing_matrix(d, delta, 1.0).unwrap();
            let k = kraus_from_matrix(&e).unwrap();
            assert!(k.completeness_error() < 1e-12);
            for _ in 0..20 {
                let rho = random_density(&mut rng, d);
                let out = k.apply(&rho);
                for i in 0..d {
                    for j in 0..d {
                        let want = rho[i * d + j] * e.entries()[(i, j)];
                        assert!((out[i * d + j] - want).norm() < 1e-12);
                    }
                }
            }
        }
    }
}

#[test]
fn kraus_derivatives_match_finite_differences() {
    let h = 1e-6;
    for d in [2, 3, 4] {
        for delta in [0.2, 0.7] {
            let k0 = kraus_from_matrix(&build_dephasing_matrix(d, delta, 1.0).unwrap()).unwrap();
            let k1 = kraus_from_matrix(&build_dephasing_matrix(d, delta + h, 1.0).unwrap()).unwrap();
            assert_eq!(k0.rank(), k1.rank());
            for (idx, (a, b)) in k0.operators().iter().zip(k1.operators()).enumerate() {
                let overlap: f64 = a.iter().zip(b).map(|(x, y)| (x.conj() * y).re).sum();
                let sign = overlap.signum();
                for m in 0..d {
                    let fd = (b[m] * sign - a[m]) / h;
                    let an = k0.derivatives()[idx][m];
                    assert!((fd - an).norm() < 1e-5, "d={d} Δ={delta} k={idx} m={m}: {fd} vs {an}");
                }
            }
        }
    }
}

#[test]
fn qfi_is_independent_of_the_kraus_representation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for d in [2, 3, 4] {
        let e = build_dephasing_matrix(d, 0.4, 1.0).unwrap();
        let k = kraus_from_matrix(&e).unwrap();
        let base = kraus_qfi(&k).unwrap().qfi;
        for _ in 0..5 {
            let u = random_unitary(&mut rng, k.rank());
            let mixed = kraus_qfi(&k.mix(&u)).unwrap().qfi;
            assert!(rel(mixed, base) < 1e-8, "d={d}: {mixed} vs {base}");
        }
    }
}

#[test]
fn eigenvector_signs_do_not_matter() {
    let e = build_dephasing_matrix(3, 0.6, 1.0).unwrap();
    let k = kraus_from_matrix(&e).unwrap();
    let base = kraus_qfi(&k).unwrap().qfi;
    let r = k.rank();
    let mut u = vec![c(0.0, 0.0); r * r];
    for i in 0..r {
        u[i * r + i] = c(if i % 2 == 0 { -1.0 } else { 1.0 }, 0.0);
    }
    assert!(rel(kraus_qfi(&k.mix(&u)).unwrap().qfi, base) < 1e-10);
}

#[test]
fn certificate_brackets_the_optimum() {
    for d in [2, 3, 4, 5] {
        let r = channel_qfi_report(&build_dephasing_matrix(d, 0.25, 1.3).unwrap()).unwrap();
        assert!(r.lower <= r.upper && r.upper - r.lower <= 1e-12 * r.upper);
        assert!(rel(r.qfi, 4.0 * r.upper * 1.3 * 1.3) < 1e-14);
    }
}

#[test]
fn more_dephasing_less_information() {
    for d in [2, 3, 4] {
        let mut prev = f64::INFINITY;
        for k in 0..12 {
            let delta = 0.05 * 1.4f64.powi(k);
            let q = channel_qfi(&build_dephasing_matrix(d, delta, 1.0).unwrap()).unwrap();
            assert!(q < prev, "d={d} Δ={delta}");
            prev = q;
        }
    }
}

#[test]
fn channel_bound_dominates_cat_state() {
    // with Δ_E = 4λ²Δ_T the cat state sees coherence e^{−(2j)²Δ_E}
    let (lambda, delta_t, d_delta_t) = (0.5, 0.3, 0.2);
    for two_j in 1..=5u32 {
        let j = two_j as f64 / 2.0;
        let l2 = 4.0 * lambda * lambda;
        let e = build_dephasing_matrix(two_j as usize + 1, l2 * delta_t, l2 * d_delta_t).unwrap();
        let opt = channel_qfi(&e).unwrap();
        let cat = cat_state_qfi(j, lambda, delta_t, d_delta_t).unwrap();
        assert!(opt >= cat * (1.0 - 1e-10), "j={j}: {opt} < {cat}");
        if two_j == 1 {
            assert!(rel(opt, cat) < 1e-9);
        }
    }
}

#[test]
fn dephasing_matrix_is_positive_semidefinite() {
    let e = build_dephasing_matrix(4, 0.3, 1.0).unwrap();
    let eig = symmetric_eigen(e.entries());
    assert!(eig.values.iter().all(|&v| v >= -1e-14));
    let total: f64 = eig.values.iter().sum();
    assert!((total - 4.0).abs() < 1e-13);
}

#[test]
fn undephased_channel_is_unitary() {
    let e = build_dephasing_matrix(5, 0.0, 1.0).unwrap();
    let eig = symmetric_eigen(e.entries());
    assert!((eig.values[0] - 5.0).abs() < 1e-13);
    assert!(eig.values[1..].iter().all(|v| v.abs() < 1e-13));
    assert_eq!(kraus_from_matrix(&e).unwrap().rank(), 1);
}

#[test]
fn degeneracy_policy() {
    // far into the dephased regime the spectrum collapses onto 1
    let e = build_dephasing_matrix(2, 30.0, 1.0).unwrap();
    assert!(matches!(
        kraus_from_matrix_with(&e, DegeneracyPolicy::Fail),
        Err(Error::Degenerate { .. })
    ));
    assert!(matches!(kraus_from_matrix(&e), Err(Error::Degenerate { .. })));
    let e = build_dephasing_matrix(2, 23.5, 1.0).unwrap();
    let k = kraus_from_matrix(&e).unwrap();
    assert!(k.perturbed() || k.rank() == 2);
}

#[test]
fn matches_semidefinite_program() {
    // ancilla-assisted QFI per unit dΔ from an independent SDP (SCS, eps 1e-10)
    const SDP: [(usize, f64, f64); 10] = [
        (3, 0.01, 192.10665529062385),
        (3, 0.1, 13.055459535005417),
        (3, 0.5, 0.9657715260838928),
        (3, 1.0, 0.2365091439104738),
        (3, 2.0, 0.02605776058358026),
        (5, 0.01, 678.8150441518197),
        (5, 0.1, 22.513912513110828),
        (5, 0.5, 1.3841670257587797),
        (5, 1.0, 0.30854794702585736),
        (5, 2.0, 0.032112051588349),
    ];
    for (d, delta, want) in SDP {
        let q = channel_qfi(&build_dephasing_matrix(d, delta, 1.0).unwrap()).unwrap();
        assert!(rel(q, want) < 1e-8, "d={d} Δ={delta}: {q} vs {want}");
    }
}

#[test]
fn symmetric_derivatives_are_gauge_equivalent() {
    for d in [2, 3, 4, 6] {
        for delta in [0.05, 0.4, 1.5] {
            let e = build_dephasing_matrix(d, delta, 1.0).unwrap();
            let a = kraus_qfi(&kraus_from_matrix(&e).unwrap()).unwrap().qfi;
            let b = kraus_qfi(&kraus_from_matrix_symmetric(&e)).unwrap().qfi;
            assert!(rel(a, b) < 1e-9, "d={d} Δ={delta}: {a} vs {b}");
        }
    }
}

#[test]
fn degenerate_spectrum_is_handled_without_shift() {
    // gap 2e^{-25} lies below the degeneracy tolerance
    let q = channel_qfi(&build_dephasing_matrix(2, 25.0, 1.0).unwrap()).unwrap();
    assert!(rel(q, 1.0 / 50f64.exp_m1()) < 1e-6, "{q}");
    for d in [3, 5] {
        let q = channel_qfi(&build_dephasing_matrix(d, 25.0, 1.0).unwrap()).unwrap();
        assert!(q.is_finite() && q >= 0.0);
    }
}

#[test]
fn optimal_rate_grows_with_spin() {
    let sd = SpectralDensity::new(1.0, 1.0, CutoffKind::Exponential).unwrap();
    let ev = DephasingEvaluator::new(sd, Temperature::new(1.0).unwrap(), DephasingMethod::Auto).unwrap();
    let mut prev = 0.0;
    for j in [0.5, 1.0, 1.5, 2.0] {
        let cmp = compare_timeopt_cat_vs_optimal(j, 1.0, &ev).unwrap();
        assert!(cmp.optimal_rate >= prev * (1.0 - 1e-9), "j={j}");
        assert!(cmp.optimal_rate >= cmp.cat_rate * (1.0 - 1e-9));
        prev = cmp.optimal_rate;
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn qfi_is_finite_and_positive(d in 2usize..=5, delta in 0.02f64..5.0, dd in 0.1f64..3.0) {
        let q = channel_qfi(&build_dephasing_matrix(d, delta, dd).unwrap()).unwrap();
        prop_assert!(q.is_finite() && q > 0.0);
    }
}
