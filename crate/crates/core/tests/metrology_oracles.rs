//! Fisher information: composition from validated kernels, σ_x
//! attainability, low-temperature behaviour.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::FRAC_PI_2;
use thermoprobe_core::dephasing::{DephasingEvaluator, DephasingMethod, Temperature};
use thermoprobe_core::metrology::{
    classical_fisher_x, low_t_qfi, qfi_temperature, sigma_x_probabilities,
};
use thermoprobe_core::spectral::{CutoffKind, SpectralDensity};
use thermoprobe_core::thermo::ProbeConfig;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn exp_evaluator(s: f64, temp: f64) -> DephasingEvaluator {
    let sd = SpectralDensity::new(s, 1.0, CutoffKind::Exponential).unwrap();
    DephasingEvaluator::new(sd, Temperature::new(temp).unwrap(), DephasingMethod::Auto).unwrap()
}

/// Least-squares slope of log y against log x.
fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (lx, ly) = (x.ln(), y.ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

#[test]
fn zero_time_carries_no_information() {
    let ev = exp_evaluator(1.0, 1.0);
    let p = ProbeConfig::qubit(1.0).unwrap();
    let q = qfi_temperature(&p, &ev, 0.0).unwrap();
    assert_eq!((q.qfi, q.qsnr, q.rate), (0.0, 0.0, 0.0));
    assert_eq!(classical_fisher_x(&p, &ev, 0.0).unwrap(), 0.0);
}

#[test]
fn composes_from_reference_kernel_values() {
    // Δ and ∂_TΔ at s = 1, T̃ = 1, t̃ = 1 from 30-digit quadrature
    let (d, dd) = (0.955_272_808_323_740_023_06, 0.809_616_123_889_142_672_51);
    let want = (4.0 * dd) * (4.0 * dd) / (8.0_f64 * d).exp_m1();
    let q = qfi_temperature(&ProbeConfig::qubit(1.0).unwrap(), &exp_evaluator(1.0, 1.0), 1.0).unwrap();
    assert!(rel(q.qfi, want) < 1e-10);
    assert_eq!(q.qsnr, q.qfi);
    assert_eq!(q.rate, q.qsnr);
}

#[test]
fn balanced_superposition_is_optimal() {
    let ev = exp_evaluator(0.7, 0.4);
    let best = qfi_temperature(&ProbeConfig::qubit(0.8).unwrap(), &ev, 2.0).unwrap().qfi;
    for k in 0..=40 {
        let theta = std::f64::consts::PI * k as f64 / 40.0;
        let q = qfi_temperature(&ProbeConfig::new(0.8, theta, 0.5).unwrap(), &ev, 2.0).unwrap();
        assert!(q.qfi <= best * (1.0 + 1e-15));
    }
}

#[test]
fn sigma_x_measurement_attains_qfi() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let s = rng.gen_range(0.3..3.5);
        let cutoff = [CutoffKind::Exponential, CutoffKind::Gaussian, CutoffKind::Hard][rng.gen_range(0..3)];
        let temp = 10f64.powf(rng.gen_range(-1.5..1.0));
        let t = 10f64.powf(rng.gen_range(-2.0..1.5));
        let lambda = 10f64.powf(rng.gen_range(-1.5..0.5));
        let sd = SpectralDensity::new(s, 1.0, cutoff).unwrap();
        let ev = DephasingEvaluator::new(sd, Temperature::new(temp).unwrap(), DephasingMethod::Auto).unwrap();
        let probe = ProbeConfig::qubit(lambda).unwrap();
        let q = qfi_temperature(&probe, &ev, t).unwrap();
        let f = classical_fisher_x(&probe, &ev, t).unwrap();
        let (pp, pm) = sigma_x_probabilities(&probe, &ev, t).unwrap();
        assert!((pp + pm - 1.0).abs() < 1e-15);
        if q.qfi == 0.0 {
            assert_eq!(f, 0.0);
            continue;
        }
        worst = worst.max(rel(f, q.qfi));
    }
    assert!(worst <= 1e-12, "worst {worst:e}");
}

#[test]
fn other_angles_lose_information_to_sigma_x() {
    let ev = exp_evaluator(1.5, 1.0);
    let p = ProbeConfig::new(1.0, 0.6, 0.5).unwrap();
    assert!(classical_fisher_x(&p, &ev, 1.0).unwrap() < qfi_temperature(&p, &ev, 1.0).unwrap().qfi);
}

#[test]
fn low_temperature_leading_order() {
    let sd = SpectralDensity::new(1.0, 1.0, CutoffKind::Exponential).unwrap();
    let p = ProbeConfig::qubit(1.0).unwrap();
    let full = qfi_temperature(&p, &exp_evaluator(1.0, 1e-4), 1.0).unwrap().qfi;
    let lead = low_t_qfi(&p, &sd, Temperature::new(1e-4).unwrap(), 1.0).unwrap();
    assert!(rel(lead, full) < 0.01, "{lead} vs {full}");
}

#[test]
fn qsnr_scales_as_power_of_temperature() {
    let p = ProbeConfig::qubit(1.0).unwrap();
    for s in [0.5, 1.0, 3.0] {
        let ev = exp_evaluator(s, 1.0);
        let pts: Vec<(f64, f64)> = (0..=10)
            .map(|k| {
                let temp = 10f64.powf(-3.0 + 0.1 * k as f64);
                let e = ev.at_temperature(Temperature::new(temp).unwrap());
                (temp, qfi_temperature(&p, &e, 1.0).unwrap().qsnr)
            })
            .collect();
        let slope = loglog_slope(&pts);
        println!("s={s}: slope {slope}");
        assert!((slope - 2.0 * (s + 1.0)).abs() <= 0.05, "s={s}: slope {slope}");
    }
}

#[test]
fn coupling_hurts_once_coherence_is_lost() {
    let ev = exp_evaluator(1.0, 1.0);
    let t = 20.0;
    let delta = ev.delta(t).unwrap();
    // λ such that 8λ²Δ runs from 6 up to the guard
    let mut lambda = (6.0 / (8.0 * delta)).sqrt();
    let mut prev = f64::INFINITY;
    let mut steps = 0;
    while 8.0 * lambda * lambda * delta < 700.0 {
        let q = qfi_temperature(&ProbeConfig::qubit(lambda).unwrap(), &ev, t).unwrap();
        assert!(q.qfi < prev && q.qfi > 0.0, "λ={lambda}");
        prev = q.qfi;
        lambda *= 1.1;
        steps += 1;
    }
    assert!(steps > 10);
}

#[test]
fn underflow_is_flagged() {
    let ev = exp_evaluator(1.0, 1.0);
    let p = ProbeConfig::new(50.0, FRAC_PI_2, 0.5).unwrap();
    let q = qfi_temperature(&p, &ev, 10.0).unwrap();
    assert!(q.underflow);
    assert_eq!(q.qfi, 0.0);
}
