//! Fast in-binary oracle checks: identities of the special functions,
//! closed forms against quadrature, σ_x attainability on seeded draws and
//! the qubit channel optimum.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thermoprobe_core::channel::{build_dephasing_matrix, channel_qfi};
use thermoprobe_core::dephasing::{DephasingEvaluator, DephasingMethod, Temperature};
use thermoprobe_core::metrology::{classical_fisher_x, qfi_temperature};
use thermoprobe_core::special::{gamma, hurwitz_zeta_real, hyp1f1};
use thermoprobe_core::spectral::{CutoffKind, SpectralDensity};
use thermoprobe_core::thermo::{q_kernel, HeatMethod, ProbeConfig};
use thermoprobe_core::Result;

use crate::commands::{CommandError, Outcome};
use crate::config::RunConfig;
use crate::table::{fmt_float, CsvTable};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

struct Check {
    name: &'static str,
    worst: f64,
    tolerance: f64,
}

fn gamma_recurrence() -> Result<f64> {
    let mut worst = 0.0f64;
    for k in 1..40 {
        let x = 0.137 * k as f64;
        worst = worst.max(rel(gamma(x + 1.0)?, x * gamma(x)?));
    }
    Ok(worst)
}

fn zeta_recurrence() -> Result<f64> {
    let mut worst = 0.0f64;
    for s in [1.5, 2.0, 3.7] {
        for a in [0.3, 1.0, 4.5] {
            let lhs = hurwitz_zeta_real(s, a)? - hurwitz_zeta_real(s, a + 1.0)?;
            worst = worst.max(rel(lhs, a.powf(-s)));
        }
    }
    Ok(worst)
}

fn kummer_transformation() -> Result<f64> {
    let mut worst = 0.0f64;
    for (a, b, z) in [(0.5, 0.5, -3.0), (1.5, 0.5, -12.0), (0.25, 2.0, 7.0)] {
        let lhs = hyp1f1(a, b, z)?;
        let rhs = z.exp() * hyp1f1(b - a, b, -z)?;
        worst = worst.max(rel(lhs, rhs));
    }
    Ok(worst)
}

fn dephasing_closed_vs_quadrature() -> Result<f64> {
    let mut worst = 0.0f64;
    for s in [0.5, 1.5, 3.0] {
        let sd = SpectralDensity::new(s, 1.0, CutoffKind::Exponential)?;
        for temp in [0.2, 1.0, 10.0] {
            let temp = Temperature::new(temp)?;
            let cf = DephasingEvaluator::new(sd, temp, DephasingMethod::ClosedFormExp)?;
            let qd = DephasingEvaluator::new(sd, temp, DephasingMethod::Quadrature)?;
            for t in [1e-2, 1.0, 30.0] {
                worst = worst.max(rel(cf.delta(t)?, qd.delta(t)?));
            }
        }
    }
    Ok(worst)
}

fn heat_closed_vs_quadrature() -> Result<f64> {
    let mut worst = 0.0f64;
    for cutoff in [CutoffKind::Exponential, CutoffKind::Gaussian, CutoffKind::Hard] {
        let sd = SpectralDensity::new(1.5, 1.0, cutoff)?;
        for t in [1e-2, 1.0, 30.0] {
            let a = q_kernel(&sd, t, HeatMethod::ClosedForm)?;
            let b = q_kernel(&sd, t, HeatMethod::Quadrature)?;
            worst = worst.max(rel(a, b));
        }
    }
    Ok(worst)
}

fn sigma_x_attainability(seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let sd = SpectralDensity::new(rng.gen_range(0.3..3.5), 1.0, CutoffKind::Exponential)?;
        let temp = Temperature::new(10f64.powf(rng.gen_range(-1.5..1.0)))?;
        let ev = DephasingEvaluator::new(sd, temp, DephasingMethod::Auto)?;
        let probe = ProbeConfig::qubit(10f64.powf(rng.gen_range(-1.5..0.5)))?;
        let t = 10f64.powf(rng.gen_range(-2.0..1.5));
        let q = qfi_temperature(&probe, &ev, t)?.qfi;
        if q > 0.0 {
            worst = worst.max(rel(classical_fisher_x(&probe, &ev, t)?, q));
        }
    }
    Ok(worst)
}

fn qubit_channel() -> Result<f64> {
    let mut worst = 0.0f64;
    for delta in [0.05, 0.1, 0.5, 1.0, 2.0] {
        let q = channel_qfi(&build_dephasing_matrix(2, delta, 1.0)?)?;
        worst = worst.max(rel(q, 1.0 / (2.0 * delta).exp_m1()));
    }
    Ok(worst)
}

pub fn cmd_selfcheck(cfg: &RunConfig) -> std::result::Result<Outcome, CommandError> {
    let checks = [
        Check { name: "gamma_recurrence", worst: gamma_recurrence()?, tolerance: 1e-12 },
        Check { name: "hurwitz_zeta_recurrence", worst: zeta_recurrence()?, tolerance: 1e-11 },
        Check { name: "kummer_transformation", worst: kummer_transformation()?, tolerance: 1e-10 },
        Check { name: "dephasing_closed_form", worst: dephasing_closed_vs_quadrature()?, tolerance: 1e-8 },
        Check { name: "heat_closed_form", worst: heat_closed_vs_quadrature()?, tolerance: 1e-8 },
        Check { name: "sigma_x_attainability", worst: sigma_x_attainability(cfg.seed)?, tolerance: 1e-12 },
        Check { name: "qubit_channel_optimum", worst: qubit_channel()?, tolerance: 1e-6 },
    ];
    let mut table = CsvTable::new(&["check", "worst_rel_error", "tolerance", "status"]);
    let mut failed = 0;
    for c in &checks {
        let pass = c.worst <= c.tolerance;
        failed += usize::from(!pass);
        table.push(vec![
            c.name.to_string(),
            fmt_float(c.worst),
            fmt_float(c.tolerance),
            if pass { "PASS" } else { "FAIL" }.to_string(),
        ]);
    }
    Ok(Outcome { table, errored: failed })
}
