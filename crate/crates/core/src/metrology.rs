//! Temperature estimation with a dephasing probe: quantum Fisher information,
//! quantum signal-to-noise ratio and the Fisher information of a σ_x
//! measurement.

use libm::{cos, exp, expm1, pow, sin};

use crate::dephasing::{DephasingEvaluator, DephasingMethod, Temperature};
use crate::special::{gamma, hurwitz_zeta_real};
use crate::spectral::{CutoffKind, SpectralDensity};
use crate::thermo::ProbeConfig;
use crate::{Error, Result};

/// Above this decoherence exponent 8λ²Δ the QFI is reported as zero.
pub const DECOHERENCE_GUARD: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QfiPoint {
    pub t: f64,
    /// Quantum Fisher information, units 1/T².
    pub qfi: f64,
    /// T² · QFI
    pub qsnr: f64,
    /// QSNR / t
    pub rate: f64,
    /// The guard fired: the coherence is below double precision.
    pub underflow: bool,
}

impl QfiPoint {
    fn zero(t: f64, underflow: bool) -> Self {
        Self {
            t,
            qfi: 0.0,
            qsnr: 0.0,
            rate: 0.0,
            underflow,
        }
    }
}

/// Two-level QFI [sinθ·4λ²∂_TΔ]² / (e^{8λ²Δ} − 1) from the kernel and its
/// temperature derivative; `None` when the guard fires.
pub fn two_level_qfi(lambda_eff: f64, theta: f64, delta: f64, d_delta: f64) -> Option<f64> {
    let l2 = lambda_eff * lambda_eff;
    let x = 8.0 * l2 * delta;
    if x > DECOHERENCE_GUARD {
        return None;
    }
    if x == 0.0 {
        return Some(0.0);
    }
    let num = sin(theta) * 4.0 * l2 * d_delta;
    Some(num * num / expm1(x))
}

fn temperature_of(ev: &DephasingEvaluator) -> Result<f64> {
    let temp = ev.temperature().value();
    if temp == 0.0 {
        return Err(Error::Domain {
            function: "qfi_temperature",
            reason: "temperature estimation requires T > 0",
        });
    }
    Ok(temp)
}

/// QFI, QSNR and QSNR rate at probing time `t`.
pub fn qfi_temperature(probe: &ProbeConfig, ev: &DephasingEvaluator, t: f64) -> Result<QfiPoint> {
    let temp = temperature_of(ev)?;
    let delta = ev.delta(t)?;
    if t == 0.0 {
        return Ok(QfiPoint::zero(t, false));
    }
    let d_delta = ev.delta_dt(t)?;
    Ok(match two_level_qfi(probe.lambda_eff(), probe.theta(), delta, d_delta) {
        None => QfiPoint::zero(t, true),
        Some(qfi) => {
            let qsnr = temp * temp * qfi;
            QfiPoint {
                t,
                qfi,
                qsnr,
                rate: qsnr / t,
                underflow: false,
            }
        }
    })
}

/// Outcome probabilities (p₊, p₋) of a σ_x measurement,
/// p± = (1 ± sinθ·e^{−4λ²Δ})/2.
pub fn sigma_x_probabilities(probe: &ProbeConfig, ev: &DephasingEvaluator, t: f64) -> Result<(f64, f64)> {
    let l = probe.lambda_eff();
    let c = sin(probe.theta()) * exp(-4.0 * l * l * ev.delta(t)?);
    Ok((0.5 * (1.0 + c), 0.5 * (1.0 - c)))
}

/// Classical Fisher information of the σ_x measurement,
/// Σ± (∂_T p±)²/p± = (sinθ ∂_T c)² / (1 − sin²θ c²) with c = e^{−4λ²Δ}.
pub fn classical_fisher_x(probe: &ProbeConfig, ev: &DephasingEvaluator, t: f64) -> Result<f64> {
    temperature_of(ev)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    let l2 = probe.lambda_eff() * probe.lambda_eff();
    let delta = ev.delta(t)?;
    let x = 4.0 * l2 * delta;
    if 2.0 * x > DECOHERENCE_GUARD {
        return Ok(0.0);
    }
    let d_delta = ev.delta_dt(t)?;
    let (st, ct) = (sin(probe.theta()), cos(probe.theta()));
    let c = exp(-x);
    let dc = -4.0 * l2 * d_delta * c;
    // 1 − sin²θ·c² = cos²θ − sin²θ·(e^{−2x} − 1)
    let denom = ct * ct - st * st * expm1(-2.0 * x);
    let num = st * dc;
    Ok(num * num / denom)
}

/// Leading low-temperature QFI for the exponential cutoff,
/// 16λ⁴s²(s+1)²Γ(s)²ζ(s+1)² t̃⁴ T̃^{2s} / [ω_c² (e^{8λ²Δ₀(t)} − 1)].
pub fn low_t_qfi(probe: &ProbeConfig, sd: &SpectralDensity, temperature: Temperature, t: f64) -> Result<f64> {
    if sd.cutoff() != CutoffKind::Exponential {
        return Err(Error::Domain {
            function: "low_t_qfi",
            reason: "leading-order form is derived for the exponential cutoff",
        });
    }
    let temp = temperature.value();
    if temp == 0.0 || t == 0.0 {
        return Ok(0.0);
    }
    let (s, wc) = (sd.s(), sd.omega_c());
    let vacuum = DephasingEvaluator::new(*sd, Temperature::zero(), DephasingMethod::Auto)?;
    let delta0 = vacuum.delta(t)?;
    let l2 = probe.lambda_eff() * probe.lambda_eff();
    let x = 8.0 * l2 * delta0;
    if x > DECOHERENCE_GUARD {
        return Ok(0.0);
    }
    let tt = t * wc;
    let amp = sin(probe.theta())
        * 4.0
        * l2
        * s
        * (s + 1.0)
        * gamma(s)?
        * hurwitz_zeta_real(s + 1.0, 1.0)?
        * tt
        * tt
        * pow(temp / wc, s)
        / wc;
    Ok(amp * amp / expm1(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn guard_fires_deep_in_dephased_regime() {
        assert_eq!(two_level_qfi(100.0, 1.0, 1.0, 1.0), None);
        assert_eq!(two_level_qfi(1.0, 1.0, 0.0, 1.0), Some(0.0));
    }

    #[test]
    fn zero_temperature_is_rejected() {
        let sd = SpectralDensity::new(1.0, 1.0, CutoffKind::Exponential).unwrap();
        let ev = DephasingEvaluator::new(sd, Temperature::zero(), DephasingMethod::Auto).unwrap();
        let p = ProbeConfig::qubit(1.0).unwrap();
        assert!(qfi_temperature(&p, &ev, 1.0).is_err());
        assert_eq!(low_t_qfi(&p, &sd, Temperature::zero(), 1.0).unwrap(), 0.0);
    }
}
