//! Heat absorbed by the environment during pure-dephasing probing.
//!
//! The λ-free kernel 𝕼(t) = ∫₀^∞ J(ω)(1 − cos ωt)/ω dω gives the heat
//! Q(t) = 2λ_eff² 𝕼(t). Nothing here depends on the bath temperature.

use libm::{fabs, sin};

use crate::dephasing::vacuum_bracket;
use crate::special::{gamma, hyp1f1_minus_one, hyp1f2_minus_one};
use crate::spectral::{integrate_kernel, CutoffKind, KernelHints, QuadTolerance, SpectralDensity};
use crate::{Error, Result};

/// Qubit or spin-j probe coupled through A_S = λ J_z, prepared in
/// cos(θ/2)|0⟩ + sin(θ/2)|1⟩ (or the corresponding cat state).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeConfig {
    lambda: f64,
    theta: f64,
    two_j: u32,
}

impl ProbeConfig {
    /// `j` must be a positive half-integer.
    pub fn new(lambda: f64, theta: f64, j: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidParameter {
                name: "lambda",
                value: lambda,
                reason: "coupling must be positive",
            });
        }
        if !(0.0..=core::f64::consts::PI).contains(&theta) {
            return Err(Error::InvalidParameter {
                name: "theta",
                value: theta,
                reason: "angle must lie in [0, π]",
            });
        }
        let two_j = 2.0 * j;
        if !(two_j >= 1.0) || two_j != libm::round(two_j) || two_j > 1e6 {
            return Err(Error::InvalidParameter {
                name: "j",
                value: j,
                reason: "spin must be a positive half-integer",
            });
        }
        Ok(Self {
            lambda,
            theta,
            two_j: two_j as u32,
        })
    }

    /// Spin-½ probe in the balanced superposition θ = π/2.
    pub fn qubit(lambda: f64) -> Result<Self> {
        Self::new(lambda, core::f64::consts::FRAC_PI_2, 0.5)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn j(&self) -> f64 {
        0.5 * self.two_j as f64
    }

    /// Hilbert-space dimension 2j + 1.
    pub fn dimension(&self) -> usize {
        self.two_j as usize + 1
    }

    /// Qubit-equivalent coupling 2jλ of the cat-state probe.
    pub fn lambda_eff(&self) -> f64 {
        self.two_j as f64 * self.lambda
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HeatMethod {
    Quadrature,
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatResult {
    /// 𝕼(t), frequency units.
    pub kernel: f64,
    /// Q(t) = 2λ_eff² 𝕼(t), frequency units.
    pub heat: f64,
}

/// 𝕼(t) by the requested method.
pub fn q_kernel(sd: &SpectralDensity, t: f64, method: HeatMethod) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter {
            name: "t",
            value: t,
            reason: "time must be finite and non-negative",
        });
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    match method {
        HeatMethod::ClosedForm => q_closed(sd, t),
        HeatMethod::Quadrature => q_quadrature(sd, t),
    }
}

fn q_closed(sd: &SpectralDensity, t: f64) -> Result<f64> {
    let (s, wc) = (sd.s(), sd.omega_c());
    let tt = t * wc;
    let z = -0.25 * tt * tt;
    Ok(match sd.cutoff() {
        // ω_cΓ(s)[1 − cos(s·atan t̃)/(1+t̃²)^{s/2}]
        CutoffKind::Exponential => wc * gamma(s)? * vacuum_bracket(s, tt),
        // ½ω_cΓ(s/2)[1 − ₁F₁(s/2; ½; −t̃²/4)]
        CutoffKind::Gaussian => -0.5 * wc * gamma(0.5 * s)? * hyp1f1_minus_one(0.5 * s, 0.5, z)?,
        // (ω_c/s)[1 − ₁F₂(s/2; ½, s/2+1; −t̃²/4)]
        CutoffKind::Hard => -wc / s * hyp1f2_minus_one(0.5 * s, 0.5, 0.5 * s + 1.0, z)?,
    })
}

fn q_quadrature(sd: &SpectralDensity, t: f64) -> Result<f64> {
    let tol = QuadTolerance {
        rel: 1e-12,
        ..QuadTolerance::default()
    };
    let integrand = |w: f64| {
        let half = sin(0.5 * w * t);
        sd.j_over_omega(w) * 2.0 * half * half
    };
    let hints = KernelHints {
        oscillation: Some(t),
        scale: None,
    };
    integrate_kernel(sd, integrand, &hints, &tol).map(|q| q.value)
}

/// Heat absorbed by the environment after probing for time `t`.
pub fn absorbed_heat(probe: &ProbeConfig, sd: &SpectralDensity, t: f64) -> Result<HeatResult> {
    let kernel = q_kernel(sd, t, HeatMethod::ClosedForm)?;
    let l = probe.lambda_eff();
    Ok(HeatResult {
        kernel,
        heat: 2.0 * l * l * kernel,
    })
}

/// lim_{t→∞} 𝕼(t). The hard cutoff keeps oscillating around this value.
pub fn q_asymptotic(sd: &SpectralDensity) -> f64 {
    let (s, wc) = (sd.s(), sd.omega_c());
    match sd.cutoff() {
        CutoffKind::Exponential => wc * gamma(s).unwrap_or(f64::INFINITY),
        CutoffKind::Gaussian => 0.5 * wc * gamma(0.5 * s).unwrap_or(f64::INFINITY),
        CutoffKind::Hard => wc / s,
    }
}

/// Relative distance of the kernel from its asymptote.
pub fn relative_to_asymptote(sd: &SpectralDensity, t: f64) -> Result<f64> {
    let a = q_asymptotic(sd);
    Ok(fabs(q_kernel(sd, t, HeatMethod::ClosedForm)? - a) / a)
}
