//! Temperature-dependent dephasing kernel
//!
//! Δ_T(t) = ∫₀^∞ J(ω) (1 − cos ωt)/ω² · coth(ω/2T) dω
//!
//! and its temperature derivative, by adaptive quadrature for any cutoff or
//! by the Hurwitz-zeta closed form for the exponential cutoff.

use libm::{atan, cos, expm1, fabs, log1p, pow, sin};
use num_complex::Complex64;

use crate::special::{gamma, hurwitz_zeta, hurwitz_zeta_real};
use crate::spectral::{integrate_kernel, CutoffKind, KernelHints, QuadTolerance, SpectralDensity};
use crate::{Error, Result};

/// Half-width of the exclusion bands around s = 1 and s = 2 where the closed
/// form is not evaluated.
pub const POLE_BAND: f64 = 1e-3;

/// Above this value of ω/2T, coth(ω/2T) is 1 in double precision.
const COTH_SATURATION: f64 = 35.0;

/// Bath temperature in frequency units (k_B = ħ = 1). Zero is the vacuum limit.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Temperature(f64);

impl Temperature {
    pub fn new(value: f64) -> Result<Self> {
        if !(value >= 0.0) || !value.is_finite() {
            return Err(Error::InvalidParameter {
                name: "T",
                value,
                reason: "temperature must be finite and non-negative",
            });
        }
        Ok(Self(value))
    }

    pub const fn zero() -> Self {
        Self(0.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DephasingMethod {
    Quadrature,
    ClosedFormExp,
    /// Closed form where it is valid, quadrature elsewhere.
    Auto,
}

/// Whether the closed form may be used for `sd`.
pub fn closed_form_valid(sd: &SpectralDensity) -> bool {
    sd.cutoff() == CutoffKind::Exponential && !pole_adjacent(sd.s())
}

fn pole_adjacent(s: f64) -> bool {
    fabs(s - 1.0) < POLE_BAND || fabs(s - 2.0) < POLE_BAND
}

fn check_closed_form(s: f64) -> Result<()> {
    if pole_adjacent(s) {
        return Err(Error::PoleAdjacent { s, band: POLE_BAND });
    }
    Ok(())
}

/// Evaluator bound to one spectral density and temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DephasingEvaluator {
    sd: SpectralDensity,
    temperature: Temperature,
    closed_form: bool,
    tolerance: QuadTolerance,
}

impl DephasingEvaluator {
    pub fn new(sd: SpectralDensity, temperature: Temperature, method: DephasingMethod) -> Result<Self> {
        let closed_form = match method {
            DephasingMethod::Quadrature => false,
            DephasingMethod::Auto => closed_form_valid(&sd),
            DephasingMethod::ClosedFormExp => {
                if sd.cutoff() != CutoffKind::Exponential {
                    return Err(Error::Domain {
                        function: "delta_closed_exp",
                        reason: "closed form requires the exponential cutoff",
                    });
                }
                check_closed_form(sd.s())?;
                true
            }
        };
        Ok(Self {
            sd,
            temperature,
            closed_form,
            tolerance: QuadTolerance {
                rel: 1e-12,
                ..QuadTolerance::default()
            },
        })
    }

    /// Replace the quadrature tolerance.
    pub fn with_tolerance(mut self, tolerance: QuadTolerance) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn spectral_density(&self) -> &SpectralDensity {
        &self.sd
    }

    pub fn temperature(&self) -> Temperature {
        self.temperature
    }

    pub fn tolerance(&self) -> QuadTolerance {
        self.tolerance
    }

    /// The method actually used after `Auto` dispatch.
    pub fn method(&self) -> DephasingMethod {
        if self.closed_form {
            DephasingMethod::ClosedFormExp
        } else {
            DephasingMethod::Quadrature
        }
    }

    /// Same bath at another temperature.
    pub fn at_temperature(&self, temperature: Temperature) -> Self {
        Self {
            temperature,
            ..*self
        }
    }

    /// Δ_T(t)
    pub fn delta(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        if t == 0.0 {
            return Ok(0.0);
        }
        if self.closed_form {
            delta_closed_exp(self.sd.s(), self.sd.omega_c(), self.temperature, t)
        } else {
            delta_quadrature(&self.sd, self.temperature, t, &self.tolerance)
        }
    }

    /// ∂_T Δ_T(t); requires T > 0.
    pub fn delta_dt(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        let temp = self.temperature.value();
        if temp == 0.0 {
            return Err(Error::Domain {
                function: "delta_dT",
                reason: "temperature derivative is undefined at T = 0",
            });
        }
        if t == 0.0 {
            return Ok(0.0);
        }
        if self.closed_form {
            delta_dt_closed_exp(self.sd.s(), self.sd.omega_c(), temp, t)
        } else {
            delta_dt_quadrature(&self.sd, temp, t, &self.tolerance)
        }
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter {
            name: "t",
            value: t,
            reason: "time must be finite and non-negative",
        });
    }
    Ok(())
}

/// Δ_T(t) for the evaluator's bath.
pub fn delta_kernel(ev: &DephasingEvaluator, t: f64) -> Result<f64> {
    ev.delta(t)
}

/// ∂_T Δ_T(t) for the evaluator's bath.
pub fn delta_dt(ev: &DephasingEvaluator, t: f64) -> Result<f64> {
    ev.delta_dt(t)
}

/// coth(x) − 1 = 2/(e^{2x} − 1)
fn coth_minus_one(x: f64) -> f64 {
    if x > COTH_SATURATION {
        0.0
    } else {
        2.0 / expm1(2.0 * x)
    }
}

/// x / sinh²(x)
fn x_over_sinh_sq(x: f64) -> f64 {
    if x > 370.0 {
        return 0.0;
    }
    let e = expm1(-2.0 * x);
    4.0 * x * libm::exp(-2.0 * x) / (e * e)
}

fn hints(temp: f64, t: f64) -> KernelHints {
    KernelHints {
        oscillation: Some(t),
        scale: if temp > 0.0 { Some(2.0 * temp) } else { None },
    }
}

fn delta_quadrature(sd: &SpectralDensity, temperature: Temperature, t: f64, tol: &QuadTolerance) -> Result<f64> {
    let temp = temperature.value();
    let integrand = |w: f64| {
        let half = sin(0.5 * w * t);
        let base = sd.j_over_omega(w) / w * 2.0 * half * half;
        if base == 0.0 {
            return 0.0;
        }
        let coth = if temp > 0.0 {
            1.0 + coth_minus_one(0.5 * w / temp)
        } else {
            1.0
        };
        base * coth
    };
    integrate_kernel(sd, integrand, &hints(temp, t), tol).map(|q| q.value)
}

fn delta_dt_quadrature(sd: &SpectralDensity, temp: f64, t: f64, tol: &QuadTolerance) -> Result<f64> {
    let integrand = |w: f64| {
        let half = sin(0.5 * w * t);
        let base = sd.j_over_omega(w) / w * 2.0 * half * half;
        if base == 0.0 {
            return 0.0;
        }
        base * x_over_sinh_sq(0.5 * w / temp) / temp
    };
    integrate_kernel(sd, integrand, &hints(temp, t), tol).map(|q| q.value)
}

/// 1 − (1+t²)^{−σ/2} cos(σ·atan t), free of cancellation for small t.
pub(crate) fn vacuum_bracket(sigma: f64, t: f64) -> f64 {
    let x = -0.5 * sigma * log1p(t * t);
    let y = sigma * atan(t);
    let hs = sin(0.5 * y);
    -expm1(x) * cos(y) + 2.0 * hs * hs
}

/// Switch to the Taylor expansion in b = t̃T̃ below this ratio b/(T̃+1).
const TAYLOR_RATIO: f64 = 0.3;
const TAYLOR_MAX_TERMS: usize = 80;

/// 2ζ(σ, a) − 2 Re ζ(σ, a + ib)
fn zeta_real_difference(sigma: f64, a: f64, b: f64) -> Result<f64> {
    if b < TAYLOR_RATIO * a {
        // −2 Σ_{m≥1} (−1)^m b^{2m} (σ)_{2m} ζ(σ+2m, a) / (2m)!
        let mut coef = 1.0;
        let mut sum = 0.0;
        for m in 1..=TAYLOR_MAX_TERMS {
            let k = 2.0 * m as f64;
            coef *= -b * b * (sigma + k - 2.0) * (sigma + k - 1.0) / ((k - 1.0) * k);
            let term = coef * hurwitz_zeta_real(sigma + k, a)?;
            sum += term;
            if fabs(term) <= 1e-17 * fabs(sum) || coef == 0.0 {
                return Ok(-2.0 * sum);
            }
        }
        return Err(Error::SeriesNonConvergence {
            function: "zeta_real_difference",
            terms: TAYLOR_MAX_TERMS,
        });
    }
    let z0 = hurwitz_zeta_real(sigma, a)?;
    let z = hurwitz_zeta(sigma, Complex64::new(a, b))?;
    Ok(2.0 * (z0 - z.re))
}

/// Im ζ(σ, a + ib)
fn zeta_imag(sigma: f64, a: f64, b: f64) -> Result<f64> {
    if b < TAYLOR_RATIO * a {
        // −Σ_{m≥0} (−1)^m b^{2m+1} (σ)_{2m+1} ζ(σ+2m+1, a) / (2m+1)!
        let mut coef = b * sigma;
        let mut sum = 0.0;
        for m in 0..TAYLOR_MAX_TERMS {
            let k = 2.0 * m as f64 + 1.0;
            if m > 0 {
                coef *= -b * b * (sigma + k - 2.0) * (sigma + k - 1.0) / ((k - 1.0) * k);
            }
            let term = coef * hurwitz_zeta_real(sigma + k, a)?;
            sum += term;
            if fabs(term) <= 1e-17 * fabs(sum) || coef == 0.0 {
                return Ok(-sum);
            }
        }
        return Err(Error::SeriesNonConvergence {
            function: "zeta_imag",
            terms: TAYLOR_MAX_TERMS,
        });
    }
    Ok(hurwitz_zeta(sigma, Complex64::new(a, b))?.im)
}

/// Closed form of Δ_T(t) for the exponential cutoff:
///
/// Δ_T = Γ(s−1){1 − (1+t̃²)^{(1−s)/2} cos[(s−1) atan t̃]}
///     + Γ(s−1) T̃^{s−1} [2ζ(s−1, 1+T̃) − ζ(s−1, 1+T̃+it̃T̃) − ζ(s−1, 1+T̃−it̃T̃)]
///
/// with t̃ = tω_c and T̃ = T/ω_c.
pub fn delta_closed_exp(s: f64, omega_c: f64, temperature: Temperature, t: f64) -> Result<f64> {
    SpectralDensity::new(s, omega_c, CutoffKind::Exponential)?;
    check_closed_form(s)?;
    check_time(t)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    let tt = t * omega_c;
    let temp = temperature.value() / omega_c;
    let sigma = s - 1.0;
    let g = gamma(sigma)?;
    let vacuum = g * vacuum_bracket(sigma, tt);
    if temp == 0.0 {
        return Ok(vacuum);
    }
    let thermal = g * pow(temp, sigma) * zeta_real_difference(sigma, 1.0 + temp, tt * temp)?;
    Ok(vacuum + thermal)
}

/// Temperature derivative of [`delta_closed_exp`], from ∂_a ζ(σ, a) = −σ ζ(σ+1, a).
fn delta_dt_closed_exp(s: f64, omega_c: f64, temperature: f64, t: f64) -> Result<f64> {
    check_closed_form(s)?;
    let tt = t * omega_c;
    let temp = temperature / omega_c;
    let sigma = s - 1.0;
    let a = 1.0 + temp;
    let b = tt * temp;
    let g = gamma(sigma)?;
    let d0 = zeta_real_difference(sigma, a, b)?;
    let d1 = zeta_real_difference(sigma + 1.0, a, b)?;
    let im = zeta_imag(sigma + 1.0, a, b)?;
    let dimensionless = g
        * sigma
        * (pow(temp, sigma - 1.0) * d0 - pow(temp, sigma) * (d1 + 2.0 * tt * im));
    Ok(dimensionless / omega_c)
}
