//! Time-optimal probing: maximise the QSNR rate 𝓡_T(t)/t over the shot
//! duration, the short-time (Zeno-regime) expansion of heat and QFI, and
//! parameter sweeps.

use alloc::vec::Vec;
use libm::{pow, sin, sqrt};

use crate::dephasing::{DephasingEvaluator, DephasingMethod, Temperature};
use crate::metrology::qfi_temperature;
use crate::optimize::{maximize_log_scan, ScanSettings};
use crate::special::{gamma, hurwitz_zeta_real};
use crate::spectral::{CutoffKind, QuadTolerance, SpectralDensity};
use crate::thermo::{absorbed_heat, ProbeConfig};
use crate::{Error, Result};

/// Search settings, times in units of 1/ω_c.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeOptSettings {
    pub t_lo: f64,
    pub t_hi: f64,
    pub points: usize,
    pub rel_width: f64,
}

impl Default for TimeOptSettings {
    fn default() -> Self {
        Self {
            t_lo: 1e-4,
            t_hi: 1e3,
            points: 200,
            rel_width: 1e-10,
        }
    }
}

impl TimeOptSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_lo > 0.0 && self.t_hi > self.t_lo && self.t_hi.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "bracket",
                value: self.t_lo,
                reason: "need 0 < t_lo < t_hi < ∞",
            });
        }
        if self.points < 3 {
            return Err(Error::InvalidParameter {
                name: "points",
                value: self.points as f64,
                reason: "scan needs at least 3 points",
            });
        }
        if !(self.rel_width > 0.0 && self.rel_width < 1.0) {
            return Err(Error::InvalidParameter {
                name: "rel_width",
                value: self.rel_width,
                reason: "relative bracket width must lie in (0, 1)",
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeOptResult {
    pub t_opt: f64,
    /// 𝕽_T = max_t 𝓡_T(t)/t
    pub rate: f64,
    pub qsnr_at_opt: f64,
    /// Q(t_opt)
    pub heat_at_opt: f64,
    /// Search interval in time units.
    pub bracket: (f64, f64),
    /// The maximum lies on an edge of the bracket.
    pub at_boundary: bool,
}

/// Rate maximisation over the default bracket t̃ ∈ [10⁻⁴, 10³].
pub fn optimize_rate(probe: &ProbeConfig, ev: &DephasingEvaluator) -> Result<TimeOptResult> {
    optimize_rate_with(probe, ev, &TimeOptSettings::default())
}

pub fn optimize_rate_with(
    probe: &ProbeConfig,
    ev: &DephasingEvaluator,
    settings: &TimeOptSettings,
) -> Result<TimeOptResult> {
    settings.validate()?;
    let wc = ev.spectral_density().omega_c();
    let scan = ScanSettings {
        lo: settings.t_lo / wc,
        hi: settings.t_hi / wc,
        points: settings.points,
        rel_width: settings.rel_width,
    };
    let best = maximize_log_scan(|t| qfi_temperature(probe, ev, t).map(|q| q.rate), &scan)?;
    if !(best.value >= 1e-300) {
        return Err(Error::FlatObjective {
            max_rate: best.value,
        });
    }
    let heat = absorbed_heat(probe, ev.spectral_density(), best.x)?;
    Ok(TimeOptResult {
        t_opt: best.x,
        rate: best.value,
        qsnr_at_opt: best.value * best.x,
        heat_at_opt: heat.heat,
        bracket: (scan.lo, scan.hi),
        at_boundary: best.at_boundary,
    })
}

/// Coefficients of the small-t̃ expansions, exponential cutoff, ω_c = 1:
///
/// Q/ω_c = λ²(q2 t̃² + q4 t̃⁴), Δ_T = d2 t̃² + d4 t̃⁴, 𝓕ω_c² = f2 t̃² + f4 t̃⁴.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShortTimeCoeffs {
    pub q2: f64,
    pub q4: f64,
    pub d2: f64,
    pub d4: f64,
    /// ∂_T̃ d2
    pub d2_dt: f64,
    /// ∂_T̃ d4
    pub d4_dt: f64,
    pub f2: f64,
    pub f4: f64,
    /// √(−f2/(3 f4)) in time units; `None` unless f4 < 0.
    pub t_opt_approx: Option<f64>,
}

/// T^k ζ(k, T+1) and its T-derivative.
fn thermal_moment(k: f64, temp: f64) -> Result<(f64, f64)> {
    let a = temp + 1.0;
    let z = hurwitz_zeta_real(k, a)?;
    let z1 = hurwitz_zeta_real(k + 1.0, a)?;
    let v = pow(temp, k) * z;
    let dv = k * pow(temp, k - 1.0) * z - k * pow(temp, k) * z1;
    Ok((v, dv))
}

pub fn short_time_coeffs(
    probe: &ProbeConfig,
    sd: &SpectralDensity,
    temperature: Temperature,
) -> Result<ShortTimeCoeffs> {
    if sd.cutoff() != CutoffKind::Exponential {
        return Err(Error::Domain {
            function: "short_time_coeffs",
            reason: "coefficients are derived for the exponential cutoff",
        });
    }
    let temp = temperature.value() / sd.omega_c();
    if temp == 0.0 {
        return Err(Error::Domain {
            function: "short_time_coeffs",
            reason: "QFI coefficients need T > 0",
        });
    }
    let s = sd.s();
    let l2 = probe.lambda_eff() * probe.lambda_eff();
    let q2 = gamma(s + 2.0)?;
    let q4 = -gamma(s + 4.0)? / 12.0;

    let (m2, m2_dt) = thermal_moment(s + 1.0, temp)?;
    let (m4, m4_dt) = thermal_moment(s + 3.0, temp)?;
    let g1 = 0.5 * gamma(s + 1.0)?;
    let g3 = -gamma(s + 3.0)? / 24.0;
    let d2 = g1 * (1.0 + 2.0 * m2);
    let d4 = g3 * (1.0 + 2.0 * m4);
    let d2_dt = 2.0 * g1 * m2_dt;
    let d4_dt = 2.0 * g3 * m4_dt;

    let st2 = sin(probe.theta()) * sin(probe.theta());
    let f2 = st2 * 2.0 * l2 * d2_dt * d2_dt / d2;
    let f4 = st2
        * (4.0 * l2 * d2_dt * d4_dt / d2
            - 2.0 * l2 * d2_dt * d2_dt * d4 / (d2 * d2)
            - 8.0 * l2 * l2 * d2_dt * d2_dt);
    let t_opt_approx = if f4 < 0.0 {
        Some(sqrt(-f2 / (3.0 * f4)) / sd.omega_c())
    } else {
        None
    };
    Ok(ShortTimeCoeffs {
        q2,
        q4,
        d2,
        d4,
        d2_dt,
        d4_dt,
        f2,
        f4,
        t_opt_approx,
    })
}

/// Grid of a time-optimisation sweep. Rows enumerate (s, cutoff, T̃, λ, j)
/// lexicographically in the order given.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub s: Vec<f64>,
    pub cutoffs: Vec<CutoffKind>,
    /// T/ω_c
    pub temperatures: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub spins: Vec<f64>,
    pub omega_c: f64,
    pub theta: f64,
    pub method: DephasingMethod,
    pub settings: TimeOptSettings,
    /// Overrides the evaluator's default quadrature tolerance.
    pub tolerance: Option<QuadTolerance>,
}

/// One grid tuple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub index: usize,
    pub s: f64,
    pub cutoff: CutoffKind,
    pub temperature: f64,
    pub lambda: f64,
    pub j: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub point: SweepPoint,
    /// t_opt·ω_c, 𝕽_T/ω_c, Q(t_opt)/ω_c and the boundary flag, or the error
    /// that stopped this row.
    pub outcome: core::result::Result<SweepValues, Error>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepValues {
    pub t_opt: f64,
    pub rate: f64,
    pub heat: f64,
    pub at_boundary: bool,
}

impl SweepGrid {
    pub fn points(&self) -> Vec<SweepPoint> {
        let mut out = Vec::new();
        for &s in &self.s {
            for &cutoff in &self.cutoffs {
                for &temperature in &self.temperatures {
                    for &lambda in &self.lambdas {
                        for &j in &self.spins {
                            out.push(SweepPoint {
                                index: out.len(),
                                s,
                                cutoff,
                                temperature,
                                lambda,
                                j,
                            });
                        }
                    }
                }
            }
        }
        out
    }

    /// Evaluate one grid tuple; errors are captured in the row.
    pub fn row(&self, point: &SweepPoint) -> SweepRow {
        SweepRow {
            point: *point,
            outcome: self.evaluate(point),
        }
    }

    fn evaluate(&self, p: &SweepPoint) -> Result<SweepValues> {
        let wc = self.omega_c;
        let sd = SpectralDensity::new(p.s, wc, p.cutoff)?;
        let mut ev = DephasingEvaluator::new(sd, Temperature::new(p.temperature * wc)?, self.method)?;
        if let Some(tol) = self.tolerance {
            ev = ev.with_tolerance(tol);
        }
        let probe = ProbeConfig::new(p.lambda, self.theta, p.j)?;
        let r = optimize_rate_with(&probe, &ev, &self.settings)?;
        Ok(SweepValues {
            t_opt: r.t_opt * wc,
            rate: r.rate / wc,
            heat: r.heat_at_opt / wc,
            at_boundary: r.at_boundary,
        })
    }
}

/// Sequential sweep in grid order.
pub fn sweep(grid: &SweepGrid) -> Vec<SweepRow> {
    grid.points().iter().map(|p| grid.row(p)).collect()
}
