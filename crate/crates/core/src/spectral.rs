//! Ohmic-like spectral densities J(ω) = ω (ω/ω_c)^{s−1} C(ω, ω_c) and the
//! adaptive Gauss–Kronrod engine shared by every frequency integral.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use libm::{exp, fabs, pow};

use crate::{Error, Result};

/// High-frequency cutoff C(ω, ω_c).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CutoffKind {
    /// e^{−ω/ω_c}
    Exponential,
    /// e^{−ω²/ω_c²}
    Gaussian,
    /// Θ(ω_c − ω)
    Hard,
}

impl CutoffKind {
    pub fn name(self) -> &'static str {
        match self {
            CutoffKind::Exponential => "exponential",
            CutoffKind::Gaussian => "gaussian",
            CutoffKind::Hard => "hard",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralDensity {
    s: f64,
    omega_c: f64,
    cutoff: CutoffKind,
}

impl SpectralDensity {
    pub fn new(s: f64, omega_c: f64, cutoff: CutoffKind) -> Result<Self> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::InvalidParameter {
                name: "s",
                value: s,
                reason: "Ohmicity must be positive",
            });
        }
        if !(omega_c > 0.0) || !omega_c.is_finite() {
            return Err(Error::InvalidParameter {
                name: "omega_c",
                value: omega_c,
                reason: "cutoff frequency must be positive",
            });
        }
        Ok(Self { s, omega_c, cutoff })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    pub fn cutoff(&self) -> CutoffKind {
        self.cutoff
    }

    /// C(ω, ω_c)
    pub fn cutoff_factor(&self, omega: f64) -> f64 {
        let u = omega / self.omega_c;
        match self.cutoff {
            CutoffKind::Exponential => exp(-u),
            CutoffKind::Gaussian => exp(-u * u),
            CutoffKind::Hard => {
                if u <= 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// J(ω)
    pub fn eval_j(&self, omega: f64) -> f64 {
        if omega <= 0.0 {
            return 0.0;
        }
        omega * pow(omega / self.omega_c, self.s - 1.0) * self.cutoff_factor(omega)
    }

    /// J(ω)/ω = (ω/ω_c)^{s−1} C(ω, ω_c), the combination most kernels need.
    pub fn j_over_omega(&self, omega: f64) -> f64 {
        if omega <= 0.0 {
            return 0.0;
        }
        pow(omega / self.omega_c, self.s - 1.0) * self.cutoff_factor(omega)
    }

    /// Frequency beyond which the cutoff has removed the density to double
    /// precision; the remaining tail is still integrated, without
    /// oscillation breakpoints.
    fn effective_support(&self) -> f64 {
        match self.cutoff {
            CutoffKind::Exponential => self.omega_c * (40.0 + 2.0 * self.s),
            CutoffKind::Gaussian => self.omega_c * (7.0 + 0.3 * self.s),
            CutoffKind::Hard => self.omega_c,
        }
    }
}

/// Requested accuracy of a quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadTolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_panels: usize,
}

impl Default for QuadTolerance {
    fn default() -> Self {
        Self {
            abs: 1e-300,
            rel: 1e-10,
            max_panels: 200_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadEstimate {
    pub value: f64,
    pub abs_error: f64,
    pub panels: usize,
}

// 15-point Kronrod extension of the 7-point Gauss rule (abscissae, weights)
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One Gauss–Kronrod 7/15 panel with the usual rescaled error estimate.
fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<Panel> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    if fc.is_nan() {
        return Err(Error::NanIntegrand { at: center });
    }
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = fabs(res_k);
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let x1 = center - dx;
        let x2 = center + dx;
        let f1 = f(x1);
        let f2 = f(x2);
        if f1.is_nan() {
            return Err(Error::NanIntegrand { at: x1 });
        }
        if f2.is_nan() {
            return Err(Error::NanIntegrand { at: x2 });
        }
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (fabs(f1) + fabs(f2));
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = res_k * 0.5;
    let mut res_asc = WGK[7] * fabs(fc - mean);
    for j in 0..7 {
        res_asc += WGK[j] * (fabs(fv1[j] - mean) + fabs(fv2[j] - mean));
    }
    let value = res_k * half;
    let res_abs = res_abs * fabs(half);
    let res_asc = res_asc * fabs(half);
    let mut err = fabs((res_k - res_g) * half);
    if res_asc != 0.0 && err != 0.0 {
        let scale = pow(200.0 * err / res_asc, 1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Panel {
        a,
        b,
        value,
        error: err,
    })
}

/// Globally adaptive Gauss–Kronrod quadrature over consecutive panels
/// `breaks[0]..breaks[1]..…`. The panel with the largest error estimate is
/// bisected until the summed estimate meets the tolerance.
pub fn integrate_adaptive<F: FnMut(f64) -> f64>(
    mut f: F,
    breaks: &[f64],
    tol: &QuadTolerance,
) -> Result<QuadEstimate> {
    let mut heap = BinaryHeap::with_capacity(breaks.len() * 2);
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            let p = gk15(&mut f, w[0], w[1])?;
            total += p.value;
            total_err += p.error;
            heap.push(p);
        }
    }
    // panels too narrow to split further
    let mut frozen_value = 0.0;
    let mut frozen_err = 0.0;
    loop {
        let target = tol.abs.max(tol.rel * fabs(total));
        if total_err <= target {
            break;
        }
        if heap.len() >= tol.max_panels {
            return Err(Error::QuadratureNonConvergence {
                value: total,
                achieved_error: total_err,
                panels: heap.len(),
            });
        }
        let worst = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) || (worst.b - worst.a) < 1e-15 * fabs(mid) {
            frozen_value += worst.value;
            frozen_err += worst.error;
            if heap.is_empty() {
                break;
            }
            continue;
        }
        let left = gk15(&mut f, worst.a, mid)?;
        let right = gk15(&mut f, mid, worst.b)?;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // resum to shed drift from the incremental updates
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let mut value = frozen_value;
    let mut err = frozen_err;
    for p in &panels {
        value += p.value;
        err += p.error;
    }
    Ok(QuadEstimate {
        value,
        abs_error: err,
        panels: panels.len(),
    })
}

/// ∫_{a}^{∞} f(ω) dω via ω = a + L·u/(1−u), u ∈ [0, 1).
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    length_scale: f64,
    tol: &QuadTolerance,
) -> Result<QuadEstimate> {
    let mapped = |u: f64| {
        let v = 1.0 - u;
        let omega = a + length_scale * u / v;
        let jac = length_scale / (v * v);
        let fx = f(omega);
        if fx == 0.0 {
            0.0
        } else {
            fx * jac
        }
    };
    integrate_adaptive(mapped, &[0.0, 0.5, 0.75, 0.9, 1.0], tol)
}

/// Shape hints that set up the initial panels of a kernel integral.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct KernelHints {
    /// Angular frequency t of a cos(ωt) factor; panels are cut at its zeros
    /// when the integrand would otherwise oscillate many times per panel.
    pub oscillation: Option<f64>,
    /// Additional frequency scale (e.g. the temperature) at which the
    /// integrand changes shape.
    pub scale: Option<f64>,
}

fn kernel_breakpoints(sd: &SpectralDensity, upper: f64, hints: &KernelHints) -> Vec<f64> {
    let wc = sd.omega_c();
    let mut pts: Vec<f64> = Vec::new();
    pts.push(0.0);
    let mut scales: Vec<f64> = Vec::new();
    scales.push(wc);
    if let Some(t) = hints.oscillation {
        if t > 0.0 {
            scales.push(1.0 / t);
        }
    }
    if let Some(sc) = hints.scale {
        if sc > 0.0 {
            scales.push(sc);
        }
    }
    for &sc in &scales {
        for m in [1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0] {
            let w = sc * m;
            if w > 0.0 && w < upper {
                pts.push(w);
            }
        }
    }
    if let Some(t) = hints.oscillation {
        // zeros of cos(ωt): (k + ½)π/t
        if t * upper > 50.0 {
            let period = core::f64::consts::PI / t;
            let mut k = 0.5;
            while k * period < upper {
                pts.push(k * period);
                k += 1.0;
            }
        }
    }
    pts.push(upper);
    pts.sort_by(|a, b| a.total_cmp(b));
    pts.dedup();
    pts
}

/// ∫₀^∞ f(ω) dω for an integrand built on top of `sd`. With a hard cutoff
/// the domain is truncated exactly at ω_c.
pub fn integrate_kernel<F: FnMut(f64) -> f64>(
    sd: &SpectralDensity,
    mut f: F,
    hints: &KernelHints,
    tol: &QuadTolerance,
) -> Result<QuadEstimate> {
    let upper = sd.effective_support();
    let breaks = kernel_breakpoints(sd, upper, hints);
    let head = integrate_adaptive(&mut f, &breaks, tol)?;
    if sd.cutoff() == CutoffKind::Hard {
        return Ok(head);
    }
    let tail_tol = QuadTolerance {
        abs: tol.abs.max(tol.rel * fabs(head.value)),
        ..*tol
    };
    let tail = integrate_to_infinity(&mut f, upper, sd.omega_c(), &tail_tol)?;
    Ok(QuadEstimate {
        value: head.value + tail.value,
        abs_error: head.abs_error + tail.abs_error,
        panels: head.panels + tail.panels,
    })
}
