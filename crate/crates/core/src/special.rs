//! Special functions used by the closed-form kernels: Gamma, Hurwitz zeta
//! with complex shift, ₁F₁ and ₁F₂.

use libm::{cos, exp, fabs, floor, pow, sin, sqrt};
use num_complex::Complex64;

use crate::dd::Dd;
use crate::{Error, Result};

/// Complex number used for the Hurwitz zeta shift parameter.
pub type ComplexValue = Complex64;

const SQRT_2PI: f64 = 2.506_628_274_631_000_7;
const PI: f64 = core::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

pub(crate) fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && floor(x) == x
}

/// sin(πx) with exact reduction of the argument.
fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * floor(x * 0.5);
    // r in [0, 2)
    let (r, sign) = if r >= 1.0 { (r - 1.0, -1.0) } else { (r, 1.0) };
    let v = if r <= 0.25 {
        sin(PI * r)
    } else if r <= 0.75 {
        cos(PI * (r - 0.5))
    } else {
        sin(PI * (1.0 - r))
    };
    sign * v
}

fn gamma_lanczos(x: f64) -> f64 {
    // x >= 0.5
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    // split the power so that large arguments do not overflow early
    let half = pow(t, 0.5 * (x + 0.5));
    SQRT_2PI * half * (half * exp(-t)) * acc
}

/// The Gamma function.
///
/// Non-positive integers are poles and return [`Error::Pole`].
pub fn gamma(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Domain {
            function: "gamma",
            reason: "NaN argument",
        });
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole {
            function: "gamma",
            at: x,
        });
    }
    if floor(x) == x && x <= 23.0 {
        // exact factorials
        return Ok((2..x as u64).fold(1.0, |acc, k| acc * k as f64));
    }
    if x < 0.5 {
        Ok(PI / (sin_pi(x) * gamma_lanczos(1.0 - x)))
    } else {
        Ok(gamma_lanczos(x))
    }
}

/// 1/Γ(x); zero at the poles of Γ.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        0.0
    } else if x < 0.5 {
        sin_pi(x) * gamma_lanczos(1.0 - x) / PI
    } else {
        1.0 / gamma_lanczos(x)
    }
}

// B_{2k} / (2k)!, k = 1..=10
const BERNOULLI_OVER_FACTORIAL: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
    -3_617.0 / 10_670_622_842_880_000.0,
    43_867.0 / 5_109_094_217_170_944_000.0,
    -174_611.0 / 802_857_662_698_291_200_000.0,
];

fn cpow_neg(w: Complex64, s: f64) -> Complex64 {
    (w.ln() * (-s)).exp()
}

/// Hurwitz zeta ζ(s, a) = Σ_{n≥0} (n + a)^{-s} for real `s ≠ 1` and complex
/// `a` with positive real part (analytically continued for `s < 1`).
///
/// Euler–Maclaurin summation: the shift is moved out to |a + N| ≥ R before
/// the Bernoulli correction (through B₂₀) is applied.
pub fn hurwitz_zeta(s: f64, a: ComplexValue) -> Result<ComplexValue> {
    if s == 1.0 {
        return Err(Error::Pole {
            function: "hurwitz_zeta",
            at: s,
        });
    }
    if !(a.re > 0.0) || !a.im.is_finite() || !s.is_finite() {
        return Err(Error::Domain {
            function: "hurwitz_zeta",
            reason: "requires Re(a) > 0 and finite arguments",
        });
    }
    let radius = 15.0 + 1.2 * fabs(s);
    let mut n_shift = 0usize;
    if a.norm() < radius {
        n_shift = (radius - a.re).max(0.0) as usize + 1;
    }

    let mut direct = Complex64::new(0.0, 0.0);
    for n in 0..n_shift {
        direct += cpow_neg(a + n as f64, s);
    }

    let w = a + n_shift as f64;
    let w_pow = cpow_neg(w, s); // w^{-s}
    let mut tail = w_pow * w / (s - 1.0) + w_pow * 0.5;

    let inv_w2 = (w * w).inv();
    // (s)_{2k-1} w^{-s-2k+1}, starting at k = 1
    let mut factor = w_pow / w * s;
    for (k, &coef) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let term = factor * coef;
        tail += term;
        if term.norm() <= 1e-18 * tail.norm() {
            break;
        }
        let k = (k + 1) as f64;
        factor = factor * inv_w2 * ((s + 2.0 * k - 1.0) * (s + 2.0 * k));
    }
    let out = direct + tail;
    if !out.re.is_finite() || !out.im.is_finite() {
        return Err(Error::Domain {
            function: "hurwitz_zeta",
            reason: "result not finite",
        });
    }
    Ok(out)
}

/// Real-argument convenience wrapper around [`hurwitz_zeta`].
pub fn hurwitz_zeta_real(s: f64, a: f64) -> Result<f64> {
    hurwitz_zeta(s, Complex64::new(a, 0.0)).map(|z| z.re)
}

/// Neumaier-compensated running sum.
#[derive(Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if fabs(self.sum) >= fabs(x) {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

const MAX_SERIES_TERMS: usize = 20_000;

/// Σ_{k≥first} (a)_k/(b)_k z^k/k!, f64 with compensated summation.
fn series_1f1(a: f64, b: f64, z: f64, first: usize) -> Result<f64> {
    let mut term = 1.0;
    let mut acc = CompensatedSum::default();
    if first == 0 {
        acc.add(1.0);
    }
    for k in 0..MAX_SERIES_TERMS {
        let kf = k as f64;
        term *= (a + kf) * z / ((b + kf) * (kf + 1.0));
        acc.add(term);
        if term == 0.0 {
            return Ok(acc.value());
        }
        let ratio = fabs((a + kf + 1.0) * z / ((b + kf + 1.0) * (kf + 2.0)));
        if ratio < 1.0 && fabs(term) <= 1e-17 * fabs(acc.value()) {
            return Ok(acc.value());
        }
    }
    Err(Error::SeriesNonConvergence {
        function: "hyp1f1",
        terms: MAX_SERIES_TERMS,
    })
}

/// Algebraic large-x expansion of ₁F₁(a; b; −x), optimally truncated.
fn asymptotic_1f1_negative(a: f64, b: f64, x: f64) -> Result<f64> {
    let pre = gamma(b)? * rgamma(b - a) * pow(x, -a);
    let mut sum = 1.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 0..200 {
        let kf = k as f64;
        term *= (a + kf) * (a - b + 1.0 + kf) / ((kf + 1.0) * x);
        if fabs(term) > last {
            break;
        }
        last = fabs(term);
        sum += term;
        if fabs(term) < 1e-17 * fabs(sum) {
            break;
        }
    }
    Ok(pre * sum)
}

fn check_not_pole(function: &'static str, b: f64) -> Result<()> {
    if is_nonpositive_integer(b) {
        Err(Error::Pole { function, at: b })
    } else {
        Ok(())
    }
}

/// Kummer's confluent hypergeometric function ₁F₁(a; b; z).
pub fn hyp1f1(a: f64, b: f64, z: f64) -> Result<f64> {
    check_not_pole("hyp1f1", b)?;
    if z == 0.0 {
        return Ok(1.0);
    }
    if is_nonpositive_integer(a) {
        return series_1f1(a, b, z, 0);
    }
    if z < 0.0 {
        let x = -z;
        if is_nonpositive_integer(b - a) {
            return Ok(exp(z) * series_1f1(b - a, b, x, 0)?);
        }
        if x >= 50.0 {
            return asymptotic_1f1_negative(a, b, x);
        }
        return Ok(exp(z) * series_1f1(b - a, b, x, 0)?);
    }
    let v = series_1f1(a, b, z, 0)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Domain {
            function: "hyp1f1",
            reason: "overflow for large positive argument",
        })
    }
}

/// ₁F₁(a; b; z) − 1 without cancellation for small |z|.
pub fn hyp1f1_minus_one(a: f64, b: f64, z: f64) -> Result<f64> {
    check_not_pole("hyp1f1", b)?;
    if fabs(z) < 1.0 {
        series_1f1(a, b, z, 1)
    } else {
        Ok(hyp1f1(a, b, z)? - 1.0)
    }
}

/// Beyond this |z| the ₁F₂ asymptotic expansion replaces the series.
const HYP1F2_ASYMPTOTIC_FROM: f64 = 300.0;

/// Σ_{k≥1} (a)_k/((b1)_k (b2)_k) z^k/k! in double-double arithmetic.
fn series_1f2_tail(a: f64, b1: f64, b2: f64, z: f64) -> Result<Dd> {
    let a = Dd::from(a);
    let b1 = Dd::from(b1);
    let b2 = Dd::from(b2);
    let z = Dd::from(z);
    let mut term = Dd::ONE;
    let mut sum = Dd::ZERO;
    for k in 0..MAX_SERIES_TERMS {
        let kd = Dd::from(k as f64);
        let num = (a + kd) * z;
        let den = (b1 + kd) * (b2 + kd) * Dd::from(k as f64 + 1.0);
        term = term * num / den;
        sum = sum + term;
        if term.hi == 0.0 {
            return Ok(sum);
        }
        let kn = k as f64 + 1.0;
        let ratio = fabs(
            (a.hi + kn) * z.hi / ((b1.hi + kn) * (b2.hi + kn) * (kn + 1.0)),
        );
        if ratio < 1.0 && term.abs().hi <= 1e-33 * (Dd::ONE + sum).abs().hi {
            return Ok(sum);
        }
    }
    Err(Error::SeriesNonConvergence {
        function: "hyp1f2",
        terms: MAX_SERIES_TERMS,
    })
}

/// Large-x expansion of ₁F₂(a; b1, b2; −x): algebraic part plus the
/// oscillating part y^μ cos(y + μπ/2 + …), y = 2√x, μ = a − b1 − b2 + ½.
fn asymptotic_1f2_negative(a: f64, b1: f64, b2: f64, x: f64) -> Result<f64> {
    let gb = gamma(b1)? * gamma(b2)?;

    let mut algebraic = 0.0;
    let alg_pre = gb * rgamma(b1 - a) * rgamma(b2 - a);
    if alg_pre != 0.0 {
        let mut sum = 1.0;
        let mut term = 1.0;
        let mut last = f64::INFINITY;
        for k in 0..200 {
            let kf = k as f64;
            term *= -(a + kf) * (1.0 + a - b1 + kf) * (1.0 + a - b2 + kf) / ((kf + 1.0) * x);
            if fabs(term) > last {
                break;
            }
            last = fabs(term);
            sum += term;
            if fabs(term) < 1e-17 * fabs(sum) {
                break;
            }
        }
        algebraic = alg_pre * pow(x, -a) * sum;
    }

    let mut oscillating = 0.0;
    let osc_pre = gb * rgamma(a);
    if osc_pre != 0.0 {
        let y = 2.0 * sqrt(x);
        let mu = a - b1 - b2 + 0.5;
        let q = |m: f64| {
            4.0 * b1 * b2 + 4.0 * b1 * m - 2.0 * b1 + 4.0 * b2 * m - 2.0 * b2 + 3.0 * m * m
                - 5.0 * m
                + 1.0
        };
        let r = |m: f64| m * (2.0 * b1 + m - 2.0) * (2.0 * b2 + m - 2.0);
        let i = Complex64::new(0.0, 1.0);
        let mut c_prev2 = Complex64::new(0.0, 0.0);
        let mut c_prev = Complex64::new(1.0, 0.0);
        let mut sum = c_prev;
        let mut y_pow = 1.0;
        let mut last = f64::INFINITY;
        for k in 1..200 {
            let kf = k as f64;
            let c = -(i * q(mu - kf + 1.0) * c_prev + c_prev2 * r(mu - kf + 2.0)) / (2.0 * kf);
            y_pow /= y;
            let term = c * y_pow;
            let size = term.norm();
            if size > last {
                break;
            }
            last = size;
            sum += term;
            if size < 1e-17 * sum.norm() {
                break;
            }
            c_prev2 = c_prev;
            c_prev = c;
        }
        let phase = y + mu * PI * 0.5;
        let rot = Complex64::new(cos(phase), sin(phase));
        oscillating = osc_pre * pow(2.0, -mu) / sqrt(PI) * pow(y, mu) * (rot * sum).re;
    }
    Ok(algebraic + oscillating)
}

/// The generalized hypergeometric function ₁F₂(a; b1, b2; z).
pub fn hyp1f2(a: f64, b1: f64, b2: f64, z: f64) -> Result<f64> {
    Ok(hyp1f2_minus_one(a, b1, b2, z)? + 1.0)
}

/// ₁F₂(a; b1, b2; z) − 1, accurate also when the result is close to one.
pub fn hyp1f2_minus_one(a: f64, b1: f64, b2: f64, z: f64) -> Result<f64> {
    check_not_pole("hyp1f2", b1)?;
    check_not_pole("hyp1f2", b2)?;
    if z == 0.0 {
        return Ok(0.0);
    }
    if z < -HYP1F2_ASYMPTOTIC_FROM && !is_nonpositive_integer(a) {
        return Ok(asymptotic_1f2_negative(a, b1, b2, -z)? - 1.0);
    }
    let v = series_1f2_tail(a, b1, b2, z)?.to_f64();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Domain {
            function: "hyp1f2",
            reason: "overflow for large positive argument",
        })
    }
}

/// Rising factorial (x)_n.
pub fn pochhammer(x: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (x + k as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        fabs(a - b) / fabs(b)
    }

    #[test]
    fn gamma_known_values() {
        assert_eq!(gamma(1.0).unwrap(), 1.0);
        assert!(rel(gamma(0.5).unwrap(), 1.772_453_850_905_516) < 1e-14);
        assert!(rel(gamma(5.0).unwrap(), 24.0) < 1e-14);
        assert!(rel(gamma(-0.5).unwrap(), -3.544_907_701_811_032) < 1e-14);
    }

    #[test]
    fn gamma_poles() {
        assert!(matches!(gamma(0.0), Err(Error::Pole { .. })));
        assert!(matches!(gamma(-3.0), Err(Error::Pole { .. })));
        assert_eq!(rgamma(-2.0), 0.0);
    }

    #[test]
    fn zeta_two_one_is_basel() {
        let z = hurwitz_zeta(2.0, Complex64::new(1.0, 0.0)).unwrap();
        assert!(rel(z.re, PI * PI / 6.0) < 1e-14);
        assert_eq!(z.im, 0.0);
    }

    #[test]
    fn zeta_pole_and_domain() {
        assert!(matches!(
            hurwitz_zeta(1.0, Complex64::new(1.0, 0.0)),
            Err(Error::Pole { .. })
        ));
        assert!(matches!(
            hurwitz_zeta(2.0, Complex64::new(-0.5, 1.0)),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn zeta_continuation_matches_known() {
        // ζ(0, a) = 1/2 − a; ζ(−1, a) = −B₂(a)/2 = −(a² − a + 1/6)/2
        let a = Complex64::new(2.5, 0.7);
        let z0 = hurwitz_zeta(0.0, a).unwrap();
        let want0 = Complex64::new(0.5, 0.0) - a;
        assert!((z0 - want0).norm() < 1e-13);
        let z1 = hurwitz_zeta(-1.0, a).unwrap();
        let want1 = -(a * a - a + 1.0 / 6.0) * 0.5;
        assert!((z1 - want1).norm() < 1e-12 * want1.norm());
    }

    #[test]
    fn hyp1f1_elementary() {
        assert_eq!(hyp1f1(0.3, 0.7, 0.0).unwrap(), 1.0);
        assert!(rel(hyp1f1(1.0, 1.0, 2.0).unwrap(), exp(2.0)) < 1e-14);
        // ₁F₁(1/2; 1/2; −x) = e^{−x}, handled through the terminating branch
        assert!(rel(hyp1f1(0.5, 0.5, -300.0).unwrap(), exp(-300.0)) < 1e-12);
        // ₁F₁(3/2; 1/2; −x) = e^{−x}(1 − 2x)
        let x = 80.0;
        assert!(rel(hyp1f1(1.5, 0.5, -x).unwrap(), exp(-x) * (1.0 - 2.0 * x)) < 1e-12);
        assert!(matches!(hyp1f1(1.0, -2.0, 1.0), Err(Error::Pole { .. })));
    }

    #[test]
    fn hyp1f2_elementary() {
        assert_eq!(hyp1f2(0.4, 0.5, 1.5, 0.0).unwrap(), 1.0);
        // ₁F₂(1; 1/2, 2; −x) = sin²(√x)/x... check via 1 − cos: a=1,b1=1/2,b2=2
        // ∫₀¹ ω⁰ cos(ωt) dω = sin t / t = ₁F₂(1/2; 1/2, 3/2; −t²/4) = ₀F₁(;3/2;−t²/4)
        for &t in &[0.3, 3.0, 30.0, 60.0, 150.0] {
            let v = hyp1f2(0.5, 0.5, 1.5, -t * t / 4.0).unwrap();
            assert!(fabs(v - sin(t) / t) < 1e-13, "t={t}: {v} vs {}", sin(t) / t);
        }
    }
}
