//! Channel quantum Fisher information of the spin-j dephasing channel
//! ρ ↦ E∘ρ with E_ij = e^{−Δ(i−j)²}.
//!
//! The channel has a Kraus representation of diagonal operators built from
//! the eigenpairs of E. The ancilla-assisted QFI is
//!
//!   4 min_h ‖Σ_k (K̇_k − i Σ_j h_kj K_j)†(K̇_k − i Σ_j h_kj K_j)‖
//!
//! over Hermitian h. With diagonal operators the matrix inside the norm is
//! diagonal, so the norm is max_m f_m(h) with each f_m a convex quadratic in
//! the r² real parameters of h. The min-max is solved by Newton's method on
//! the log-sum-exp smoothing with a shrinking temperature μ, and certified by
//! the dual bound min_h Σ_m p_m f_m(h) at the softmax weights p.

use alloc::vec;
use alloc::vec::Vec;
use libm::{exp, fabs, log, sqrt};
use num_complex::Complex64;

use crate::dephasing::DephasingEvaluator;
use crate::linalg::{cholesky_solve, symmetric_eigen, Matrix};
use crate::metrology::two_level_qfi;
use crate::optimize::{maximize_log_scan, ScanSettings};
use crate::thermo::ProbeConfig;
use crate::timeopt::TimeOptSettings;
use crate::{Error, Result};

/// Eigenvalues of E below this are dropped from the Kraus set.
pub const RANK_TOL: f64 = 1e-13;
/// Smallest admissible gap between kept eigenvalues.
pub const DEGENERACY_TOL: f64 = 1e-10;
/// Shift applied to Δ when the spectrum is degenerate.
pub const DEGENERACY_SHIFT: f64 = 1e-9;
/// Relative primal/dual gap at which the gauge optimisation stops.
pub const GAP_TARGET: f64 = 1e-12;
/// Relative gap above which the optimisation reports non-convergence.
pub const GAP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct DephasingMatrix {
    d: usize,
    delta: f64,
    d_delta: f64,
    entries: Matrix,
    derivative: Matrix,
}

impl DephasingMatrix {
    pub fn dim(&self) -> usize {
        self.d
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn d_delta(&self) -> f64 {
        self.d_delta
    }
    pub fn entries(&self) -> &Matrix {
        &self.entries
    }
    /// ∂E/∂Δ
    pub fn derivative(&self) -> &Matrix {
        &self.derivative
    }
}

pub fn build_dephasing_matrix(d: usize, delta: f64, d_delta: f64) -> Result<DephasingMatrix> {
    if d < 2 {
        return Err(Error::InvalidParameter {
            name: "d",
            value: d as f64,
            reason: "dimension must be at least 2",
        });
    }
    if !(delta >= 0.0) || !delta.is_finite() || !d_delta.is_finite() {
        return Err(Error::InvalidParameter {
            name: "delta",
            value: delta,
            reason: "dephasing must be finite and non-negative",
        });
    }
    let sq = |i: usize, j: usize| {
        let k = i as f64 - j as f64;
        k * k
    };
    Ok(DephasingMatrix {
        d,
        delta,
        d_delta,
        entries: Matrix::from_fn(d, |i, j| exp(-delta * sq(i, j))),
        derivative: Matrix::from_fn(d, |i, j| -sq(i, j) * exp(-delta * sq(i, j))),
    })
}

/// Diagonal Kraus operators K_k = √κ_k diag(k_k) and their Δ-derivatives,
/// stored as their diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    d: usize,
    operators: Vec<Vec<Complex64>>,
    derivatives: Vec<Vec<Complex64>>,
    eigenvalues: Vec<f64>,
    perturbed: bool,
}

impl KrausSet {
    /// Assemble a set directly from operator and derivative diagonals.
    pub fn from_parts(operators: Vec<Vec<Complex64>>, derivatives: Vec<Vec<Complex64>>) -> Result<Self> {
        let d = operators.first().map_or(0, |k| k.len());
        if operators.is_empty()
            || operators.len() != derivatives.len()
            || operators.iter().chain(&derivatives).any(|k| k.len() != d)
        {
            return Err(Error::Domain {
                function: "KrausSet::from_parts",
                reason: "operators and derivatives must be non-empty with matching shapes",
            });
        }
        Ok(Self {
            d,
            eigenvalues: operators.iter().map(|k| k.iter().map(|z| z.norm_sqr()).sum()).collect(),
            operators,
            derivatives,
            perturbed: false,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }
    pub fn rank(&self) -> usize {
        self.operators.len()
    }
    pub fn operators(&self) -> &[Vec<Complex64>] {
        &self.operators
    }
    pub fn derivatives(&self) -> &[Vec<Complex64>] {
        &self.derivatives
    }
    /// κ_k, descending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }
    /// Δ was shifted by [`DEGENERACY_SHIFT`] to lift a degeneracy.
    pub fn perturbed(&self) -> bool {
        self.perturbed
    }

    /// max_m |Σ_k |K_k[m]|² − 1|
    pub fn completeness_error(&self) -> f64 {
        (0..self.d)
            .map(|m| fabs(self.operators.iter().map(|k| k[m].norm_sqr()).sum::<f64>() - 1.0))
            .fold(0.0, f64::max)
    }

    /// Σ_k K_k ρ K_k† for a row-major d×d matrix ρ.
    pub fn apply(&self, rho: &[Complex64]) -> Vec<Complex64> {
        let d = self.d;
        let mut out = vec![Complex64::new(0.0, 0.0); d * d];
        for k in &self.operators {
            for m in 0..d {
                for n in 0..d {
                    out[m * d + n] += k[m] * rho[m * d + n] * k[n].conj();
                }
            }
        }
        out
    }

    /// Equivalent representation K'_k = Σ_j u_kj K_j for a row-major r×r
    /// unitary u; derivatives transform alike.
    pub fn mix(&self, u: &[Complex64]) -> Self {
        let r = self.rank();
        let combine = |set: &[Vec<Complex64>]| -> Vec<Vec<Complex64>> {
            (0..r)
                .map(|k| {
                    (0..self.d)
                        .map(|m| (0..r).map(|j| u[k * r + j] * set[j][m]).sum())
                        .collect()
                })
                .collect()
        };
        Self {
            d: self.d,
            operators: combine(&self.operators),
            derivatives: combine(&self.derivatives),
            eigenvalues: self.eigenvalues.clone(),
            perturbed: self.perturbed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegeneracyPolicy {
    /// Shift Δ by [`DEGENERACY_SHIFT`] and flag the result.
    Perturb,
    Fail,
}

pub fn kraus_from_matrix(e: &DephasingMatrix) -> Result<KrausSet> {
    kraus_from_matrix_with(e, DegeneracyPolicy::Perturb)
}

pub fn kraus_from_matrix_with(e: &DephasingMatrix, policy: DegeneracyPolicy) -> Result<KrausSet> {
    match kraus_unchecked(e) {
        Err(Error::Degenerate { .. }) if policy == DegeneracyPolicy::Perturb => {
            let shifted = build_dephasing_matrix(e.d, e.delta + DEGENERACY_SHIFT, e.d_delta)?;
            let mut k = kraus_unchecked(&shifted)?;
            k.perturbed = true;
            Ok(k)
        }
        other => other,
    }
}

/// Kraus set whose derivatives are the gauge-equivalent form
///
///   K̇_j = κ̇_j/(2√κ_j) diag(k_j) + Σ_{i kept} c_ij/(√κ_i + √κ_j) diag(k_i) + (dropped i as in
///   perturbation theory),
///
/// with c_ij = k_iᵀĖk_j. It differs from the perturbative derivative by −i h K
/// with a Hermitian h, so every channel QFI is unchanged, but no eigenvalue
/// gap appears in a denominator and degenerate spectra need no shift.
pub fn kraus_from_matrix_symmetric(e: &DephasingMatrix) -> KrausSet {
    match kraus_build(e, true) {
        Ok(k) => k,
        Err(_) => unreachable!("symmetric derivative has no degeneracy check"),
    }
}

fn kraus_unchecked(e: &DephasingMatrix) -> Result<KrausSet> {
    kraus_build(e, false)
}

fn kraus_build(e: &DephasingMatrix, symmetric: bool) -> Result<KrausSet> {
    let d = e.d;
    let eig = symmetric_eigen(&e.entries);
    let kept = eig.values.iter().take_while(|&&v| v > RANK_TOL).count();
    if !symmetric {
        let gap = eig.values[..kept]
            .windows(2)
            .map(|w| w[0] - w[1])
            .fold(f64::INFINITY, f64::min);
        if gap < DEGENERACY_TOL {
            return Err(Error::Degenerate { gap });
        }
    }
    let vecs: Vec<Vec<f64>> = (0..d).map(|k| eig.vector(k)).collect();
    let mut operators = Vec::with_capacity(kept);
    let mut derivatives = Vec::with_capacity(kept);
    for j in 0..kept {
        let kj = &vecs[j];
        let kappa = eig.values[j];
        let root = sqrt(kappa);
        let e_dot_kj = e.derivative.mul_vec(kj);
        let kappa_dot: f64 = kj.iter().zip(&e_dot_kj).map(|(a, b)| a * b).sum();
        // coefficients of √κ_j k̇_j on the full eigenbasis
        let mut dk = vec![0.0; d];
        for (i, ki) in vecs.iter().enumerate() {
            if i == j {
                continue;
            }
            let coupling: f64 = ki.iter().zip(&e_dot_kj).map(|(a, b)| a * b).sum();
            let w = if symmetric && i < kept {
                coupling / (sqrt(eig.values[i]) + root)
            } else {
                root * coupling / (kappa - eig.values[i])
            };
            for (x, y) in dk.iter_mut().zip(ki) {
                *x += w * y;
            }
        }
        operators.push(kj.iter().map(|&x| Complex64::new(root * x, 0.0)).collect());
        derivatives.push(
            kj.iter()
                .zip(&dk)
                .map(|(&x, &dx)| Complex64::new(0.5 * kappa_dot / root * x + dx, 0.0))
                .collect(),
        );
    }
    Ok(KrausSet {
        d,
        operators,
        derivatives,
        eigenvalues: eig.values[..kept].to_vec(),
        perturbed: false,
    })
}

/// Hermitian r×r gauge generator, parameterised by r² reals: the diagonal,
/// then (Re h_kl, Im h_kl) for k < l.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianGauge {
    r: usize,
    h: Vec<Complex64>,
}

impl HermitianGauge {
    pub fn from_params(r: usize, params: &[f64]) -> Self {
        let mut h = vec![Complex64::new(0.0, 0.0); r * r];
        for k in 0..r {
            h[k * r + k] = Complex64::new(params[k], 0.0);
        }
        let mut p = r;
        for k in 0..r {
            for l in (k + 1)..r {
                let z = Complex64::new(params[p], params[p + 1]);
                h[k * r + l] = z;
                h[l * r + k] = z.conj();
                p += 2;
            }
        }
        Self { r, h }
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    /// Row-major entries.
    pub fn matrix(&self) -> &[Complex64] {
        &self.h
    }
}

/// Outcome of the gauge optimisation.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelQfiReport {
    /// 4·upper·(dΔ)²
    pub qfi: f64,
    /// min_h ‖α(h)‖ attained at `gauge` (per unit dΔ).
    pub upper: f64,
    /// Dual lower bound on the same minimum.
    pub lower: f64,
    pub gauge: HermitianGauge,
}

/// Ancilla-assisted QFI of the dephasing channel with respect to the
/// parameter whose derivative of Δ is `d_delta`.
pub fn channel_qfi(e: &DephasingMatrix) -> Result<f64> {
    channel_qfi_report(e).map(|r| r.qfi)
}

pub fn channel_qfi_report(e: &DephasingMatrix) -> Result<ChannelQfiReport> {
    let kraus = kraus_from_matrix_symmetric(e);
    let mut rep = kraus_qfi(&kraus)?;
    rep.qfi *= e.d_delta * e.d_delta;
    Ok(rep)
}

/// One quadratic f_m(θ) = c0 + 2 qᵀθ + θᵀPθ.
struct Quadratic {
    c0: f64,
    q: Vec<f64>,
    p: Matrix,
}

impl Quadratic {
    fn value(&self, x: &[f64]) -> f64 {
        let lin: f64 = self.q.iter().zip(x).map(|(a, b)| a * b).sum();
        self.c0 + 2.0 * lin + self.p.bilinear(x, x)
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let px = self.p.mul_vec(x);
        self.q.iter().zip(&px).map(|(a, b)| 2.0 * (a + b)).collect()
    }
}

/// f_m for every basis index m with the derivatives divided by `amp`.
fn build_quadratics(kraus: &KrausSet, amp: f64) -> Vec<Quadratic> {
    let r = kraus.rank();
    let n = r * r;
    let i = Complex64::new(0.0, 1.0);
    (0..kraus.d)
        .map(|m| {
            let b: Vec<Complex64> = kraus.operators.iter().map(|k| k[m]).collect();
            let c: Vec<Complex64> = kraus.derivatives.iter().map(|k| k[m] / amp).collect();
            // columns v_p = −i G_p b of the linear map θ ↦ −i h(θ) b
            let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
            for k in 0..r {
                let mut v = vec![Complex64::new(0.0, 0.0); r];
                v[k] = -i * b[k];
                cols.push(v);
            }
            for k in 0..r {
                for l in (k + 1)..r {
                    let mut re = vec![Complex64::new(0.0, 0.0); r];
                    re[k] = -i * b[l];
                    re[l] = -i * b[k];
                    cols.push(re);
                    let mut im = vec![Complex64::new(0.0, 0.0); r];
                    im[k] = b[l];
                    im[l] = -b[k];
                    cols.push(im);
                }
            }
            let dot = |u: &[Complex64], v: &[Complex64]| -> f64 {
                u.iter().zip(v).map(|(a, b)| (a.conj() * b).re).sum()
            };
            Quadratic {
                c0: dot(&c, &c),
                q: cols.iter().map(|v| dot(v, &c)).collect(),
                p: Matrix::from_fn(n, |a, bb| dot(&cols[a], &cols[bb])),
            }
        })
        .collect()
}

/// min_θ Σ_m p_m f_m(θ), or −∞ if unbounded below.
fn dual_bound(quads: &[Quadratic], weights: &[f64]) -> f64 {
    let n = quads[0].q.len();
    let mut m = Matrix::zeros(n);
    let mut v = vec![0.0; n];
    let mut c = 0.0;
    for (qd, &w) in quads.iter().zip(weights) {
        if w == 0.0 {
            continue;
        }
        c += w * qd.c0;
        for a in 0..n {
            v[a] += w * qd.q[a];
            for b in 0..n {
                m[(a, b)] += w * qd.p[(a, b)];
            }
        }
    }
    if let Some(x) = cholesky_solve(&m, &v) {
        let vx: f64 = v.iter().zip(&x).map(|(a, b)| a * b).sum();
        return c - vx;
    }
    // singular weighted Hessian: pseudo-inverse on the range
    let eig = symmetric_eigen(&m);
    let top = eig.values.first().copied().unwrap_or(0.0).max(0.0);
    let mut acc = 0.0;
    for k in 0..n {
        let u = eig.vector(k);
        let proj: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
        let lam = eig.values[k];
        if lam > 1e-13 * top {
            acc += proj * proj / lam;
        } else if fabs(proj) > 1e-9 * (1.0 + c.abs()).sqrt() {
            return f64::NEG_INFINITY;
        }
    }
    c - acc
}

struct Smoothed {
    value: f64,
    weights: Vec<f64>,
    f: Vec<f64>,
}

fn smoothed(quads: &[Quadratic], x: &[f64], mu: f64) -> Smoothed {
    let f: Vec<f64> = quads.iter().map(|q| q.value(x)).collect();
    let fmax = f.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = f.iter().map(|&v| exp((v - fmax) / mu)).collect();
    let total: f64 = w.iter().sum();
    Smoothed {
        value: fmax + mu * log(total),
        weights: w.iter().map(|v| v / total).collect(),
        f,
    }
}

/// Newton minimisation of the log-sum-exp smoothing at fixed μ.
fn newton_stage(quads: &[Quadratic], x: &mut Vec<f64>, mu: f64) {
    let n = x.len();
    for _ in 0..100 {
        let cur = smoothed(quads, x, mu);
        let grads: Vec<Vec<f64>> = quads.iter().map(|q| q.gradient(x)).collect();
        let mut g = vec![0.0; n];
        for (gm, &p) in grads.iter().zip(&cur.weights) {
            for a in 0..n {
                g[a] += p * gm[a];
            }
        }
        let mut h = Matrix::zeros(n);
        for ((qd, gm), &p) in quads.iter().zip(&grads).zip(&cur.weights) {
            if p < 1e-300 {
                continue;
            }
            for a in 0..n {
                for b in 0..n {
                    h[(a, b)] += p * (2.0 * qd.p[(a, b)] + gm[a] * gm[b] / mu);
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                h[(a, b)] -= g[a] * g[b] / mu;
            }
        }
        let trace: f64 = (0..n).map(|a| h[(a, a)]).sum::<f64>().max(1e-300);
        let neg_g: Vec<f64> = g.iter().map(|v| -v).collect();
        let mut ridge = 0.0;
        let step = loop {
            let mut hr = h.clone();
            for a in 0..n {
                hr[(a, a)] += ridge;
            }
            if let Some(s) = cholesky_solve(&hr, &neg_g) {
                break s;
            }
            ridge = if ridge == 0.0 { 1e-14 * trace / n as f64 } else { ridge * 100.0 };
            if ridge > 1e6 * trace {
                break neg_g.clone();
            }
        };
        let slope: f64 = g.iter().zip(&step).map(|(a, b)| a * b).sum();
        if !(slope < 0.0) || -slope <= 1e-15 * mu.max(cur.value * 1e-3) * 1e-3 {
            return;
        }
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let trial: Vec<f64> = x.iter().zip(&step).map(|(a, b)| a + t * b).collect();
            if smoothed(quads, &trial, mu).value <= cur.value + 0.25 * t * slope {
                *x = trial;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted || -slope * t < 1e-18 * cur.value.max(1e-300) {
            return;
        }
    }
}

/// 4·min_h ‖Σ_k A_k†A_k‖ for a Kraus set whose derivatives are taken with
/// respect to the parameter of interest.
pub fn kraus_qfi(kraus: &KrausSet) -> Result<ChannelQfiReport> {
    let r = kraus.rank();
    let n = r * r;
    // f scales as amp² when the gauge parameters scale as amp
    let amp = kraus
        .derivatives
        .iter()
        .flat_map(|k| k.iter().map(|z| z.norm()))
        .fold(0.0, f64::max);
    let mut x = vec![0.0; n];
    if amp == 0.0 {
        return Ok(ChannelQfiReport {
            qfi: 0.0,
            upper: 0.0,
            lower: 0.0,
            gauge: HermitianGauge::from_params(r, &x),
        });
    }
    let quads = build_quadratics(kraus, amp);
    let f0 = quads.iter().map(|q| q.c0).fold(0.0, f64::max);
    let mut mu = 0.1 * f0;
    let mut upper = f0;
    let mut lower = f64::NEG_INFINITY;
    for _ in 0..40 {
        newton_stage(&quads, &mut x, mu);
        let s = smoothed(&quads, &x, mu);
        upper = s.f.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        lower = lower.max(dual_bound(&quads, &s.weights));
        if upper - lower <= GAP_TARGET * upper {
            break;
        }
        mu *= 0.1;
        if mu < 1e-16 * upper {
            break;
        }
    }
    let gap = upper - lower;
    let scale = amp * amp;
    if !(gap <= GAP_TOL * upper) {
        return Err(Error::OptimizerNonConvergence {
            best: 4.0 * upper * scale,
            gap: gap / upper,
        });
    }
    Ok(ChannelQfiReport {
        qfi: 4.0 * upper * scale,
        upper: upper * scale,
        lower: lower * scale,
        gauge: HermitianGauge::from_params(r, &x.iter().map(|v| v * amp).collect::<Vec<_>>()),
    })
}

/// QFI of the spin cat state, the two-level formula under λ ↦ 2jλ.
pub fn cat_state_qfi(j: f64, lambda: f64, delta_t: f64, d_delta_t: f64) -> Result<f64> {
    let probe = ProbeConfig::new(lambda, core::f64::consts::FRAC_PI_2, j)?;
    if !(delta_t >= 0.0) || !d_delta_t.is_finite() {
        return Err(Error::InvalidParameter {
            name: "delta_T",
            value: delta_t,
            reason: "kernel must be finite and non-negative",
        });
    }
    Ok(two_level_qfi(probe.lambda_eff(), probe.theta(), delta_t, d_delta_t).unwrap_or(0.0))
}

/// QFI of the optimal (ancilla-assisted) spin-j probe at time `t`.
pub fn optimal_probe_qfi(j: f64, lambda: f64, ev: &DephasingEvaluator, t: f64) -> Result<f64> {
    let probe = ProbeConfig::new(lambda, core::f64::consts::FRAC_PI_2, j)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    let l2 = 4.0 * lambda * lambda;
    let delta = l2 * ev.delta(t)?;
    let e = build_dephasing_matrix(probe.dimension(), delta, l2 * ev.delta_dt(t)?)?;
    channel_qfi(&e)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatComparison {
    pub cat_rate: f64,
    pub optimal_rate: f64,
    pub t_opt_cat: f64,
    pub t_opt_optimal: f64,
}

impl CatComparison {
    pub fn ratio(&self) -> f64 {
        self.cat_rate / self.optimal_rate
    }
}

/// Time-optimal QSNR rates of the cat state and of the optimal probe.
pub fn compare_timeopt_cat_vs_optimal(j: f64, lambda: f64, ev: &DephasingEvaluator) -> Result<CatComparison> {
    compare_timeopt_cat_vs_optimal_with(j, lambda, ev, &TimeOptSettings::default())
}

pub fn compare_timeopt_cat_vs_optimal_with(
    j: f64,
    lambda: f64,
    ev: &DephasingEvaluator,
    settings: &TimeOptSettings,
) -> Result<CatComparison> {
    settings.validate()?;
    let temp = ev.temperature().value();
    if temp == 0.0 {
        return Err(Error::Domain {
            function: "compare_timeopt_cat_vs_optimal",
            reason: "temperature estimation requires T > 0",
        });
    }
    let wc = ev.spectral_density().omega_c();
    let scan = ScanSettings {
        lo: settings.t_lo / wc,
        hi: settings.t_hi / wc,
        points: settings.points,
        rel_width: settings.rel_width,
    };
    let t2 = temp * temp;
    let cat = maximize_log_scan(
        |t| {
            let q = cat_state_qfi(j, lambda, ev.delta(t)?, ev.delta_dt(t)?)?;
            Ok(t2 * q / t)
        },
        &scan,
    )?;
    let optimal = maximize_log_scan(|t| Ok(t2 * optimal_probe_qfi(j, lambda, ev, t)? / t), &scan)?;
    if !(optimal.value >= 1e-300) {
        return Err(Error::FlatObjective {
            max_rate: optimal.value,
        });
    }
    Ok(CatComparison {
        cat_rate: cat.value,
        optimal_rate: optimal.value,
        t_opt_cat: cat.x,
        t_opt_optimal: optimal.x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qubit_matrix_example() {
        let e = build_dephasing_matrix(2, 0.4, 1.0).unwrap();
        assert_eq!(e.entries()[(0, 1)], exp(-0.4));
        assert_eq!(e.derivative()[(0, 0)], 0.0);
        assert_eq!(e.derivative()[(1, 0)], -exp(-0.4));
    }

    #[test]
    fn no_dephasing_has_rank_one() {
        let e = build_dephasing_matrix(4, 0.0, 1.0).unwrap();
        let k = kraus_from_matrix(&e).unwrap();
        assert_eq!(k.rank(), 1);
        assert!(!k.perturbed());
    }

    #[test]
    fn qubit_closed_form() {
        for delta in [0.1, 0.5, 1.0] {
            let e = build_dephasing_matrix(2, delta, 1.0).unwrap();
            let q = channel_qfi(&e).unwrap();
            let want = 1.0 / libm::expm1(2.0 * delta);
            assert!(fabs(q / want - 1.0) < 1e-9, "Δ={delta}: {q} vs {want}");
        }
    }

    #[test]
    fn gauge_parameters_are_hermitian() {
        let g = HermitianGauge::from_params(3, &[1.0, 2.0, 3.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6]);
        let h = g.matrix();
        for k in 0..3 {
            for l in 0..3 {
                assert_eq!(h[k * 3 + l], h[l * 3 + k].conj());
            }
        }
    }
}
