//! Run configuration: a single TOML file, strict about unknown keys,
//! validated field by field.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thermoprobe_core::dephasing::DephasingMethod;
use thermoprobe_core::spectral::{CutoffKind, QuadTolerance};
use thermoprobe_core::timeopt::TimeOptSettings;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Parse(#[from] toml::de::Error),
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error("missing section [{0}] required by this subcommand")]
    MissingSection(&'static str),
}

fn invalid(path: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        path: path.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cutoff {
    Exponential,
    Gaussian,
    Hard,
}

impl From<Cutoff> for CutoffKind {
    fn from(c: Cutoff) -> Self {
        match c {
            Cutoff::Exponential => CutoffKind::Exponential,
            Cutoff::Gaussian => CutoffKind::Gaussian,
            Cutoff::Hard => CutoffKind::Hard,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    #[default]
    Auto,
    Quadrature,
    ClosedForm,
}

impl From<Method> for DephasingMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Auto => DephasingMethod::Auto,
            Method::Quadrature => DephasingMethod::Quadrature,
            Method::ClosedForm => DephasingMethod::ClosedFormExp,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Log,
    Linear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Numerics {
    #[serde(default = "Numerics::default_rel")]
    pub quad_rel: f64,
    #[serde(default = "Numerics::default_abs")]
    pub quad_abs: f64,
    #[serde(default = "Numerics::default_panels")]
    pub max_panels: usize,
}

impl Numerics {
    fn default_rel() -> f64 {
        1e-12
    }
    fn default_abs() -> f64 {
        1e-300
    }
    fn default_panels() -> usize {
        200_000
    }

    pub fn tolerance(&self) -> QuadTolerance {
        QuadTolerance {
            abs: self.quad_abs,
            rel: self.quad_rel,
            max_panels: self.max_panels,
        }
    }
}

impl Default for Numerics {
    fn default() -> Self {
        Self {
            quad_rel: Self::default_rel(),
            quad_abs: Self::default_abs(),
            max_panels: Self::default_panels(),
        }
    }
}

/// Bath spectral density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bath {
    pub s: f64,
    #[serde(default = "one")]
    pub omega_c: f64,
    pub cutoff: Cutoff,
    #[serde(default)]
    pub method: Method,
}

fn one() -> f64 {
    1.0
}

fn half_pi() -> f64 {
    std::f64::consts::FRAC_PI_2
}

fn half() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Probe {
    pub lambda: f64,
    #[serde(default = "half_pi")]
    pub theta: f64,
    #[serde(default = "half")]
    pub j: f64,
}

/// Either explicit `values` or a `start`/`stop`/`points` range.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub values: Option<Vec<f64>>,
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub points: Option<usize>,
    #[serde(default)]
    pub spacing: Spacing,
}

impl Grid {
    pub fn resolve(&self, path: &str) -> Result<Vec<f64>, ConfigError> {
        let v = match (&self.values, self.start, self.stop, self.points) {
            (Some(v), None, None, None) => v.clone(),
            (None, Some(a), Some(b), Some(n)) => {
                if n < 2 {
                    return Err(invalid(format!("{path}.points"), "need at least 2 points"));
                }
                if !(b > a) {
                    return Err(invalid(format!("{path}.stop"), "stop must exceed start"));
                }
                match self.spacing {
                    Spacing::Linear => (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect(),
                    Spacing::Log => {
                        if !(a > 0.0) {
                            return Err(invalid(format!("{path}.start"), "log spacing needs start > 0"));
                        }
                        let (la, lb) = (a.ln(), b.ln());
                        let mut v: Vec<f64> = (0..n)
                            .map(|k| (la + (lb - la) * k as f64 / (n - 1) as f64).exp())
                            .collect();
                        v[0] = a;
                        v[n - 1] = b;
                        v
                    }
                }
            }
            _ => {
                return Err(invalid(
                    path,
                    "give either `values` or all of `start`, `stop`, `points`",
                ))
            }
        };
        if v.is_empty() {
            return Err(invalid(format!("{path}.values"), "grid is empty"));
        }
        if let Some(k) = v.iter().position(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(invalid(format!("{path}.values[{k}]"), "must be finite and non-negative"));
        }
        Ok(v)
    }
}

/// Inputs of `dephasing` and `tradeoff`: times t·ω_c and temperatures T/ω_c.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Series {
    pub temperatures: Vec<f64>,
    pub times: Grid,
}

/// Time-search bracket in units of 1/ω_c.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Search {
    #[serde(default = "Search::default_lo")]
    pub t_lo: f64,
    #[serde(default = "Search::default_hi")]
    pub t_hi: f64,
    #[serde(default = "Search::default_points")]
    pub points: usize,
    #[serde(default = "Search::default_width")]
    pub rel_width: f64,
}

impl Search {
    fn default_lo() -> f64 {
        TimeOptSettings::default().t_lo
    }
    fn default_hi() -> f64 {
        TimeOptSettings::default().t_hi
    }
    fn default_points() -> usize {
        TimeOptSettings::default().points
    }
    fn default_width() -> f64 {
        TimeOptSettings::default().rel_width
    }

    pub fn settings(&self) -> TimeOptSettings {
        TimeOptSettings {
            t_lo: self.t_lo,
            t_hi: self.t_hi,
            points: self.points,
            rel_width: self.rel_width,
        }
    }

    fn validate(&self, path: &str) -> Result<(), ConfigError> {
        if !(self.t_lo > 0.0 && self.t_lo.is_finite()) {
            return Err(invalid(format!("{path}.t_lo"), "must be positive"));
        }
        if !(self.t_hi > self.t_lo && self.t_hi.is_finite()) {
            return Err(invalid(format!("{path}.t_hi"), "must exceed t_lo"));
        }
        if self.points < 3 {
            return Err(invalid(format!("{path}.points"), "need at least 3 scan points"));
        }
        if !(self.rel_width > 0.0 && self.rel_width < 1.0) {
            return Err(invalid(format!("{path}.rel_width"), "must lie in (0, 1)"));
        }
        Ok(())
    }
}

impl Default for Search {
    fn default() -> Self {
        Self {
            t_lo: Self::default_lo(),
            t_hi: Self::default_hi(),
            points: Self::default_points(),
            rel_width: Self::default_width(),
        }
    }
}

/// Grid of the `timeopt` sweep; rows are lexicographic in the order
/// s, cutoff, temperature, lambda, j.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeOpt {
    pub s: Vec<f64>,
    pub cutoffs: Vec<Cutoff>,
    pub temperatures: Vec<f64>,
    pub lambdas: Vec<f64>,
    #[serde(default = "default_spins")]
    pub spins: Vec<f64>,
    #[serde(default = "one")]
    pub omega_c: f64,
    #[serde(default = "half_pi")]
    pub theta: f64,
    #[serde(default)]
    pub method: Method,
    #[serde(default)]
    pub search: Search,
}

fn default_spins() -> Vec<f64> {
    vec![0.5]
}

/// Cat state against the optimal probe, one row per (j, λ).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Channel {
    pub spins: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub temperature: f64,
    #[serde(default)]
    pub search: Search,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_threads")]
    pub threads: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub numerics: Numerics,
    pub bath: Option<Bath>,
    pub probe: Option<Probe>,
    pub series: Option<Series>,
    pub timeopt: Option<TimeOpt>,
    pub channel: Option<Channel>,
}

fn default_threads() -> usize {
    1
}

fn positive(path: &str, v: f64) -> Result<(), ConfigError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(path, format!("must be positive and finite, got {v}")))
    }
}

fn all_positive(path: &str, v: &[f64]) -> Result<(), ConfigError> {
    if v.is_empty() {
        return Err(invalid(path, "list is empty"));
    }
    for (k, &x) in v.iter().enumerate() {
        positive(&format!("{path}[{k}]"), x)?;
    }
    Ok(())
}

fn spin(path: &str, j: f64, max_dim: usize) -> Result<(), ConfigError> {
    let two_j = 2.0 * j;
    if !(two_j >= 1.0 && two_j.fract() == 0.0) {
        return Err(invalid(path, format!("spin must be a positive half-integer, got {j}")));
    }
    if two_j as usize + 1 > max_dim {
        return Err(invalid(path, format!("dimension 2j+1 exceeds {max_dim}")));
    }
    Ok(())
}

fn angle(path: &str, theta: f64) -> Result<(), ConfigError> {
    if (0.0..=std::f64::consts::PI).contains(&theta) {
        Ok(())
    } else {
        Err(invalid(path, format!("must lie in [0, π], got {theta}")))
    }
}

/// Largest Hilbert-space dimension accepted by the channel solver.
pub const MAX_CHANNEL_DIM: usize = 16;

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&text)
    }

    /// Configuration used when no file is given (selfcheck only).
    pub fn empty() -> Self {
        Self {
            threads: 1,
            seed: 0,
            numerics: Numerics::default(),
            bath: None,
            probe: None,
            series: None,
            timeopt: None,
            channel: None,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.threads == 0 {
            return Err(invalid("threads", "must be at least 1"));
        }
        let n = &self.numerics;
        if !(n.quad_rel > 0.0 && n.quad_rel < 1.0) {
            return Err(invalid("numerics.quad_rel", "must lie in (0, 1)"));
        }
        if !(n.quad_abs >= 0.0 && n.quad_abs.is_finite()) {
            return Err(invalid("numerics.quad_abs", "must be finite and non-negative"));
        }
        if n.max_panels < 1 {
            return Err(invalid("numerics.max_panels", "must be at least 1"));
        }
        if let Some(b) = &self.bath {
            positive("bath.s", b.s)?;
            positive("bath.omega_c", b.omega_c)?;
            if b.method == Method::ClosedForm && b.cutoff != Cutoff::Exponential {
                return Err(invalid("bath.method", "closed_form requires the exponential cutoff"));
            }
        }
        if let Some(p) = &self.probe {
            positive("probe.lambda", p.lambda)?;
            angle("probe.theta", p.theta)?;
            spin("probe.j", p.j, usize::MAX)?;
        }
        if let Some(s) = &self.series {
            all_positive("series.temperatures", &s.temperatures)?;
            s.times.resolve("series.times")?;
        }
        if let Some(t) = &self.timeopt {
            all_positive("timeopt.s", &t.s)?;
            if t.cutoffs.is_empty() {
                return Err(invalid("timeopt.cutoffs", "list is empty"));
            }
            all_positive("timeopt.temperatures", &t.temperatures)?;
            all_positive("timeopt.lambdas", &t.lambdas)?;
            if t.spins.is_empty() {
                return Err(invalid("timeopt.spins", "list is empty"));
            }
            for (k, &j) in t.spins.iter().enumerate() {
                spin(&format!("timeopt.spins[{k}]"), j, usize::MAX)?;
            }
            positive("timeopt.omega_c", t.omega_c)?;
            angle("timeopt.theta", t.theta)?;
            if t.method == Method::ClosedForm && t.cutoffs.iter().any(|&c| c != Cutoff::Exponential) {
                return Err(invalid("timeopt.method", "closed_form requires the exponential cutoff"));
            }
            t.search.validate("timeopt.search")?;
        }
        if let Some(c) = &self.channel {
            if c.spins.is_empty() {
                return Err(invalid("channel.spins", "list is empty"));
            }
            for (k, &j) in c.spins.iter().enumerate() {
                spin(&format!("channel.spins[{k}]"), j, MAX_CHANNEL_DIM)?;
            }
            all_positive("channel.lambdas", &c.lambdas)?;
            positive("channel.temperature", c.temperature)?;
            c.search.validate("channel.search")?;
        }
        Ok(())
    }

    /// Canonical serialisation with every default filled in.
    pub fn canonical(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    /// SHA-256 of the canonical serialisation, hex encoded.
    pub fn sha256(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }

    pub fn bath(&self) -> Result<&Bath, ConfigError> {
        self.bath.as_ref().ok_or(ConfigError::MissingSection("bath"))
    }
    pub fn probe(&self) -> Result<&Probe, ConfigError> {
        self.probe.as_ref().ok_or(ConfigError::MissingSection("probe"))
    }
    pub fn series(&self) -> Result<&Series, ConfigError> {
        self.series.as_ref().ok_or(ConfigError::MissingSection("series"))
    }
    pub fn timeopt(&self) -> Result<&TimeOpt, ConfigError> {
        self.timeopt.as_ref().ok_or(ConfigError::MissingSection("timeopt"))
    }
    pub fn channel(&self) -> Result<&Channel, ConfigError> {
        self.channel.as_ref().ok_or(ConfigError::MissingSection("channel"))
    }
}
