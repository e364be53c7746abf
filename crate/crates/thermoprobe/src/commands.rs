//! Subcommands. Each returns a [`CsvTable`] plus the number of rows that
//! carry an error marker; all output quantities are in units of ω_c.

use rayon::prelude::*;
use thermoprobe_core::channel::compare_timeopt_cat_vs_optimal_with;
use thermoprobe_core::dephasing::{DephasingEvaluator, Temperature};
use thermoprobe_core::metrology::qfi_temperature;
use thermoprobe_core::spectral::SpectralDensity;
use thermoprobe_core::thermo::{absorbed_heat, ProbeConfig};
use thermoprobe_core::timeopt::SweepGrid;

use crate::config::{ConfigError, RunConfig, Search};
use crate::table::{fmt_float, CsvTable};

pub const TOOL: &str = concat!("thermoprobe ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, thiserror::Error)]
pub enum CommandError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("numerical failure: {0}")]
    Numerical(#[from] thermoprobe_core::Error),
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub table: CsvTable,
    /// Rows that carry an error marker or a failed check.
    pub errored: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Dephasing,
    Tradeoff,
    Timeopt,
    Channel,
    Selfcheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Dephasing => "dephasing",
            Command::Tradeoff => "tradeoff",
            Command::Timeopt => "timeopt",
            Command::Channel => "channel",
            Command::Selfcheck => "selfcheck",
        }
    }
}

pub fn run(cmd: Command, cfg: &RunConfig) -> Result<Outcome, CommandError> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build()?;
    let mut out = pool.install(|| match cmd {
        Command::Dephasing => cmd_dephasing(cfg),
        Command::Tradeoff => cmd_tradeoff(cfg),
        Command::Timeopt => cmd_timeopt(cfg),
        Command::Channel => cmd_channel(cfg),
        Command::Selfcheck => crate::selfcheck::cmd_selfcheck(cfg),
    })?;
    let mut meta = CsvTable::default();
    meta.meta("tool", TOOL);
    meta.meta("command", cmd.name());
    meta.meta("config_sha256", cfg.sha256());
    meta.meta("seed", cfg.seed);
    meta.meta("threads", cfg.threads);
    let n = &cfg.numerics;
    meta.meta(
        "quadrature",
        format!("rel={:e} abs={:e} max_panels={}", n.quad_rel, n.quad_abs, n.max_panels),
    );
    meta.metadata.append(&mut out.table.metadata);
    out.table.metadata = meta.metadata;
    Ok(out)
}

fn search_meta(table: &mut CsvTable, s: &Search) {
    table.meta(
        "search",
        format!(
            "t_lo={:e} t_hi={:e} points={} rel_width={:e} (units 1/omega_c)",
            s.t_lo, s.t_hi, s.points, s.rel_width
        ),
    );
}

fn index_list(v: &[usize]) -> String {
    if v.is_empty() {
        "none".into()
    } else {
        v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
    }
}

/// (T̃, t̃) pairs of the series commands, temperature-major.
fn series_points(cfg: &RunConfig) -> Result<Vec<(f64, f64)>, ConfigError> {
    let series = cfg.series()?;
    let times = series.times.resolve("series.times")?;
    Ok(series
        .temperatures
        .iter()
        .flat_map(|&temp| times.iter().map(move |&t| (temp, t)))
        .collect())
}

struct SeriesRow {
    temp: f64,
    t: f64,
    delta: f64,
    delta_dt: f64,
    kernel: f64,
    heat: f64,
    qfi: f64,
    qsnr: f64,
    rate: f64,
}

fn series_rows(cfg: &RunConfig) -> Result<Vec<SeriesRow>, CommandError> {
    let bath = cfg.bath()?;
    let p = cfg.probe()?;
    let wc = bath.omega_c;
    let sd = SpectralDensity::new(bath.s, wc, bath.cutoff.into())?;
    let probe = ProbeConfig::new(p.lambda, p.theta, p.j)?;
    let tol = cfg.numerics.tolerance();
    let points = series_points(cfg)?;
    points
        .par_iter()
        .map(|&(temp, tt)| {
            let ev = DephasingEvaluator::new(sd, Temperature::new(temp * wc)?, bath.method.into())?
                .with_tolerance(tol);
            let t = tt / wc;
            let q = qfi_temperature(&probe, &ev, t)?;
            let heat = absorbed_heat(&probe, &sd, t)?;
            Ok(SeriesRow {
                temp,
                t: tt,
                delta: ev.delta(t)?,
                delta_dt: ev.delta_dt(t)? * wc,
                kernel: heat.kernel / wc,
                heat: heat.heat / wc,
                qfi: q.qfi * wc * wc,
                qsnr: q.qsnr,
                rate: if tt == 0.0 { 0.0 } else { q.qsnr / tt },
            })
        })
        .collect()
}

fn series_meta(table: &mut CsvTable, cfg: &RunConfig) -> Result<(), ConfigError> {
    let b = cfg.bath()?;
    let p = cfg.probe()?;
    table.meta(
        "bath",
        format!("s={} omega_c={} cutoff={:?} method={:?}", b.s, b.omega_c, b.cutoff, b.method),
    );
    table.meta("probe", format!("lambda={} theta={} j={}", p.lambda, p.theta, p.j));
    Ok(())
}

/// Δ_T, heat, QFI and QSNR along a time grid, per temperature.
pub fn cmd_dephasing(cfg: &RunConfig) -> Result<Outcome, CommandError> {
    let rows = series_rows(cfg)?;
    let mut table = CsvTable::new(&[
        "T", "t", "delta", "d_delta_dT", "q_kernel", "heat", "qfi", "qsnr", "qsnr_rate",
    ]);
    series_meta(&mut table, cfg)?;
    for r in rows {
        table.push(
            [r.temp, r.t, r.delta, r.delta_dt, r.kernel, r.heat, r.qfi, r.qsnr, r.rate]
                .iter()
                .map(|&x| fmt_float(x))
                .collect(),
        );
    }
    Ok(Outcome { table, errored: 0 })
}

/// Parametric (heat, 1/QSNR) curve, per temperature.
pub fn cmd_tradeoff(cfg: &RunConfig) -> Result<Outcome, CommandError> {
    let rows = series_rows(cfg)?;
    let mut table = CsvTable::new(&["T", "t", "heat", "inv_qsnr"]);
    series_meta(&mut table, cfg)?;
    for r in rows {
        table.push(
            [r.temp, r.t, r.heat, 1.0 / r.qsnr]
                .iter()
                .map(|&x| fmt_float(x))
                .collect(),
        );
    }
    Ok(Outcome { table, errored: 0 })
}

/// Time-optimal rate sweep.
pub fn cmd_timeopt(cfg: &RunConfig) -> Result<Outcome, CommandError> {
    let t = cfg.timeopt()?;
    let grid = SweepGrid {
        s: t.s.clone(),
        cutoffs: t.cutoffs.iter().map(|&c| c.into()).collect(),
        temperatures: t.temperatures.clone(),
        lambdas: t.lambdas.clone(),
        spins: t.spins.clone(),
        omega_c: t.omega_c,
        theta: t.theta,
        method: t.method.into(),
        settings: t.search.settings(),
        tolerance: Some(cfg.numerics.tolerance()),
    };
    let rows: Vec<_> = grid.points().par_iter().map(|p| grid.row(p)).collect();
    let mut table = CsvTable::new(&[
        "s", "cutoff", "T", "lambda", "j", "t_opt", "rate", "heat", "at_boundary", "status",
    ]);
    search_meta(&mut table, &t.search);
    table.meta("theta", fmt_float(t.theta));
    let mut boundary = Vec::new();
    let mut errored = Vec::new();
    for row in &rows {
        let p = &row.point;
        let mut rec = vec![
            fmt_float(p.s),
            p.cutoff.name().to_string(),
            fmt_float(p.temperature),
            fmt_float(p.lambda),
            fmt_float(p.j),
        ];
        match &row.outcome {
            Ok(v) => {
                if v.at_boundary {
                    boundary.push(p.index);
                }
                rec.extend([fmt_float(v.t_opt), fmt_float(v.rate), fmt_float(v.heat)]);
                rec.push(v.at_boundary.to_string());
                rec.push("ok".into());
            }
            Err(e) => {
                errored.push(p.index);
                rec.extend([fmt_float(f64::NAN), fmt_float(f64::NAN), fmt_float(f64::NAN)]);
                rec.push("false".into());
                rec.push(format!("error: {e}"));
            }
        }
        table.push(rec);
    }
    table.meta("boundary_rows", index_list(&boundary));
    table.meta("errored_rows", index_list(&errored));
    Ok(Outcome {
        table,
        errored: errored.len(),
    })
}

/// Cat state against the optimal probe at the time-optimal point.
pub fn cmd_channel(cfg: &RunConfig) -> Result<Outcome, CommandError> {
    let c = cfg.channel()?;
    let bath = cfg.bath()?;
    let wc = bath.omega_c;
    let sd = SpectralDensity::new(bath.s, wc, bath.cutoff.into())?;
    let ev = DephasingEvaluator::new(sd, Temperature::new(c.temperature * wc)?, bath.method.into())?
        .with_tolerance(cfg.numerics.tolerance());
    let settings = c.search.settings();
    let points: Vec<(f64, f64)> = c
        .spins
        .iter()
        .flat_map(|&j| c.lambdas.iter().map(move |&l| (j, l)))
        .collect();
    let results: Vec<_> = points
        .par_iter()
        .map(|&(j, l)| compare_timeopt_cat_vs_optimal_with(j, l, &ev, &settings))
        .collect();
    let mut table = CsvTable::new(&[
        "j", "lambda", "cat_rate", "optimal_rate", "ratio", "t_opt_cat", "t_opt_optimal", "status",
    ]);
    table.meta(
        "bath",
        format!("s={} omega_c={} cutoff={:?} T={}", bath.s, wc, bath.cutoff, c.temperature),
    );
    search_meta(&mut table, &c.search);
    let mut errored = Vec::new();
    for (k, (&(j, l), res)) in points.iter().zip(&results).enumerate() {
        let mut rec = vec![fmt_float(j), fmt_float(l)];
        match res {
            Ok(r) => {
                rec.extend(
                    [r.cat_rate / wc, r.optimal_rate / wc, r.ratio(), r.t_opt_cat * wc, r.t_opt_optimal * wc]
                        .iter()
                        .map(|&x| fmt_float(x)),
                );
                rec.push("ok".into());
            }
            Err(e) => {
                errored.push(k);
                rec.extend((0..5).map(|_| fmt_float(f64::NAN)));
                rec.push(format!("error: {e}"));
            }
        }
        table.push(rec);
    }
    table.meta("errored_rows", index_list(&errored));
    Ok(Outcome {
        table,
        errored: errored.len(),
    })
}
