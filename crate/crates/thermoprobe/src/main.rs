use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use thermoprobe::{run, Command, CommandError, ConfigError, RunConfig};

#[derive(Parser)]
#[command(name = "thermoprobe", version, about = "Pure-dephasing quantum thermometry: QFI, heat and time-optimal protocols")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; standard output if omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads, overrides `threads` in the config.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed, overrides `seed` in the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Δ_T, heat, QFI and QSNR along a time grid.
    Dephasing,
    /// Heat against relative error along a time grid.
    Tradeoff,
    /// Time-optimal QSNR rate sweep.
    Timeopt,
    /// Spin-cat state against the optimal probe.
    Channel,
    /// Quick oracle checks of the numerical core.
    Selfcheck,
}

#[derive(ValueEnum, Clone, Copy)]
enum Format {
    Csv,
}

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_PARTIAL: u8 = 4;

fn command(c: Cmd) -> Command {
    match c {
        Cmd::Dephasing => Command::Dephasing,
        Cmd::Tradeoff => Command::Tradeoff,
        Cmd::Timeopt => Command::Timeopt,
        Cmd::Channel => Command::Channel,
        Cmd::Selfcheck => Command::Selfcheck,
    }
}

fn load(cli: &Cli, cmd: Command) -> Result<RunConfig, ConfigError> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None if cmd == Command::Selfcheck => RunConfig::empty(),
        None => {
            return Err(ConfigError::Invalid {
                path: "--config".into(),
                message: format!("required by `{}`", cmd.name()),
            })
        }
    };
    if let Some(t) = cli.threads {
        cfg.threads = t;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<ConfigError>() {
            return EXIT_CONFIG;
        }
        match cause.downcast_ref::<CommandError>() {
            Some(CommandError::Config(_)) => return EXIT_CONFIG,
            Some(CommandError::Numerical(_)) => return EXIT_NUMERICAL,
            _ => {}
        }
    }
    1
}

fn execute(cli: &Cli) -> anyhow::Result<u8> {
    let cmd = command(cli.command);
    let Format::Csv = cli.format;
    let cfg = load(cli, cmd).context("invalid configuration")?;
    let outcome = run(cmd, &cfg).with_context(|| format!("`{}` failed", cmd.name()))?;
    let bytes = outcome.table.to_bytes();
    match &cli.out {
        Some(p) => std::fs::write(p, &bytes).with_context(|| format!("cannot write {}", p.display()))?,
        None => std::io::stdout().lock().write_all(&bytes)?,
    }
    if outcome.errored > 0 {
        eprintln!("thermoprobe: {} row(s) carry error markers", outcome.errored);
        return Ok(EXIT_PARTIAL);
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("thermoprobe: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
