use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nlvortex::checks::{all_passed, run_self_checks, CheckResult};
use nlvortex::config::ExperimentConfig;
use nlvortex::experiment::{run_experiment, run_fringes, ExperimentReport};
use nlvortex::export::export_field;
use nlvortex::grid::Axis;
use nlvortex::modes::{nonlocal_field, BeamParams, Mode, ModeIndex, DEFAULT_SAMPLES, DEFAULT_SPAN_WAISTS};
use nlvortex::{AxisKind, Error};

#[derive(Parser)]
#[command(name = "nlvortex", version, about = "Non-local optical vortices from structured-pump down-conversion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Hg,
    Lg,
    Dhg,
}

#[derive(Subcommand)]
enum Command {
    /// Build, convert and analyse the two-photon state described by a config file.
    Run {
        config: PathBuf,
        /// Override `output.dir` from the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coincidence double-slit scans only.
    Fringes {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a single mode field (CSV plus intensity and phase graymaps).
    /// For `lg` the pair maps to p = min(n, m), l = n - m.
    Modes {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 1e-3)]
        waist: f64,
        #[arg(long, default_value_t = 800e-9)]
        wavelength: f64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        /// Grid half-width in beam waists.
        #[arg(long, default_value_t = DEFAULT_SPAN_WAISTS)]
        span_waists: f64,
        /// Output base path; suffixes are appended.
        #[arg(long, default_value = "mode")]
        out: PathBuf,
    },
    /// Run the built-in invariant and oracle suite.
    Check,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config { .. } | Error::UnsupportedCombination(_) | Error::InvalidArgument { .. } => 2,
        Error::Io { .. } => 3,
        _ => 1,
    }
}

fn print_checks(checks: &[CheckResult]) -> ExitCode {
    for c in checks {
        println!("{c}");
    }
    if all_passed(checks) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn load(config: &Path, out: Option<PathBuf>) -> Result<ExperimentConfig, Error> {
    let mut cfg = ExperimentConfig::from_file(config)?;
    if let Some(dir) = out {
        cfg.output.dir = dir;
    }
    Ok(cfg)
}

fn report(r: ExperimentReport) -> ExitCode {
    for w in &r.windings {
        let charge = w.charge.map_or_else(|| "undefined".to_string(), |c| c.to_string());
        println!("winding {} = {} (expected {})", w.plane.name(), charge, w.expected);
    }
    for s in &r.shifts {
        let shift = s.shift.map_or_else(|| "none".to_string(), |v| format!("{v:.4}"));
        println!(
            "fringe shift {} at +-{} = {} rad (expected {:.4})",
            s.plane.name(),
            s.detector2_offset,
            shift,
            s.expected
        );
    }
    print_checks(&r.checks)
}

fn modes(kind: Kind, idx: ModeIndex, params: BeamParams, samples: usize, span: f64, out: PathBuf) -> Result<(), Error> {
    let ax = Axis::spanning_waists(AxisKind::Position, samples, params.waist, span)?;
    let mode = match kind {
        Kind::Hg => Mode::Hg(idx),
        Kind::Lg => Mode::Lg(idx.to_lg()),
        Kind::Dhg => Mode::Dhg(idx),
    };
    let field = nonlocal_field(mode, &params, ax, ax);
    let files = export_field(&field, &out)?;
    println!("norm = {:.12}", field.norm());
    for f in [files.csv, files.intensity, files.phase] {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, out } => load(&config, out).and_then(|c| run_experiment(&c)).map(report),
        Command::Fringes { config, out } => load(&config, out).and_then(|c| run_fringes(&c)).map(report),
        Command::Modes {
            n,
            m,
            kind,
            waist,
            wavelength,
            samples,
            span_waists,
            out,
        } => BeamParams::new(wavelength, waist)
            .and_then(|p| modes(kind, ModeIndex::new(n, m), p, samples, span_waists, out))
            .map(|_| ExitCode::SUCCESS),
        Command::Check => Ok(print_checks(&run_self_checks())),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(exit_code(&e))
    })
}
