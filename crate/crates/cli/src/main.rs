mod args;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use anyhow::Context;
use args::{Cli, Command, SweepArgs, UsageError};
use clap::Parser;
use oia_core::complexity::scheme_flops;
use oia_core::harness::{emit_csv, run_validation, users_gain_at_matched_rate, ResultRow, SweepKind};
use oia_core::Error;

const THREADS_VAR: &str = "OIA_SIM_THREADS";

enum Failure {
    Usage(String),
    Runtime(anyhow::Error),
    Validation,
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e.0)
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

fn core_error(e: Error) -> Failure {
    match e {
        Error::InvalidSpec(msg) | Error::InvalidConfig(msg) => Failure::Usage(msg),
        other => Failure::Runtime(other.into()),
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var(THREADS_VAR) else { return Ok(()) };
    let threads = value
        .trim()
        .parse::<usize>()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("{THREADS_VAR} must be a positive integer, got '{value}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .context("configuring worker threads")?;
    Ok(())
}

fn write_rows(rows: &[ResultRow], args: &SweepArgs) -> Result<(), Failure> {
    match &args.out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = BufWriter::new(file);
            emit_csv(rows, &mut w).map_err(core_error)?;
            w.flush().with_context(|| format!("writing {}", path.display()))?;
        }
        None => {
            let stdout = io::stdout();
            emit_csv(rows, stdout.lock()).map_err(core_error)?;
        }
    }
    Ok(())
}

fn sweep(kind: SweepKind, args: &SweepArgs) -> Result<(), Failure> {
    let mut spec = args.to_spec(kind)?;
    if kind == SweepKind::ComplexityVsUsers && args.wildcard() {
        let k = spec.transmitters as u64;
        let (n, n_r) = (spec.users[0] as u64, 2 * spec.antennas[0] as u64);
        spec.schemes.retain(|id| match scheme_flops(*id, k, n, n_r) {
            Err(Error::UnsupportedCombination(_)) => {
                eprintln!("note: no complexity model for {id}; skipped");
                false
            }
            _ => true,
        });
    }
    let rows = oia_core::harness::run_sweep(&spec).map_err(core_error)?;
    write_rows(&rows, args)?;
    if kind == SweepKind::SumRateVsUsers {
        for gain in users_gain_at_matched_rate(&rows) {
            let matched = match (gain.users_us, gain.ratio()) {
                (Some(n), Some(r)) => format!("selection needs N = {n:.1} ({r:.2}x)"),
                _ => "selection never matches on this grid".to_string(),
            };
            eprintln!(
                "{} M={} snr={} dB: pairing N={} reaches {:.4} bits/s/Hz; {matched}",
                gain.scheme.short_name(),
                gain.antennas,
                gain.snr_db,
                gain.users_up,
                gain.sum_rate_up,
            );
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    match &cli.command {
        Command::SumrateVsSnr(a) => sweep(SweepKind::SumRateVsSnr, a),
        Command::SumrateVsUsers(a) => sweep(SweepKind::SumRateVsUsers, a),
        Command::SumrateVsAntennas(a) => sweep(SweepKind::SumRateVsAntennas, a),
        Command::Complexity(a) => sweep(SweepKind::ComplexityVsUsers, a),
        Command::Validate(a) => {
            if a.trials == 0 {
                return Err(Failure::Usage("invalid value for '--trials': must be at least 1".into()));
            }
            let report = run_validation(a.trials, a.seed);
            for c in &report.checks {
                let status = if c.failed == 0 { "ok" } else { "FAILED" };
                println!("{:<28} {status:>6}  passed {:>6}  failed {:>6}", c.name, c.passed, c.failed);
            }
            println!("total failures: {}", report.failures());
            if report.all_passed() {
                Ok(())
            } else {
                Err(Failure::Validation)
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Validation) => ExitCode::from(3),
    }
}
