use clap::{Args, Parser, Subcommand, ValueEnum};
use oia_core::harness::{ExperimentSpec, SweepKind};
use oia_core::{Framework, Scheme, SchemeId};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "oia-sim", version, about = "Opportunistic interference alignment experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mean sum-rate over an SNR grid.
    SumrateVsSnr(SweepArgs),
    /// Mean sum-rate over a grid of user counts; reports the user-count gain
    /// of pairing over selection on stderr.
    SumrateVsUsers(SweepArgs),
    /// Mean sum-rate over a grid of antenna counts.
    SumrateVsAntennas(SweepArgs),
    /// Flop counts of the scheduling step.
    Complexity(SweepArgs),
    /// Runs the built-in self-checks.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Oia,
    MinInr,
    MaxSnr,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FrameworkArg {
    Us,
    Up,
    Both,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Number of transmitters.
    #[arg(long = "K", value_name = "K")]
    pub k: usize,
    /// Transmit antennas per transmitter; list or a:b:step.
    #[arg(long = "M", value_name = "LIST")]
    pub m: String,
    /// Total users N; list or a:b:step.
    #[arg(long, value_name = "LIST", conflicts_with = "group_size")]
    pub users: Option<String>,
    /// Users per cell S (N = K * S); list or a:b:step.
    #[arg(long, value_name = "LIST")]
    pub group_size: Option<String>,
    /// SNR values in dB, comma separated.
    #[arg(long, value_name = "LIST", allow_hyphen_values = true, conflicts_with = "snr_range")]
    pub snr: Option<String>,
    /// SNR grid in dB as start:stop:step.
    #[arg(long, value_name = "A:B:STEP", allow_hyphen_values = true)]
    pub snr_range: Option<String>,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = SchemeArg::All)]
    pub scheme: SchemeArg,
    #[arg(long, value_enum, default_value_t = FrameworkArg::Both)]
    pub framework: FrameworkArg,
    /// Write CSV here instead of stdout.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Random instances per check.
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

/// A bad flag value; the message names the flag.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(flag: &str, msg: impl std::fmt::Display) -> UsageError {
    UsageError(format!("invalid value for '--{flag}': {msg}"))
}

/// Parses `a,b,c` or `a:b:step` (inclusive of `b`) into positive integers.
pub fn parse_count_list(flag: &str, text: &str) -> Result<Vec<usize>, UsageError> {
    let parse = |s: &str| s.trim().parse::<usize>().map_err(|e| usage(flag, format!("'{s}': {e}")));
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [single] => single.split(',').map(parse).collect(),
        [a, b, step] => {
            let (a, b, step) = (parse(a)?, parse(b)?, parse(step)?);
            if step == 0 || b < a {
                return Err(usage(flag, "range needs start <= stop and step > 0"));
            }
            Ok((a..=b).step_by(step).collect())
        }
        _ => Err(usage(flag, "expected a list or start:stop:step")),
    }
}

fn parse_range(flag: &str, text: &str) -> Result<Vec<f64>, UsageError> {
    let parse = |s: &str| s.trim().parse::<f64>().map_err(|e| usage(flag, format!("'{s}': {e}")));
    let parts: Vec<&str> = text.split(':').collect();
    let [a, b, step] = parts.as_slice() else {
        return Err(usage(flag, "expected start:stop:step"));
    };
    let (a, b, step) = (parse(a)?, parse(b)?, parse(step)?);
    if !(step > 0.0) || !(a <= b) || !a.is_finite() || !b.is_finite() {
        return Err(usage(flag, "range needs start <= stop and step > 0"));
    }
    let count = ((b - a) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| a + i as f64 * step).collect())
}

fn scheme_ids(scheme: SchemeArg, framework: FrameworkArg) -> Vec<SchemeId> {
    let schemes: Vec<Scheme> = match scheme {
        SchemeArg::Oia => vec![Scheme::Oia],
        SchemeArg::MinInr => vec![Scheme::MinInr],
        SchemeArg::MaxSnr => vec![Scheme::MaxSnr],
        SchemeArg::All => Scheme::ALL.to_vec(),
    };
    let frameworks = match framework {
        FrameworkArg::Us => vec![Framework::UserSelection],
        FrameworkArg::Up => vec![Framework::UserPairing],
        FrameworkArg::Both => vec![Framework::UserSelection, Framework::UserPairing],
    };
    frameworks
        .into_iter()
        .flat_map(|f| schemes.iter().map(move |&s| SchemeId::new(s, f)))
        .collect()
}

impl SweepArgs {
    /// True when `--scheme` or `--framework` was left as a wildcard.
    pub fn wildcard(&self) -> bool {
        self.scheme == SchemeArg::All || self.framework == FrameworkArg::Both
    }

    pub fn to_spec(&self, kind: SweepKind) -> Result<ExperimentSpec, UsageError> {
        let antennas = parse_count_list("M", &self.m)?;
        let users = match (&self.users, &self.group_size) {
            (Some(u), None) => parse_count_list("users", u)?,
            (None, Some(s)) => parse_count_list("group-size", s)?.into_iter().map(|s| s * self.k).collect(),
            _ => return Err(UsageError("one of '--users' or '--group-size' is required".into())),
        };
        let snr_db = match (&self.snr, &self.snr_range) {
            (Some(list), None) => list
                .split(',')
                .map(|s| s.trim().parse::<f64>().map_err(|e| usage("snr", format!("'{s}': {e}"))))
                .collect::<Result<_, _>>()?,
            (None, Some(r)) => parse_range("snr-range", r)?,
            _ if kind == SweepKind::ComplexityVsUsers => Vec::new(),
            _ => return Err(UsageError("one of '--snr' or '--snr-range' is required".into())),
        };
        if self.trials == 0 {
            return Err(usage("trials", "must be at least 1"));
        }
        if self.k < 2 {
            return Err(usage("K", "must be at least 2"));
        }
        Ok(ExperimentSpec {
            kind,
            schemes: scheme_ids(self.scheme, self.framework),
            transmitters: self.k,
            antennas,
            users,
            snr_db,
            trials: self.trials,
            seed: self.seed,
        })
    }
}
