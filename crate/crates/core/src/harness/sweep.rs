use rayon::prelude::*;

use crate::channel::{generate_channels, Framework, NetworkConfig, PowerLevel, Seed};
use crate::complexity::scheme_flops;
use crate::error::{Error, Result};
use crate::schemes::run_scheme;
use crate::seeding::derive_seed;

use super::output::ResultRow;
use super::spec::{ExperimentSpec, SweepKind};
use super::validate::{run_validation, ValidationReport};

#[derive(Debug, Clone, PartialEq)]
pub enum SweepOutput {
    Rows(Vec<ResultRow>),
    Validation(ValidationReport),
}

/// Runs any experiment, including the validation suite.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<SweepOutput> {
    spec.validate()?;
    match spec.kind {
        SweepKind::Validate => Ok(SweepOutput::Validation(run_validation(spec.trials, spec.seed))),
        _ => run_sweep(spec).map(SweepOutput::Rows),
    }
}

/// Runs a rate or complexity sweep.
///
/// Each trial at grid point `g` draws its channels from
/// `derive_seed(seed, [g, trial])`; all schemes at that trial see the same
/// physical network. Trials may run on any number of threads; per-trial
/// results are reduced in trial order so the output does not depend on the
/// worker count.
pub fn run_sweep(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    spec.validate()?;
    match spec.kind {
        SweepKind::Validate => Err(Error::InvalidSpec("validate is not a sweep".into())),
        SweepKind::ComplexityVsUsers => complexity_rows(spec),
        _ => {
            let mut rows = Vec::new();
            let mut grid_index = 0u64;
            for &m in &spec.antennas {
                for &n in &spec.users {
                    for &snr in &spec.snr_db {
                        rows.extend(rate_point(spec, grid_index, m, n, snr)?);
                        grid_index += 1;
                    }
                }
            }
            Ok(rows)
        }
    }
}

fn complexity_rows(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    let k = spec.transmitters;
    let mut rows = Vec::new();
    for &m in &spec.antennas {
        for &n in &spec.users {
            for id in &spec.schemes {
                let flops = scheme_flops(*id, k as u64, n as u64, 2 * m as u64)?;
                rows.push(ResultRow {
                    sweep: spec.kind,
                    scheme: id.scheme,
                    framework: id.framework,
                    transmitters: k,
                    antennas: m,
                    users: n,
                    snr_db: None,
                    trials: None,
                    mean_sum_rate: None,
                    stderr_sum_rate: None,
                    mean_leakage: None,
                    flops: Some(flops.value()),
                });
            }
        }
    }
    Ok(rows)
}

/// Per scheme: (sum-rate, mean leakage over the selected receivers).
type TrialResult = Vec<(f64, f64)>;

fn run_trial(spec: &ExperimentSpec, seed: u64, m: usize, n: usize, power: PowerLevel) -> Result<TrialResult> {
    let k = spec.transmitters;
    let physical = generate_channels(&NetworkConfig::user_pairing(k, m, n)?, Seed(seed))?;
    let selection = if spec.needs(Framework::UserSelection) {
        Some(physical.clone().reframe(Framework::UserSelection)?)
    } else {
        None
    };
    spec.schemes
        .iter()
        .map(|id| {
            let cs = match id.framework {
                Framework::UserPairing => &physical,
                Framework::UserSelection => selection.as_ref().expect("selection layout generated"),
            };
            let out = run_scheme(*id, cs, power)?;
            let mean_leak = out.leakage.iter().sum::<f64>() / out.leakage.len() as f64;
            Ok((out.sum_rate, mean_leak))
        })
        .collect()
}

fn mean_and_stderr(values: impl ExactSizeIterator<Item = f64> + Clone) -> (f64, f64) {
    let count = values.len() as f64;
    let mean = values.clone().sum::<f64>() / count;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.map(|x| (x - mean).powi(2)).sum::<f64>() / (count - 1.0);
    (mean, (var / count).sqrt())
}

fn rate_point(spec: &ExperimentSpec, grid_index: u64, m: usize, n: usize, snr_db: f64) -> Result<Vec<ResultRow>> {
    let power = PowerLevel::from_snr_db(snr_db)?;
    let trials: Vec<TrialResult> = (0..spec.trials as u64)
        .into_par_iter()
        .map(|t| run_trial(spec, derive_seed(spec.seed, &[grid_index, t]), m, n, power))
        .collect::<Result<_>>()?;
    Ok(spec
        .schemes
        .iter()
        .enumerate()
        .map(|(i, id)| {
            let (mean, stderr) = mean_and_stderr(trials.iter().map(|t| t[i].0));
            let leak = trials.iter().map(|t| t[i].1).sum::<f64>() / trials.len() as f64;
            ResultRow {
                sweep: spec.kind,
                scheme: id.scheme,
                framework: id.framework,
                transmitters: spec.transmitters,
                antennas: m,
                users: n,
                snr_db: Some(snr_db),
                trials: Some(spec.trials),
                mean_sum_rate: Some(mean),
                stderr_sum_rate: Some(stderr),
                mean_leakage: Some(leak),
                flops: None,
            }
        })
        .collect())
}
