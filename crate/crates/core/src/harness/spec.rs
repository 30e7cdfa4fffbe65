use std::fmt;
use std::str::FromStr;

use crate::channel::Framework;
use crate::error::{Error, Result};
use crate::schemes::SchemeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepKind {
    SumRateVsSnr,
    SumRateVsUsers,
    SumRateVsAntennas,
    ComplexityVsUsers,
    Validate,
}

impl SweepKind {
    pub fn name(self) -> &'static str {
        match self {
            SweepKind::SumRateVsSnr => "sumrate-vs-snr",
            SweepKind::SumRateVsUsers => "sumrate-vs-users",
            SweepKind::SumRateVsAntennas => "sumrate-vs-antennas",
            SweepKind::ComplexityVsUsers => "complexity",
            SweepKind::Validate => "validate",
        }
    }

    pub fn is_rate_sweep(self) -> bool {
        matches!(self, SweepKind::SumRateVsSnr | SweepKind::SumRateVsUsers | SweepKind::SumRateVsAntennas)
    }
}

impl fmt::Display for SweepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            SweepKind::SumRateVsSnr,
            SweepKind::SumRateVsUsers,
            SweepKind::SumRateVsAntennas,
            SweepKind::ComplexityVsUsers,
            SweepKind::Validate,
        ]
        .into_iter()
        .find(|k| k.name() == s)
        .ok_or_else(|| Error::InvalidSpec(format!("unknown sweep '{s}'")))
    }
}

/// One experiment. Rate sweeps evaluate every point of
/// `antennas × users × snr_db` (in that nesting order); the sweep kind only
/// labels which axis is meant to vary.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub kind: SweepKind,
    pub schemes: Vec<SchemeId>,
    pub transmitters: usize,
    pub antennas: Vec<usize>,
    /// Total users `N`; in the user-selection framework `S = N / K`.
    pub users: Vec<usize>,
    pub snr_db: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
}

fn strictly_increasing<T: PartialOrd>(name: &str, grid: &[T]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidSpec(format!("{name} grid is empty")));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidSpec(format!("{name} grid is not strictly increasing")));
    }
    Ok(())
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.kind == SweepKind::Validate {
            if self.trials == 0 {
                return Err(Error::InvalidSpec("trials must be >= 1".into()));
            }
            return Ok(());
        }
        if self.transmitters < 2 {
            return Err(Error::InvalidSpec(format!("K = {} (need K >= 2)", self.transmitters)));
        }
        if self.schemes.is_empty() {
            return Err(Error::InvalidSpec("no schemes selected".into()));
        }
        let mut seen = self.schemes.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.schemes.len() {
            return Err(Error::InvalidSpec("duplicate scheme".into()));
        }
        strictly_increasing("antenna", &self.antennas)?;
        if self.antennas[0] == 0 {
            return Err(Error::InvalidSpec("M must be >= 1".into()));
        }
        strictly_increasing("user", &self.users)?;
        if self.kind.is_rate_sweep() {
            strictly_increasing("SNR", &self.snr_db)?;
            if self.snr_db.iter().any(|s| !s.is_finite()) {
                return Err(Error::InvalidSpec("SNR values must be finite".into()));
            }
            if self.trials == 0 {
                return Err(Error::InvalidSpec("trials must be >= 1".into()));
            }
        }
        let k = self.transmitters;
        for id in &self.schemes {
            for &n in &self.users {
                match id.framework {
                    Framework::UserSelection if n == 0 || n % k != 0 => {
                        return Err(Error::InvalidSpec(format!(
                            "{id}: N = {n} is not a positive multiple of K = {k}"
                        )));
                    }
                    Framework::UserPairing if n < k => {
                        return Err(Error::InvalidSpec(format!("{id}: N = {n} is smaller than K = {k}")));
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    pub fn needs(&self, framework: Framework) -> bool {
        self.schemes.iter().any(|s| s.framework == framework)
    }
}
