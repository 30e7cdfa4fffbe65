//! Network configurations and reproducible i.i.d. CSCG channel draws.
//!
//! Both network models share one physical layout: `N` receivers, each with
//! one `2M × M` channel matrix per transmitter. In the user-selection model
//! receiver `k·S + n` is user `n` of cell `k`; in the user-pairing model
//! receivers are not attached to a cell. The random stream for a matrix is
//! keyed by `(seed, receiver, transmitter, attempt)`, so the same seed yields
//! the same network under either model.

use std::fmt;

use log::debug;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::grassmann::has_full_column_rank;
use crate::linalg::{self, shape_str, ComplexMatrix};
use crate::seeding;

/// Redraw attempts per matrix before giving up on a rank-deficient draw.
const MAX_REDRAWS: u64 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Framework {
    /// Users are split into `K` cells of `S`; each transmitter picks one user
    /// from its own cell.
    UserSelection,
    /// A central node pairs each transmitter with any receiver.
    UserPairing,
}

impl Framework {
    pub fn short_name(self) -> &'static str {
        match self {
            Framework::UserSelection => "us",
            Framework::UserPairing => "up",
        }
    }
}

impl fmt::Display for Framework {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

/// `K` transmitters with `M` antennas each, `N` receivers with `2M` antennas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NetworkConfig {
    pub framework: Framework,
    pub transmitters: usize,
    pub antennas: usize,
    pub users: usize,
}

impl NetworkConfig {
    pub fn user_selection(transmitters: usize, antennas: usize, group_size: usize) -> Result<Self> {
        Self::new(Framework::UserSelection, transmitters, antennas, transmitters * group_size)
    }

    pub fn user_pairing(transmitters: usize, antennas: usize, users: usize) -> Result<Self> {
        Self::new(Framework::UserPairing, transmitters, antennas, users)
    }

    pub fn new(framework: Framework, transmitters: usize, antennas: usize, users: usize) -> Result<Self> {
        let cfg = Self { framework, transmitters, antennas, users };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.transmitters < 2 {
            return Err(Error::InvalidConfig(format!("K = {} (need K >= 2)", self.transmitters)));
        }
        if self.antennas < 1 {
            return Err(Error::InvalidConfig("M = 0 (need M >= 1)".into()));
        }
        match self.framework {
            Framework::UserSelection => {
                if self.users == 0 || self.users % self.transmitters != 0 {
                    return Err(Error::InvalidConfig(format!(
                        "user selection needs N a positive multiple of K (N = {}, K = {})",
                        self.users, self.transmitters
                    )));
                }
            }
            Framework::UserPairing => {
                if self.users < self.transmitters {
                    return Err(Error::InvalidConfig(format!(
                        "user pairing needs N >= K (N = {}, K = {})",
                        self.users, self.transmitters
                    )));
                }
            }
        }
        Ok(())
    }

    /// `N_R = 2M`.
    pub fn receive_antennas(&self) -> usize {
        2 * self.antennas
    }

    /// Users per cell `S = N / K`; `None` in the pairing model.
    pub fn group_size(&self) -> Option<usize> {
        match self.framework {
            Framework::UserSelection => Some(self.users / self.transmitters),
            Framework::UserPairing => None,
        }
    }
}

/// Master seed for a channel realisation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Seed(pub u64);

/// Total transmit power per transmitter, linear scale, with unit noise
/// variance. Each of the `M` streams gets `P / M`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PowerLevel(f64);

impl PowerLevel {
    pub fn new(linear: f64) -> Result<Self> {
        if linear.is_finite() && linear >= 0.0 {
            Ok(Self(linear))
        } else {
            Err(Error::InvalidConfig(format!("power must be finite and >= 0, got {linear}")))
        }
    }

    /// `P = 10^(snr_db / 10)`.
    pub fn from_snr_db(snr_db: f64) -> Result<Self> {
        Self::new(10f64.powf(snr_db / 10.0))
    }

    pub fn linear(self) -> f64 {
        self.0
    }

    pub fn per_stream(self, streams: usize) -> f64 {
        self.0 / streams as f64
    }
}

/// `rows × cols` matrix of i.i.d. `CN(0, 1)` entries.
pub fn draw_cscg_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * scale, im * scale)
    })
}

/// One channel realisation for the whole network.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    config: NetworkConfig,
    /// Receiver-major: entry `n·K + l` is the channel from transmitter `l`
    /// to receiver `n`.
    matrices: Vec<ComplexMatrix>,
    redraws: usize,
}

impl ChannelSet {
    /// Builds a channel set from explicit matrices laid out receiver-major.
    pub fn from_matrices(config: NetworkConfig, matrices: Vec<ComplexMatrix>) -> Result<Self> {
        config.validate()?;
        let expected = config.users * config.transmitters;
        if matrices.len() != expected {
            return Err(Error::ShapeMismatch {
                expected: format!("{expected} matrices"),
                found: format!("{} matrices", matrices.len()),
            });
        }
        let shape = (config.receive_antennas(), config.antennas);
        for m in &matrices {
            if m.shape() != shape {
                return Err(Error::ShapeMismatch {
                    expected: shape_str(shape.0, shape.1),
                    found: shape_str(m.nrows(), m.ncols()),
                });
            }
            linalg::ensure_finite(m)?;
        }
        Ok(Self { config, matrices, redraws: 0 })
    }

    pub fn config(&self) -> &NetworkConfig {
        &self.config
    }

    pub fn framework(&self) -> Framework {
        self.config.framework
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    /// Number of rank-deficient draws that were replaced during generation.
    pub fn redraws(&self) -> usize {
        self.redraws
    }

    /// The `K` channels seen by receiver `user` (global index).
    pub fn receiver(&self, user: usize) -> &[ComplexMatrix] {
        let k = self.config.transmitters;
        &self.matrices[user * k..(user + 1) * k]
    }

    /// `G_{n,k}`: transmitter `k` to receiver `n`.
    pub fn link(&self, user: usize, transmitter: usize) -> &ComplexMatrix {
        &self.receiver(user)[transmitter]
    }

    /// `H^k_{n,l}`: transmitter `l` to user `n` of cell `k`.
    ///
    /// Panics outside the user-selection model.
    pub fn cell_link(&self, cell: usize, user: usize, transmitter: usize) -> &ComplexMatrix {
        let s = self.config.group_size().expect("cell_link on a user-pairing channel set");
        self.link(cell * s + user, transmitter)
    }

    /// Global receiver index of user `n` in cell `k`.
    pub fn cell_user(&self, cell: usize, user: usize) -> usize {
        let s = self.config.group_size().expect("cell_user on a user-pairing channel set");
        cell * s + user
    }

    pub fn matrices_mut(&mut self) -> &mut [ComplexMatrix] {
        &mut self.matrices
    }

    /// Reinterprets the same physical channels under another framework.
    pub fn reframe(self, framework: Framework) -> Result<Self> {
        let config = NetworkConfig { framework, ..self.config };
        config.validate()?;
        Ok(Self { config, ..self })
    }
}

/// Draws every channel matrix of the network from streams keyed by `seed`.
///
/// A draw that fails the full-column-rank test is replaced by the next
/// substream for that matrix; the count is kept in [`ChannelSet::redraws`].
pub fn generate_channels(config: &NetworkConfig, seed: Seed) -> Result<ChannelSet> {
    config.validate()?;
    let (rows, cols) = (config.receive_antennas(), config.antennas);
    let k = config.transmitters;
    let mut redraws = 0;
    let mut matrices = Vec::with_capacity(config.users * k);
    for user in 0..config.users {
        for tx in 0..k {
            let mut attempt = 0u64;
            let m = loop {
                let mut rng = seeding::stream(seed.0, &[user as u64, tx as u64, attempt]);
                let m = draw_cscg_matrix(rows, cols, &mut rng);
                if has_full_column_rank(&m) {
                    break m;
                }
                attempt += 1;
                redraws += 1;
                debug!("redrawing rank-deficient channel (user {user}, tx {tx}, attempt {attempt})");
                if attempt >= MAX_REDRAWS {
                    return Err(Error::RankDeficient { ratio: 0.0 });
                }
            };
            matrices.push(m);
        }
    }
    Ok(ChannelSet { config: *config, matrices, redraws })
}
