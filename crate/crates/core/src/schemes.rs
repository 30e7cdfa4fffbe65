//! Scheduling schemes and the achievable sum-rate.
//!
//! Every scheme picks one receiver per transmitter (within its cell for user
//! selection, via a rectangular assignment for user pairing) and then fixes
//! an `M`-column receive filter for each selected receiver:
//!
//! * **OIA** ranks receivers by the measure of alignment of their
//!   interference subspaces, an upper bound on the spread of those subspaces
//!   around their Grassmannian mean. The metric uses normalised channels, so
//!   it is blind to channel gains.
//! * **MIN-INR** ranks receivers by the interference power left after the
//!   leakage-minimising filter (trailing eigenvalues of the raw interference
//!   covariance).
//! * **MAX-SNR** ranks receivers by the desired-signal energy captured in the
//!   best `M`-dimensional receive subspace and uses that subspace as filter.
//!
//! The MIN-INR and MAX-SNR rules are reconstructions matching the cost
//! profile of those baselines; OIA and MIN-INR use the leakage-minimising
//! filter.

use std::fmt;
use std::sync::Once;

use log::warn;
use num_complex::Complex64;

use crate::assignment::{hungarian_rectangular, CostMatrix};
use crate::channel::{ChannelSet, Framework, PowerLevel};
use crate::error::{Error, Result};
use crate::grassmann::{self, GeneratorMatrix};
use crate::linalg::{self, shape_str, ComplexMatrix, HermitianEigen};

pub use crate::assignment::Pairing;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Oia,
    MinInr,
    MaxSnr,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Oia, Scheme::MinInr, Scheme::MaxSnr];

    pub fn short_name(self) -> &'static str {
        match self {
            Scheme::Oia => "oia",
            Scheme::MinInr => "min-inr",
            Scheme::MaxSnr => "max-snr",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

/// A scheme run in a particular framework, e.g. OIA-UP.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SchemeId {
    pub scheme: Scheme,
    pub framework: Framework,
}

impl SchemeId {
    pub fn new(scheme: Scheme, framework: Framework) -> Self {
        Self { scheme, framework }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.scheme, self.framework)
    }
}

/// Measure of alignment reported by user `user` of cell `cell`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlignmentScoreUS {
    pub cell: usize,
    pub user: usize,
    pub f: f64,
}

/// `N × K` matrix of alignment measures fed back to the central node;
/// entry `(n, k)` assumes receiver `n` is served by transmitter `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct FeedbackMatrix {
    users: usize,
    transmitters: usize,
    values: Vec<f64>,
}

impl FeedbackMatrix {
    pub fn new(users: usize, transmitters: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != users * transmitters {
            return Err(Error::ShapeMismatch {
                expected: format!("{} entries", users * transmitters),
                found: format!("{} entries", values.len()),
            });
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidConfig("feedback entries must be finite and nonnegative".into()));
        }
        Ok(Self { users, transmitters, values })
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn transmitters(&self) -> usize {
        self.transmitters
    }

    pub fn get(&self, user: usize, transmitter: usize) -> f64 {
        self.values[user * self.transmitters + transmitter]
    }

    pub fn row(&self, user: usize) -> &[f64] {
        &self.values[user * self.transmitters..(user + 1) * self.transmitters]
    }

    pub fn to_cost_matrix(&self) -> Result<CostMatrix> {
        CostMatrix::new(self.users, self.transmitters, self.values.clone())
    }
}

/// Receive filter with `M` orthonormal columns.
#[derive(Debug, Clone, PartialEq)]
pub struct PostProcessor(GeneratorMatrix);

impl PostProcessor {
    pub fn new(u: GeneratorMatrix) -> Self {
        Self(u)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.0.basis()
    }

    pub fn generator(&self) -> &GeneratorMatrix {
        &self.0
    }
}

/// Result of one scheme on one channel realisation.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeOutcome {
    pub pairing: Pairing,
    pub post_processors: Vec<PostProcessor>,
    pub sum_rate: f64,
    /// `tr(U^H B U)` at each selected receiver, in transmitter order.
    pub leakage: Vec<f64>,
}

fn orthonormal_channels(channels: &[ComplexMatrix]) -> Result<Vec<GeneratorMatrix>> {
    channels.iter().map(grassmann::orthonormalize).collect()
}

fn members_except(count: usize, skip: usize) -> Vec<usize> {
    (0..count).filter(|&l| l != skip).collect()
}

/// Alignment measure at a receiver whose `K` incoming channels are
/// `channels`, when `desired` is the serving transmitter:
/// `min_{j≠k} Σ_{l≠k} d_c²(Ĥ_j, Ĥ_l)`.
///
/// With a single interferer (`K = 2`) the measure is identically zero.
pub fn measure_of_alignment(channels: &[ComplexMatrix], desired: usize) -> Result<f64> {
    if channels.len() < 2 || desired >= channels.len() {
        return Err(Error::InvalidConfig(format!(
            "need K >= 2 channels and a desired index below K (K = {}, desired = {desired})",
            channels.len()
        )));
    }
    let interferers: Vec<GeneratorMatrix> = channels
        .iter()
        .enumerate()
        .filter(|&(l, _)| l != desired)
        .map(|(_, h)| grassmann::orthonormalize(h))
        .collect::<Result<_>>()?;
    Ok(grassmann::spread_approx(&interferers)?.value())
}

/// One row of the feedback matrix: the alignment measure at a receiver for
/// every serving hypothesis, sharing one orthonormalisation per channel and
/// one pairwise-distance table.
pub fn feedback_row(channels: &[ComplexMatrix]) -> Result<Vec<f64>> {
    let gens = orthonormal_channels(channels)?;
    let table = grassmann::chordal_table(&gens)?;
    let k = channels.len();
    Ok((0..k)
        .map(|desired| grassmann::spread_approx_from_table(&table, &members_except(k, desired)))
        .collect())
}

fn require_framework(cs: &ChannelSet, framework: Framework) -> Result<()> {
    if cs.framework() != framework {
        return Err(Error::FrameworkMismatch {
            scheme: framework.to_string(),
            framework: cs.framework().to_string(),
        });
    }
    Ok(())
}

/// `f_n^k` for every user of every cell, cell-major.
pub fn alignment_scores_us(cs: &ChannelSet) -> Result<Vec<AlignmentScoreUS>> {
    require_framework(cs, Framework::UserSelection)?;
    let cfg = cs.config();
    let s = cfg.group_size().unwrap_or(0);
    let mut scores = Vec::with_capacity(cfg.users);
    for cell in 0..cfg.transmitters {
        for user in 0..s {
            let f = measure_of_alignment(cs.receiver(cs.cell_user(cell, user)), cell)?;
            scores.push(AlignmentScoreUS { cell, user, f });
        }
    }
    Ok(scores)
}

/// Index of the smallest value; ties go to the lowest index.
fn argmin(values: impl IntoIterator<Item = f64>) -> usize {
    let mut best = (0, f64::INFINITY);
    for (i, v) in values.into_iter().enumerate() {
        if v < best.1 {
            best = (i, v);
        }
    }
    best.0
}

/// Picks, per cell, the user with the smallest metric; returns a pairing in
/// global receiver indices.
fn select_per_cell(cs: &ChannelSet, mut metric: impl FnMut(usize, usize) -> Result<f64>) -> Result<Pairing> {
    require_framework(cs, Framework::UserSelection)?;
    let cfg = cs.config();
    let s = cfg.group_size().unwrap_or(0);
    let mut chosen = Vec::with_capacity(cfg.transmitters);
    for cell in 0..cfg.transmitters {
        let values = (0..s).map(|n| metric(cell, cs.cell_user(cell, n))).collect::<Result<Vec<_>>>()?;
        chosen.push(cs.cell_user(cell, argmin(values)));
    }
    Pairing::new(chosen, cfg.users)
}

/// Per cell, the user with the smallest alignment measure (lowest index on
/// ties).
pub fn select_users_oia_us(cs: &ChannelSet) -> Result<Pairing> {
    select_per_cell(cs, |cell, user| measure_of_alignment(cs.receiver(user), cell))
}

/// Feedback matrix for the user-pairing framework.
pub fn feedback_matrix_up(cs: &ChannelSet) -> Result<FeedbackMatrix> {
    require_framework(cs, Framework::UserPairing)?;
    let cfg = cs.config();
    let mut values = Vec::with_capacity(cfg.users * cfg.transmitters);
    for user in 0..cfg.users {
        values.extend(feedback_row(cs.receiver(user))?);
    }
    FeedbackMatrix::new(cfg.users, cfg.transmitters, values)
}

/// Minimum-sum pairing over the feedback matrix.
pub fn pair_users_oia_up(feedback: &FeedbackMatrix) -> Result<Pairing> {
    if feedback.users() < feedback.transmitters() {
        return Err(Error::InfeasibleAssignment { users: feedback.users(), transmitters: feedback.transmitters() });
    }
    Ok(hungarian_rectangular(&feedback.to_cost_matrix()?)?.pairing)
}

/// Raw interference covariance `Σ_{l≠k} H_l H_l^H` at a receiver.
pub fn interference_covariance(channels: &[ComplexMatrix], desired: usize) -> ComplexMatrix {
    let rows = channels.first().map_or(0, |h| h.nrows());
    linalg::gram_sum(rows, channels.iter().enumerate().filter(|&(l, _)| l != desired).map(|(_, h)| h))
}

/// Leakage-minimising receive filter: eigenvectors of `B` for its `streams`
/// smallest eigenvalues.
pub fn post_processor(b: &ComplexMatrix, streams: usize) -> Result<PostProcessor> {
    if streams == 0 || streams > b.nrows() {
        return Err(Error::ShapeMismatch {
            expected: format!("1..={} streams", b.nrows()),
            found: streams.to_string(),
        });
    }
    let eig = HermitianEigen::new(b)?;
    Ok(PostProcessor(GeneratorMatrix::from_orthonormal(eig.trailing(streams))?))
}

/// Interference leakage `tr(U^H B U)`.
pub fn leakage(u: &PostProcessor, b: &ComplexMatrix) -> f64 {
    linalg::quadratic_trace(u.matrix(), b)
}

/// Interference power left after the leakage-minimising filter:
/// `Σ_{m>M} λ_m(Σ_l H_l H_l^H)` over the raw interference channels.
pub fn min_inr_metric(interference: &[ComplexMatrix], streams: usize) -> Result<f64> {
    let first = interference.first().ok_or(Error::EmptyList)?;
    let rows = first.nrows();
    if streams > rows {
        return Err(Error::ShapeMismatch { expected: format!("<= {rows} streams"), found: streams.to_string() });
    }
    let eig = linalg::hermitian_eigs(&linalg::gram_sum(rows, interference))?;
    Ok(eig[streams..].iter().sum::<f64>().max(0.0))
}

/// Desired-signal energy captured by the best `streams`-dimensional receive
/// subspace: `Σ_{m≤M} λ_m(H_d H_d^H)`.
pub fn max_snr_metric(desired: &ComplexMatrix, streams: usize) -> Result<f64> {
    let eig = linalg::hermitian_eigs(&(desired * desired.adjoint()))?;
    if streams > eig.len() {
        return Err(Error::ShapeMismatch { expected: format!("<= {} streams", eig.len()), found: streams.to_string() });
    }
    Ok(eig[..streams].iter().sum::<f64>().max(0.0))
}

/// Matched-subspace filter: leading `streams` left singular vectors of the
/// desired channel.
pub fn matched_post_processor(desired: &ComplexMatrix, streams: usize) -> Result<PostProcessor> {
    let eig = HermitianEigen::new(&(desired * desired.adjoint()))?;
    Ok(PostProcessor(GeneratorMatrix::from_orthonormal(eig.leading(streams))?))
}

/// Rate of the link served by `desired` at a receiver with incoming
/// channels `channels` and filter `u`:
/// `log2|I + (P/M) Σ_l Y_l Y_l^H| − log2|I + (P/M) Σ_{l≠k} Y_l Y_l^H|`
/// with `Y_l = U^H H_l`.
pub fn link_rate(channels: &[ComplexMatrix], desired: usize, u: &PostProcessor, power: PowerLevel) -> Result<f64> {
    let m = u.matrix().ncols();
    let scale = Complex64::new(power.per_stream(m), 0.0);
    let uh = u.matrix().adjoint();
    let mut interference = ComplexMatrix::identity(m, m);
    let mut total = ComplexMatrix::identity(m, m);
    for (l, h) in channels.iter().enumerate() {
        if h.nrows() != u.matrix().nrows() {
            return Err(Error::ShapeMismatch {
                expected: format!("{} receive antennas", u.matrix().nrows()),
                found: shape_str(h.nrows(), h.ncols()),
            });
        }
        let y = &uh * h;
        let yy = (&y * y.adjoint()) * scale;
        total += &yy;
        if l != desired {
            interference += &yy;
        }
    }
    let num = linalg::log2_det_hpd(&total).ok_or(Error::NonFinite)?;
    let den = linalg::log2_det_hpd(&interference).ok_or(Error::NonFinite)?;
    Ok((num - den).max(0.0))
}

/// Achievable sum-rate in bits/s/Hz, evaluated on the raw channels.
pub fn sum_rate(cs: &ChannelSet, pairing: &Pairing, post: &[PostProcessor], power: PowerLevel) -> Result<f64> {
    let cfg = cs.config();
    if pairing.transmitters() != cfg.transmitters || post.len() != cfg.transmitters {
        return Err(Error::ShapeMismatch {
            expected: format!("{} selections and filters", cfg.transmitters),
            found: format!("{} selections, {} filters", pairing.transmitters(), post.len()),
        });
    }
    let mut total = 0.0;
    for (k, (&user, u)) in pairing.users().iter().zip(post).enumerate() {
        if u.matrix().shape() != (cfg.receive_antennas(), cfg.antennas) {
            return Err(Error::ShapeMismatch {
                expected: shape_str(cfg.receive_antennas(), cfg.antennas),
                found: shape_str(u.matrix().nrows(), u.matrix().ncols()),
            });
        }
        total += link_rate(cs.receiver(user), k, u, power)?;
    }
    Ok(total)
}

static TWO_TX_WARNING: Once = Once::new();

/// MAX-SNR pairing, used directly and as the OIA fallback for `K = 2`.
fn max_snr_selection(cs: &ChannelSet) -> Result<Pairing> {
    let m = cs.config().antennas;
    match cs.framework() {
        Framework::UserSelection => select_per_cell(cs, |cell, user| Ok(-max_snr_metric(cs.link(user, cell), m)?)),
        Framework::UserPairing => {
            let cfg = cs.config();
            let mut costs = Vec::with_capacity(cfg.users * cfg.transmitters);
            for user in 0..cfg.users {
                for tx in 0..cfg.transmitters {
                    costs.push(-max_snr_metric(cs.link(user, tx), m)?);
                }
            }
            Ok(hungarian_rectangular(&CostMatrix::new(cfg.users, cfg.transmitters, costs)?)?.pairing)
        }
    }
}

fn min_inr_selection(cs: &ChannelSet) -> Result<Pairing> {
    let m = cs.config().antennas;
    let metric = |user: usize, tx: usize| {
        let rx = cs.receiver(user);
        let others: Vec<ComplexMatrix> =
            rx.iter().enumerate().filter(|&(l, _)| l != tx).map(|(_, h)| h.clone()).collect();
        min_inr_metric(&others, m)
    };
    match cs.framework() {
        Framework::UserSelection => select_per_cell(cs, |cell, user| metric(user, cell)),
        Framework::UserPairing => {
            let cfg = cs.config();
            let mut costs = Vec::with_capacity(cfg.users * cfg.transmitters);
            for user in 0..cfg.users {
                for tx in 0..cfg.transmitters {
                    costs.push(metric(user, tx)?);
                }
            }
            Ok(hungarian_rectangular(&CostMatrix::new(cfg.users, cfg.transmitters, costs)?)?.pairing)
        }
    }
}

/// Receiver selection for `id`; independent of transmit power.
pub fn schedule(id: SchemeId, cs: &ChannelSet) -> Result<Pairing> {
    if id.framework != cs.framework() {
        return Err(Error::FrameworkMismatch { scheme: id.to_string(), framework: cs.framework().to_string() });
    }
    match id.scheme {
        Scheme::Oia if cs.config().transmitters == 2 => {
            TWO_TX_WARNING.call_once(|| {
                warn!("K = 2: every alignment measure is zero; OIA falls back to MAX-SNR selection");
            });
            max_snr_selection(cs)
        }
        Scheme::Oia => match id.framework {
            Framework::UserSelection => select_users_oia_us(cs),
            Framework::UserPairing => pair_users_oia_up(&feedback_matrix_up(cs)?),
        },
        Scheme::MinInr => min_inr_selection(cs),
        Scheme::MaxSnr => max_snr_selection(cs),
    }
}

/// Receive filters and leakages for the receivers in `pairing`.
pub fn post_processors(scheme: Scheme, cs: &ChannelSet, pairing: &Pairing) -> Result<(Vec<PostProcessor>, Vec<f64>)> {
    let m = cs.config().antennas;
    let mut filters = Vec::with_capacity(pairing.transmitters());
    let mut leaks = Vec::with_capacity(pairing.transmitters());
    for (k, &user) in pairing.users().iter().enumerate() {
        let rx = cs.receiver(user);
        let b = interference_covariance(rx, k);
        let u = match scheme {
            Scheme::Oia | Scheme::MinInr => post_processor(&b, m)?,
            Scheme::MaxSnr => matched_post_processor(&rx[k], m)?,
        };
        leaks.push(leakage(&u, &b));
        filters.push(u);
    }
    Ok((filters, leaks))
}

/// Selection, filters and sum-rate for one scheme on one realisation.
pub fn run_scheme(id: SchemeId, cs: &ChannelSet, power: PowerLevel) -> Result<SchemeOutcome> {
    let pairing = schedule(id, cs)?;
    let (post_processors, leakage) = post_processors(id.scheme, cs, &pairing)?;
    let sum_rate = sum_rate(cs, &pairing, &post_processors, power)?;
    Ok(SchemeOutcome { pairing, post_processors, sum_rate, leakage })
}
