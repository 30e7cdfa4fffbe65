//! Flop-count model for the scheduling schemes.
//!
//! One flop is one real floating-point operation. Per-operation costs on a
//! complex `m × n` matrix (`m >= n`) and the scheme totals are evaluated
//! exactly as printed in the source analysis, including the SVD cost with
//! two `mn²` terms and identical GSO/MUL costs. The assignment solve at the
//! central node is not counted. The MIN-INR and MAX-SNR totals for the
//! user-selection framework are not modelled.

use std::fmt;

use crate::channel::Framework;
use crate::error::{Error, Result};
use crate::schemes::{Scheme, SchemeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FlopCount(pub u64);

impl FlopCount {
    pub fn value(self) -> u64 {
        self.0
    }
}

impl fmt::Display for FlopCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn flops(value: i128) -> FlopCount {
    FlopCount(u64::try_from(value).expect("flop total out of range"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpKind {
    /// `A + A`
    Add,
    /// `‖A‖_F`
    FrobNorm,
    /// Gram-Schmidt orthogonalisation.
    Gso,
    Svd,
    /// `A A^H`
    Mul,
}

/// Complex `m × n` operand with `m >= n >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OpShape {
    m: u64,
    n: u64,
}

impl OpShape {
    pub fn new(m: u64, n: u64) -> Result<Self> {
        if n == 0 || m < n {
            return Err(Error::InvalidConfig(format!("operation shape {m}x{n} needs m >= n >= 1")));
        }
        Ok(Self { m, n })
    }
}

pub fn psi_op(kind: OpKind, shape: OpShape) -> FlopCount {
    let (m, n) = (shape.m, shape.n);
    FlopCount(match kind {
        OpKind::Add => 2 * m * n,
        OpKind::FrobNorm => 4 * m * n,
        OpKind::Gso | OpKind::Mul => 8 * m * n * n - 2 * m * n,
        OpKind::Svd => 24 * m * n * n + 48 * m * n * n + 54 * n * n * n,
    })
}

fn cubes(n_r: u64) -> (i128, i128) {
    let r = n_r as i128;
    (r * r * r, r * r)
}

/// Cost at the `K` selected users (interference covariance plus one SVD),
/// shared by both OIA totals.
fn oia_selected_user_cost(k: i128, r3: i128, r2: i128) -> i128 {
    r3 * (124 + 2 * k) + r2 * (k - 3)
}

/// OIA in the user-selection framework with `S` users per cell.
pub fn psi_oia_us(k: u64, s: u64, n_r: u64) -> FlopCount {
    let (r3, r2) = cubes(n_r);
    let (k, s) = (k as i128, s as i128);
    let per_user = r3 * (4 * k - 4) + r2 * (3 * k * k - 11 * k + 8);
    flops(k * (s * per_user + oia_selected_user_cost(k, r3, r2)))
}

/// OIA in the user-pairing framework with `N` users in total.
pub fn psi_oia_up(k: u64, n: u64, n_r: u64) -> FlopCount {
    let (r3, r2) = cubes(n_r);
    let (k, n) = (k as i128, n as i128);
    let per_user = r3 * (4 * k) + r2 * (3 * k * k - 5 * k);
    flops(n * per_user + k * oia_selected_user_cost(k, r3, r2))
}

pub fn psi_min_inr_up(k: u64, n: u64, n_r: u64) -> FlopCount {
    let (r3, r2) = cubes(n_r);
    let (k, n) = (k as i128, n as i128);
    flops(n * (r3 * 128 * k + r2 * 3 * k))
}

pub fn psi_max_snr_up(k: u64, n: u64, n_r: u64) -> FlopCount {
    let (r3, r2) = cubes(n_r);
    let (k, n) = (k as i128, n as i128);
    flops(n * (r3 * 128 * k - r2 * k))
}

/// Total cost of `scheme` for `K` transmitters, `N` users and `N_R` receive
/// antennas. In the user-selection framework `N` must be a multiple of `K`.
pub fn scheme_flops(scheme: SchemeId, k: u64, n: u64, n_r: u64) -> Result<FlopCount> {
    match (scheme.scheme, scheme.framework) {
        (Scheme::Oia, Framework::UserSelection) => {
            if k == 0 || n % k != 0 {
                return Err(Error::InvalidSpec(format!("N = {n} is not a multiple of K = {k}")));
            }
            Ok(psi_oia_us(k, n / k, n_r))
        }
        (Scheme::Oia, Framework::UserPairing) => Ok(psi_oia_up(k, n, n_r)),
        (Scheme::MinInr, Framework::UserPairing) => Ok(psi_min_inr_up(k, n, n_r)),
        (Scheme::MaxSnr, Framework::UserPairing) => Ok(psi_max_snr_up(k, n, n_r)),
        (_, Framework::UserSelection) => Err(Error::UnsupportedCombination(format!(
            "no flop model for {scheme} (user-selection totals for MIN-INR and MAX-SNR are not modelled)"
        ))),
    }
}
