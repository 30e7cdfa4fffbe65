//! Opportunistic interference alignment (OIA) for K-transmitter MIMO
//! interference channels.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`] and [`grassmann`]: complex dense kernels and subspace geometry
//!   (chordal distance, principal angles, subspace mean and spread).
//! * [`channel`]: reproducible i.i.d. CSCG channel draws for the
//!   user-selection and user-pairing network models.
//! * [`assignment`]: exact rectangular assignment solver and a brute-force
//!   reference.
//! * [`schemes`]: OIA, MIN-INR and MAX-SNR scheduling, leakage-minimising
//!   receivers and the achievable sum-rate.
//! * [`complexity`]: closed-form flop counts for each scheme.
//! * [`harness`]: Monte Carlo sweeps, CSV output and the validation suite.

pub mod assignment;
pub mod channel;
pub mod complexity;
mod error;
pub mod grassmann;
pub mod harness;
pub mod linalg;
pub mod schemes;
pub mod seeding;

pub use assignment::{brute_force_assignment, hungarian_rectangular, AssignmentResult, CostMatrix};
pub use channel::{
    draw_cscg_matrix, generate_channels, ChannelSet, Framework, NetworkConfig, PowerLevel, Seed,
};
pub use complexity::{FlopCount, OpKind, OpShape};
pub use error::{Error, Result};
pub use grassmann::{GeneratorMatrix, PrincipalAngles, SpreadValue};
pub use linalg::ComplexMatrix;
pub use schemes::{FeedbackMatrix, Pairing, PostProcessor, Scheme, SchemeId, SchemeOutcome};
