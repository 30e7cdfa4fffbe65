//! Monte Carlo sweeps, CSV output and the validation suite.

mod output;
mod report;
mod spec;
mod sweep;
mod validate;

pub use output::{emit_csv, format_sig, read_csv, write_csv_file, ResultRow, CSV_HEADER};
pub use report::{users_gain_at_matched_rate, UsersGain};
pub use spec::{ExperimentSpec, SweepKind};
pub use sweep::{run_experiment, run_sweep, SweepOutput};
pub use validate::{run_validation, CheckOutcome, ValidationReport};
