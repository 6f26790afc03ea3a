//! Sweep, verification and output plumbing behind the `urel` binary.

pub mod emit;
pub mod files;
pub mod sweep;
pub mod verify;

pub use emit::{emit_outcomes, emit_summary, emit_sweep, Format, Metadata};
pub use files::{load_observables, load_state};
pub use sweep::{run_sweep, OutputRow, RelationValue, SweepMode, SweepSpec};
pub use verify::{run_verify, ObservableSource, VerificationSummary, VerifyConfig};
