//! Evaluation, verification and ranking of variance-based uncertainty
//! relations for two, three and N observables.
//!
//! The crate is layered bottom-up:
//!
//! - [`quantum`]: states, observables, expectations, variances, commutators.
//! - [`bounds`]: generic left- and right-hand sides of every relation.
//! - [`qubit`]: Pauli/Bloch/Stokes closed forms, an independent route to the
//!   same qubit numbers.
//! - [`shots`]: finite-count projective measurement and bootstrap error bars.
//! - [`harness`]: angle sweeps, randomized verification, CSV/JSON emission.

pub mod bounds;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod quantum;
pub mod qubit;
pub mod seed;
pub mod shots;

pub use bounds::{BoundReport, ObservableSet, RelationId};
pub use error::{Error, Result};
pub use linalg::{CMatrix, C64};
pub use quantum::{DensityMatrix, Observable, PureState, QuantumState};
pub use qubit::{Axis, BlochAngles, QubitMoments, StokesVector};
