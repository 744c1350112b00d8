//! Relaxation of pseudo-pure spin-3/2 states and their normalization into
//! valid density matrices along the trajectory.
//!
//! The pipeline is: build an initial deviation matrix (`states`), evolve it
//! with the quadrupolar Redfield propagator (`redfield`), turn each instant
//! into a density matrix with a time-dependent polarization (`normalize`),
//! and evaluate concurrence and discrete Wigner functions on the result
//! (`observables`). `scenario` and `io` wrap this into configurable runs with
//! CSV/JSON output.

pub mod error;
pub mod io;
pub mod linalg;
pub mod normalize;
pub mod observables;
pub mod redfield;
pub mod scenario;
pub mod states;

pub use error::{LinalgError, NormalizeError, ObservableError, RedfieldError, StateError};
pub use linalg::ComplexMatrix;
pub use num_complex::Complex64;
pub use redfield::{DeltaMatrix, RelaxationTimes};
pub use states::{DensityMatrix, DeviationMatrix, PureKet, Spin, SpinSystem};
