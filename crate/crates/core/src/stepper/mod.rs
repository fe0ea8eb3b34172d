//! Time integration: the S-ADI scheme and the non-ADI baseline.

mod nonadi;
mod ops;
mod problem;
mod run;
mod sadi;
pub mod snapshot;
mod state;

pub use nonadi::{nonadi_first_step, nonadi_step};
pub use ops::{build_operators, NonAdiOperators, SolverOptions, SpatialOperators, StepOperators};
pub use problem::{evaluate_nonlinearity, Example, InitialData, Nonlinearity, Problem, Tabulated};
pub use run::{run, step_count, NoRecorder, Recorder, RunOutput, RunStats, Scheme};
pub use sadi::{adi_solve, rhs_first, rhs_general, sadi_first_step, sadi_step};
pub use state::SchemeState;
