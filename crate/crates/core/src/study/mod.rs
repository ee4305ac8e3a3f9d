//! Manufactured solutions, the interpolation operator, computable error
//! norms and convergence studies.

mod cases;
mod convergence;
mod norms;

pub use cases::{ManufacturedCase, POLY_SEED};
pub use convergence::{eoc, run_convergence, solve_case, ConvergenceReport, LevelResult, StudyOptions};
pub use norms::{error_norms, interpolate_dofs, solution_norms, ErrorNorms};
