//! Named test problems, their diagnostics and parallel suites.

pub mod acceptance;
pub mod catalog;
pub mod convergence;
pub mod diagnostics;
pub mod suite;

pub use catalog::{catalog, find, ids, PerturbationSpec, Reference, ReferenceKind, TestCase, Tier};
pub use diagnostics::{field_errors, l1_error, linear_fit, reference_on_grid, shock_locate, FieldErrors, LinearFit};
pub use suite::{config_digest, run_case, run_cases, CaseOutcome, CaseReport, ShockSample};
pub use convergence::{run_convergence, ConvergenceReport};
