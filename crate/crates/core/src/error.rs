//! Error type shared by the solver modules.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("radius {r} lies outside the domain of the stationary solution (r_max = {r_max})")]
    OutsideDomain { r: f64, r_max: f64 },

    #[error("invalid state in cell {cell}: {reason}")]
    InvalidState { cell: usize, reason: String },

    #[error("non-finite value in cell {cell} ({what})")]
    NonFinite { cell: usize, what: &'static str },

    #[error("step limit of {steps} reached before t_end")]
    StepLimit { steps: usize },

    #[error("non-finite update in time-integration stage {stage}")]
    StageBlowUp { stage: usize },

    #[error("step {step} at t = {t}: {source}")]
    AtStep {
        step: usize,
        t: f64,
        #[source]
        source: Box<SolverError>,
    },
}

pub type Result<T> = std::result::Result<T, SolverError>;
