//! Runs catalog cases, in parallel when several are given, and condenses
//! each run into a serializable report.

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::catalog::{ReferenceKind, TestCase, Tier};
use super::diagnostics::{displacement_measure, field_errors, reference_on_grid, shock_locate, FieldErrors};
use crate::config::RunConfig;
use crate::driver::{run, RunResult, Termination};
use crate::error::{Result, SolverError};

/// Shock samples recorded per run when the case sets no output cadence.
pub const SHOCK_SAMPLES: usize = 100;

/// Detected shock position at one output time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShockSample {
    pub t: f64,
    pub r: Option<f64>,
}

/// Per-case summary written to the suite report.
#[derive(Debug, Clone, Serialize)]
pub struct CaseReport {
    pub id: String,
    /// SHA-256 of the TOML form of the run configuration.
    pub config_digest: String,
    pub config: RunConfig,
    pub tier: Tier,
    pub termination: Termination,
    pub t_final: f64,
    pub steps: usize,
    pub wall_time_s: f64,
    pub reference_kind: Option<ReferenceKind>,
    /// L1 distance of the final state to the reference, per variable.
    pub errors: Option<FieldErrors>,
    pub shock_locations: Vec<ShockSample>,
    pub perturbation_integral: Option<f64>,
    /// L1 distance in `v` to the unperturbed solution, when there is one.
    pub displacement: Option<f64>,
}

/// A finished run with its report.
#[derive(Debug, Clone)]
pub struct CaseOutcome {
    pub report: CaseReport,
    pub result: RunResult,
}

/// Failed case in a suite.
#[derive(Debug, Clone, Serialize)]
pub struct CaseFailure {
    pub id: String,
    pub error: String,
}

pub fn config_digest(config: &RunConfig) -> String {
    let text = toml::to_string(config).expect("run configurations serialize to TOML");
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Runs one case and evaluates its diagnostics.
///
/// Without an output cadence the run is sampled [`SHOCK_SAMPLES`] times for
/// shock tracking.
pub fn run_case(case: &TestCase) -> Result<CaseOutcome> {
    let mut config = case.config.clone();
    if config.output_interval.is_none() && config.t_end > 0.0 {
        config.output_interval = Some(config.t_end / SHOCK_SAMPLES as f64);
    }
    let result = run(&config, &case.data)?;
    let grid = config.grid()?;
    let last = result.final_snapshot();
    let reference = case
        .reference
        .as_ref()
        .map(|re| (re, reference_on_grid(&re.datum, &grid, config.averaging, config.k)));
    let errors = reference.as_ref().map(|(re, snap)| {
        let mut e = field_errors(last, snap, grid.dr());
        if re.velocity_only {
            e.rho = None;
        }
        e
    });
    let displacement = reference
        .as_ref()
        .filter(|(re, _)| re.kind == ReferenceKind::Unperturbed)
        .map(|(_, snap)| displacement_measure(last, snap, grid.dr()));
    let shock_locations =
        result.snapshots.iter().map(|s| ShockSample { t: s.t, r: shock_locate(&s.v, &grid) }).collect();
    let report = CaseReport {
        id: case.id.clone(),
        config_digest: config_digest(&config),
        config,
        tier: case.tier,
        termination: result.termination,
        t_final: last.t,
        steps: result.steps,
        wall_time_s: result.wall_time.as_secs_f64(),
        reference_kind: case.reference.as_ref().map(|r| r.kind),
        errors,
        shock_locations,
        perturbation_integral: case.perturbation.map(|p| p.integral()),
        displacement,
    };
    Ok(CaseOutcome { report, result })
}

/// Runs `cases` on the rayon pool, keeping their order.
pub fn run_cases(cases: &[TestCase]) -> Vec<std::result::Result<CaseOutcome, (String, SolverError)>> {
    cases.par_iter().map(|c| run_case(c).map_err(|e| (c.id.clone(), e))).collect()
}
