//! Mesh-refinement studies on smooth non-stationary data.

use serde::Serialize;

use super::catalog::{stationary_b, stationary_e};
use super::diagnostics::{l1_error, observed_orders, restrict};
use crate::config::{Averaging, Model, RightBoundary, RunConfig};
use crate::driver::{run, InitialData};
use crate::error::{Result, SolverError};
use crate::euler::Primitive;

/// Cells of the reference solution.
pub const REFERENCE_CELLS: usize = 4096;
/// Default mesh sequence.
pub const MESHES: [usize; 3] = [128, 256, 512];

/// Errors and observed orders of one study.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub model: Model,
    pub order: u8,
    pub meshes: Vec<usize>,
    pub reference_cells: usize,
    /// L1 errors in `v` against the restricted reference.
    pub errors: Vec<f64>,
    /// `log2` of successive error ratios.
    pub orders: Vec<f64>,
}

/// Smooth Burgers datum: the positive `K = 1/2` stationary solution plus a
/// Gaussian bump centred at `r = 3`.
pub fn smooth_datum_b() -> InitialData {
    let InitialData::Burgers { profile, .. } = stationary_b(1.0) else { unreachable!() };
    InitialData::burgers(move |r| profile(r) + 0.02 * (-50.0 * (r - 3.0) * (r - 3.0)).exp())
}

/// Smooth Euler datum: a supersonic stationary flow plus a Gaussian bump in
/// `v`.
pub fn smooth_datum_e() -> InitialData {
    let InitialData::Euler(profile) = stationary_e(1.0, 0.6, 10.0, 0.3).1 else { unreachable!() };
    InitialData::euler(move |r| {
        let p = profile(r);
        Primitive { rho: p.rho, v: p.v + 0.02 * (-5.0 * (r - 6.0) * (r - 6.0)).exp() }
    })
}

/// Configuration of a study; order 3 samples with the two-point Gauss rule
/// so that cell values are fourth-order cell averages.
pub fn study_config(model: Model, order: u8) -> RunConfig {
    let base = match model {
        Model::Burgers => RunConfig::burgers(),
        Model::Euler => RunConfig::euler(),
    };
    RunConfig {
        order,
        averaging: if order == 3 { Averaging::Gauss2 } else { Averaging::Midpoint },
        right_bc: RightBoundary::StationaryExtension,
        t_end: 0.5,
        stop_when_steady: false,
        ..base
    }
}

fn velocities(config: &RunConfig, data: &InitialData) -> Result<Vec<f64>> {
    Ok(run(config, data)?.final_snapshot().v.clone())
}

/// Runs the study on `meshes`, each of which must divide the reference
/// mesh and be distinct.
pub fn run_convergence(model: Model, order: u8, meshes: &[usize], reference_cells: usize) -> Result<ConvergenceReport> {
    let bad = |msg: String| Err(SolverError::InvalidConfig(msg));
    if meshes.len() < 2 {
        return bad("a convergence study needs at least two meshes".into());
    }
    for w in meshes.windows(2) {
        if w[0] == w[1] {
            return bad(format!("mesh {} is listed twice", w[0]));
        }
    }
    if let Some(m) = meshes.iter().find(|&&m| m == 0 || reference_cells % m != 0 || m >= reference_cells) {
        return bad(format!("mesh {m} does not divide the {reference_cells}-cell reference"));
    }
    let data = match model {
        Model::Burgers => smooth_datum_b(),
        Model::Euler => smooth_datum_e(),
    };
    let config = study_config(model, order);
    config.validate()?;
    let fine = velocities(&RunConfig { cells: reference_cells, ..config.clone() }, &data)?;
    let mut errors = Vec::with_capacity(meshes.len());
    for &m in meshes {
        let cfg = RunConfig { cells: m, ..config.clone() };
        let coarse = velocities(&cfg, &data)?;
        let dr = cfg.grid()?.dr();
        errors.push(l1_error(&coarse, &restrict(&fine, reference_cells / m), dr));
    }
    let orders = if meshes.windows(2).all(|w| w[1] == 2 * w[0]) { observed_orders(&errors) } else { Vec::new() };
    Ok(ConvergenceReport { model, order, meshes: meshes.to_vec(), reference_cells, errors, orders })
}
