//! Full runs: initial-data averaging, the time loop, steady-state detection
//! and snapshot collection.

use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::burgers::{self, project};
use crate::config::{clip_step, dt_from_cfl, Averaging, Model, RunConfig};
use crate::error::{Result, SolverError};
use crate::euler::{self, cons_to_prim, pack, Conserved, Primitive};
use crate::grid::{Cell, Grid};
use crate::time::{Integrator, Stepper};

/// Pointwise Burgers profile.
pub type ScalarProfile = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
/// Exact cell mean of a Burgers profile, when known in closed form.
pub type CellMean = Arc<dyn Fn(&Cell) -> Option<f64> + Send + Sync>;
/// Pointwise Euler profile.
pub type EulerProfile = Arc<dyn Fn(f64) -> Primitive + Send + Sync>;

/// Initial datum of a run.
#[derive(Clone)]
pub enum InitialData {
    Burgers {
        profile: ScalarProfile,
        /// Used by the exact averaging rule; cells where it returns `None`
        /// fall back to high-order quadrature.
        cell_mean: Option<CellMean>,
    },
    Euler(EulerProfile),
}

impl InitialData {
    pub fn burgers(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::Burgers { profile: Arc::new(f), cell_mean: None }
    }

    pub fn euler(f: impl Fn(f64) -> Primitive + Send + Sync + 'static) -> Self {
        Self::Euler(Arc::new(f))
    }

    pub fn model(&self) -> Model {
        match self {
            Self::Burgers { .. } => Model::Burgers,
            Self::Euler(_) => Model::Euler,
        }
    }
}

impl std::fmt::Debug for InitialData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "InitialData::{}", self.model())
    }
}

/// Five-point Gauss-Legendre rule on `[-1/2, 1/2]`.
const GL5: [(f64, f64); 5] = [
    (-0.453_089_922_969_332_2, 0.118_463_442_528_094_5),
    (-0.269_234_655_052_841_4, 0.239_314_335_249_683_2),
    (0.0, 0.284_444_444_444_444_4),
    (0.269_234_655_052_841_4, 0.239_314_335_249_683_2),
    (0.453_089_922_969_332_2, 0.118_463_442_528_094_5),
];

/// Cell values of the initial datum under the averaging rule.
///
/// Euler data are sampled at cell centres in primitive variables and stored
/// as interleaved conserved variables.
pub fn average_initial_data(data: &InitialData, grid: &Grid, averaging: Averaging, k: f64) -> Vec<f64> {
    let cells = (0..grid.cells() as isize).map(|i| grid.cell(i));
    match data {
        InitialData::Burgers { profile, cell_mean } => cells
            .map(|c| match averaging {
                Averaging::Midpoint => profile(c.center),
                Averaging::Gauss2 => {
                    let [a, b] = c.gauss_nodes();
                    0.5 * (profile(a) + profile(b))
                }
                Averaging::Exact => cell_mean.as_ref().and_then(|m| m(&c)).unwrap_or_else(|| {
                    GL5.iter().map(|&(x, w)| w * profile(c.center + x * c.width())).sum()
                }),
            })
            .collect(),
        InitialData::Euler(profile) => {
            let prims: Vec<Primitive> = cells.map(|c| profile(c.center)).collect();
            pack(&prims, k)
        }
    }
}

/// State of the run at one time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Snapshot {
    pub t: f64,
    pub r: Vec<f64>,
    pub v: Vec<f64>,
    /// Density, Euler only.
    pub rho: Option<Vec<f64>>,
    /// Interleaved conserved variables, Euler only.
    pub conserved: Option<Vec<f64>>,
}

impl Snapshot {
    pub fn capture(t: f64, state: &[f64], grid: &Grid, config: &RunConfig) -> Result<Self> {
        let r = grid.centers().to_vec();
        match config.model {
            Model::Burgers => Ok(Self { t, r, v: state.to_vec(), rho: None, conserved: None }),
            Model::Euler => {
                let prims = euler::unpack(state, config.k)
                    .map_err(|(cell, e)| SolverError::InvalidState { cell, reason: e.to_string() })?;
                Ok(Self {
                    t,
                    r,
                    v: prims.iter().map(|p| p.v).collect(),
                    rho: Some(prims.iter().map(|p| p.rho).collect()),
                    conserved: Some(state.to_vec()),
                })
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    TEnd,
    Steady,
}

/// Outcome of [`run`].
#[derive(Debug, Clone)]
pub struct RunResult {
    /// Initial state, the states at each cadence point, and the final state.
    pub snapshots: Vec<Snapshot>,
    pub termination: Termination,
    pub steps: usize,
    pub wall_time: Duration,
    /// Final flat state vector.
    pub state: Vec<f64>,
}

impl RunResult {
    pub fn final_snapshot(&self) -> &Snapshot {
        self.snapshots.last().expect("a run keeps at least the initial snapshot")
    }

    pub fn initial_snapshot(&self) -> &Snapshot {
        &self.snapshots[0]
    }
}

/// Per-step information handed to observers.
#[derive(Debug, Clone, Copy)]
pub struct StepInfo<'a> {
    pub step: usize,
    pub t: f64,
    pub dt: f64,
    pub state: &'a [f64],
}

/// Largest `|du_i/dt| / max(1, |u_i|)`.
fn steady_metric(deriv: &[f64], state: &[f64]) -> f64 {
    deriv.iter().zip(state).fold(0.0, |m, (d, u)| m.max(d.abs() / u.abs().max(1.0)))
}

/// Output times strictly inside `(0, t_end)` followed by `t_end`.
fn cadence(config: &RunConfig) -> Vec<f64> {
    let mut times = Vec::new();
    if let Some(h) = config.output_interval {
        let mut j = 1;
        loop {
            let t = j as f64 * h;
            if t >= config.t_end * (1.0 - 1e-12) {
                break;
            }
            times.push(t);
            j += 1;
        }
    }
    times.push(config.t_end);
    times
}

fn project_burgers(u: &mut [f64]) -> Result<()> {
    for (i, v) in u.iter_mut().enumerate() {
        *v = project(*v).ok_or_else(|| SolverError::InvalidState {
            cell: i,
            reason: format!("|v| = {} exceeds 1", v.abs()),
        })?;
    }
    Ok(())
}

fn check_euler(u: &mut [f64], k: f64) -> Result<()> {
    for i in 0..u.len() / 2 {
        cons_to_prim(Conserved::load(u, i), k)
            .map_err(|e| SolverError::InvalidState { cell: i, reason: e.to_string() })?;
    }
    Ok(())
}

pub fn run(config: &RunConfig, data: &InitialData) -> Result<RunResult> {
    run_with_observer(config, data, |_| {})
}

/// As [`run`], calling `observer` after every accepted step.
pub fn run_with_observer(
    config: &RunConfig,
    data: &InitialData,
    mut observer: impl FnMut(StepInfo<'_>),
) -> Result<RunResult> {
    config.validate()?;
    if data.model() != config.model {
        return Err(SolverError::InvalidConfig(format!(
            "initial datum is for the {} model but the run is configured for {}",
            data.model(),
            config.model
        )));
    }
    let started = Instant::now();
    let grid = config.grid()?;
    let mut state = average_initial_data(data, &grid, config.averaging, config.k);
    let mut snapshots = vec![Snapshot::capture(0.0, &state, &grid, config)?];
    let outputs = cadence(config);
    let mut next_out = 0;
    // Data already outside the physical range are evolved without the bound.
    let bounded = config.model == Model::Burgers && state.iter().all(|v| v.abs() <= 1.0 + burgers::BOUND_TOL);
    let mut integrator = Integrator::new(Stepper::for_order(config.order), state.len());
    let (mut t, mut steps, mut quiet) = (0.0, 0usize, 0usize);
    let mut termination = Termination::TEnd;
    while t < config.t_end {
        if steps >= config.max_steps {
            return Err(SolverError::StepLimit { steps });
        }
        let stop = outputs[next_out];
        let dt = clip_step(dt_from_cfl(&state, &grid, config), t, stop);
        let at = |e: SolverError| SolverError::AtStep { step: steps, t, source: Box::new(e) };
        let deriv = match config.model {
            Model::Burgers => integrator.step(
                &mut state,
                dt,
                |u, out| burgers::rhs_burgers(u, &grid, config, out),
                |u| if bounded { project_burgers(u) } else { Ok(()) },
            ),
            Model::Euler => integrator.step(
                &mut state,
                dt,
                |u, out| euler::rhs_euler(u, &grid, config, dt, out),
                |u| check_euler(u, config.k),
            ),
        }
        .map_err(at)?;
        let metric = steady_metric(deriv, &state);
        t = if dt == stop - t { stop } else { t + dt };
        steps += 1;
        observer(StepInfo { step: steps, t, dt, state: &state });
        if t == stop {
            snapshots.push(Snapshot::capture(t, &state, &grid, config)?);
            next_out += 1;
        }
        quiet = if metric < config.steady_tol { quiet + 1 } else { 0 };
        if config.stop_when_steady && quiet >= config.steady_dwell && t < config.t_end {
            if snapshots.last().map(|s| s.t) != Some(t) {
                snapshots.push(Snapshot::capture(t, &state, &grid, config)?);
            }
            termination = Termination::Steady;
            break;
        }
    }
    Ok(RunResult { snapshots, termination, steps, wall_time: started.elapsed(), state })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::burgers::{fit_point_b, stationary_cell_abs};

    fn test_b1(r: f64) -> f64 {
        (0.75 + 0.5 / r).sqrt()
    }

    #[test]
    fn constant_datum_under_every_rule() {
        let grid = Grid::new(1.0, 4.0, 16).unwrap();
        for averaging in [Averaging::Midpoint, Averaging::Gauss2, Averaging::Exact] {
            let u = average_initial_data(&InitialData::burgers(|_| 0.25), &grid, averaging, 0.3);
            assert!(u.iter().all(|&x| (x - 0.25).abs() < 1e-15));
        }
    }

    #[test]
    fn midpoint_value_of_b1() {
        let grid = Grid::new(1.0, 4.0, 256).unwrap();
        let u = average_initial_data(&InitialData::burgers(test_b1), &grid, Averaging::Midpoint, 0.3);
        assert!(u.iter().zip(grid.centers()).all(|(&x, &r)| x == test_b1(r)));
        assert!((test_b1(3.0) - 0.957427).abs() < 1e-6);
    }

    #[test]
    fn quadrature_fallback_matches_exact_mean() {
        let grid = Grid::new(1.0, 4.0, 64).unwrap();
        let s = fit_point_b(test_b1(3.0), 3.0, 1.0);
        let quad = average_initial_data(&InitialData::burgers(test_b1), &grid, Averaging::Exact, 0.3);
        for (i, q) in quad.iter().enumerate() {
            let exact = stationary_cell_abs(&s, &grid.cell(i as isize), Averaging::Exact);
            assert!((q - exact).abs() < 1e-12, "{i}: {q} {exact}");
        }
    }

    #[test]
    fn zero_length_run_keeps_initial_snapshot() {
        let cfg = RunConfig { t_end: 0.0, ..RunConfig::burgers() };
        let res = run(&cfg, &InitialData::burgers(test_b1)).unwrap();
        assert_eq!(res.snapshots.len(), 1);
        assert_eq!(res.steps, 0);
    }

    #[test]
    fn stationary_data_terminates_steady() {
        let cfg = RunConfig {
            right_bc: crate::config::RightBoundary::StationaryExtension,
            ..RunConfig::burgers()
        };
        let res = run(&cfg, &InitialData::burgers(test_b1)).unwrap();
        assert_eq!(res.termination, Termination::Steady);
        assert!(res.steps <= 20);
        let (a, b) = (&res.initial_snapshot().v, &res.final_snapshot().v);
        assert!(a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12));
    }

    #[test]
    fn snapshots_land_on_cadence() {
        let cfg = RunConfig { t_end: 1.0, output_interval: Some(0.25), stop_when_steady: false, ..RunConfig::burgers() };
        let res = run(&cfg, &InitialData::burgers(|r| 0.5 * (r - 3.0).tanh())).unwrap();
        let times: Vec<f64> = res.snapshots.iter().map(|s| s.t).collect();
        assert_eq!(times, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn reruns_are_bit_identical() {
        let cfg = RunConfig { t_end: 0.5, order: 3, averaging: Averaging::Gauss2, ..RunConfig::burgers() };
        let data = InitialData::burgers(|r| 0.5 * (r - 3.0).tanh());
        assert_eq!(run(&cfg, &data).unwrap().state, run(&cfg, &data).unwrap().state);
    }

    #[test]
    fn model_mismatch_is_rejected() {
        let err = run(&RunConfig::euler(), &InitialData::burgers(test_b1)).unwrap_err();
        assert!(matches!(err, SolverError::InvalidConfig(_)));
    }

    #[test]
    fn euler_snapshot_reports_primitives() {
        let cfg = RunConfig { cells: 10, t_end: 0.0, ..RunConfig::euler() };
        let res = run(&cfg, &InitialData::euler(|_| Primitive { rho: 2.0, v: 0.5 })).unwrap();
        let s = res.final_snapshot();
        assert!(s.v.iter().all(|&v| (v - 0.5).abs() < 1e-15));
        assert!(s.rho.as_ref().unwrap().iter().all(|&r| (r - 2.0).abs() < 1e-14));
    }
}
