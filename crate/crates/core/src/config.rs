//! Run configuration shared by the driver, the experiment catalog and the CLI.
//!
//! A [`RunConfig`] can be read from a flat `key = value` file whose keys are
//! exactly the field names below. Missing keys take their defaults.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SolverError};
use crate::grid::Grid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Burgers,
    Euler,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FluxKind {
    Godunov,
    LaxFriedrichs,
    RoeType,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RightBoundary {
    Transmissive,
    StationaryExtension,
}

/// How cell values relate to pointwise data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Averaging {
    /// Cell value is the point value at the center.
    Midpoint,
    /// Two-point Gauss average.
    Gauss2,
    /// Exact cell average.
    Exact,
}

macro_rules! str_enum {
    ($ty:ty { $($name:literal => $variant:expr),* $(,)? }) => {
        impl std::str::FromStr for $ty {
            type Err = SolverError;
            fn from_str(s: &str) -> Result<Self> {
                match s.to_ascii_lowercase().replace('-', "_").as_str() {
                    $($name => Ok($variant),)*
                    other => Err(SolverError::InvalidConfig(format!(
                        "unknown {} '{other}' (expected one of: {})",
                        stringify!($ty),
                        [$($name),*].join(", ")
                    ))),
                }
            }
        }
        impl std::fmt::Display for $ty {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                let name = match self { $(v if *v == $variant => $name,)* _ => unreachable!() };
                f.write_str(name)
            }
        }
    };
}

str_enum!(Model { "burgers" => Model::Burgers, "euler" => Model::Euler });
str_enum!(FluxKind {
    "godunov" => FluxKind::Godunov,
    "lax_friedrichs" => FluxKind::LaxFriedrichs,
    "roe_type" => FluxKind::RoeType,
});
str_enum!(RightBoundary {
    "transmissive" => RightBoundary::Transmissive,
    "stationary_extension" => RightBoundary::StationaryExtension,
});
str_enum!(Averaging {
    "midpoint" => Averaging::Midpoint,
    "gauss2" => Averaging::Gauss2,
    "exact" => Averaging::Exact,
});

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub model: Model,
    /// Spatial order, 1..=3 for Burgers and 1..=2 for Euler.
    pub order: u8,
    pub well_balanced: bool,
    pub flux: FluxKind,
    pub cfl: f64,
    /// Sound speed, Euler only.
    pub k: f64,
    pub t_end: f64,
    pub right_bc: RightBoundary,
    pub averaging: Averaging,
    pub mass: f64,
    pub r_right: f64,
    pub cells: usize,
    /// Snapshot cadence. `None` keeps only the initial and final states.
    pub output_interval: Option<f64>,
    /// Residual tolerance of the per-cell root solves.
    pub root_tol: f64,
    /// Max-norm distance under which two states count as equal (Roe average).
    pub state_eq_eps: f64,
    /// Steady-state threshold on `max |du/dt|`.
    pub steady_tol: f64,
    /// Consecutive steps below `steady_tol` before stopping.
    pub steady_dwell: usize,
    pub stop_when_steady: bool,
    /// Speeds below this magnitude skip the Euler stationary fit.
    pub v_min: f64,
    pub max_steps: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: Model::Burgers,
            order: 1,
            well_balanced: true,
            flux: FluxKind::Godunov,
            cfl: 0.5,
            k: 0.3,
            t_end: 50.0,
            right_bc: RightBoundary::Transmissive,
            averaging: Averaging::Midpoint,
            mass: 1.0,
            r_right: 4.0,
            cells: 256,
            output_interval: None,
            root_tol: 1e-14,
            state_eq_eps: 1e-12,
            steady_tol: 1e-10,
            steady_dwell: 10,
            stop_when_steady: true,
            v_min: 1e-10,
            max_steps: 50_000_000,
        }
    }
}

impl RunConfig {
    /// Defaults of the Burgers experiments: `[2, 4]`, 256 cells, Godunov flux.
    pub fn burgers() -> Self {
        Self::default()
    }

    /// Defaults of the Euler experiments: `[2, 10]`, 500 cells, `k = 0.3`, Roe-type flux.
    pub fn euler() -> Self {
        Self {
            model: Model::Euler,
            flux: FluxKind::RoeType,
            r_right: 10.0,
            cells: 500,
            ..Self::default()
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| SolverError::InvalidConfig(e.to_string()))
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.mass, self.r_right, self.cells)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(SolverError::InvalidConfig(msg));
        match (self.model, self.order) {
            (Model::Euler, 3) => return bad("order 3 unsupported for euler".into()),
            (_, 1..=3) => {}
            (_, o) => return bad(format!("order must be 1, 2 or 3, got {o}")),
        }
        match (self.model, self.flux) {
            (Model::Burgers, FluxKind::Godunov) => {}
            (Model::Euler, FluxKind::LaxFriedrichs | FluxKind::RoeType) => {}
            (m, f) => return bad(format!("flux {f} is not available for the {m} model")),
        }
        if self.model == Model::Euler && self.averaging != Averaging::Midpoint {
            return bad("euler runs use midpoint averaging only".into());
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return bad(format!("cfl must lie in (0, 1], got {}", self.cfl));
        }
        if self.model == Model::Euler && !(self.k > 0.0 && self.k < 1.0) {
            return bad(format!("sound speed k must lie in (0, 1), got {}", self.k));
        }
        if !(self.t_end >= 0.0) {
            return bad(format!("t_end must be non-negative, got {}", self.t_end));
        }
        if let Some(dt) = self.output_interval {
            if !(dt > 0.0) {
                return bad(format!("output_interval must be positive, got {dt}"));
            }
        }
        self.grid().map(|_| ())
    }
}

/// CFL time step for a largest characteristic speed `s_max`.
///
/// Speeds are bounded by one in both models, so a stagnant state falls back
/// to `cfl * dr`.
pub fn cfl_step(s_max: f64, dr: f64, cfl: f64) -> f64 {
    if s_max > 0.0 {
        cfl * dr / s_max
    } else {
        cfl * dr
    }
}

/// Time step for `state` (flat layout of the configured model) on `grid`.
pub fn dt_from_cfl(state: &[f64], grid: &Grid, config: &RunConfig) -> f64 {
    let s_max = match config.model {
        Model::Burgers => crate::burgers::max_wave_speed(state, grid),
        Model::Euler => crate::euler::max_wave_speed(state, grid, config.k),
    };
    cfl_step(s_max, grid.dr(), config.cfl)
}

/// Shortens `dt` so that a step starting at `t` does not overshoot `stop`
/// and lands exactly on it when it would come within rounding distance.
pub fn clip_step(dt: f64, t: f64, stop: f64) -> f64 {
    let remaining = stop - t;
    if dt >= remaining * (1.0 - 1e-12) {
        remaining
    } else {
        dt
    }
}
