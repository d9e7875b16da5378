//! Relativistic Burgers equation on a Schwarzschild background,
//! `v_t + F(v, r)_r = S(v, r)` with `v` in `[-1, 1]`.

mod scheme;
mod stationary;

pub use scheme::{reconstruct, rhs_burgers, CellReconstruction};
pub use stationary::{
    fit, fit_exact_avg_b, fit_gauss2_b, fit_point_b, primitive, stationary_cell_abs, BurgersStationary,
};

use crate::grid::Grid;

/// Largest tolerated excursion of `|v|` above one before a state is rejected.
pub const BOUND_TOL: f64 = 1e-12;

/// Metric factor `1 - 2M/r`.
#[inline]
pub fn lapse(r: f64, mass: f64) -> f64 {
    1.0 - 2.0 * mass / r
}

/// Physical flux `(1 - 2M/r)(v^2 - 1)/2`.
#[inline]
pub fn flux_b(v: f64, r: f64, mass: f64) -> f64 {
    0.5 * lapse(r, mass) * (v * v - 1.0)
}

/// Source term `(2M/r^2)(v^2 - 1)`.
#[inline]
pub fn source_b(v: f64, r: f64, mass: f64) -> f64 {
    2.0 * mass / (r * r) * (v * v - 1.0)
}

/// Godunov state at `x/t = 0` of the classical Burgers Riemann problem.
#[inline]
pub fn godunov_state(vl: f64, vr: f64) -> f64 {
    if vl > vr {
        if vl + vr > 0.0 {
            vl
        } else {
            vr
        }
    } else if vl > 0.0 {
        vl
    } else if vr < 0.0 {
        vr
    } else {
        0.0
    }
}

/// Godunov numerical flux at the interface radius `r_if`.
#[inline]
pub fn godunov_flux_b(vl: f64, vr: f64, r_if: f64, mass: f64) -> f64 {
    flux_b(godunov_state(vl, vr), r_if, mass)
}

/// Largest characteristic speed `|(1 - 2M/r_i) v_i|` over the cells.
pub fn max_wave_speed(state: &[f64], grid: &Grid) -> f64 {
    state
        .iter()
        .zip(grid.centers())
        .map(|(&v, &r)| (lapse(r, grid.mass()) * v).abs())
        .fold(0.0, f64::max)
}

/// Clamps `v` into `[-1, 1]`, or returns `None` if it lies further than
/// [`BOUND_TOL`] outside (or is not finite).
pub fn project(v: f64) -> Option<f64> {
    if !v.is_finite() || v.abs() > 1.0 + BOUND_TOL {
        None
    } else {
        Some(v.clamp(-1.0, 1.0))
    }
}
