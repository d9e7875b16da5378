//! Well-balanced reconstructions and the semi-discrete operator.

use super::stationary::{fit, rule_reach, stationary_cell_abs, BurgersStationary};
use super::{flux_b, godunov_flux_b, source_b};
use crate::config::{RightBoundary, RunConfig};
use crate::error::{Result, SolverError};
use crate::grid::Grid;
use crate::limiters::{cweno3, minmod_slope};

/// Interface values and integrated source of one cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellReconstruction {
    /// Reconstructed value at `r_{i-1/2}`.
    pub left: f64,
    /// Reconstructed value at `r_{i+1/2}`.
    pub right: f64,
    /// Source contribution integrated over the cell (carries the `dr` factor).
    pub source: f64,
    /// Whether the stationary reconstruction was used.
    pub well_balanced: bool,
}

#[inline]
fn sign(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Cell values with one ghost on the left and two on the right:
/// `ext[j + 1]` holds cell `j` for `j` in `-1..=n+1`.
pub fn extend(state: &[f64], grid: &Grid, config: &RunConfig) -> Vec<f64> {
    let n = state.len();
    let last = state[n - 1];
    let mut ext = Vec::with_capacity(n + 3);
    ext.push(state[0]);
    ext.extend_from_slice(state);
    let mut ghosts = [last; 2];
    if config.right_bc == RightBoundary::StationaryExtension {
        let tail = grid.cell(n as isize - 1);
        if let Some(s) = fit(last, &tail, grid.mass(), config.averaging, config.root_tol) {
            for (k, g) in ghosts.iter_mut().enumerate() {
                let cell = grid.cell((n + k) as isize);
                if s.contains(rule_reach(&cell, config.averaging)) {
                    *g = s.branch * stationary_cell_abs(&s, &cell, config.averaging);
                }
            }
        }
    }
    ext.extend_from_slice(&ghosts);
    ext
}

/// Reconstruction of cell `i` (interior or the first right ghost) from the
/// extended values produced by [`extend`].
pub fn reconstruct(i: isize, ext: &[f64], grid: &Grid, config: &RunConfig) -> CellReconstruction {
    if config.well_balanced {
        if let Some(rec) = reconstruct_stationary(i, ext, grid, config) {
            return rec;
        }
    }
    reconstruct_standard(i, ext, grid, config)
}

fn value(ext: &[f64], j: isize) -> f64 {
    ext[(j + 1) as usize]
}

fn reconstruct_stationary(i: isize, ext: &[f64], grid: &Grid, config: &RunConfig) -> Option<CellReconstruction> {
    let mass = grid.mass();
    let averaging = config.averaging;
    let cell = grid.cell(i);
    let vi = value(ext, i);
    let s = fit(vi, &cell, mass, averaging, config.root_tol)?;
    let mut reach = cell.right;
    if config.order >= 2 {
        reach = reach.max(rule_reach(&grid.cell(i + 1), averaging));
    }
    if !s.contains(reach) {
        return None;
    }
    let (r_lo, r_hi) = (cell.left, cell.right);
    let (star_lo, star_hi) = (s.branch * s.abs_at(r_lo), s.branch * s.abs_at(r_hi));
    let mut source = flux_b(star_hi, r_hi, mass) - flux_b(star_lo, r_lo, mass);
    let fluctuation = |j: isize| {
        let vj = value(ext, j);
        vj - sign(vj) * stationary_cell_abs(&s, &grid.cell(j), averaging)
    };
    let (left, right) = match config.order {
        1 => (star_lo, star_hi),
        2 | 3 => {
            // the left ghost replicates the fluctuation of cell 0, which is zero
            let wm = if i == 0 { 0.0 } else { fluctuation(i - 1) };
            let wp = fluctuation(i + 1);
            if config.order == 2 {
                let slope = minmod_slope(wm, 0.0, wp);
                (star_lo - 0.5 * slope, star_hi + 0.5 * slope)
            } else {
                let q = cweno3(wm, 0.0, wp);
                source += gauss_correction(&s, &q, &cell, grid.dr());
                (star_lo + q.eval(-0.5), star_hi + q.eval(0.5))
            }
        }
        _ => unreachable!("validated order"),
    };
    Some(CellReconstruction { left: clamp_unit(left), right: clamp_unit(right), source, well_balanced: true })
}

/// `(dr/2) * sum over Gauss nodes of S(P) - S(v*)` for `P = v* + q`.
fn gauss_correction(s: &BurgersStationary, q: &crate::limiters::Quadratic, cell: &crate::grid::Cell, dr: f64) -> f64 {
    let mut acc = 0.0;
    for node in cell.gauss_nodes() {
        let star = s.branch * s.abs_at(node);
        let p = clamp_unit(star + q.eval((node - cell.center) / dr));
        acc += source_b(p, node, s.mass) - source_b(star, node, s.mass);
    }
    0.5 * dr * acc
}

fn reconstruct_standard(i: isize, ext: &[f64], grid: &Grid, config: &RunConfig) -> CellReconstruction {
    let mass = grid.mass();
    let cell = grid.cell(i);
    let dr = grid.dr();
    let (vm, vi, vp) = (value(ext, i - 1), value(ext, i), value(ext, i + 1));
    let (left, right, source) = match config.order {
        1 => (vi, vi, dr * source_b(vi, cell.center, mass)),
        2 => {
            let slope = minmod_slope(vm, vi, vp);
            (vi - 0.5 * slope, vi + 0.5 * slope, dr * source_b(vi, cell.center, mass))
        }
        3 => {
            let q = cweno3(vm, vi, vp);
            let source = 0.5
                * dr
                * cell
                    .gauss_nodes()
                    .iter()
                    .map(|&node| source_b(clamp_unit(q.eval((node - cell.center) / dr)), node, mass))
                    .sum::<f64>();
            (q.eval(-0.5), q.eval(0.5), source)
        }
        _ => unreachable!("validated order"),
    };
    CellReconstruction { left: clamp_unit(left), right: clamp_unit(right), source, well_balanced: false }
}

#[inline]
fn clamp_unit(v: f64) -> f64 {
    v.clamp(-1.0, 1.0)
}

/// Semi-discrete operator `dv_i/dt = -(F_{i+1/2} - F_{i-1/2} - S_i)/dr`,
/// written into `out`.
///
/// The flux through the horizon `r = 2M` is zero.
pub fn rhs_burgers(state: &[f64], grid: &Grid, config: &RunConfig, out: &mut [f64]) -> Result<()> {
    let n = state.len();
    let ext = extend(state, grid, config);
    let recs: Vec<CellReconstruction> = (0..=n as isize).map(|j| reconstruct(j, &ext, grid, config)).collect();
    let mass = grid.mass();
    let mut flux_lo = 0.0;
    for i in 0..n {
        let flux_hi = godunov_flux_b(recs[i].right, recs[i + 1].left, grid.face(i as isize + 1), mass);
        if !flux_hi.is_finite() {
            return Err(SolverError::NonFinite { cell: i, what: "interface flux" });
        }
        let d = -(flux_hi - flux_lo - recs[i].source) / grid.dr();
        if !d.is_finite() {
            return Err(SolverError::NonFinite { cell: i, what: "source term" });
        }
        out[i] = d;
        flux_lo = flux_hi;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Averaging;

    fn test_b1(r: f64) -> f64 {
        (0.75 + 0.5 / r).sqrt()
    }

    fn sampled(grid: &Grid, f: impl Fn(f64) -> f64, averaging: Averaging) -> Vec<f64> {
        (0..grid.cells() as isize)
            .map(|i| {
                let c = grid.cell(i);
                match averaging {
                    Averaging::Midpoint => f(c.center),
                    Averaging::Gauss2 => {
                        let [a, b] = c.gauss_nodes();
                        0.5 * (f(a) + f(b))
                    }
                    Averaging::Exact => unimplemented!(),
                }
            })
            .collect()
    }

    fn max_abs(xs: &[f64]) -> f64 {
        xs.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    #[test]
    fn stationary_data_is_a_fixed_point() {
        let grid = Grid::new(1.0, 4.0, 256).unwrap();
        for order in 1..=3u8 {
            for averaging in [Averaging::Midpoint, Averaging::Gauss2] {
                for sign in [1.0, -1.0] {
                    let cfg = RunConfig {
                        order,
                        averaging,
                        right_bc: RightBoundary::StationaryExtension,
                        ..RunConfig::burgers()
                    };
                    let v = sampled(&grid, |r| sign * test_b1(r), averaging);
                    let mut out = vec![0.0; 256];
                    rhs_burgers(&v, &grid, &cfg, &mut out).unwrap();
                    assert!(max_abs(&out) < 1e-13, "order {order} {averaging} {sign}: {}", max_abs(&out));
                }
            }
        }
    }

    #[test]
    fn steady_shock_is_a_fixed_point() {
        let grid = Grid::new(1.0, 4.0, 256).unwrap();
        let shock = |r: f64| if r < 3.0 { test_b1(r) } else { -test_b1(r) };
        for order in 1..=3u8 {
            let averaging = if order == 3 { Averaging::Gauss2 } else { Averaging::Midpoint };
            let cfg = RunConfig { order, averaging, right_bc: RightBoundary::StationaryExtension, ..RunConfig::burgers() };
            let v = sampled(&grid, shock, averaging);
            let mut out = vec![0.0; 256];
            rhs_burgers(&v, &grid, &cfg, &mut out).unwrap();
            assert!(max_abs(&out) < 1e-13, "order {order}: {}", max_abs(&out));
        }
    }

    #[test]
    fn unit_state_is_a_fixed_point_of_every_scheme() {
        let grid = Grid::new(1.0, 4.0, 64).unwrap();
        for order in 1..=3u8 {
            for wb in [true, false] {
                let cfg = RunConfig { order, well_balanced: wb, ..RunConfig::burgers() };
                let mut out = vec![1.0; 64];
                rhs_burgers(&vec![1.0; 64], &grid, &cfg, &mut out).unwrap();
                assert_eq!(max_abs(&out), 0.0);
            }
        }
    }

    #[test]
    fn perturbation_stays_local() {
        let grid = Grid::new(1.0, 4.0, 128).unwrap();
        for order in 1..=3u8 {
            let averaging = if order == 3 { Averaging::Gauss2 } else { Averaging::Midpoint };
            let cfg = RunConfig { order, averaging, right_bc: RightBoundary::StationaryExtension, ..RunConfig::burgers() };
            let mut v = sampled(&grid, test_b1, averaging);
            v[60] += 1e-3;
            let mut out = vec![0.0; 128];
            rhs_burgers(&v, &grid, &cfg, &mut out).unwrap();
            for (i, d) in out.iter().enumerate() {
                if !(58..=62).contains(&i) {
                    assert!(d.abs() < 1e-13, "order {order} cell {i}: {d}");
                }
            }
            assert!(out[60].abs() > 1e-6);
        }
    }

    #[test]
    fn stationary_fit_falls_back_outside_domain() {
        let grid = Grid::new(1.0, 4.0, 256).unwrap();
        let cfg = RunConfig { order: 2, ..RunConfig::burgers() };
        // v = 0 at r = 3.5 gives K^2 = 1/(1 - 2/3.5) > 1 with r_max = 3.5
        let i = 191;
        let mut v = vec![0.5; 256];
        v[i] = 0.0;
        let ext = extend(&v, &grid, &cfg);
        let rec = reconstruct(i as isize, &ext, &grid, &cfg);
        assert!(!rec.well_balanced);
    }
}
