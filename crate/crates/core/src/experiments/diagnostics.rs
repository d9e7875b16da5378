//! Pure post-processing of run output: discrete L1 distances, shock
//! detection and least-squares fits.

use serde::Serialize;

use crate::config::{Averaging, Model};
use crate::driver::{average_initial_data, InitialData, Snapshot};
use crate::euler::unpack;
use crate::grid::Grid;

/// Jumps smaller than this are never reported as shocks.
pub const JUMP_FLOOR: f64 = 1e-8;
/// Threshold of the ratio test for shock detection.
pub const RATIO_THRESHOLD: f64 = 0.8;

/// `dr * sum |a_i - b_i|`.
pub fn l1_error(a: &[f64], b: &[f64], dr: f64) -> f64 {
    dr * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

/// Per-variable L1 distances between two snapshots of the same grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldErrors {
    pub v: f64,
    /// Euler only.
    pub rho: Option<f64>,
}

impl FieldErrors {
    pub fn max(&self) -> f64 {
        self.rho.map_or(self.v, |r| r.max(self.v))
    }
}

/// Reference profile sampled on `grid` the way the scheme samples initial
/// data, as a snapshot at `t = 0`.
pub fn reference_on_grid(datum: &InitialData, grid: &Grid, averaging: Averaging, k: f64) -> Snapshot {
    let state = average_initial_data(datum, grid, averaging, k);
    let r = grid.centers().to_vec();
    match datum.model() {
        Model::Burgers => Snapshot { t: 0.0, r, v: state, rho: None, conserved: None },
        Model::Euler => {
            let prims = unpack(&state, k).expect("reference data are admissible");
            Snapshot {
                t: 0.0,
                r,
                v: prims.iter().map(|p| p.v).collect(),
                rho: Some(prims.iter().map(|p| p.rho).collect()),
                conserved: Some(state),
            }
        }
    }
}

/// L1 distances of `snap` to `reference`, per variable.
pub fn field_errors(snap: &Snapshot, reference: &Snapshot, dr: f64) -> FieldErrors {
    FieldErrors {
        v: l1_error(&snap.v, &reference.v, dr),
        rho: snap.rho.as_ref().zip(reference.rho.as_ref()).map(|(a, b)| l1_error(a, b, dr)),
    }
}

/// Ratio test `(v_i - v_{i-1}) / (v_{i+1} - v_i) >= 0.8` at an interior
/// cell, guarded by [`JUMP_FLOOR`].
///
/// The test holds on any locally linear profile, so on its own it does not
/// separate shocks from smooth slopes; see [`shock_locate`].
pub fn ratio_criterion(v: &[f64], i: usize) -> bool {
    if i == 0 || i + 1 >= v.len() {
        return false;
    }
    let ahead = v[i + 1] - v[i];
    ahead.abs() > JUMP_FLOOR && (v[i] - v[i - 1]) / ahead >= RATIO_THRESHOLD
}

/// Face radius of the largest compressive jump `v_i - v_{i+1} > 0` of the
/// profile, or `None` if no jump exceeds `floor`.
///
/// Ties keep the leftmost face.
pub fn shock_locate_with(v: &[f64], grid: &Grid, floor: f64) -> Option<f64> {
    let mut best: Option<(usize, f64)> = None;
    for i in 0..v.len().saturating_sub(1) {
        let jump = v[i] - v[i + 1];
        if jump > floor && best.map_or(true, |(_, b)| jump > b) {
            best = Some((i, jump));
        }
    }
    best.map(|(i, _)| grid.face(i as isize + 1))
}

/// Steady shock detector: a jump counts when it exceeds ten times the
/// largest step of the smooth stationary profiles at this resolution.
pub fn shock_locate(v: &[f64], grid: &Grid) -> Option<f64> {
    shock_locate_with(v, grid, shock_floor(grid))
}

/// Detection floor of [`shock_locate`]: the smooth stationary profiles
/// of both models change by at most about `dr` between neighbours away
/// from the horizon.
pub fn shock_floor(grid: &Grid) -> f64 {
    (10.0 * grid.dr()).max(JUMP_FLOOR)
}

/// Distance of the long-time state to the unperturbed reference in `v`.
pub fn displacement_measure(final_snapshot: &Snapshot, reference: &Snapshot, dr: f64) -> f64 {
    l1_error(&final_snapshot.v, &reference.v, dr)
}

/// Least-squares line `y = slope x + intercept` with its coefficient of
/// determination.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Fits a line through at least two points with distinct abscissae.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let mean = |a: &[f64]| a.iter().sum::<f64>() / n as f64;
    let (mx, my) = (mean(xs), mean(ys));
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs.iter().zip(ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    Some(LinearFit { slope, intercept, r_squared })
}

/// Observed orders `log2(e_j / e_{j+1})` for errors on meshes refined by
/// a factor of two.
pub fn observed_orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

/// Cell averages of a fine-grid profile on a grid coarser by an integer
/// factor.
pub fn restrict(fine: &[f64], factor: usize) -> Vec<f64> {
    fine.chunks(factor).map(|c| c.iter().sum::<f64>() / c.len() as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::catalog::steady_shock_b;
    use proptest::prelude::*;

    #[test]
    fn l1_examples() {
        let a = vec![0.3; 256];
        assert_eq!(l1_error(&a, &a, 1.0 / 128.0), 0.0);
        let mut b = a.clone();
        b[17] += 1.0;
        assert!((l1_error(&a, &b, 2.0 / 256.0) - 0.0078125).abs() < 1e-15);
    }

    #[test]
    fn no_shock_in_smooth_profiles() {
        let grid = Grid::new(1.0, 4.0, 256).unwrap();
        let v: Vec<f64> = grid.centers().iter().map(|r| (0.75 + 0.5 / r).sqrt()).collect();
        assert_eq!(shock_locate(&v, &grid), None);
        let neg: Vec<f64> = v.iter().map(|x| -x).collect();
        assert_eq!(shock_locate(&neg, &grid), None);
    }

    #[test]
    fn steady_shock_is_located() {
        let grid = Grid::new(1.0, 4.0, 256).unwrap();
        let v = reference_on_grid(&steady_shock_b(), &grid, Averaging::Midpoint, 0.0).v;
        let r = shock_locate(&v, &grid).unwrap();
        assert!((r - 3.0).abs() <= grid.dr(), "{r}");
    }

    #[test]
    fn ratio_threshold_is_inclusive() {
        assert!(ratio_criterion(&[0.0, 0.8, 1.8], 1));
        assert!(!ratio_criterion(&[0.0, 0.7, 1.7], 1));
        assert!(!ratio_criterion(&[0.0, 0.0, 1e-9], 1));
        assert!(!ratio_criterion(&[0.0, 1.0], 0));
    }

    #[test]
    fn ratio_test_fires_on_linear_data() {
        // Why the locator ranks jumps instead of scanning with the ratio.
        let v: Vec<f64> = (0..10).map(|i| -(i as f64) * 0.01).collect();
        assert!(ratio_criterion(&v, 1));
    }

    #[test]
    fn fit_of_collinear_points() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys = [1.0, 3.0, 5.0, 7.0];
        let fit = linear_fit(&xs, &ys).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-14 && (fit.intercept - 1.0).abs() < 1e-14);
        assert!((fit.r_squared - 1.0).abs() < 1e-14);
        assert!(linear_fit(&[1.0], &[2.0]).is_none());
        assert!(linear_fit(&[1.0, 1.0], &[2.0, 3.0]).is_none());
    }

    #[test]
    fn orders_and_restriction() {
        let o = observed_orders(&[1.0, 0.25, 0.0625]);
        assert_eq!(o, vec![2.0, 2.0]);
        assert_eq!(restrict(&[1.0, 3.0, 5.0, 7.0], 2), vec![2.0, 6.0]);
    }

    proptest! {
        #[test]
        fn single_jump_is_found(pos in 1usize..255, jump in 0.2f64..1.5) {
            let grid = Grid::new(1.0, 4.0, 256).unwrap();
            let v: Vec<f64> = (0..256).map(|i| if i < pos { 0.5 } else { 0.5 - jump }).collect();
            prop_assert_eq!(shock_locate(&v, &grid), Some(grid.face(pos as isize)));
        }

        #[test]
        fn fit_r_squared_in_unit_interval(ys in proptest::collection::vec(-1.0f64..1.0, 3..20)) {
            let xs: Vec<f64> = (0..ys.len()).map(|i| i as f64).collect();
            let fit = linear_fit(&xs, &ys).unwrap();
            prop_assert!(fit.r_squared <= 1.0 + 1e-12 && fit.r_squared >= -1e-12);
        }
    }
}
