//! Stationary solutions `v*(r) = ±sqrt(1 - K^2 (1 - 2M/r))` and the per-cell
//! fits that select one of them from a cell value.

use super::lapse;
use crate::config::Averaging;
use crate::grid::Cell;
use crate::roots::solve_monotone;

const SQRT_GUARD: f64 = 1e-14;
const MAX_ITER: usize = 200;

/// `sqrt(max(x, 0))` for arguments that are non-negative up to rounding.
#[inline]
fn guarded_sqrt(x: f64) -> f64 {
    if x < 0.0 && x >= -SQRT_GUARD {
        0.0
    } else {
        x.sqrt()
    }
}

/// Member of the stationary family with constant `ksq = K^2` on one branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BurgersStationary {
    pub ksq: f64,
    /// `+1.0` or `-1.0`.
    pub branch: f64,
    pub mass: f64,
}

impl BurgersStationary {
    pub fn new(ksq: f64, branch: f64, mass: f64) -> Self {
        Self { ksq, branch: if branch < 0.0 { -1.0 } else { 1.0 }, mass }
    }

    /// Right end of the domain `[2M, r_max]`; infinite when `K^2 <= 1`.
    pub fn r_max(&self) -> f64 {
        if self.ksq <= 1.0 {
            f64::INFINITY
        } else {
            2.0 * self.mass * self.ksq / (self.ksq - 1.0)
        }
    }

    pub fn contains(&self, r: f64) -> bool {
        r >= 2.0 * self.mass && r <= self.r_max()
    }

    /// `|v*(r)|` without a domain check.
    #[inline]
    pub fn abs_at(&self, r: f64) -> f64 {
        guarded_sqrt(1.0 - self.ksq * lapse(r, self.mass))
    }

    /// `v*(r)`, or `None` outside the domain.
    pub fn eval(&self, r: f64) -> Option<f64> {
        self.contains(r).then(|| self.branch * self.abs_at(r))
    }
}

/// Exact fit from a point value: `K^2 = (1 - v^2)/(1 - 2M/r)`, branch `sign(v)`
/// with `sign(0) = +1`.
pub fn fit_point_b(v: f64, r: f64, mass: f64) -> BurgersStationary {
    let v = v.clamp(-1.0, 1.0);
    BurgersStationary::new((1.0 - v * v) / lapse(r, mass), v, mass)
}

/// Fit such that the two-point Gauss average of `|v*|` over `cell` equals `|v|`.
///
/// Returns `None` when `|v|` is below the smallest attainable average.
pub fn fit_gauss2_b(v: f64, cell: &Cell, mass: f64, tol: f64) -> Option<BurgersStationary> {
    let target = v.abs().min(1.0);
    let [n0, n1] = cell.gauss_nodes();
    let (a0, a1) = (lapse(n0, mass), lapse(n1, mass));
    let g = |x: f64| 0.5 * (guarded_sqrt(1.0 - x * a0) + guarded_sqrt(1.0 - x * a1));
    let dg = |x: f64| -0.25 * (a0 / guarded_sqrt(1.0 - x * a0) + a1 / guarded_sqrt(1.0 - x * a1));
    let x_max = 1.0 / a1;
    let guess = (1.0 - target * target) / lapse(cell.center, mass);
    let ksq = solve_decreasing(g, Some(&dg), target, x_max, guess, tol)?;
    Some(BurgersStationary::new(ksq, v, mass))
}

/// Fit such that the exact cell average of `|v*|` over `cell` equals `|v|`.
pub fn fit_exact_avg_b(v: f64, cell: &Cell, mass: f64, tol: f64) -> Option<BurgersStationary> {
    let target = v.abs().min(1.0);
    let g = |x: f64| exact_mean(x, cell, mass);
    let x_max = 1.0 / lapse(cell.right, mass);
    let guess = (1.0 - target * target) / lapse(cell.center, mass);
    let ksq = solve_decreasing(g, None, target, x_max, guess, tol)?;
    Some(BurgersStationary::new(ksq, v, mass))
}

/// Fit under the given averaging rule.
pub fn fit(v: f64, cell: &Cell, mass: f64, averaging: Averaging, tol: f64) -> Option<BurgersStationary> {
    match averaging {
        Averaging::Midpoint => Some(fit_point_b(v, cell.center, mass)),
        Averaging::Gauss2 => fit_gauss2_b(v, cell, mass, tol),
        Averaging::Exact => fit_exact_avg_b(v, cell, mass, tol),
    }
}

/// Solves `g(x) = target` for a decreasing `g` on `[0, x_max]` with `g(0) = 1`.
fn solve_decreasing(
    g: impl Fn(f64) -> f64,
    dg: Option<&dyn Fn(f64) -> f64>,
    target: f64,
    x_max: f64,
    guess: f64,
    tol: f64,
) -> Option<f64> {
    if target >= 1.0 {
        return Some(0.0);
    }
    let g_min = g(x_max);
    if target < g_min - tol {
        return None;
    }
    if target <= g_min {
        return Some(x_max);
    }
    solve_monotone(|x| g(x) - target, dg, 0.0, x_max, guess.clamp(0.0, x_max), tol, MAX_ITER)
}

/// Primitive in `r` of `sqrt(1 - x (1 - 2M/r))`, continuous in `x` at `x = 1`.
///
/// Additive terms that depend on `x` only are chosen so that the limits from
/// both sides agree; differences in `r` are unaffected by them. Valid for `r >= 2M` inside the domain of the integrand.
pub fn primitive(x: f64, r: f64, mass: f64) -> f64 {
    let s = guarded_sqrt(1.0 - x * lapse(r, mass));
    let m = mass;
    if x == 1.0 {
        2.0 * r * s
    } else if x < 1.0 {
        let q = (1.0 - x).sqrt();
        let z = (q * q * (r - m) + q * r * s) / m;
        // the r-independent `x M q` cancels the O(q) part of the logarithmic term
        r * s + x * m / q * z.ln_1p() + x * m * q
    } else {
        let p = (x - 1.0).sqrt();
        r * s + 2.0 * x * m / p * p.atan2(s)
    }
}

/// Exact mean of `sqrt(1 - x (1 - 2M/r))` over `cell`.
fn exact_mean(x: f64, cell: &Cell, mass: f64) -> f64 {
    (primitive(x, cell.right, mass) - primitive(x, cell.left, mass)) / cell.width()
}

/// Cell value of `|v*|` on `cell` under the averaging rule.
pub fn stationary_cell_abs(s: &BurgersStationary, cell: &Cell, averaging: Averaging) -> f64 {
    match averaging {
        Averaging::Midpoint => s.abs_at(cell.center),
        Averaging::Gauss2 => {
            let [n0, n1] = cell.gauss_nodes();
            0.5 * (s.abs_at(n0) + s.abs_at(n1))
        }
        Averaging::Exact => exact_mean(s.ksq, cell, s.mass),
    }
}

/// Largest radius sampled when the cell value of `cell` is formed.
pub fn rule_reach(cell: &Cell, averaging: Averaging) -> f64 {
    match averaging {
        Averaging::Midpoint => cell.center,
        Averaging::Gauss2 => cell.gauss_nodes()[1],
        Averaging::Exact => cell.right,
    }
}
