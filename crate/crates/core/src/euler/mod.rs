//! Isothermal relativistic Euler system on a Schwarzschild background with
//! pressure `p = k^2 rho`.
//!
//! The conserved variables are `V = (V0, V1)`; flat state vectors interleave
//! them cell by cell.

mod scheme;
mod stationary;

pub use scheme::{
    lax_friedrichs_flux, reconstruct, rhs_euler, roe_average, roe_type_flux, EulerReconstruction, FaceState,
};
pub use stationary::{
    critical_radius, critical_stationary, g_max, g_of_v, solve_g, solve_g_near, stationary_constants,
    steady_shock_jump, EulerStationary, Transonic,
};

use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::grid::Grid;

/// Half-width of the band `||v| - k| <= SONIC_BAND` classified as sonic.
pub const SONIC_BAND: f64 = 1e-12;

/// Density and normalized velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Primitive {
    pub rho: f64,
    pub v: f64,
}

/// Conserved pair `(V0, V1)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Conserved {
    pub v0: f64,
    pub v1: f64,
}

impl Conserved {
    pub fn new(v0: f64, v1: f64) -> Self {
        Self { v0, v1 }
    }

    pub fn max_norm(self) -> f64 {
        self.v0.abs().max(self.v1.abs())
    }

    pub fn is_finite(self) -> bool {
        self.v0.is_finite() && self.v1.is_finite()
    }

    /// Reads cell `i` from an interleaved state vector.
    pub fn load(state: &[f64], i: usize) -> Self {
        Self { v0: state[2 * i], v1: state[2 * i + 1] }
    }

    pub fn store(self, state: &mut [f64], i: usize) {
        state[2 * i] = self.v0;
        state[2 * i + 1] = self.v1;
    }
}

impl Add for Conserved {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.v0 + o.v0, self.v1 + o.v1)
    }
}

impl Sub for Conserved {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.v0 - o.v0, self.v1 - o.v1)
    }
}

impl Mul<f64> for Conserved {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.v0 * s, self.v1 * s)
    }
}

impl Neg for Conserved {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.v0, -self.v1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Subsonic,
    Sonic,
    Supersonic,
}

/// Reasons a conserved pair has no physical primitive state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum StateError {
    #[error("non-finite conserved variables")]
    NonFinite,
    #[error("non-positive V0")]
    NonPositiveEnergy,
    #[error("negative discriminant in the velocity recovery")]
    NegativeDiscriminant,
    #[error("recovered velocity |v| >= 1")]
    Superluminal,
    #[error("non-positive density")]
    NonPositiveDensity,
}

pub fn regime_of(p: Primitive, k: f64) -> Regime {
    let d = p.v.abs() - k;
    if d.abs() <= SONIC_BAND {
        Regime::Sonic
    } else if d < 0.0 {
        Regime::Subsonic
    } else {
        Regime::Supersonic
    }
}

#[inline]
fn lapse(r: f64, mass: f64) -> f64 {
    1.0 - 2.0 * mass / r
}

pub fn prim_to_cons(p: Primitive, k: f64) -> Conserved {
    let k2 = k * k;
    let w = p.rho / (1.0 - p.v * p.v);
    Conserved { v0: (1.0 + k2 * p.v * p.v) * w, v1: (1.0 + k2) * p.v * w }
}

/// Velocity from the ratio `u = V1/V0`: the root of
/// `k^2 u v^2 - (1 + k^2) v + u = 0` that vanishes with `u`, in the
/// cancellation-free form `2u / (1 + k^2 + sqrt(disc))`.
///
/// Returns `None` for a negative discriminant.
pub fn velocity_from_ratio(u: f64, k: f64) -> Option<f64> {
    let a = 1.0 + k * k;
    let disc = a * a - 4.0 * k * k * u * u;
    (disc >= 0.0).then(|| 2.0 * u / (a + disc.sqrt()))
}

pub fn cons_to_prim(c: Conserved, k: f64) -> Result<Primitive, StateError> {
    if !c.is_finite() {
        return Err(StateError::NonFinite);
    }
    if c.v0 <= 0.0 {
        return Err(StateError::NonPositiveEnergy);
    }
    if c.v1.abs() < 1e-14 * c.v0 {
        return Ok(Primitive { rho: c.v0, v: 0.0 });
    }
    let v = velocity_from_ratio(c.v1 / c.v0, k).ok_or(StateError::NegativeDiscriminant)?;
    if v.abs() >= 1.0 {
        return Err(StateError::Superluminal);
    }
    let rho = c.v0 * (1.0 - v * v) / (1.0 + k * k * v * v);
    if rho <= 0.0 {
        return Err(StateError::NonPositiveDensity);
    }
    Ok(Primitive { rho, v })
}

/// Physical flux at radius `r` from primitive variables.
pub fn flux_prim(p: Primitive, r: f64, mass: f64, k: f64) -> Conserved {
    let k2 = k * k;
    let w = lapse(r, mass) * p.rho / (1.0 - p.v * p.v);
    Conserved { v0: (1.0 + k2) * p.v * w, v1: (p.v * p.v + k2) * w }
}

/// Source term at radius `r` from primitive variables.
pub fn source_prim(p: Primitive, r: f64, mass: f64, k: f64) -> Conserved {
    let k2 = k * k;
    let (rho, v, m) = (p.rho, p.v, mass);
    let w = rho / (1.0 - v * v);
    let r2 = r * r;
    Conserved {
        v0: -2.0 / r * lapse(r, m) * (1.0 + k2) * v * w,
        v1: (-2.0 * r + 5.0 * m) / r2 * (v * v + k2) * w - m / r2 * (1.0 + k2 * v * v) * w
            + 2.0 * (r - 2.0 * m) / r2 * k2 * rho,
    }
}

pub fn flux_e(c: Conserved, r: f64, mass: f64, k: f64) -> Result<Conserved, StateError> {
    Ok(flux_prim(cons_to_prim(c, k)?, r, mass, k))
}

pub fn source_e(c: Conserved, r: f64, mass: f64, k: f64) -> Result<Conserved, StateError> {
    Ok(source_prim(cons_to_prim(c, k)?, r, mass, k))
}

/// Characteristic speeds `(mu_minus, mu_plus)`.
pub fn eigenvalues_e(p: Primitive, r: f64, mass: f64, k: f64) -> (f64, f64) {
    let l = lapse(r, mass);
    let k2 = k * k;
    (l * (p.v - k) / (1.0 - k2 * p.v), l * (p.v + k) / (1.0 + k2 * p.v))
}

/// Largest characteristic speed over the cells of an interleaved state.
/// Cells without a valid primitive state are skipped.
pub fn max_wave_speed(state: &[f64], grid: &Grid, k: f64) -> f64 {
    grid.centers()
        .iter()
        .enumerate()
        .filter_map(|(i, &r)| {
            let p = cons_to_prim(Conserved::load(state, i), k).ok()?;
            let (a, b) = eigenvalues_e(p, r, grid.mass(), k);
            Some(a.abs().max(b.abs()))
        })
        .fold(0.0, f64::max)
}

/// Interleaves primitive cell values into a conserved state vector.
pub fn pack(prims: &[Primitive], k: f64) -> Vec<f64> {
    let mut out = vec![0.0; 2 * prims.len()];
    for (i, &p) in prims.iter().enumerate() {
        prim_to_cons(p, k).store(&mut out, i);
    }
    out
}

/// Primitive cell values of an interleaved state vector.
pub fn unpack(state: &[f64], k: f64) -> Result<Vec<Primitive>, (usize, StateError)> {
    (0..state.len() / 2).map(|i| cons_to_prim(Conserved::load(state, i), k).map_err(|e| (i, e))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const K: f64 = 0.3;

    #[test]
    fn conversion_examples() {
        assert_eq!(prim_to_cons(Primitive { rho: 1.0, v: 0.0 }, K), Conserved::new(1.0, 0.0));
        let c = prim_to_cons(Primitive { rho: 1.0, v: 0.6 }, K);
        assert!((c.v0 - 1.613125).abs() < 1e-14 && (c.v1 - 1.021875).abs() < 1e-14);
        let p = cons_to_prim(Conserved::new(1.613125, 1.021875), K).unwrap();
        assert!((p.rho - 1.0).abs() < 1e-14 && (p.v - 0.6).abs() < 1e-14);
        assert_eq!(cons_to_prim(Conserved::new(1.0, 0.0), K).unwrap(), Primitive { rho: 1.0, v: 0.0 });
    }

    #[test]
    fn recovery_matches_quadratic_root_form() {
        for &u in &[0.05, 0.3, -0.7, 0.95] {
            let a = 1.0 + K * K;
            let printed = (a - (a * a - 4.0 * K * K * u * u).sqrt()) / (2.0 * K * K * u);
            assert!((velocity_from_ratio(u, K).unwrap() - printed).abs() < 1e-14);
        }
        // zero discriminant yields the double root
        let a = 1.0 + K * K;
        let u = a / (2.0 * K);
        let v = velocity_from_ratio(u, K).unwrap();
        assert!((v - a / (2.0 * K * K * u)).abs() < 1e-14);
        assert!(velocity_from_ratio(u * 1.001, K).is_none());
        assert_eq!(cons_to_prim(Conserved::new(1.0, u), K), Err(StateError::Superluminal));
        assert_eq!(cons_to_prim(Conserved::new(1.0, 2.0 * u), K), Err(StateError::NegativeDiscriminant));
        assert_eq!(cons_to_prim(Conserved::new(-1.0, 0.0), K), Err(StateError::NonPositiveEnergy));
    }

    #[test]
    fn flux_and_source_values() {
        let p = Primitive { rho: 1.0, v: 0.0 };
        let f = flux_prim(p, 4.0, 1.0, K);
        assert_eq!(f.v0, 0.0);
        assert!((f.v1 - 0.045).abs() < 1e-15);
        let f = flux_prim(Primitive { rho: 2.0, v: 0.5 }, 2.0, 1.0, K);
        assert_eq!((f.v0, f.v1), (0.0, 0.0));
        for &r in &[2.5, 4.0, 9.0] {
            let s = source_prim(p, r, 1.0, K);
            let expected = (-2.0 * r + 5.0) * K * K / (r * r) - 1.0 / (r * r) + 2.0 * (r - 2.0) * K * K / (r * r);
            assert!((s.v1 - expected).abs() < 1e-15);
            assert_eq!(s.v0, 0.0);
        }
    }

    #[test]
    fn eigenvalue_examples() {
        let (m, _) = eigenvalues_e(Primitive { rho: 1.0, v: K }, 5.0, 1.0, K);
        assert!(m.abs() < 1e-16);
        let (m, p) = eigenvalues_e(Primitive { rho: 1.0, v: 0.0 }, 4.0, 1.0, K);
        assert!((m + 0.15).abs() < 1e-15 && (p - 0.15).abs() < 1e-15);
        let (m, p) = eigenvalues_e(Primitive { rho: 1.0, v: 0.4 }, 2.0, 1.0, K);
        assert_eq!((m, p), (0.0, 0.0));
    }

    #[test]
    fn wave_speed_at_sonic_state() {
        let grid = Grid::new(1.0, 10.0, 500).unwrap();
        let state = pack(&vec![Primitive { rho: 1.0, v: K }; 500], K);
        let s = max_wave_speed(&state, &grid, K);
        let expected = lapse(grid.centers()[499], 1.0) * 2.0 * K / (1.0 + K * K * K);
        assert!((s - expected).abs() < 1e-14);
    }

    #[test]
    fn regimes() {
        let r = |v| regime_of(Primitive { rho: 1.0, v }, K);
        assert_eq!(r(0.15), Regime::Subsonic);
        assert_eq!(r(0.6), Regime::Supersonic);
        assert_eq!(r(0.3), Regime::Sonic);
        assert_eq!(r(-0.3), Regime::Sonic);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn conversion_round_trip(rho in 1e-3..1e3f64, v in -0.99..0.99f64, k in 0.05..0.95f64) {
            let p = cons_to_prim(prim_to_cons(Primitive { rho, v }, k), k).unwrap();
            prop_assert!((p.v - v).abs() <= 1e-12);
            prop_assert!((p.rho - rho).abs() <= 1e-12 * rho);
        }
    }
}
