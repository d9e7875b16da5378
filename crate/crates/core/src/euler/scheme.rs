//! Numerical fluxes, well-balanced reconstructions and the semi-discrete
//! operator.

use super::stationary::{stationary_constants, EulerStationary};
use super::{
    cons_to_prim, flux_prim, lapse, prim_to_cons, regime_of, source_prim, Conserved, Primitive, Regime, StateError,
};
use crate::config::{FluxKind, RightBoundary, RunConfig};
use crate::error::{Result, SolverError};
use crate::grid::Grid;
use crate::limiters::minmod_slope;

/// A reconstructed interface value in both variable sets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceState {
    pub prim: Primitive,
    pub cons: Conserved,
}

impl FaceState {
    pub fn from_prim(prim: Primitive, k: f64) -> Self {
        Self { prim, cons: prim_to_cons(prim, k) }
    }

    pub fn from_cons(cons: Conserved, k: f64) -> std::result::Result<Self, StateError> {
        Ok(Self { prim: cons_to_prim(cons, k)?, cons })
    }
}

/// Interface values and integrated source of one cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerReconstruction {
    /// Reconstructed state at `r_{i-1/2}`.
    pub left: FaceState,
    /// Reconstructed state at `r_{i+1/2}`.
    pub right: FaceState,
    /// Source contribution integrated over the cell (carries the `dr` factor).
    pub source: Conserved,
    pub well_balanced: bool,
}

/// Lax-Friedrichs flux `(F_L + F_R)/2 - (dt/dr)/2 (V_R - V_L)`.
pub fn lax_friedrichs_flux(l: &FaceState, r: &FaceState, r_if: f64, mass: f64, k: f64, dt_over_dr: f64) -> Conserved {
    let (fl, fr) = (flux_prim(l.prim, r_if, mass, k), flux_prim(r.prim, r_if, mass, k));
    (fl + fr) * 0.5 - (r.cons - l.cons) * (0.5 * dt_over_dr)
}

/// Intermediate velocity satisfying the Roe-type relation of the flux
/// Jacobian (without the metric factor) between two states.
///
/// States closer than `eps` in max norm of the conserved variables return
/// the arithmetic mean of the velocities.
pub fn roe_average(pl: Primitive, pr: Primitive, k: f64, eps: f64) -> f64 {
    let mean = 0.5 * (pl.v + pr.v);
    if (prim_to_cons(pr, k) - prim_to_cons(pl, k)).max_norm() < eps {
        return mean;
    }
    let (al, ar) = (1.0 - pl.v * pl.v, 1.0 - pr.v * pr.v);
    // a v^2 - 2 b v + c = 0
    let a = pr.rho * al - pl.rho * ar;
    let b = pr.rho * pr.v * al - pl.rho * pl.v * ar;
    let c = pr.rho * pr.v * pr.v * al - pl.rho * pl.v * pl.v * ar;
    let sq = (pl.rho * pr.rho * al * ar).sqrt() * (pr.v - pl.v).abs();
    let q = b + if b < 0.0 { -sq } else { sq };
    if q == 0.0 {
        return mean;
    }
    let (lo, hi) = (pl.v.min(pr.v), pl.v.max(pr.v));
    let small = c / q;
    if a.abs() <= 1e-14 || (lo..=hi).contains(&small) {
        return small;
    }
    let large = q / a;
    if (lo..=hi).contains(&large) {
        large
    } else {
        mean
    }
}

/// Roe-type (HLL in PVM form) flux with wave speeds from [`roe_average`].
pub fn roe_type_flux(l: &FaceState, r: &FaceState, r_if: f64, mass: f64, k: f64, eps: f64) -> Conserved {
    let (fl, fr) = (flux_prim(l.prim, r_if, mass, k), flux_prim(r.prim, r_if, mass, k));
    let vm = roe_average(l.prim, r.prim, k, eps);
    let lap = lapse(r_if, mass);
    let k2 = k * k;
    let l1 = lap * (vm - k) / (1.0 - k2 * vm);
    let l2 = lap * (vm + k) / (1.0 + k2 * vm);
    if l2 == l1 {
        return (fl + fr) * 0.5;
    }
    let a0 = (l2 * l1.abs() - l1 * l2.abs()) / (l2 - l1);
    let a1 = (l2.abs() - l1.abs()) / (l2 - l1);
    (fl + fr) * 0.5 - ((r.cons - l.cons) * a0 + (fr - fl) * a1) * 0.5
}

/// Cell values with one ghost on the left and two on the right; index
/// `j + 1` holds cell `j` for `j` in `-1..=n+1`.
struct Extended {
    prims: Vec<Primitive>,
    cons: Vec<Conserved>,
}

impl Extended {
    fn prim(&self, j: isize) -> Primitive {
        self.prims[(j + 1) as usize]
    }

    fn cons(&self, j: isize) -> Conserved {
        self.cons[(j + 1) as usize]
    }
}

fn extend(state: &[f64], grid: &Grid, config: &RunConfig) -> Result<Extended> {
    let n = state.len() / 2;
    let k = config.k;
    let mut cons = Vec::with_capacity(n + 3);
    let mut prims = Vec::with_capacity(n + 3);
    for i in 0..n {
        let c = Conserved::load(state, i);
        let p = cons_to_prim(c, k).map_err(|e| SolverError::InvalidState { cell: i, reason: e.to_string() })?;
        cons.push(c);
        prims.push(p);
    }
    cons.insert(0, cons[0]);
    prims.insert(0, prims[0]);
    let last = prims[n];
    let mut ghosts = [last; 2];
    if config.right_bc == RightBoundary::StationaryExtension {
        let r_last = grid.center(n as isize - 1);
        if let Some(s) = stationary_constants(last, r_last, grid.mass(), k, config.v_min) {
            for (j, g) in ghosts.iter_mut().enumerate() {
                let r = grid.center((n + j) as isize);
                if let Some(p) = s.eval_on(r, s.regime, grid.mass(), k, Some(last.v)) {
                    *g = p;
                }
            }
        }
    }
    for g in ghosts {
        prims.push(g);
        cons.push(prim_to_cons(g, k));
    }
    Ok(Extended { prims, cons })
}

/// Branch used for the interface shared with neighbour `p_nb`.
fn side_regime(own: Regime, p_nb: Primitive, k: f64) -> Regime {
    match (own, regime_of(p_nb, k)) {
        (Regime::Sonic, Regime::Sonic) => Regime::Subsonic,
        (Regime::Sonic, nb) => nb,
        (own, _) => own,
    }
}

fn reconstruct_at(i: isize, ext: &Extended, grid: &Grid, config: &RunConfig) -> EulerReconstruction {
    if config.well_balanced {
        if let Some(rec) = reconstruct_stationary(i, ext, grid, config) {
            return rec;
        }
    }
    reconstruct_standard(i, ext, grid, config)
}

fn componentwise_slope(wm: Conserved, wc: Conserved, wp: Conserved) -> Conserved {
    Conserved::new(minmod_slope(wm.v0, wc.v0, wp.v0), minmod_slope(wm.v1, wc.v1, wp.v1))
}

fn reconstruct_stationary(i: isize, ext: &Extended, grid: &Grid, config: &RunConfig) -> Option<EulerReconstruction> {
    let (mass, k) = (grid.mass(), config.k);
    let cell = grid.cell(i);
    let p = ext.prim(i);
    let s: EulerStationary = stationary_constants(p, cell.center, mass, k, config.v_min)?;
    let own = regime_of(p, k);
    let reg_lo = side_regime(own, ext.prim(i - 1), k);
    let reg_hi = side_regime(own, ext.prim(i + 1), k);
    let hi = s.eval_on(cell.right, reg_hi, mass, k, Some(p.v))?;
    // the face at the horizon carries no flux and is never evaluated
    let lo = if i == 0 { None } else { Some(s.eval_on(cell.left, reg_lo, mass, k, Some(p.v))?) };
    let f_lo = lo.map_or(Conserved::default(), |q| flux_prim(q, cell.left, mass, k));
    let source = flux_prim(hi, cell.right, mass, k) - f_lo;
    let right = FaceState::from_prim(hi, k);
    let left = lo.map_or(FaceState { prim: p, cons: ext.cons(i) }, |q| FaceState::from_prim(q, k));
    if config.order == 1 {
        return Some(EulerReconstruction { left, right, source, well_balanced: true });
    }
    let fluctuation = |j: isize, regime: Regime| -> Option<Conserved> {
        let star = s.eval_on(grid.center(j), regime, mass, k, Some(ext.prim(j).v))?;
        Some(ext.cons(j) - prim_to_cons(star, k))
    };
    let wp = fluctuation(i + 1, reg_hi)?;
    let wm = if i == 0 { Conserved::default() } else { fluctuation(i - 1, reg_lo)? };
    let half = componentwise_slope(wm, Conserved::default(), wp) * 0.5;
    let right = FaceState::from_cons(right.cons + half, k).ok()?;
    let left = if i == 0 { left } else { FaceState::from_cons(left.cons - half, k).ok()? };
    Some(EulerReconstruction { left, right, source, well_balanced: true })
}

fn reconstruct_standard(i: isize, ext: &Extended, grid: &Grid, config: &RunConfig) -> EulerReconstruction {
    let (mass, k) = (grid.mass(), config.k);
    let r = grid.center(i);
    let (p, c) = (ext.prim(i), ext.cons(i));
    let source = source_prim(p, r, mass, k) * grid.dr();
    let constant = FaceState { prim: p, cons: c };
    let (mut left, mut right) = (constant, constant);
    if config.order == 2 {
        let half = componentwise_slope(ext.cons(i - 1), c, ext.cons(i + 1)) * 0.5;
        if let (Ok(l), Ok(rr)) = (FaceState::from_cons(c - half, k), FaceState::from_cons(c + half, k)) {
            (left, right) = (l, rr);
        }
    }
    EulerReconstruction { left, right, source, well_balanced: false }
}

/// Reconstruction of cell `i` (interior, or `n` for the first right ghost).
pub fn reconstruct(i: usize, state: &[f64], grid: &Grid, config: &RunConfig) -> Result<EulerReconstruction> {
    let ext = extend(state, grid, config)?;
    Ok(reconstruct_at(i as isize, &ext, grid, config))
}

/// Semi-discrete operator `dV_i/dt = -(F_{i+1/2} - F_{i-1/2} - S_i)/dr` on
/// an interleaved state, written into `out`.
///
/// `dt` enters only the Lax-Friedrichs dissipation. The flux through the
/// horizon `r = 2M` is zero.
pub fn rhs_euler(state: &[f64], grid: &Grid, config: &RunConfig, dt: f64, out: &mut [f64]) -> Result<()> {
    let n = state.len() / 2;
    let (mass, k, dr) = (grid.mass(), config.k, grid.dr());
    let ext = extend(state, grid, config)?;
    let recs: Vec<EulerReconstruction> = (0..=n as isize).map(|j| reconstruct_at(j, &ext, grid, config)).collect();
    let mut flux_lo = Conserved::default();
    for i in 0..n {
        let r_if = grid.face(i as isize + 1);
        let (l, r) = (&recs[i].right, &recs[i + 1].left);
        let flux_hi = match config.flux {
            FluxKind::LaxFriedrichs => lax_friedrichs_flux(l, r, r_if, mass, k, dt / dr),
            _ => roe_type_flux(l, r, r_if, mass, k, config.state_eq_eps),
        };
        if !flux_hi.is_finite() {
            return Err(SolverError::NonFinite { cell: i, what: "interface flux" });
        }
        let d = (flux_hi - flux_lo - recs[i].source) * (-1.0 / dr);
        if !d.is_finite() {
            return Err(SolverError::NonFinite { cell: i, what: "source term" });
        }
        d.store(out, i);
        flux_lo = flux_hi;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::{pack, steady_shock_jump};
    use super::*;
    use proptest::prelude::*;

    const K: f64 = 0.3;

    fn face(rho: f64, v: f64) -> FaceState {
        FaceState::from_prim(Primitive { rho, v }, K)
    }

    fn profile(rho: f64, v: f64, r: f64) -> EulerStationary {
        stationary_constants(Primitive { rho, v }, r, 1.0, K, 1e-10).unwrap()
    }

    fn sample(grid: &Grid, f: impl Fn(f64) -> Primitive) -> Vec<f64> {
        let prims: Vec<Primitive> = grid.centers().iter().map(|&r| f(r)).collect();
        pack(&prims, K)
    }

    fn max_abs(xs: &[f64]) -> f64 {
        xs.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Largest `|rhs_j| / max(1, |V_j|)` over all components.
    fn scaled_residual(out: &[f64], state: &[f64]) -> f64 {
        out.iter().zip(state).fold(0.0, |m, (d, v)| m.max(d.abs() / v.abs().max(1.0)))
    }

    fn shock_data(grid: &Grid) -> Vec<f64> {
        let minus = profile(4.0, 0.6, 6.0);
        let plus_state = steady_shock_jump(Primitive { rho: 4.0, v: 0.6 }, K);
        let plus = profile(plus_state.rho, plus_state.v, 6.0);
        sample(grid, |r| if r <= 6.0 { minus.eval(r, 1.0, K).unwrap() } else { plus.eval(r, 1.0, K).unwrap() })
    }

    #[test]
    fn lax_friedrichs_hand_value() {
        let (l, r) = (face(1.0, 0.6), face(1.0, 0.5));
        let f = lax_friedrichs_flux(&l, &r, 5.0, 1.0, K, 0.5);
        // lapse 0.6; F_L = 0.6 (1.09*0.6/0.64, 0.45/0.64), F_R = 0.6 (1.09*0.5/0.75, 0.34/0.75)
        let fl = (0.6 * 1.09 * 0.6 / 0.64, 0.6 * 0.45 / 0.64);
        let fr = (0.6 * 1.09 * 0.5 / 0.75, 0.6 * 0.34 / 0.75);
        let vl = (1.0324 / 0.64, 0.654 / 0.64);
        let vr = (1.0225 / 0.75, 0.545 / 0.75);
        let e0 = 0.5 * (fl.0 + fr.0) - 0.25 * (vr.0 - vl.0);
        let e1 = 0.5 * (fl.1 + fr.1) - 0.25 * (vr.1 - vl.1);
        assert!((f.v0 - e0).abs() < 1e-14 && (f.v1 - e1).abs() < 1e-14);
    }

    #[test]
    fn roe_hand_value() {
        let vm = roe_average(Primitive { rho: 1.0, v: 0.0 }, Primitive { rho: 1.0, v: 0.5 }, K, 1e-12);
        assert!((vm - (2.0 - 3f64.sqrt())).abs() < 1e-12);
        let p = Primitive { rho: 2.0, v: 0.4 };
        assert_eq!(roe_average(p, p, K, 1e-12), 0.4);
    }

    #[test]
    fn roe_upwinds_one_sided_waves() {
        let (l, r) = (face(1.0, 0.8), face(1.2, 0.7));
        let f = roe_type_flux(&l, &r, 5.0, 1.0, K, 1e-12);
        let fl = flux_prim(l.prim, 5.0, 1.0, K);
        assert!((f - fl).max_norm() < 1e-14);
        let (l, r) = (face(1.0, -0.8), face(1.2, -0.7));
        let f = roe_type_flux(&l, &r, 5.0, 1.0, K, 1e-12);
        assert!((f - flux_prim(r.prim, 5.0, 1.0, K)).max_norm() < 1e-14);
    }

    #[test]
    fn fluxes_are_consistent() {
        let s = face(3.0, -0.2);
        let exact = flux_prim(s.prim, 4.0, 1.0, K);
        assert_eq!(roe_type_flux(&s, &s, 4.0, 1.0, K, 1e-12), exact);
        assert_eq!(lax_friedrichs_flux(&s, &s, 4.0, 1.0, K, 0.7), exact);
    }

    #[test]
    fn sonic_cell_takes_neighbour_branches() {
        assert_eq!(side_regime(Regime::Sonic, Primitive { rho: 1.0, v: 0.1 }, K), Regime::Subsonic);
        assert_eq!(side_regime(Regime::Sonic, Primitive { rho: 1.0, v: 0.6 }, K), Regime::Supersonic);
        assert_eq!(side_regime(Regime::Sonic, Primitive { rho: 1.0, v: K }, K), Regime::Subsonic);
        assert_eq!(side_regime(Regime::Supersonic, Primitive { rho: 1.0, v: 0.1 }, K), Regime::Supersonic);
    }

    #[test]
    fn stationary_data_is_a_fixed_point() {
        let grid = Grid::new(1.0, 10.0, 500).unwrap();
        for (rho, v) in [(1.0, 0.6), (1.0, -0.8)] {
            let s = profile(rho, v, 10.0);
            let state = sample(&grid, |r| s.eval(r, 1.0, K).unwrap());
            for order in [1u8, 2] {
                for flux in [FluxKind::RoeType, FluxKind::LaxFriedrichs] {
                    let cfg = RunConfig { order, flux, right_bc: RightBoundary::StationaryExtension, ..RunConfig::euler() };
                    let mut out = vec![0.0; 1000];
                    rhs_euler(&state, &grid, &cfg, 0.01, &mut out).unwrap();
                    let worst = scaled_residual(&out, &state);
                    assert!(worst < 1e-12, "v={v} order {order} {flux}: {worst}");
                }
            }
        }
    }

    #[test]
    fn steady_shock_is_a_fixed_point_with_roe_flux() {
        let grid = Grid::new(1.0, 10.0, 500).unwrap();
        let state = shock_data(&grid);
        for order in [1u8, 2] {
            let cfg = RunConfig { order, right_bc: RightBoundary::StationaryExtension, ..RunConfig::euler() };
            let mut out = vec![0.0; 1000];
            rhs_euler(&state, &grid, &cfg, 0.01, &mut out).unwrap();
            let worst = scaled_residual(&out, &state);
            assert!(worst < 1e-11, "order {order}: {worst}");
        }
    }

    #[test]
    fn source_balances_flux_gradient_along_stationary_profiles() {
        for (rho, v) in [(1.0, 0.6), (1.0, -0.8), (24.4375, 0.15)] {
            let s = profile(rho, v, 6.0);
            for &r in &[3.0, 4.5, 8.0] {
                let h = 1e-4;
                let f = |x: f64| flux_prim(s.eval(x, 1.0, K).unwrap(), x, 1.0, K);
                // fourth-order central difference
                let d = (f(r - 2.0 * h) * (1.0 / 12.0) - f(r - h) * (2.0 / 3.0) + f(r + h) * (2.0 / 3.0)
                    - f(r + 2.0 * h) * (1.0 / 12.0))
                    * (1.0 / h);
                let src = source_prim(s.eval(r, 1.0, K).unwrap(), r, 1.0, K);
                assert!((d - src).max_norm() < 1e-8 * (1.0 + src.max_norm()), "{rho} {v} {r}: {d:?} {src:?}");
            }
        }
    }

    #[test]
    fn non_well_balanced_scheme_moves_stationary_data() {
        let grid = Grid::new(1.0, 10.0, 500).unwrap();
        let s = profile(1.0, 0.6, 10.0);
        let state = sample(&grid, |r| s.eval(r, 1.0, K).unwrap());
        let cfg = RunConfig { well_balanced: false, ..RunConfig::euler() };
        let mut out = vec![0.0; 1000];
        rhs_euler(&state, &grid, &cfg, 0.01, &mut out).unwrap();
        assert!(max_abs(&out) > 1e-4);
    }

    #[test]
    fn perturbation_stays_local() {
        let grid = Grid::new(1.0, 10.0, 500).unwrap();
        let s = profile(1.0, 0.9, 10.0);
        let prims: Vec<Primitive> = grid.centers().iter().map(|&r| s.eval(r, 1.0, K).unwrap()).collect();
        let mut perturbed = prims.clone();
        perturbed[250].v -= 0.01;
        let (base, state) = (pack(&prims, K), pack(&perturbed, K));
        for order in [1u8, 2] {
            let cfg = RunConfig { order, ..RunConfig::euler() };
            let mut out = vec![0.0; 1000];
            let mut reference = vec![0.0; 1000];
            rhs_euler(&state, &grid, &cfg, 0.01, &mut out).unwrap();
            rhs_euler(&base, &grid, &cfg, 0.01, &mut reference).unwrap();
            for i in 0..500 {
                let d = (out[2 * i] - reference[2 * i]).abs().max((out[2 * i + 1] - reference[2 * i + 1]).abs());
                if !(248..=252).contains(&i) {
                    assert_eq!(d, 0.0, "order {order} cell {i}");
                }
            }
        }
    }

    #[test]
    fn invalid_state_names_the_cell() {
        let grid = Grid::new(1.0, 10.0, 10).unwrap();
        let mut state = pack(&vec![Primitive { rho: 1.0, v: 0.5 }; 10], K);
        state[2 * 3] = -1.0;
        let mut out = vec![0.0; 20];
        let err = rhs_euler(&state, &grid, &RunConfig { cells: 10, ..RunConfig::euler() }, 0.01, &mut out);
        assert!(matches!(err, Err(SolverError::InvalidState { cell: 3, .. })));
    }

    fn valid_pair() -> impl Strategy<Value = (Primitive, Primitive)> {
        (0.1..10.0f64, -0.95..0.95f64, 0.1..10.0f64, -0.95..0.95f64)
            .prop_filter("distinct velocities", |(_, a, _, b)| (a - b).abs() > 1e-6)
            .prop_map(|(ra, va, rb, vb)| (Primitive { rho: ra, v: va }, Primitive { rho: rb, v: vb }))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn roe_average_brackets_and_satisfies_relation((pl, pr) in valid_pair()) {
            let vm = roe_average(pl, pr, K, 1e-12);
            prop_assert!(vm > pl.v.min(pr.v) && vm < pl.v.max(pr.v), "{vm} {pl:?} {pr:?}");
            let k2 = K * K;
            let (cl, cr) = (prim_to_cons(pl, K), prim_to_cons(pr, K));
            // second row of the Jacobian relation, metric factor dropped
            let f2 = |p: Primitive| (p.v * p.v + k2) * p.rho / (1.0 - p.v * p.v);
            let lhs = (k2 - vm * vm) / (1.0 - k2 * vm * vm) * (cr.v0 - cl.v0)
                + 2.0 * (1.0 - k2) * vm / (1.0 - k2 * vm * vm) * (cr.v1 - cl.v1);
            let rhs = f2(pr) - f2(pl);
            prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()), "{lhs} {rhs}");
        }
    }
}
