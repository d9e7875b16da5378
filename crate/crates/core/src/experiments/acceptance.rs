//! Acceptance criteria evaluated from fresh runs, with thresholds read from
//! `acceptance.toml`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::catalog::{find, stationary_e, test_b8, test_e7, TestCase, Tier};
use super::convergence::run_convergence;
use super::diagnostics::linear_fit;
use super::suite::{run_case, CaseOutcome};
use crate::burgers::primitive;
use crate::config::{Averaging, FluxKind, Model, RunConfig};
use crate::driver::{InitialData, Termination};
use crate::error::{Result, SolverError};
use crate::euler::{prim_to_cons, roe_average, steady_shock_jump, Primitive};

/// Text of the threshold file.
pub const THRESHOLDS_TOML: &str = include_str!("../../acceptance.toml");

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Thresholds {
    pub burgers_preservation: Preservation,
    pub non_wb_contrast: NonWbContrast,
    pub euler_preservation: Preservation,
    pub shock_jump: ShockJump,
    pub amplitude_family: AmplitudeFamily,
    pub zero_mean: ZeroMean,
    pub long_time: LongTime,
    pub roe: RoeChecks,
    pub euler_displacement: EulerDisplacement,
    pub convergence: Convergence,
    pub oracles: Oracles,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Preservation {
    pub cells: usize,
    pub t_end: f64,
    pub max_l1: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct NonWbContrast {
    pub t_end: f64,
    pub order1_min: f64,
    pub order1_max: f64,
    pub order3_min: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ShockJump {
    pub rho_minus: f64,
    pub v_minus: f64,
    pub rho_plus: f64,
    pub v_plus: f64,
    pub max_rel_error: f64,
    pub max_c2_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct AmplitudeFamily {
    pub rows: usize,
    pub step: f64,
    pub checked_alphas: Vec<f64>,
    pub integrals: Vec<f64>,
    pub displacements: Vec<f64>,
    pub integral_tol: f64,
    pub displacement_rel_tol: f64,
    pub min_r_squared: f64,
    pub t_max: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ZeroMean {
    pub cells: usize,
    pub shock: f64,
    pub max_offset_cells: f64,
    pub t_max: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct LongTime {
    /// The inflow value is sampled half a cell inside the boundary, an
    /// O(dr) offset against the limit through the boundary datum.
    pub cells: usize,
    pub relax_t_end: f64,
    pub max_l1: f64,
    pub exit_t_max: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RoeChecks {
    pub pairs: usize,
    pub seed: u64,
    pub hand_value_tol: f64,
    pub max_relation_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct EulerDisplacement {
    pub alpha: f64,
    pub cells: usize,
    pub t_end: f64,
    pub displacement: f64,
    pub rel_tol: f64,
    /// Amplitudes of the reported family.
    pub table_alphas: Vec<f64>,
    /// Meshes on which the final shock position is reported.
    pub mesh_study: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Convergence {
    pub meshes: Vec<usize>,
    pub reference_cells: usize,
    pub burgers_min_orders: Vec<f64>,
    pub euler_min_orders: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Oracles {
    pub ode_tol: f64,
    pub primitive_tol: f64,
}

impl Thresholds {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| SolverError::InvalidConfig(format!("acceptance thresholds: {e}")))
    }

    /// The thresholds shipped with the crate.
    pub fn bundled() -> Self {
        Self::from_toml_str(THRESHOLDS_TOML).expect("the bundled threshold file parses")
    }
}

/// One measured quantity against its bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub label: String,
    pub measured: f64,
    /// Human-readable acceptance condition.
    pub bound: String,
    pub passed: bool,
    /// A documented failure that the implementation cannot meet; reported
    /// but excluded from the suite verdict unless running strictly.
    pub known_failure: bool,
}

impl Check {
    fn at_most(label: impl Into<String>, measured: f64, max: f64) -> Self {
        Self::new(label, measured, format!("<= {max:e}"), measured <= max)
    }

    fn at_least(label: impl Into<String>, measured: f64, min: f64) -> Self {
        Self::new(label, measured, format!(">= {min}"), measured >= min)
    }

    fn within(label: impl Into<String>, measured: f64, lo: f64, hi: f64) -> Self {
        Self::new(label, measured, format!("in [{lo}, {hi}]"), (lo..=hi).contains(&measured))
    }

    fn near(label: impl Into<String>, measured: f64, target: f64, tol: f64) -> Self {
        Self::new(label, measured, format!("{target} +- {tol:e}"), (measured - target).abs() <= tol)
    }

    fn relative(label: impl Into<String>, measured: f64, target: f64, rel: f64) -> Self {
        let ok = ((measured - target) / target).abs() <= rel;
        Self::new(label, measured, format!("{target} +- {:.0}%", rel * 100.0), ok)
    }

    fn new(label: impl Into<String>, measured: f64, bound: String, passed: bool) -> Self {
        Self { label: label.into(), measured, bound, passed, known_failure: false }
    }

    fn known(mut self) -> Self {
        self.known_failure = true;
        self
    }
}

/// Named columns of numbers produced alongside a criterion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

/// Outcome of one numbered criterion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionOutcome {
    pub number: u8,
    pub title: &'static str,
    pub tier: Tier,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Table>,
}

impl CriterionOutcome {
    /// Every check passed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Every check passed except documented known failures.
    pub fn passed_except_known(&self) -> bool {
        self.checks.iter().all(|c| c.passed || c.known_failure)
    }

    /// `PASS`, `FAIL (known)` or `FAIL`.
    pub fn verdict(&self) -> &'static str {
        if self.passed() {
            "PASS"
        } else if self.passed_except_known() {
            "FAIL (known)"
        } else {
            "FAIL"
        }
    }

    /// One summary line.
    pub fn line(&self) -> String {
        let failing: Vec<String> = self
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{} = {:.6e} (want {})", c.label, c.measured, c.bound))
            .collect();
        let detail = if failing.is_empty() {
            format!("{} checks", self.checks.len())
        } else {
            failing.join("; ")
        };
        format!("criterion {:>2} [{}] {}: {}", self.number, self.verdict(), self.title, detail)
    }
}

fn case(id: &str) -> TestCase {
    find(id).expect("acceptance cases exist in the catalog")
}

fn run_or_fail(c: &TestCase) -> std::result::Result<CaseOutcome, Check> {
    run_case(c).map_err(|e| Check::new(format!("{} run", c.id), f64::NAN, format!("completes ({e})"), false))
}

const STATIONARY_RULES: [(u8, Averaging); 3] = [(1, Averaging::Midpoint), (2, Averaging::Midpoint), (3, Averaging::Gauss2)];

/// Well-balanced Burgers schemes keep the stationary data.
pub fn burgers_preservation(th: &Thresholds) -> CriterionOutcome {
    burgers_preservation_with(th, true)
}

/// [`burgers_preservation`] with the well-balanced switch exposed, so that
/// a suite can show what the check catches.
pub fn burgers_preservation_with(th: &Thresholds, well_balanced: bool) -> CriterionOutcome {
    let p = &th.burgers_preservation;
    let mut checks = Vec::new();
    for id in ["testB1", "testB2", "testB3"] {
        for (order, averaging) in STATIONARY_RULES {
            let mut c = case(id);
            c.config = RunConfig {
                order,
                averaging,
                well_balanced,
                cells: p.cells,
                t_end: p.t_end,
                stop_when_steady: false,
                ..c.config
            };
            // A shock on a face is a one-sided unstable equilibrium of the
            // discrete scheme; whether roundoff excites it is a matter of sign.
            let known = id == "testB3" && order == 3;
            let check = match run_or_fail(&c) {
                Ok(out) => Check::at_most(format!("{id} order {order}"), out.report.errors.unwrap().v, p.max_l1),
                Err(check) => check,
            };
            checks.push(if known { check.known() } else { check });
        }
    }
    CriterionOutcome { number: 1, title: "Burgers well-balanced preservation", tier: Tier::Fast, checks, table: None }
}

/// Standard (non-well-balanced) schemes drift away from the same data.
pub fn non_wb_contrast(th: &Thresholds) -> CriterionOutcome {
    let p = &th.non_wb_contrast;
    let run = |order: u8, averaging: Averaging| {
        let mut c = case("testB1");
        c.config =
            RunConfig { order, averaging, well_balanced: false, t_end: p.t_end, stop_when_steady: false, ..c.config };
        run_or_fail(&c).map(|o| o.report.errors.unwrap().v)
    };
    let checks = vec![
        match run(1, Averaging::Midpoint) {
            Ok(e) => Check::within("testB1 order 1 standard", e, p.order1_min, p.order1_max).known(),
            Err(check) => check,
        },
        match run(3, Averaging::Gauss2) {
            Ok(e) => Check::at_least("testB1 order 3 standard", e, p.order3_min),
            Err(check) => check,
        },
    ];
    CriterionOutcome { number: 2, title: "Burgers standard-scheme contrast", tier: Tier::Fast, checks, table: None }
}

/// Euler well-balanced preservation with both numerical fluxes.
pub fn euler_preservation(th: &Thresholds) -> CriterionOutcome {
    euler_preservation_with(th, true)
}

/// [`euler_preservation`] with the well-balanced switch exposed.
pub fn euler_preservation_with(th: &Thresholds, well_balanced: bool) -> CriterionOutcome {
    let p = &th.euler_preservation;
    let mut checks = Vec::new();
    for id in ["testE1", "testE2", "testE3"] {
        for order in [1u8, 2] {
            for flux in [FluxKind::RoeType, FluxKind::LaxFriedrichs] {
                let mut c = case(id);
                c.config = RunConfig {
                    order,
                    flux,
                    well_balanced,
                    cells: p.cells,
                    t_end: p.t_end,
                    stop_when_steady: false,
                    ..c.config
                };
                let label = format!("{id} order {order} {flux}");
                let known = id == "testE3" && flux == FluxKind::LaxFriedrichs;
                match run_or_fail(&c) {
                    Ok(out) => {
                        let e = out.report.errors.unwrap();
                        let mut v = Check::at_most(format!("{label} v"), e.v, p.max_l1);
                        let mut rho = Check::at_most(format!("{label} rho"), e.rho.unwrap(), p.max_l1);
                        if known {
                            v = v.known();
                            rho = rho.known();
                        }
                        checks.extend([v, rho]);
                    }
                    Err(check) => checks.push(if known { check.known() } else { check }),
                }
            }
        }
    }
    CriterionOutcome { number: 3, title: "Euler well-balanced preservation", tier: Tier::Fast, checks, table: None }
}

/// `C2 = r (r - 2M) rho v / (1 - v^2)`.
fn c2(p: Primitive, r: f64) -> f64 {
    r * (r - 2.0) * p.rho * p.v / (1.0 - p.v * p.v)
}

/// The admissible steady shock jump.
pub fn shock_jump(th: &Thresholds) -> CriterionOutcome {
    let p = &th.shock_jump;
    let minus = Primitive { rho: p.rho_minus, v: p.v_minus };
    let plus = steady_shock_jump(minus, 0.3);
    let r = super::catalog::EULER_SHOCK;
    let residual = (c2(plus, r) - c2(minus, r)).abs() / c2(minus, r).abs();
    let checks = vec![
        Check::at_most("rho_plus relative error", ((plus.rho - p.rho_plus) / p.rho_plus).abs(), p.max_rel_error),
        Check::at_most("v_plus relative error", ((plus.v - p.v_plus) / p.v_plus).abs(), p.max_rel_error),
        Check::at_most("C2 continuity residual", residual, p.max_c2_residual),
    ];
    CriterionOutcome { number: 4, title: "Euler steady-shock jump", tier: Tier::Fast, checks, table: None }
}

/// One row of the Burgers amplitude table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmplitudeRow {
    pub alpha: f64,
    pub integral: f64,
    pub displacement: f64,
    pub steady: bool,
}

/// Runs the Burgers amplitude family to steadiness.
pub fn amplitude_rows(rows: usize, step: f64, t_max: f64) -> Result<Vec<AmplitudeRow>> {
    (0..rows)
        .map(|j| {
            let alpha = j as f64 * step;
            let mut c = test_b8(alpha);
            c.config.t_end = t_max;
            let out = run_case(&c)?;
            Ok(AmplitudeRow {
                alpha,
                integral: out.report.perturbation_integral.unwrap(),
                displacement: out.report.displacement.unwrap(),
                steady: out.report.termination == Termination::Steady,
            })
        })
        .collect()
}

/// Linear dependence of the Burgers shock displacement on the perturbation
/// integral.
pub fn amplitude_family(th: &Thresholds) -> CriterionOutcome {
    let p = &th.amplitude_family;
    let rows = match amplitude_rows(p.rows, p.step, p.t_max) {
        Ok(rows) => rows,
        Err(e) => {
            let checks = vec![Check::new("amplitude family", f64::NAN, format!("completes ({e})"), false)];
            return CriterionOutcome { number: 5, title: "Burgers amplitude family", tier: Tier::Fast, checks, table: None };
        }
    };
    let mut checks = Vec::new();
    for ((&alpha, &integral), &displacement) in p.checked_alphas.iter().zip(&p.integrals).zip(&p.displacements) {
        let row = rows.iter().find(|r| (r.alpha - alpha).abs() < 1e-9).expect("checked amplitudes lie on the grid");
        checks.push(Check::near(format!("alpha {alpha} integral"), row.integral, integral, p.integral_tol));
        checks.push(Check::relative(format!("alpha {alpha} displacement"), row.displacement, displacement, p.displacement_rel_tol));
    }
    let unsteady = rows.iter().filter(|r| !r.steady).count();
    checks.push(Check::at_most("rows not steady", unsteady as f64, 0.0));
    let xs: Vec<f64> = rows.iter().map(|r| r.integral).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.displacement).collect();
    let r2 = linear_fit(&xs, &ys).map_or(f64::NAN, |f| f.r_squared);
    checks.push(Check::at_least("R^2 of linear fit", r2, p.min_r_squared));
    let table = Table {
        columns: vec!["alpha", "perturbation_integral", "displacement"],
        rows: rows.iter().map(|r| vec![r.alpha, r.integral, r.displacement]).collect(),
    };
    CriterionOutcome { number: 5, title: "Burgers amplitude family", tier: Tier::Fast, checks, table: Some(table) }
}

/// Zero-mean perturbations restore the steady shock.
pub fn zero_mean(th: &Thresholds) -> CriterionOutcome {
    let p = &th.zero_mean;
    let mut checks = Vec::new();
    for id in ["testB6SumZero", "testB7SumZero"] {
        let mut c = case(id);
        c.config.cells = p.cells;
        c.config.t_end = p.t_max;
        match run_or_fail(&c) {
            Ok(out) => {
                let grid = c.config.grid().expect("validated");
                let steady = out.report.termination == Termination::Steady;
                checks.push(Check::new(format!("{id} steady"), out.report.t_final, "steady before t_max".into(), steady));
                let r = out.report.shock_locations.last().and_then(|s| s.r).unwrap_or(f64::NAN);
                let offset = (r - p.shock).abs() / grid.dr();
                checks.push(Check::at_most(format!("{id} shock offset in cells"), offset, p.max_offset_cells));
            }
            Err(check) => checks.push(check),
        }
    }
    CriterionOutcome { number: 6, title: "zero-mean perturbations restore the shock", tier: Tier::Fast, checks, table: None }
}

/// Long-time limits of the non-stationary Burgers data.
pub fn long_time(th: &Thresholds) -> CriterionOutcome {
    let p = &th.long_time;
    let mut checks = Vec::new();
    for id in ["testB11", "testB12"] {
        let mut c = case(id);
        c.config.cells = p.cells;
        c.config.t_end = p.relax_t_end;
        c.config.stop_when_steady = false;
        checks.push(match run_or_fail(&c) {
            Ok(out) => Check::at_most(format!("{id} distance to limit"), out.report.errors.unwrap().v, p.max_l1),
            Err(check) => check,
        });
    }
    for id in ["testB9", "testB10"] {
        let mut c = case(id);
        c.config.cells = p.cells;
        c.config.t_end = p.exit_t_max;
        match run_or_fail(&c) {
            Ok(out) => {
                let grid = c.config.grid().expect("validated");
                checks.push(Check::at_most(format!("{id} distance to v = 1"), out.report.errors.unwrap().v, p.max_l1));
                let track: Vec<f64> = out.report.shock_locations.iter().filter_map(|s| s.r).collect();
                let advance = match (track.first(), track.iter().cloned().reduce(f64::max)) {
                    (Some(first), Some(furthest)) => furthest - first,
                    _ => 0.0,
                };
                checks.push(Check::at_least(format!("{id} shock advance"), advance, 10.0 * grid.dr()));
            }
            Err(check) => checks.push(check),
        }
    }
    CriterionOutcome { number: 7, title: "Burgers long-time behaviour", tier: Tier::Fast, checks, table: None }
}

/// Residual of the second-row Roe relation, metric factor dropped.
pub fn roe_relation_residual(pl: Primitive, pr: Primitive, vm: f64, k: f64) -> f64 {
    let k2 = k * k;
    let (cl, cr) = (prim_to_cons(pl, k), prim_to_cons(pr, k));
    let f2 = |p: Primitive| (p.v * p.v + k2) * p.rho / (1.0 - p.v * p.v);
    let d = 1.0 - k2 * vm * vm;
    let lhs = (k2 - vm * vm) / d * (cr.v0 - cl.v0) + 2.0 * (1.0 - k2) * vm / d * (cr.v1 - cl.v1);
    let rhs = f2(pr) - f2(pl);
    (lhs - rhs).abs() / (1.0 + rhs.abs())
}

/// Roe average: strict bracketing, the hand value and the Roe relation.
pub fn roe_properties(th: &Thresholds) -> CriterionOutcome {
    let p = &th.roe;
    let k = 0.3;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let (mut outside, mut worst) = (0usize, 0.0f64);
    let mut drawn = 0;
    while drawn < p.pairs {
        let pl = Primitive { rho: rng.gen_range(0.1..10.0), v: rng.gen_range(-0.95..0.95) };
        let pr = Primitive { rho: rng.gen_range(0.1..10.0), v: rng.gen_range(-0.95..0.95) };
        if (pl.v - pr.v).abs() <= 1e-6 {
            continue;
        }
        drawn += 1;
        let vm = roe_average(pl, pr, k, 1e-12);
        if !(vm > pl.v.min(pr.v) && vm < pl.v.max(pr.v)) {
            outside += 1;
        }
        worst = worst.max(roe_relation_residual(pl, pr, vm, k));
    }
    let hand = roe_average(Primitive { rho: 1.0, v: 0.0 }, Primitive { rho: 1.0, v: 0.5 }, k, 1e-12);
    let checks = vec![
        Check::at_most("pairs outside the open bracket", outside as f64, 0.0),
        Check::near("hand value", hand, 2.0 - 3f64.sqrt(), p.hand_value_tol),
        Check::at_most("worst Roe relation residual", worst, p.max_relation_residual),
    ];
    CriterionOutcome { number: 8, title: "Roe-average properties", tier: Tier::Fast, checks, table: None }
}

/// Euler shock displacement for the rightward amplitude family.
pub fn euler_displacement(th: &Thresholds) -> CriterionOutcome {
    let p = &th.euler_displacement;
    let mut c = test_e7(p.alpha);
    c.config.cells = p.cells;
    c.config.t_end = p.t_end;
    let checks = vec![match run_or_fail(&c) {
        Ok(out) => Check::relative("displacement", out.report.displacement.unwrap(), p.displacement, p.rel_tol),
        Err(check) => check,
    }];
    CriterionOutcome { number: 9, title: "Euler shock displacement", tier: Tier::Slow, checks, table: None }
}

/// The full Euler amplitude family and the final shock position on each
/// mesh of the mesh study. Reported without a verdict.
pub fn euler_amplitude_table(th: &Thresholds) -> Result<(Table, Table)> {
    let p = &th.euler_displacement;
    let run_e7 = |alpha: f64, cells: usize| {
        let mut c = test_e7(alpha);
        c.config.cells = cells;
        c.config.t_end = p.t_end;
        let grid = c.config.grid()?;
        run_case(&c).map(|o| (o, grid))
    };
    let mut family = Table { columns: vec!["alpha", "perturbation_integral", "displacement"], rows: Vec::new() };
    for &alpha in &p.table_alphas {
        let (out, _) = run_e7(alpha, p.cells)?;
        family.rows.push(vec![alpha, out.report.perturbation_integral.unwrap(), out.report.displacement.unwrap()]);
    }
    let mut meshes = Table { columns: vec!["cells", "shock_location", "dr"], rows: Vec::new() };
    for &cells in &p.mesh_study {
        let (out, grid) = run_e7(p.alpha, cells)?;
        let r = out.report.shock_locations.last().and_then(|s| s.r).unwrap_or(f64::NAN);
        meshes.rows.push(vec![cells as f64, r, grid.dr()]);
    }
    Ok((family, meshes))
}

/// Observed convergence orders on smooth data.
pub fn convergence(th: &Thresholds) -> CriterionOutcome {
    let p = &th.convergence;
    let mut checks = Vec::new();
    let studies = p
        .burgers_min_orders
        .iter()
        .enumerate()
        .map(|(i, &m)| (Model::Burgers, i as u8 + 1, m))
        .chain(p.euler_min_orders.iter().enumerate().map(|(i, &m)| (Model::Euler, i as u8 + 1, m)));
    let mut table = Table { columns: vec!["burgers", "order", "cells", "l1_error"], rows: Vec::new() };
    for (model, order, min) in studies {
        match run_convergence(model, order, &p.meshes, p.reference_cells) {
            Ok(rep) => {
                let tag = if model == Model::Burgers { 1.0 } else { 0.0 };
                for (&m, &e) in rep.meshes.iter().zip(&rep.errors) {
                    table.rows.push(vec![tag, order as f64, m as f64, e]);
                }
                let worst = rep.orders.iter().cloned().fold(f64::INFINITY, f64::min);
                checks.push(Check::at_least(format!("{model} order {order} observed order"), worst, min));
            }
            Err(e) => checks.push(Check::new(format!("{model} order {order}"), f64::NAN, format!("completes ({e})"), false)),
        }
    }
    CriterionOutcome { number: 10, title: "observed convergence orders", tier: Tier::Fast, checks, table: Some(table) }
}

/// Classical RK4 integration of the explicit stationary Euler ODEs from
/// `(r0, v0, rho0)` to `r1`.
pub fn integrate_stationary_ode(r0: f64, v0: f64, rho0: f64, r1: f64, steps: usize, k: f64) -> (f64, f64) {
    let k2 = k * k;
    let f = |r: f64, y: [f64; 2]| {
        let [v, rho] = y;
        let d = r * (r - 2.0);
        let a = 2.0 * k2 / (1.0 - k2) * (r - 2.0) - 1.0;
        let common = (1.0 - k2) / d * a / (v * v - k2);
        [v * (1.0 - v * v) * common, -2.0 * (r - 1.0) / d * rho - rho * (1.0 + v * v) * common]
    };
    let h = (r1 - r0) / steps as f64;
    let mut y = [v0, rho0];
    let add = |y: [f64; 2], k: [f64; 2], s: f64| [y[0] + s * k[0], y[1] + s * k[1]];
    for j in 0..steps {
        let r = r0 + j as f64 * h;
        let k1 = f(r, y);
        let k2_ = f(r + 0.5 * h, add(y, k1, 0.5 * h));
        let k3 = f(r + 0.5 * h, add(y, k2_, 0.5 * h));
        let k4 = f(r + h, add(y, k3, h));
        y = [
            y[0] + h / 6.0 * (k1[0] + 2.0 * k2_[0] + 2.0 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2.0 * k2_[1] + 2.0 * k3[1] + k4[1]),
        ];
    }
    (y[0], y[1])
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let inner: f64 = (1..panels).map(|j| if j % 2 == 1 { 4.0 } else { 2.0 } * f(a + j as f64 * h)).sum();
    h / 3.0 * (f(a) + inner + f(b))
}

/// Closed-form stationary evaluations against independent numerical
/// oracles.
pub fn oracles(th: &Thresholds) -> CriterionOutcome {
    let p = &th.oracles;
    let k = 0.3;
    let InitialData::Euler(profile) = stationary_e(1.0, 0.6, 10.0, k).1 else { unreachable!() };
    let mut worst_ode = 0.0f64;
    for &r in &[9.0, 8.0, 6.0, 4.0, 3.0, 2.5] {
        let (v, rho) = integrate_stationary_ode(10.0, 0.6, 1.0, r, 20_000, k);
        let q = profile(r);
        worst_ode = worst_ode.max((q.v - v).abs()).max((q.rho - rho).abs() / rho.max(1.0));
    }
    let mut worst_primitive = 0.0f64;
    for &(x, a, b) in &[(1.0, 2.0, 2.0078125), (0.25, 2.0, 4.0), (0.25, 3.1, 3.2), (1.8, 2.2, 2.4), (0.7, 2.5, 9.0)] {
        let quad = simpson(|r: f64| (1.0 - x * (1.0 - 2.0 / r)).sqrt(), a, b, 10_000);
        let exact = primitive(x, b, 1.0) - primitive(x, a, 1.0);
        worst_primitive = worst_primitive.max((quad - exact).abs());
    }
    let checks = vec![
        Check::at_most("stationary Euler profile vs RK4", worst_ode, p.ode_tol),
        Check::at_most("exact-average primitive vs Simpson", worst_primitive, p.primitive_tol),
    ];
    CriterionOutcome { number: 11, title: "oracle cross-checks", tier: Tier::Fast, checks, table: None }
}

/// Evaluates every criterion whose tier is at most `tier`.
pub fn evaluate(tier: Tier, th: &Thresholds) -> Vec<CriterionOutcome> {
    evaluate_with(tier, th, true)
}

/// [`evaluate`], running the preservation criteria with `well_balanced`.
pub fn evaluate_with(tier: Tier, th: &Thresholds, well_balanced: bool) -> Vec<CriterionOutcome> {
    let all: [(Tier, &dyn Fn(&Thresholds) -> CriterionOutcome); 11] = [
        (Tier::Fast, &|th| burgers_preservation_with(th, well_balanced)),
        (Tier::Fast, &non_wb_contrast),
        (Tier::Fast, &|th| euler_preservation_with(th, well_balanced)),
        (Tier::Fast, &shock_jump),
        (Tier::Fast, &amplitude_family),
        (Tier::Fast, &zero_mean),
        (Tier::Fast, &long_time),
        (Tier::Fast, &roe_properties),
        (Tier::Slow, &euler_displacement),
        (Tier::Fast, &convergence),
        (Tier::Fast, &oracles),
    ];
    all.iter().filter(|(t, _)| *t <= tier).map(|(_, f)| f(th)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_thresholds_parse() {
        let th = Thresholds::bundled();
        assert_eq!(th.amplitude_family.checked_alphas.len(), th.amplitude_family.integrals.len());
        assert_eq!(th.amplitude_family.checked_alphas.len(), th.amplitude_family.displacements.len());
        assert!(Thresholds::from_toml_str("[roe]\npairs = 1").is_err());
    }

    #[test]
    fn verdicts() {
        let pass = Check::at_most("a", 1.0, 2.0);
        let fail = Check::at_most("b", 3.0, 2.0);
        let mk = |checks| CriterionOutcome { number: 1, title: "t", tier: Tier::Fast, checks, table: None };
        assert_eq!(mk(vec![pass.clone()]).verdict(), "PASS");
        assert_eq!(mk(vec![pass.clone(), fail.clone().known()]).verdict(), "FAIL (known)");
        assert_eq!(mk(vec![pass, fail]).verdict(), "FAIL");
    }

    #[test]
    fn quick_criteria_pass() {
        let th = Thresholds::bundled();
        assert!(shock_jump(&th).passed());
        assert!(roe_properties(&th).passed());
        assert!(oracles(&th).passed());
    }
}
