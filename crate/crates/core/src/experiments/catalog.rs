//! Named test cases: initial data, perturbations, reference solutions and
//! default run configurations.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use crate::burgers::{stationary_cell_abs, BurgersStationary};
use crate::config::{FluxKind, Model, RightBoundary, RunConfig};
use crate::driver::InitialData;
use crate::euler::{
    critical_stationary, stationary_constants, steady_shock_jump, EulerStationary, Primitive, Regime,
};
use crate::grid::Cell;

/// Coefficient of every Gaussian envelope `exp(-200 (r - c)^2)`.
pub const ENVELOPE: f64 = 200.0;
/// Location of the unperturbed Burgers steady shock.
pub const BURGERS_SHOCK: f64 = 3.0;
/// Location of the unperturbed Euler steady shock.
pub const EULER_SHOCK: f64 = 6.0;
/// Panels of the composite Simpson rule used for perturbation integrals.
pub const SIMPSON_PANELS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    V,
    Rho,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Shape {
    /// `exp(-200 (r - center)^2)`.
    Gaussian { center: f64 },
    /// `cos(omega r + phase) exp(-200 (r - center)^2)`.
    ModulatedCosine { center: f64, omega: f64, phase: f64 },
}

/// Compactly supported perturbation added to one component of a datum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerturbationSpec {
    pub shape: Shape,
    pub amplitude: f64,
    /// Open support interval.
    pub support: (f64, f64),
    pub component: Component,
}

impl PerturbationSpec {
    pub fn gaussian(amplitude: f64, center: f64, support: (f64, f64)) -> Self {
        Self { shape: Shape::Gaussian { center }, amplitude, support, component: Component::V }
    }

    pub fn modulated(amplitude: f64, center: f64, omega: f64, phase: f64, support: (f64, f64)) -> Self {
        Self { shape: Shape::ModulatedCosine { center, omega, phase }, amplitude, support, component: Component::V }
    }

    pub fn eval(&self, r: f64) -> f64 {
        if r <= self.support.0 || r >= self.support.1 {
            return 0.0;
        }
        let envelope = |c: f64| (-ENVELOPE * (r - c) * (r - c)).exp();
        self.amplitude
            * match self.shape {
                Shape::Gaussian { center } => envelope(center),
                Shape::ModulatedCosine { center, omega, phase } => (omega * r + phase).cos() * envelope(center),
            }
    }

    /// Composite Simpson approximation of the integral over the support.
    pub fn integral(&self) -> f64 {
        let (a, b) = self.support;
        let n = SIMPSON_PANELS;
        let h = (b - a) / n as f64;
        let inner: f64 = (1..n).map(|j| if j % 2 == 1 { 4.0 } else { 2.0 } * self.eval(a + j as f64 * h)).sum();
        h / 3.0 * (self.eval(a) + inner + self.eval(b))
    }
}

/// What the reference profile of a case stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceKind {
    /// The initial datum is stationary and must be preserved.
    Preserved,
    /// Unperturbed stationary solution; the distance to it measures the
    /// displacement of the steady state.
    Unperturbed,
    /// Long-time limit of the evolution.
    Limit,
}

#[derive(Debug, Clone)]
pub struct Reference {
    pub kind: ReferenceKind,
    pub datum: InitialData,
    /// Euler limits determined in `v` only.
    pub velocity_only: bool,
}

/// Default run length of a case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tier {
    Fast,
    Full,
    Slow,
}

/// One named test problem.
#[derive(Debug, Clone)]
pub struct TestCase {
    pub id: String,
    pub model: Model,
    pub description: &'static str,
    pub config: RunConfig,
    pub data: InitialData,
    pub perturbation: Option<PerturbationSpec>,
    pub reference: Option<Reference>,
    pub tier: Tier,
}

/// Every catalog id, in catalog order.
pub const IDS: [&str; 24] = [
    "testB1",
    "testB2",
    "testB3",
    "testB4",
    "testB5",
    "testB6",
    "testB7",
    "testB6SumZero",
    "testB7SumZero",
    "testB6+7",
    "testB8",
    "testB9",
    "testB10",
    "testB11",
    "testB12",
    "testE1",
    "testE2",
    "testE3",
    "testE4",
    "testE5",
    "testE6",
    "testE6bis",
    "testE7",
    "testE8",
];

/// Default amplitude of the Burgers amplitude family.
pub const DEFAULT_B8_ALPHA: f64 = 1.0;
/// Default amplitude of the Euler rightward-displacement family.
pub const DEFAULT_E7_ALPHA: f64 = 0.05;
/// Default amplitude of the Euler leftward-displacement family.
pub const DEFAULT_E8_BETA: f64 = -0.05;

pub fn catalog() -> Vec<TestCase> {
    IDS.iter().map(|id| find(id).expect("every listed id is defined")).collect()
}

pub fn ids() -> &'static [&'static str] {
    &IDS
}

/// Looks a case up by id.
pub fn find(id: &str) -> Option<TestCase> {
    Some(match id {
        "testB1" => stationary_burgers_case(id, "positive stationary solution with K = 1/2", 1.0),
        "testB2" => stationary_burgers_case(id, "negative stationary solution with K = 1/2", -1.0),
        "testB3" => {
            let mut c = burgers_case(id, "steady shock at r = 3", steady_shock_b(), Tier::Fast);
            c.config.right_bc = RightBoundary::StationaryExtension;
            c.reference = Some(preserved(steady_shock_b()));
            c
        }
        "testB4" => burgers_case(
            id,
            "right-moving shock between two positive stationary branches",
            InitialData::burgers(|r| if r > 2.0 && r < 2.5 { (0.5 + 1.0 / r).sqrt() } else { (2.0 / r).sqrt() }),
            Tier::Fast,
        )
        .with_t_end(4.0),
        "testB5" => burgers_case(
            id,
            "left-moving shock between two negative stationary branches",
            InitialData::burgers(|r| {
                if r > 2.0 && r < 2.5 {
                    -(2.0 / r).sqrt()
                } else {
                    -(0.75 + 0.5 / r).sqrt()
                }
            }),
            Tier::Fast,
        )
        .with_t_end(4.0),
        "testB6" => perturbed_shock_b(id, "steady shock with a left Gaussian perturbation", vec![p_left()], 256),
        "testB7" => perturbed_shock_b(id, "steady shock with a right Gaussian perturbation", vec![p_right()], 2000),
        "testB6SumZero" => {
            perturbed_shock_b(id, "steady shock with a zero-mean left perturbation", vec![p_left_zero_mean()], 2000)
        }
        "testB7SumZero" => {
            perturbed_shock_b(id, "steady shock with a zero-mean right perturbation", vec![p_right_zero_mean()], 2000)
        }
        "testB6+7" => {
            perturbed_shock_b(id, "steady shock with left and right perturbations", vec![p_left(), p_right()], 2000)
        }
        "testB8" => test_b8(DEFAULT_B8_ALPHA),
        "testB9" => long_time_b(id, 1.0, 30.0),
        "testB10" => long_time_b(id, 1.0, 20.0),
        "testB11" => long_time_b(id, 0.8, 30.0),
        "testB12" => long_time_b(id, 0.8, 20.0),
        "testE1" => stationary_euler_case(id, "supersonic stationary solution with v > 0", 1.0, 0.6),
        "testE2" => stationary_euler_case(id, "supersonic stationary solution with v < 0", 1.0, -0.8),
        "testE3" => {
            let mut c = euler_case(id, "steady shock at r = 6", steady_shock_e(4.0), Tier::Fast);
            c.reference = Some(preserved(steady_shock_e(4.0)));
            c
        }
        "testE4" => {
            let base = smooth_supersonic_e(1.0, 0.9, 10.0);
            let p = PerturbationSpec::gaussian(-0.01, 6.0, (5.0, 7.0));
            let mut c = euler_case(id, "perturbed smooth supersonic solution", perturbed_e(base.clone(), p), Tier::Fast);
            c.perturbation = Some(p);
            c.reference = Some(Reference { kind: ReferenceKind::Limit, datum: base, velocity_only: false });
            c
        }
        "testE5" => {
            let p = PerturbationSpec::gaussian(0.2, 4.0, (3.0, 5.0));
            shifted_shock_e(id, "steady shock with a left perturbation", 4.0, p, Tier::Full)
        }
        "testE6" => right_perturbed_e(id, 4.0),
        "testE6bis" => right_perturbed_e(id, 5.0),
        "testE7" => test_e7(DEFAULT_E7_ALPHA),
        "testE8" => test_e8(DEFAULT_E8_BETA),
        _ => return None,
    })
}

/// Burgers steady shock plus `alpha cos(5 pi r - 12 pi) exp(-200 (r - 2.8)^2)`
/// on `(2.7, 2.9)`.
pub fn test_b8(alpha: f64) -> TestCase {
    let p = delta_b(alpha);
    let mut c = perturbed_shock_b("testB8", "steady shock with a nonzero-mean perturbation", vec![p], 256);
    c.perturbation = Some(p);
    c
}

/// The perturbation of [`test_b8`].
pub fn delta_b(alpha: f64) -> PerturbationSpec {
    PerturbationSpec::modulated(alpha, 2.8, 5.0 * PI, -12.0 * PI, (2.7, 2.9))
}

/// Euler steady shock plus `alpha exp(-200 (r - 4)^2)` in `v` on `(3, 5)`.
pub fn test_e7(alpha: f64) -> TestCase {
    let p = PerturbationSpec::gaussian(alpha, 4.0, (3.0, 5.0));
    let mut c = shifted_shock_e("testE7", "steady shock pushed to the right", 4.0, p, Tier::Slow);
    c.config.cells = 2000;
    c.config.t_end = 2000.0;
    c
}

/// Euler steady shock plus `beta exp(-200 (r - 8)^2)` in `v` on `(7, 8)`.
pub fn test_e8(beta: f64) -> TestCase {
    let p = PerturbationSpec::gaussian(beta, 8.0, (7.0, 8.0));
    let mut c = shifted_shock_e("testE8", "steady shock pushed to the left", 4.0, p, Tier::Slow);
    c.config.cells = 2000;
    c.config.t_end = 2000.0;
    c
}

impl TestCase {
    fn with_t_end(mut self, t_end: f64) -> Self {
        self.config.t_end = t_end;
        self
    }
}

fn preserved(datum: InitialData) -> Reference {
    Reference { kind: ReferenceKind::Preserved, datum, velocity_only: false }
}

fn burgers_case(id: &str, description: &'static str, data: InitialData, tier: Tier) -> TestCase {
    TestCase {
        id: id.to_string(),
        model: Model::Burgers,
        description,
        config: RunConfig::burgers(),
        data,
        perturbation: None,
        reference: None,
        tier,
    }
}

fn euler_case(id: &str, description: &'static str, data: InitialData, tier: Tier) -> TestCase {
    TestCase {
        id: id.to_string(),
        model: Model::Euler,
        description,
        config: RunConfig { right_bc: RightBoundary::StationaryExtension, ..RunConfig::euler() },
        data,
        perturbation: None,
        reference: None,
        tier,
    }
}

/// The `K = 1/2` stationary Burgers solution on one branch, with exact cell
/// means.
pub fn stationary_b(branch: f64) -> InitialData {
    let s = BurgersStationary::new(0.25, branch, 1.0);
    InitialData::Burgers {
        profile: Arc::new(move |r| s.branch * s.abs_at(r)),
        cell_mean: Some(Arc::new(move |c: &Cell| {
            Some(s.branch * stationary_cell_abs(&s, c, crate::config::Averaging::Exact))
        })),
    }
}

/// The Burgers steady shock: positive `K = 1/2` branch left of `r = 3`,
/// negative branch right of it.
pub fn steady_shock_b() -> InitialData {
    let s = BurgersStationary::new(0.25, 1.0, 1.0);
    InitialData::Burgers {
        profile: Arc::new(move |r| if r < BURGERS_SHOCK { 1.0 } else { -1.0 } * s.abs_at(r)),
        cell_mean: Some(Arc::new(move |c: &Cell| {
            let sign = if c.right <= BURGERS_SHOCK {
                1.0
            } else if c.left >= BURGERS_SHOCK {
                -1.0
            } else {
                return None;
            };
            Some(sign * stationary_cell_abs(&s, c, crate::config::Averaging::Exact))
        })),
    }
}

fn stationary_burgers_case(id: &str, description: &'static str, branch: f64) -> TestCase {
    let mut c = burgers_case(id, description, stationary_b(branch), Tier::Fast);
    c.config.right_bc = RightBoundary::StationaryExtension;
    c.reference = Some(preserved(stationary_b(branch)));
    c
}

fn p_left() -> PerturbationSpec {
    PerturbationSpec::gaussian(-0.2, 2.5, (2.2, 2.8))
}

fn p_right() -> PerturbationSpec {
    PerturbationSpec::gaussian(0.2, 3.5, (3.2, 3.8))
}

fn p_left_zero_mean() -> PerturbationSpec {
    PerturbationSpec::modulated(0.1, 2.8, 10.0 * PI, -25.5 * PI, (2.7, 2.9))
}

fn p_right_zero_mean() -> PerturbationSpec {
    PerturbationSpec::modulated(0.1, 3.2, 10.0 * PI, -29.5 * PI, (3.1, 3.3))
}

fn perturbed_shock_b(id: &str, description: &'static str, ps: Vec<PerturbationSpec>, cells: usize) -> TestCase {
    let base = steady_shock_b();
    let InitialData::Burgers { profile, .. } = base.clone() else { unreachable!() };
    let single = (ps.len() == 1).then(|| ps[0]);
    let data = InitialData::burgers(move |r| profile(r) + ps.iter().map(|p| p.eval(r)).sum::<f64>());
    let mut c = burgers_case(id, description, data, Tier::Full);
    c.config.cells = cells;
    c.config.right_bc = RightBoundary::StationaryExtension;
    c.perturbation = single;
    c.reference = Some(Reference { kind: ReferenceKind::Unperturbed, datum: base, velocity_only: false });
    c
}

/// `cos(omega r) exp(-1/(r - 2.5)^2)`, continuous through `r = 2.5`.
fn oscillation(omega: f64, r: f64) -> f64 {
    let d = r - 2.5;
    if d == 0.0 {
        0.0
    } else {
        (omega * r).cos() * (-1.0 / (d * d)).exp()
    }
}

/// Long-time limit on `[2, 4]` of the cases started from `v(2) = left`.
///
/// With `v(2) = 1` the constant state `1` takes over the domain. Otherwise
/// the negative stationary solution through the inflow value `a` at the
/// right boundary is reached, with the outflow value `0` replacing a
/// positive `a` at `r = 4`. The inflow value is the datum at `r_b`.
pub fn long_time_limit_b(left: f64, omega: f64, r_b: f64) -> InitialData {
    if left == 1.0 {
        return InitialData::burgers(|_| 1.0);
    }
    let a = oscillation(omega, r_b);
    let ksq = if a >= 0.0 { 1.0 / (1.0 - 2.0 / 4.0) } else { (1.0 - a * a) / (1.0 - 2.0 / r_b) };
    let s = BurgersStationary::new(ksq, -1.0, 1.0);
    InitialData::burgers(move |r| -s.abs_at(r))
}

fn long_time_b(id: &str, left: f64, omega: f64) -> TestCase {
    let data = InitialData::burgers(move |r| if r > 2.0 && r < 2.1 { left } else { oscillation(omega, r) });
    let mut c = burgers_case(id, "non-stationary datum relaxing to its long-time limit", data, Tier::Full);
    c.config.t_end = if left == 1.0 { 200.0 } else { 20.0 };
    c.config.right_bc = RightBoundary::StationaryExtension;
    c.reference = Some(Reference {
        kind: ReferenceKind::Limit,
        datum: long_time_limit_b(left, omega, c.config.r_right),
        velocity_only: false,
    });
    c
}

/// Stationary Euler solution through `(rho, v)` at `r_ref`, on the regime of
/// that state.
pub fn stationary_e(rho: f64, v: f64, r_ref: f64, k: f64) -> (EulerStationary, InitialData) {
    let s = stationary_constants(Primitive { rho, v }, r_ref, 1.0, k, 0.0)
        .expect("catalog reference states are valid");
    let regime = s.regime;
    let data = InitialData::euler(move |r| {
        s.eval_on(r, regime, 1.0, k, None).expect("catalog stationary profiles cover the domain")
    });
    (s, data)
}

fn smooth_supersonic_e(rho: f64, v: f64, r_ref: f64) -> InitialData {
    stationary_e(rho, v, r_ref, 0.3).1
}

fn stationary_euler_case(id: &str, description: &'static str, rho: f64, v: f64) -> TestCase {
    let data = smooth_supersonic_e(rho, v, 10.0);
    let mut c = euler_case(id, description, data.clone(), Tier::Fast);
    c.reference = Some(preserved(data));
    c
}

/// Euler steady shock at `r = 6` with supersonic state `(rho_minus, 0.6)`
/// on the left and its admissible jump on the right.
pub fn steady_shock_e(rho_minus: f64) -> InitialData {
    let k = 0.3;
    let minus = Primitive { rho: rho_minus, v: 0.6 };
    let plus = steady_shock_jump(minus, k);
    let (left, _) = stationary_e(minus.rho, minus.v, EULER_SHOCK, k);
    let (right, _) = stationary_e(plus.rho, plus.v, EULER_SHOCK, k);
    debug_assert_eq!(right.regime, Regime::Subsonic);
    InitialData::euler(move |r| {
        let (s, regime) = if r <= EULER_SHOCK { (left, left.regime) } else { (right, right.regime) };
        s.eval_on(r, regime, 1.0, k, None).expect("steady shock branches cover the domain")
    })
}

fn perturbed_e(base: InitialData, p: PerturbationSpec) -> InitialData {
    let InitialData::Euler(profile) = base else { unreachable!() };
    InitialData::euler(move |r| {
        let mut q = profile(r);
        match p.component {
            Component::V => q.v += p.eval(r),
            Component::Rho => q.rho += p.eval(r),
        }
        q
    })
}

fn shifted_shock_e(id: &str, description: &'static str, rho_minus: f64, p: PerturbationSpec, tier: Tier) -> TestCase {
    let base = steady_shock_e(rho_minus);
    let mut c = euler_case(id, description, perturbed_e(base.clone(), p), tier);
    c.config.flux = FluxKind::RoeType;
    c.perturbation = Some(p);
    c.reference = Some(Reference { kind: ReferenceKind::Unperturbed, datum: base, velocity_only: false });
    c
}

/// Transonic stationary profile with `v(r_c) = -k`: subsonic inside the
/// critical radius, supersonic outside. Only `v` is determined.
pub fn transonic_limit_e() -> InitialData {
    let k = 0.3;
    let t = critical_stationary(-1.0, crate::euler::critical_radius(1.0, k), 1.0, 1.0, k)
        .expect("the critical profile exists");
    InitialData::euler(move |r| t.eval(r, 1.0, k).expect("the critical profile covers the domain"))
}

fn right_perturbed_e(id: &str, rho_minus: f64) -> TestCase {
    let p = PerturbationSpec::gaussian(-0.05, 8.0, (7.0, 9.0));
    let mut c = shifted_shock_e(id, "steady shock with a right perturbation", rho_minus, p, Tier::Slow);
    c.config.cells = 2000;
    c.config.t_end = 2000.0;
    c.reference = Some(Reference { kind: ReferenceKind::Limit, datum: transonic_limit_e(), velocity_only: true });
    c
}
