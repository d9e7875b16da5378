//! Smooth stationary solutions, given implicitly by the invariants
//! `C1 = g(v) r^p / (1 - 2M/r)` and `C2 = r (r - 2M) rho v / (1 - v^2)`
//! with `g(v) = sign(v) (1 - v^2) |v|^e`, `e = 2k^2/(1-k^2)`, `p = 2e`.

use super::{lapse, regime_of, Primitive, Regime, SONIC_BAND};
use crate::roots::{solve_bracketed, Bracket};

const MAX_ITER: usize = 200;

#[inline]
fn g_exponent(k: f64) -> f64 {
    2.0 * k * k / (1.0 - k * k)
}

pub fn g_of_v(v: f64, k: f64) -> f64 {
    if v == 0.0 {
        return 0.0;
    }
    v.signum() * (1.0 - v * v) * v.abs().powf(g_exponent(k))
}

/// Maximum of `g` over `[-1, 1]`, attained at `v = k`.
pub fn g_max(k: f64) -> f64 {
    g_of_v(k, k)
}

/// Radius where smooth stationary velocities attain their extremum.
pub fn critical_radius(mass: f64, k: f64) -> f64 {
    mass * (1.0 - k * k) / (2.0 * k * k) + 2.0 * mass
}

/// Solves `g(v) = ka` on the requested branch.
pub fn solve_g(ka: f64, regime: Regime, k: f64) -> Option<f64> {
    solve_g_near(ka, regime, k, None)
}

/// As [`solve_g`], starting Newton iterations from `guess` when it lies in
/// the branch bracket. `Regime::Sonic` is treated as subsonic.
pub fn solve_g_near(ka: f64, regime: Regime, k: f64, guess: Option<f64>) -> Option<f64> {
    let gk = g_max(k);
    let a = ka.abs();
    let sign = if ka < 0.0 { -1.0 } else { 1.0 };
    if !a.is_finite() || a > gk * (1.0 + SONIC_BAND) {
        return None;
    }
    if a >= gk * (1.0 - SONIC_BAND) {
        return Some(sign * k);
    }
    let supersonic = regime == Regime::Supersonic;
    if a == 0.0 {
        return Some(if supersonic { sign } else { 0.0 });
    }
    let e = g_exponent(k);
    let fd = |v: f64| {
        let pw = v.powf(e);
        ((1.0 - v * v) * pw - a, pw * (e * (1.0 - v * v) / v - 2.0 * v))
    };
    let bracket = if supersonic {
        Bracket { lo: k, hi: 1.0, f_lo: gk - a, f_hi: -a }
    } else {
        Bracket { lo: 0.0, hi: k, f_lo: -a, f_hi: gk - a }
    };
    let guess = guess.map_or(f64::NAN, f64::abs);
    solve_bracketed(fd, bracket, guess, 0.0, MAX_ITER).map(|v| sign * v)
}

/// Invariant pair of a smooth stationary solution with its branch tag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerStationary {
    pub c1: f64,
    pub c2: f64,
    pub regime: Regime,
}

impl EulerStationary {
    /// `K_r = (1 - 2M/r) r^(-p) C1`, the value `g(v(r))` must take.
    pub fn ka(&self, r: f64, mass: f64, k: f64) -> f64 {
        lapse(r, mass) * r.powf(-2.0 * g_exponent(k)) * self.c1
    }

    /// Whether the profile is defined at `r`.
    pub fn contains(&self, r: f64, mass: f64, k: f64) -> bool {
        self.ka(r, mass, k).abs() <= g_max(k) * (1.0 + SONIC_BAND)
    }

    /// Profile value at `r` on the stored branch.
    pub fn eval(&self, r: f64, mass: f64, k: f64) -> Option<Primitive> {
        self.eval_on(r, self.regime, mass, k, None)
    }

    /// Profile value at `r` on an explicit branch.
    pub fn eval_on(&self, r: f64, regime: Regime, mass: f64, k: f64, guess: Option<f64>) -> Option<Primitive> {
        let v = solve_g_near(self.ka(r, mass, k), regime, k, guess)?;
        self.with_velocity(v, r, mass)
    }

    fn with_velocity(&self, v: f64, r: f64, mass: f64) -> Option<Primitive> {
        if v == 0.0 || v.abs() >= 1.0 {
            return None;
        }
        let rho = self.c2 * (1.0 - v * v) / (v * r * (r - 2.0 * mass));
        (rho > 0.0 && rho.is_finite()).then_some(Primitive { rho, v })
    }
}

/// Invariants through `p` at radius `r`, or `None` when `|v| <= v_min`.
pub fn stationary_constants(p: Primitive, r: f64, mass: f64, k: f64, v_min: f64) -> Option<EulerStationary> {
    if p.v.abs() <= v_min {
        return None;
    }
    Some(EulerStationary {
        c1: g_of_v(p.v, k) * r.powf(2.0 * g_exponent(k)) / lapse(r, mass),
        c2: r * (r - 2.0 * mass) * p.rho * p.v / (1.0 - p.v * p.v),
        regime: regime_of(p, k),
    })
}

/// Subsonic state on the other side of a standing shock from the
/// supersonic state `p_minus`.
pub fn steady_shock_jump(p_minus: Primitive, k: f64) -> Primitive {
    let k2 = k * k;
    let v = p_minus.v;
    Primitive { rho: p_minus.rho * (v * v - k2 * k2) / (k2 * (1.0 - v * v)), v: k2 / v }
}

/// Smooth transonic stationary solution through `v(r_c) = side * k`:
/// subsonic for `r <= r_c`, supersonic beyond.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transonic {
    pub profile: EulerStationary,
    pub r_c: f64,
}

impl Transonic {
    pub fn regime_at(&self, r: f64) -> Regime {
        if r <= self.r_c {
            Regime::Subsonic
        } else {
            Regime::Supersonic
        }
    }

    pub fn eval(&self, r: f64, mass: f64, k: f64) -> Option<Primitive> {
        self.profile.eval_on(r, self.regime_at(r), mass, k, None)
    }
}

/// Transonic profile with direction `side` (sign of `v`) and density
/// `rho_ref` at `r_ref`.
pub fn critical_stationary(side: f64, r_ref: f64, rho_ref: f64, mass: f64, k: f64) -> Option<Transonic> {
    let r_c = critical_radius(mass, k);
    let c1 = g_of_v(side.signum() * k, k) * r_c.powf(2.0 * g_exponent(k)) / lapse(r_c, mass);
    let mut t = Transonic { profile: EulerStationary { c1, c2: 0.0, regime: Regime::Sonic }, r_c };
    let v = solve_g(t.profile.ka(r_ref, mass, k), t.regime_at(r_ref), k)?;
    t.profile.c2 = r_ref * (r_ref - 2.0 * mass) * rho_ref * v / (1.0 - v * v);
    Some(t)
}
