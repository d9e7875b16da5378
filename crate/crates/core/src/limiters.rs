//! Slope limiters and nonlinear reconstructions acting on three cell values.
//!
//! Polynomials are written in the scaled coordinate `xi = (r - r_i) / dr`, so
//! the cell spans `xi` in `[-1/2, 1/2]`.

/// Three-argument minmod: the smallest-magnitude argument when all three share
/// a strict sign, zero otherwise.
pub fn minmod3(a: f64, b: f64, c: f64) -> f64 {
    if a > 0.0 && b > 0.0 && c > 0.0 {
        a.min(b).min(c)
    } else if a < 0.0 && b < 0.0 && c < 0.0 {
        a.max(b).max(c)
    } else {
        0.0
    }
}

/// Limited MUSCL slope per unit of `xi` from three consecutive cell values.
pub fn minmod_slope(wm: f64, wc: f64, wp: f64) -> f64 {
    minmod3(wp - wc, 0.5 * (wp - wm), wc - wm)
}

/// Quadratic `a + b xi + c xi^2` in the scaled cell coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadratic {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Quadratic {
    pub fn linear(value: f64, slope: f64) -> Self {
        Self { a: value, b: slope, c: 0.0 }
    }

    pub fn eval(&self, xi: f64) -> f64 {
        self.a + xi * (self.b + xi * self.c)
    }

    /// Mean over `xi` in `[-1/2, 1/2]`.
    pub fn cell_mean(&self) -> f64 {
        self.a + self.c / 12.0
    }
}

const CWENO_EPS: f64 = 1e-6;
const CWENO_POWER: i32 = 2;
const CWENO_LINEAR: [f64; 3] = [0.25, 0.5, 0.25];

/// Third-order CWENO reconstruction from the cell means `wm, wc, wp`.
///
/// The optimal parabola is blended with the two one-sided linear polynomials
/// using linear weights `(1/4, 1/2, 1/4)` and Jiang-Shu smoothness
/// indicators. The result preserves the central cell mean.
pub fn cweno3(wm: f64, wc: f64, wp: f64) -> Quadratic {
    let d2 = wp - 2.0 * wc + wm;
    // optimal parabola P_opt with the three cell means
    let opt = Quadratic { a: wc - d2 / 24.0, b: 0.5 * (wp - wm), c: 0.5 * d2 };
    let left = Quadratic::linear(wc, wc - wm);
    let right = Quadratic::linear(wc, wp - wc);
    // P_0 = (P_opt - d_L P_L - d_R P_R) / d_0
    let [dl, d0, dr] = CWENO_LINEAR;
    let p0 = Quadratic {
        a: (opt.a - dl * left.a - dr * right.a) / d0,
        b: (opt.b - dl * left.b - dr * right.b) / d0,
        c: opt.c / d0,
    };
    let is_l = (wc - wm).powi(2);
    let is_r = (wp - wc).powi(2);
    let is_0 = p0.b * p0.b + 13.0 / 3.0 * p0.c * p0.c;
    let alpha = |d: f64, is: f64| d / (CWENO_EPS + is).powi(CWENO_POWER);
    let (al, a0, ar) = (alpha(dl, is_l), alpha(d0, is_0), alpha(dr, is_r));
    let sum = al + a0 + ar;
    let (wl, w0, wr) = (al / sum, a0 / sum, ar / sum);
    Quadratic {
        a: wl * left.a + w0 * p0.a + wr * right.a,
        b: wl * left.b + w0 * p0.b + wr * right.b,
        c: w0 * p0.c,
    }
}
