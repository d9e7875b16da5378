//! Bracketed scalar root finding for the per-cell stationary fits.

/// Root of a strictly monotone `f` on `[lo, hi]`, where `f(lo)` and `f(hi)`
/// have opposite signs (or one is zero).
///
/// Newton steps from `guess` are taken whenever they stay inside the current
/// bracket; otherwise the bracket is bisected. When `df` is `None` a secant
/// slope through the last two iterates replaces the derivative. Iteration
/// runs until the step or the bracket reaches the rounding level of the
/// iterate; if `max_iter` is exhausted first, the iterate is accepted only
/// when its residual is within `tol`.
pub fn solve_monotone(
    f: impl Fn(f64) -> f64,
    df: Option<&dyn Fn(f64) -> f64>,
    lo: f64,
    hi: f64,
    guess: f64,
    tol: f64,
    max_iter: usize,
) -> Option<f64> {
    let (f_lo, f_hi) = (f(lo), f(hi));
    let fd = |x: f64| (f(x), df.map_or(f64::NAN, |d| d(x)));
    solve_bracketed(fd, Bracket { lo, hi, f_lo, f_hi }, guess, tol, max_iter)
}

/// Interval with the function values at its ends.
#[derive(Debug, Clone, Copy)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

/// Same iteration as [`solve_monotone`] with the end values already known.
///
/// `fd` returns the residual and its derivative together; a NaN derivative
/// selects the secant slope.
pub fn solve_bracketed(
    fd: impl Fn(f64) -> (f64, f64),
    bracket: Bracket,
    guess: f64,
    tol: f64,
    max_iter: usize,
) -> Option<f64> {
    let Bracket { mut lo, mut hi, mut f_lo, mut f_hi } = bracket;
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_hi == 0.0 {
        return Some(hi);
    }
    if f_lo.signum() == f_hi.signum() || !f_lo.is_finite() || !f_hi.is_finite() {
        return None;
    }
    let mut x = if guess > lo && guess < hi { guess } else { 0.5 * (lo + hi) };
    let mut prev: Option<(f64, f64)> = None;
    let mut width_two_back = [hi - lo; 2];
    let mut last_f = f64::INFINITY;
    for it in 0..max_iter {
        let (fx, dfx) = fd(x);
        if !fx.is_finite() {
            return None;
        }
        last_f = fx;
        if fx == 0.0 {
            return Some(x);
        }
        if fx.signum() == f_lo.signum() {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
            f_hi = fx;
        }
        let slope = match prev {
            _ if !dfx.is_nan() => dfx,
            Some((xp, fp)) if xp != x => (fx - fp) / (x - xp),
            _ => (f_hi - f_lo) / (hi - lo),
        };
        prev = Some((x, fx));
        // bisect when the open-method steps stop halving the bracket
        let stalled = it >= 2 && hi - lo > 0.5 * width_two_back[it % 2];
        width_two_back[it % 2] = hi - lo;
        let newton = x - fx / slope;
        let next = if !stalled && slope.is_finite() && slope != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let step = (next - x).abs();
        let scale = next.abs().max(f64::MIN_POSITIVE);
        if step <= 4.0 * f64::EPSILON * scale || hi - lo <= 4.0 * f64::EPSILON * scale {
            return Some(next);
        }
        x = next;
    }
    (last_f.abs() <= tol).then_some(x)
}
