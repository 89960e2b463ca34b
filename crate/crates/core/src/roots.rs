//! Bracketed scalar root finding.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootOptions {
    pub xtol: f64,
    pub max_iter: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self { xtol: 1e-15, max_iter: 200 }
    }
}

/// Brent's method on a sign-changing bracket `[a, b]`.
pub fn brent<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: RootOptions) -> Result<f64> {
    let (mut a, mut b) = (a, b);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(Error::Solver(format!(
            "no sign change on [{a}, {b}]: f(a) = {fa:e}, f(b) = {fb:e}"
        )));
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..opts.max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * opts.xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
    }
    Err(Error::Solver(format!("brent: no convergence in {} iterations", opts.max_iter)))
}

/// Newton iteration kept inside a sign-changing bracket; falls back to
/// bisection whenever a step leaves the bracket or fails to halve the residual.
pub fn newton_bisect<F, G>(f: F, df: G, lo: f64, hi: f64, x0: f64, opts: RootOptions) -> Result<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let (mut lo, mut hi) = (lo.min(hi), lo.max(hi));
    let flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Solver(format!("no sign change on [{lo}, {hi}]")));
    }
    let rising = fhi > 0.0;
    let mut x = x0.clamp(lo, hi);
    let mut fx = f(x);
    for _ in 0..opts.max_iter {
        if fx == 0.0 {
            return Ok(x);
        }
        if (fx > 0.0) == rising {
            hi = x;
        } else {
            lo = x;
        }
        let d = df(x);
        let newton = x - fx / d;
        let next = if d != 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        let fnext = f(next);
        let (next, fnext) = if fnext.abs() > 0.5 * fx.abs() && next != 0.5 * (lo + hi) {
            let mid = 0.5 * (lo + hi);
            (mid, f(mid))
        } else {
            (next, fnext)
        };
        if (next - x).abs() <= opts.xtol + 4.0 * f64::EPSILON * next.abs() || hi - lo <= opts.xtol {
            return Ok(next);
        }
        x = next;
        fx = fnext;
    }
    Err(Error::Solver(format!("newton_bisect: no convergence in {} iterations", opts.max_iter)))
}

/// Returns the first sub-interval of `grid` on which `f` changes sign.
pub fn first_sign_change<F: Fn(f64) -> f64>(f: F, grid: &[f64]) -> Option<(f64, f64)> {
    let mut prev: Option<(f64, f64)> = None;
    for &x in grid {
        let fx = f(x);
        if !fx.is_finite() {
            prev = None;
            continue;
        }
        if let Some((px, pf)) = prev {
            if pf == 0.0 {
                return Some((px, px));
            }
            if pf.signum() != fx.signum() {
                return Some((px, x));
            }
        }
        prev = Some((x, fx));
    }
    None
}
