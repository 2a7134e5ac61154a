//! Scalar root finding used by the shooting and angle solvers.
//!
//! All routines take a fallible closure so that integration failures inside
//! the residual propagate to the caller untouched.

/// A sign-changing interval `[lo, hi]` together with the function values at
/// its end points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub f_lo: f64,
    pub hi: f64,
    pub f_hi: f64,
}

impl Bracket {
    pub fn width(&self) -> f64 {
        (self.hi - self.lo).abs()
    }

    pub fn changes_sign(&self) -> bool {
        self.f_lo.signum() != self.f_hi.signum() || self.f_lo == 0.0 || self.f_hi == 0.0
    }
}

/// Outcome of an iterative root search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub fx: f64,
    pub iterations: usize,
}

/// Halve `bracket` until its width is at most `xtol`.
///
/// Returns the shrunken bracket and the number of function evaluations.
pub fn bisect<E, F>(mut f: F, mut b: Bracket, xtol: f64, max_iter: usize) -> Result<(Bracket, usize), E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    let mut iters = 0;
    while b.width() > xtol && iters < max_iter {
        if b.f_lo == 0.0 {
            b.hi = b.lo;
            b.f_hi = 0.0;
            break;
        }
        if b.f_hi == 0.0 {
            b.lo = b.hi;
            b.f_lo = 0.0;
            break;
        }
        let mid = 0.5 * (b.lo + b.hi);
        let f_mid = f(mid)?;
        iters += 1;
        if f_mid.signum() == b.f_lo.signum() {
            b.lo = mid;
            b.f_lo = f_mid;
        } else {
            b.hi = mid;
            b.f_hi = f_mid;
        }
    }
    Ok((b, iters))
}

/// Secant iteration starting from the two points of `b`, kept inside the
/// bracket. Stops once the step stalls at machine precision or `|f| <= ftol`
/// and the iterate no longer improves.
pub fn secant_polish<E, F>(mut f: F, b: Bracket, ftol: f64, max_iter: usize) -> Result<Root, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    let (mut x0, mut f0, mut x1, mut f1) = if b.f_lo.abs() < b.f_hi.abs() {
        (b.hi, b.f_hi, b.lo, b.f_lo)
    } else {
        (b.lo, b.f_lo, b.hi, b.f_hi)
    };
    let (lo, hi) = (b.lo.min(b.hi), b.lo.max(b.hi));
    let mut iters = 0;
    while iters < max_iter && f1 != 0.0 {
        let denom = f1 - f0;
        if denom == 0.0 {
            break;
        }
        let mut x2 = x1 - f1 * (x1 - x0) / denom;
        if !(lo..=hi).contains(&x2) || !x2.is_finite() {
            x2 = 0.5 * (lo + hi);
        }
        let f2 = f(x2)?;
        iters += 1;
        if f1.abs() <= ftol && f2.abs() >= f1.abs() {
            // no further progress below the tolerance; keep the better iterate
            break;
        }
        let stalled = (x2 - x1).abs() <= 4.0 * f64::EPSILON * x1.abs().max(1.0);
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
        if stalled {
            break;
        }
    }
    Ok(Root { x: x1, fx: f1, iterations: iters })
}

/// Brent's method on a sign-changing bracket.
pub fn brent<E, F>(mut f: F, b: Bracket, xtol: f64, max_iter: usize) -> Result<Root, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    let (mut a, mut fa, mut bb, mut fb) = (b.lo, b.f_lo, b.hi, b.f_hi);
    if fa == 0.0 {
        return Ok(Root { x: a, fx: 0.0, iterations: 0 });
    }
    if fb == 0.0 {
        return Ok(Root { x: bb, fx: 0.0, iterations: 0 });
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = bb - a;
    let mut e = d;
    let mut iters = 0;
    while iters < max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = bb - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = bb;
            bb = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * bb.abs() + 0.5 * xtol;
        let m = 0.5 * (c - bb);
        if m.abs() <= tol || fb == 0.0 {
            break;
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
                p = s * (2.0 * m * qa * (qa - r) - (bb - a) * (r - 1.0));
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
        a = bb;
        fa = fb;
        bb += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(bb)?;
        iters += 1;
    }
    Ok(Root { x: bb, fx: fb, iterations: iters })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    fn bracket(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Bracket {
        Bracket { lo, f_lo: f(lo), hi, f_hi: f(hi) }
    }

    #[test]
    fn bisection_then_secant_hits_sqrt2() {
        let f = |x: f64| x * x - 2.0;
        let b = bracket(f, 0.0, 2.0);
        let (b, _) = bisect(|x| Ok::<_, Infallible>(f(x)), b, 1e-6, 100).unwrap();
        assert!(b.width() <= 1e-6);
        let r = secant_polish(|x| Ok::<_, Infallible>(f(x)), b, 1e-14, 50).unwrap();
        assert!((r.x - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn brent_cubic() {
        let f = |x: f64| (x + 3.0) * (x - 1.0) * (x - 1.0);
        let r = brent(|x| Ok::<_, Infallible>(f(x)), bracket(f, -4.0, 4.0 / 3.0), 1e-14, 200).unwrap();
        assert!((r.x + 3.0).abs() < 1e-12, "{}", r.x);
    }

    #[test]
    fn brent_transcendental() {
        let f = |x: f64| x.cos() - x;
        let r = brent(|x| Ok::<_, Infallible>(f(x)), bracket(f, 0.0, 1.0), 1e-15, 100).unwrap();
        assert!((r.x - 0.739_085_133_215_160_6).abs() < 1e-14);
    }

    #[test]
    fn errors_propagate() {
        let r = brent(|_| Err::<f64, _>("boom"), Bracket { lo: 0.0, f_lo: -1.0, hi: 1.0, f_hi: 1.0 }, 1e-9, 10);
        assert_eq!(r, Err("boom"));
    }
}
