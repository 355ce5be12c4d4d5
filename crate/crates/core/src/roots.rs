//! Bracketed scalar root finding (Brent's method).


use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct BrentOptions {
    pub x_tol: f64,
    pub max_iter: usize,
}

impl Default for BrentOptions {
    fn default() -> Self {
        BrentOptions {
            x_tol: 1e-15,
            max_iter: 200,
        }
    }
}

/// Finds a root of `f` in `[lower, upper]`, where `f(lower)` and `f(upper)`
/// must differ in sign (or one of them vanish).
pub fn brent<F>(f: F, lower: f64, upper: f64, opts: BrentOptions) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let (mut a, mut b) = (lower, upper);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoBracket { lower, upper });
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

        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * opts.x_tol;
        let half = 0.5 * (c - b);
        if half.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }

        if e.abs() >= tol && fa.abs() > fb.abs() {
            // inverse quadratic interpolation, secant when only two points
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * half * s, 1.0 - s)
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * half * qa * (qa - r) - (b - a) * (r - 1.0)),
                    (qa - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * half * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = half;
                e = d;
            }
        } else {
            d = half;
            e = d;
        }

        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(half) };
        fb = f(b);
    }
    Ok(b)
}

/// Root of a nondecreasing `f` with `f(lower) <= 0`; the upper end of the
/// bracket is grown geometrically from `lower + step` until the sign changes
/// or `limit` is passed.
pub fn brent_expanding<F>(f: F, lower: f64, step: f64, limit: f64, opts: BrentOptions) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let mut hi = lower + step;
    let mut width = step;
    while f(hi) < 0.0 {
        if hi >= limit {
            return Err(Error::NoBracket { lower, upper: hi });
        }
        width *= 2.0;
        hi = (lower + width).min(limit);
    }
    brent(f, lower, hi, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn finds_sqrt_two() {
        let r = brent(|x| x * x - 2.0, 0.0, 2.0, BrentOptions::default()).unwrap();
        assert_relative_eq!(r, 2f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn handles_flat_tail() {
        // slow approach to the root, like the winding phase near its limit
        let r = brent(|x: f64| 1.0 - 2.0 * (-x).exp() - 0.999, 0.0, 50.0, BrentOptions::default()).unwrap();
        assert_relative_eq!(r, -(0.0005f64).ln(), epsilon = 1e-12);
    }

    #[test]
    fn reports_missing_bracket() {
        assert!(matches!(
            brent(|x| x * x + 1.0, -1.0, 1.0, BrentOptions::default()),
            Err(Error::NoBracket { .. })
        ));
    }

    #[test]
    fn expanding_bracket() {
        let r = brent_expanding(|x| x - 37.5, 0.0, 1.0, 100.0, BrentOptions::default()).unwrap();
        assert_relative_eq!(r, 37.5, epsilon = 1e-13);
        assert!(brent_expanding(|x| x - 370.0, 0.0, 1.0, 100.0, BrentOptions::default()).is_err());
    }
}
