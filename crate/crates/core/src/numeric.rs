//! Small numerical kernels shared across modules: finite differences and a
//! bracketing root finder.

use crate::error::Result;

/// Central first derivative with one Richardson step.
pub fn central_derivative<F: Fn(f64) -> f64>(f: F, x: f64) -> f64 {
    let h = 1e-3 * x.abs().max(f64::MIN_POSITIVE.sqrt());
    let d = |h: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    let coarse = d(h);
    let fine = d(0.5 * h);
    (4.0 * fine - coarse) / 3.0
}

/// Second derivative by central differences with relative step `rel_step`
/// and a Richardson combination of steps `h` and `2h`.
///
/// Also returns the largest |f| seen on the stencil, which bounds the
/// round-off level of the estimate.
pub fn second_derivative_richardson<F>(f: F, x: f64, rel_step: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let h = rel_step * x.abs();
    let f0 = f(x)?;
    let (fp1, fm1) = (f(x + h)?, f(x - h)?);
    let (fp2, fm2) = (f(x + 2.0 * h)?, f(x - 2.0 * h)?);
    let d1 = (fp1 - 2.0 * f0 + fm1) / (h * h);
    let d2 = (fp2 - 2.0 * f0 + fm2) / (4.0 * h * h);
    let magnitude = [f0, fp1, fm1, fp2, fm2]
        .iter()
        .fold(0.0_f64, |m, v| m.max(v.abs()));
    Ok(((4.0 * d1 - d2) / 3.0, magnitude))
}

/// Brent's method on a bracket `[a, b]` with `f(a)` and `f(b)` of opposite
/// sign (or one of them zero). Converges to `xtol` absolute width.
pub fn brent<F>(mut f: F, mut a: f64, mut b: f64, xtol: f64, max_iter: usize) -> Result<Option<f64>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(Some(a));
    }
    if fb == 0.0 {
        return Ok(Some(b));
    }
    if fa.signum() == fb.signum() {
        return Ok(None);
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
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
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(Some(b));
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
        fb = f(b)?;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_finds_sqrt2() {
        let root = brent(|x| Ok(x * x - 2.0), 0.0, 2.0, 1e-15, 100)
            .unwrap()
            .unwrap();
        assert!((root - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn brent_rejects_unbracketed() {
        assert_eq!(brent(|x| Ok(x * x + 1.0), -1.0, 1.0, 1e-12, 50).unwrap(), None);
    }

    #[test]
    fn second_difference_of_cubic() {
        let (d2, _) = second_derivative_richardson(|x| Ok(x.powi(3)), 2.0, 1e-4).unwrap();
        assert!((d2 - 12.0).abs() < 1e-6);
    }
}
