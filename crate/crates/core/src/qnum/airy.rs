//! Airy function Ai on the real line and its zeros.
//!
//! Near the origin Ai is summed from its Maclaurin series in double-double
//! arithmetic, which absorbs the cancellation between the two series on the
//! negative axis. Far out the Poincaré asymptotic expansions take over.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::numeric::brent;

/// Ai(0) = 1 / (3^(2/3) Γ(2/3)), as a double-double pair.
const AI0: Dd = Dd::new(0.355_028_053_887_817_2, 2.052_336_324_362_12e-17);
/// -Ai'(0) = 1 / (3^(1/3) Γ(1/3)), as a double-double pair.
const AIP0: Dd = Dd::new(0.258_819_403_792_806_8, -2.522_243_111_610_832e-17);

/// Beyond this |x| the asymptotic expansions are used.
const SERIES_LIMIT: f64 = 10.0;

const CACHED_ZEROS: usize = 10;

#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    const fn new(hi: f64, lo: f64) -> Self {
        Self { hi, lo }
    }

    fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let e = e + self.lo + o.lo;
        quick_two_sum(s, e)
    }

    fn neg(self) -> Dd {
        Dd::new(-self.hi, -self.lo)
    }

    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p) + (self.hi * o.lo + self.lo * o.hi);
        quick_two_sum(p, e)
    }

    fn div_f64(self, d: f64) -> Dd {
        let q1 = self.hi / d;
        let prod = q1 * d;
        let err = q1.mul_add(d, -prod);
        let (r, e) = two_sum(self.hi, -prod);
        let r = r + (e - err) + self.lo;
        quick_two_sum(q1, r / d)
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd::new(s, b - (s - a))
}

fn ai_series(x: f64) -> f64 {
    let xd = Dd::from_f64(x);
    let x3 = xd.mul(xd).mul(xd);
    let mut f_term = Dd::from_f64(1.0);
    let mut g_term = xd;
    let mut f = f_term;
    let mut g = g_term;
    for k in 1..200 {
        let k3 = 3.0 * k as f64;
        f_term = f_term.mul(x3).div_f64((k3 - 1.0) * k3);
        g_term = g_term.mul(x3).div_f64(k3 * (k3 + 1.0));
        f = f.add(f_term);
        g = g.add(g_term);
        if f_term.hi.abs() < 1e-34 * f.hi.abs().max(1.0)
            && g_term.hi.abs() < 1e-34 * g.hi.abs().max(1.0)
        {
            break;
        }
    }
    AI0.mul(f).add(AIP0.mul(g).neg()).to_f64()
}

/// Coefficients u_k of the Airy asymptotic expansions.
fn asymptotic_coefficients(count: usize) -> Vec<f64> {
    let mut u = Vec::with_capacity(count);
    u.push(1.0);
    for k in 1..count {
        let kf = k as f64;
        let prev = u[k - 1];
        u.push(
            prev * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
                / ((2.0 * kf - 1.0) * 216.0 * kf),
        );
    }
    u
}

fn ai_asymptotic(x: f64) -> f64 {
    let z = x.abs();
    let zeta = 2.0 / 3.0 * z * z.sqrt();
    let u = asymptotic_coefficients(40);
    if x > 0.0 {
        let mut sum = 0.0;
        let mut pow = 1.0;
        let mut last = f64::INFINITY;
        for (k, uk) in u.iter().enumerate() {
            let term = uk * pow;
            if term.abs() > last {
                break;
            }
            sum += if k % 2 == 0 { term } else { -term };
            last = term.abs();
            pow /= zeta;
        }
        (-zeta).exp() / (2.0 * PI.sqrt() * z.powf(0.25)) * sum
    } else {
        // Ai(-z) ~ [sin(ζ + π/4) P - cos(ζ + π/4) Q] / (√π z^(1/4))
        let (mut p, mut q) = (0.0, 0.0);
        let mut pow = 1.0;
        let mut last = f64::INFINITY;
        for (k, uk) in u.iter().enumerate() {
            let term = uk * pow;
            if term.abs() > last {
                break;
            }
            let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            if k % 2 == 0 {
                p += sign * term;
            } else {
                q += sign * term;
            }
            last = term.abs();
            pow /= zeta;
        }
        let phase = zeta + PI / 4.0;
        (phase.sin() * p - phase.cos() * q) / (PI.sqrt() * z.powf(0.25))
    }
}

/// Airy function of the first kind.
pub fn airy_ai(x: f64) -> f64 {
    if x.abs() <= SERIES_LIMIT {
        ai_series(x)
    } else {
        ai_asymptotic(x)
    }
}

/// Leading asymptotic estimate of the (k+1)-th zero, k = 0, 1, ...
fn zero_estimate(k: usize) -> f64 {
    let t = 3.0 * PI / 8.0 * (4.0 * (k as f64 + 1.0) - 1.0);
    let t2 = t.powi(-2);
    -t.powf(2.0 / 3.0) * (1.0 + 5.0 / 48.0 * t2 - 5.0 / 36.0 * t2 * t2)
}

fn find_zero(k: usize) -> f64 {
    let guess = zero_estimate(k);
    let (a, b) = (guess - 0.3, guess + 0.3);
    brent(|x| Ok(airy_ai(x)), a, b, 1e-15, 200)
        .ok()
        .flatten()
        .expect("Airy zero bracket around asymptotic estimate")
}

fn cached_zeros() -> &'static [f64; CACHED_ZEROS] {
    static ZEROS: OnceLock<[f64; CACHED_ZEROS]> = OnceLock::new();
    ZEROS.get_or_init(|| std::array::from_fn(find_zero))
}

/// The (n+1)-th zero of Ai (all zeros are negative).
pub fn airy_zero(n: usize) -> f64 {
    match cached_zeros().get(n) {
        Some(z) => *z,
        None => find_zero(n),
    }
}
