//! Closed-form envelope results for three model systems: large-N baryons,
//! self-gravitating boson stars, and oscillators with a minimal length.

use crate::error::{invalid, Error, Result};
use crate::model::pair_count;
use crate::qnum::QValue;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaryonParams {
    /// One-body string tension (energy²).
    pub a1: f64,
    /// Two-body string tension (energy²).
    pub a2: f64,
    /// Coulomb-like strength.
    pub b: f64,
    pub n: u32,
    pub dim: u32,
}

impl BaryonParams {
    pub fn new(a1: f64, a2: f64, b: f64, n: u32, dim: u32) -> Result<Self> {
        for (name, v) in [("a1", a1), ("a2", a2), ("b", b)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(invalid(name, format!("must be >= 0, got {v}")));
            }
        }
        if a1 + a2 <= 0.0 {
            return Err(invalid("a1 + a2", "must be > 0"));
        }
        if n < 2 {
            return Err(invalid("N", format!("must be >= 2, got {n}")));
        }
        if dim < 2 {
            return Err(invalid("D", format!("must be >= 2, got {dim}")));
        }
        Ok(Self { a1, a2, b, n, dim })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaryonBounds {
    pub upper: f64,
    pub lower: f64,
}

/// Ground-state bounds for N massless particles with linear one- and
/// two-body confinement plus a Coulomb-like pair attraction.
///
/// ```text
/// E_u² = 4 C_N (a1 + a2 √C_N) (D - b √C_N)
/// E_l² = 2 C_N (a1 + a2 N) ((D - 1) - b (N - 1))
/// ```
///
/// The lower bound is transcribed as given; it comes from a separate
/// quasi-exact method, not from the envelope equations.
pub fn baryon_bounds(p: &BaryonParams) -> Result<BaryonBounds> {
    let c = pair_count(p.n);
    let n = f64::from(p.n);
    let d = f64::from(p.dim);
    let upper_gap = d - p.b * c.sqrt();
    let lower_gap = (d - 1.0) - p.b * (n - 1.0);
    if upper_gap <= 0.0 || lower_gap <= 0.0 {
        return Err(Error::CollapseRegime(format!(
            "need D - b sqrt(C_N) > 0 and (D - 1) - b (N - 1) > 0, got {upper_gap} and {lower_gap}"
        )));
    }
    Ok(BaryonBounds {
        upper: (4.0 * c * (p.a1 + p.a2 * c.sqrt()) * upper_gap).sqrt(),
        lower: (2.0 * c * (p.a1 + p.a2 * n) * lower_gap).sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BosonStarParams {
    pub n: u32,
    /// Constituent mass.
    pub mass: f64,
    /// `G m²`.
    pub alpha: f64,
    pub q: QValue,
}

impl BosonStarParams {
    pub fn new(n: u32, mass: f64, alpha: f64, q: QValue) -> Result<Self> {
        if n < 2 {
            return Err(invalid("N", format!("must be >= 2, got {n}")));
        }
        if !(mass > 0.0) {
            return Err(invalid("mass", format!("must be > 0, got {mass}")));
        }
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(invalid("alpha", format!("must be >= 0, got {alpha}")));
        }
        Ok(Self { n, mass, alpha, q })
    }

    fn binding_argument(&self) -> f64 {
        let n = f64::from(self.n);
        let q = self.q.value();
        1.0 - n * (n - 1.0).powi(3) * self.alpha * self.alpha / (8.0 * q * q)
    }
}

/// Upper bound on the mass of N semirelativistic particles bound by
/// pairwise Newtonian attraction: `N m sqrt(1 - N (N-1)³ α² / (8 Q²))`.
pub fn boson_star_mass(p: &BosonStarParams) -> Result<f64> {
    let arg = p.binding_argument();
    if arg < 0.0 {
        return Err(Error::CollapseRegime(format!(
            "N (N-1)^3 alpha^2 / (8 Q^2) exceeds 1 (N={}, alpha={})",
            p.n, p.alpha
        )));
    }
    Ok(f64::from(p.n) * p.mass * arg.sqrt())
}

/// Large-N bound on `M G m` for the bosonic ground state, `D / √2`.
pub fn boson_star_limit(dim: u32) -> f64 {
    f64::from(dim) / std::f64::consts::SQRT_2
}

/// Heaviest bosonic ground state over particle number at fixed `α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BosonStarMaximum {
    /// Best integer particle number on the scan.
    pub n: u32,
    /// Maximizer of the continuous relaxation in N.
    pub n_continuous: f64,
    /// Maximal mass in units of `1/(G m)`.
    pub mass_gm: f64,
}

/// `M G m` of the bosonic ground state as a function of a real N.
fn boson_star_mass_gm(n: f64, alpha: f64, dim: u32) -> f64 {
    let q = (n - 1.0) * f64::from(dim) / 2.0;
    let arg = 1.0 - n * (n - 1.0).powi(3) * alpha * alpha / (8.0 * q * q);
    if arg < 0.0 {
        f64::NAN
    } else {
        n * alpha * arg.sqrt()
    }
}

/// Scans `N = 2..=n_max` for the heaviest ground state, then refines the
/// maximizer of the continuous relaxation by golden-section search.
pub fn boson_star_max_mass(alpha: f64, dim: u32, n_max: u32) -> Result<BosonStarMaximum> {
    if !(alpha > 0.0) {
        return Err(invalid("alpha", format!("must be > 0, got {alpha}")));
    }
    if dim < 2 {
        return Err(invalid("D", format!("must be >= 2, got {dim}")));
    }
    if n_max < 2 {
        return Err(invalid("n_max", "must be >= 2"));
    }
    let (mut best_n, mut best) = (2u32, f64::NEG_INFINITY);
    for n in 2..=n_max {
        let m = boson_star_mass_gm(f64::from(n), alpha, dim);
        if m > best {
            best = m;
            best_n = n;
        }
    }
    if !best.is_finite() {
        return Err(Error::CollapseRegime("no bound configuration on the scan".into()));
    }
    let f = |n: f64| {
        let m = boson_star_mass_gm(n, alpha, dim);
        if m.is_nan() {
            f64::NEG_INFINITY
        } else {
            m
        }
    };
    let (mut a, mut b) = (
        (f64::from(best_n) - 1.0).max(2.0),
        (f64::from(best_n) + 1.0).min(f64::from(n_max)),
    );
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    for _ in 0..200 {
        if (b - a).abs() <= 1e-12 * b.abs() {
            break;
        }
        if f(c) > f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - inv_phi * (b - a);
        d = a + inv_phi * (b - a);
    }
    let n_continuous = 0.5 * (a + b);
    Ok(BosonStarMaximum {
        n: best_n,
        n_continuous,
        mass_gm: f(n_continuous).max(best),
    })
}

/// First-order minimal-length shift `2 k β Q²` of N oscillators.
pub fn minimal_length_correction(k: f64, beta: f64, q: QValue) -> f64 {
    2.0 * k * beta * q.value() * q.value()
}

/// `sqrt(2 N k / m) Q + 2 k β Q²`; exact at β = 0.
pub fn minimal_length_energy(n: u32, dim: u32, mass: f64, k: f64, beta: f64, q: QValue) -> Result<f64> {
    if n < 2 {
        return Err(invalid("N", format!("must be >= 2, got {n}")));
    }
    if dim < 2 {
        return Err(invalid("D", format!("must be >= 2, got {dim}")));
    }
    if !(mass > 0.0) {
        return Err(invalid("mass", format!("must be > 0, got {mass}")));
    }
    if !(k > 0.0) {
        return Err(invalid("k", format!("must be > 0, got {k}")));
    }
    if !(beta >= 0.0) {
        return Err(invalid("beta", format!("must be >= 0, got {beta}")));
    }
    Ok(minimal_length_base(n, mass, k, q) + minimal_length_correction(k, beta, q))
}

fn minimal_length_base(n: u32, mass: f64, k: f64, q: QValue) -> f64 {
    (2.0 * f64::from(n) * k / mass).sqrt() * q.value()
}

/// Whether the β term stays below 10% of the unperturbed energy.
pub fn minimal_length_is_first_order(n: u32, mass: f64, k: f64, beta: f64, q: QValue) -> bool {
    minimal_length_correction(k, beta, q) <= 0.1 * minimal_length_base(n, mass, k, q)
}

/// `Q²` for two particles in three dimensions, expanded in `(n, l)`:
/// `4n² + l² + 4nl + 6n + 3l + 9/4`.
pub fn minimal_length_polynomial(n: u32, l: u32) -> f64 {
    let (n, l) = (f64::from(n), f64::from(l));
    4.0 * n * n + l * l + 4.0 * n * l + 6.0 * n + 3.0 * l + 2.25
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qnum::q_boson_ground;

    #[test]
    fn baryon_examples() {
        let b = baryon_bounds(&BaryonParams::new(0.0, 0.2, 0.4, 3, 3).unwrap()).unwrap();
        // mpmath
        assert!((b.upper - 3.096_896_158_171_261).abs() < 1e-12);
        assert!((b.lower - 2.078_460_969_082_653).abs() < 1e-12);
        let b = baryon_bounds(&BaryonParams::new(1.0, 0.0, 0.0, 3, 3).unwrap()).unwrap();
        assert!((b.upper - 6.0).abs() < 1e-14);
        assert!((b.lower - 12f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn baryon_collapse() {
        let p = BaryonParams::new(0.0, 1.0, 2.0, 3, 3).unwrap();
        assert!(matches!(baryon_bounds(&p), Err(Error::CollapseRegime(_))));
    }

    #[test]
    fn boson_star_examples() {
        let q = q_boson_ground(3, 3).unwrap();
        let m = boson_star_mass(&BosonStarParams::new(3, 1.0, 0.1, q).unwrap()).unwrap();
        assert!((m - 2.994_995_826_374_387).abs() < 1e-12);
        let m = boson_star_mass(&BosonStarParams::new(3, 1.0, 0.0, q).unwrap()).unwrap();
        assert_eq!(m, 3.0);
        let p = BosonStarParams::new(3, 1.0, 10.0, q).unwrap();
        assert!(matches!(boson_star_mass(&p), Err(Error::CollapseRegime(_))));
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn limit_examples() {
        assert!((boson_star_limit(3) - 2.121_320_343_559_643).abs() < 1e-15);
        assert!((boson_star_limit(2) - 1.414_213_562_373_095).abs() < 1e-15);
        assert!((boson_star_limit(10) - 7.071_067_811_865_476).abs() < 1e-14);
    }

    #[test]
    fn minimal_length_examples() {
        let q = q_boson_ground(2, 3).unwrap();
        let (k, beta) = (0.7, 0.01);
        let e = minimal_length_energy(2, 3, 1.0, k, beta, q).unwrap();
        let base = minimal_length_energy(2, 3, 1.0, k, 0.0, q).unwrap();
        assert_eq!(base, (4.0 * k).sqrt() * 1.5);
        assert!((e - base - 2.0 * k * beta * 2.25).abs() < 1e-15);
        assert_eq!(minimal_length_polynomial(1, 1), 20.25);
        assert_eq!(minimal_length_polynomial(0, 0), 2.25);
    }
}
