//! Variational character of envelope energies, first-order perturbations,
//! and critical couplings of short-range wells.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{
    BRole, BoundKind, Convexity, ConvexityVerdict, EnvelopeSolution, KineticFamily, KineticLaw,
    PotentialLaw, SystemSpec, Term, TermRole,
};
use crate::numeric::brent;
use crate::qnum::QValue;

/// Number of log-spaced points at which b'' is sampled.
pub const CONVEXITY_SAMPLES: usize = 33;

/// Relative threshold under which a sampled b'' counts as zero.
pub const SIGN_TOLERANCE: f64 = 1e-8;

/// Intervals of radius `r0` and momentum `p0` over which b-function
/// curvature is checked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleDomain {
    pub r: (f64, f64),
    pub p: (f64, f64),
}

impl SampleDomain {
    /// One decade on either side of a stationary point.
    pub fn around(r0: f64, p0: f64) -> Self {
        Self {
            r: (r0 / 10.0, r0 * 10.0),
            p: (p0 / 10.0, p0 * 10.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundMode {
    /// b-functions through `x²` for every term.
    NBody,
    /// Kinetic through `x²`, potentials through `sgn(λ) x^λ`.
    TwoBodyAux(f64),
}

/// Curvature of the b-function of `law` for physical arguments in `x_range`.
///
/// Analytic tags win; otherwise b'' is sampled and any sign disagreement
/// beyond the noise floor gives `Mixed`.
pub fn term_convexity(law: &dyn Term, role: BRole, x_range: (f64, f64)) -> Result<Convexity> {
    if let Some(tag) = law.curvature_tag(role) {
        return Ok(tag);
    }
    let (lo, hi) = x_range;
    let (mut pos, mut neg) = (false, false);
    for i in 0..CONVEXITY_SAMPLES {
        let t = i as f64 / (CONVEXITY_SAMPLES - 1) as f64;
        let x = lo * (hi / lo).powf(t);
        let s = role.image(x);
        let (d2, noise) = law.b_second_with_noise(role, s)?;
        let scale = law.b_value(role, s)?.abs() / (s * s);
        let threshold = (SIGN_TOLERANCE * scale).max(noise);
        if d2 > threshold {
            pos = true;
        } else if d2 < -threshold {
            neg = true;
        }
    }
    Ok(match (pos, neg) {
        (false, false) => Convexity::Linear,
        (true, false) => Convexity::Convex,
        (false, true) => Convexity::Concave,
        (true, true) => Convexity::Mixed,
    })
}

/// Upper/lower bound classification of an N-body or two-body envelope energy.
pub fn classify_bound(
    spec: &SystemSpec,
    domain: &SampleDomain,
    mode: BoundMode,
) -> Result<ConvexityVerdict> {
    let mut terms = BTreeMap::new();
    terms.insert(
        TermRole::Kinetic,
        term_convexity(spec.kinetic(), BRole::KineticSquared, domain.p)?,
    );
    let n = f64::from(spec.n());
    let sqrt_c = spec.pair_count().sqrt();
    let scaled = |(lo, hi): (f64, f64), f: f64| (lo / f, hi / f);
    match mode {
        BoundMode::NBody => {
            if let Some(u) = spec.onebody() {
                let c = term_convexity(u, BRole::PotentialSquared, scaled(domain.r, n))?;
                terms.insert(TermRole::OneBody, c);
            }
            if let Some(v) = spec.twobody() {
                let c = term_convexity(v, BRole::PotentialSquared, scaled(domain.r, sqrt_c))?;
                terms.insert(TermRole::TwoBody, c);
            }
        }
        BoundMode::TwoBodyAux(lambda) => {
            let role = BRole::PotentialAuxiliary(lambda);
            if let Some(u) = spec.onebody() {
                terms.insert(TermRole::OneBody, term_convexity(u, role, domain.r)?);
            }
            if let Some(v) = spec.twobody() {
                terms.insert(TermRole::TwoBody, term_convexity(v, role, domain.r)?);
            }
        }
    }
    Ok(ConvexityVerdict::from_terms(terms))
}

/// Classification for `T(p) + V(r)` with auxiliary exponent `lambda`.
pub fn classify_two_body(
    kinetic: &KineticLaw,
    potential: &PotentialLaw,
    domain: &SampleDomain,
    lambda: f64,
) -> Result<ConvexityVerdict> {
    let mut terms = BTreeMap::new();
    terms.insert(
        TermRole::Kinetic,
        term_convexity(kinetic, BRole::KineticSquared, domain.p)?,
    );
    terms.insert(
        TermRole::TwoBody,
        term_convexity(potential, BRole::PotentialAuxiliary(lambda), domain.r)?,
    );
    Ok(ConvexityVerdict::from_terms(terms))
}

/// A small additive correction `coefficient * shape(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Perturbation {
    pub coefficient: f64,
    pub shape: PotentialLaw,
}

/// Perturbations of the kinetic `t(p)`, one-body `u(x)` and two-body `v(x)` terms.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PerturbationSpec {
    pub kinetic: Option<Perturbation>,
    pub onebody: Option<Perturbation>,
    pub twobody: Option<Perturbation>,
}

impl PerturbationSpec {
    pub fn is_empty(&self) -> bool {
        self.kinetic.is_none() && self.onebody.is_none() && self.twobody.is_none()
    }
}

/// First-order shift `N τ t(p0) + N η u(r0/N) + C_N ε v(r0/√C_N)`.
///
/// Only `r0` and `p0` of the unperturbed solution enter.
pub fn perturbation_correction(
    base: &EnvelopeSolution,
    spec: &SystemSpec,
    pert: &PerturbationSpec,
) -> Result<f64> {
    let n = f64::from(spec.n());
    let c = spec.pair_count();
    let mut delta = 0.0;
    if let Some(t) = &pert.kinetic {
        delta += n * t.coefficient * t.shape.value(base.p0)?;
    }
    if let Some(u) = &pert.onebody {
        delta += n * u.coefficient * u.shape.value(base.r0 / n)?;
    }
    if let Some(v) = &pert.twobody {
        delta += c * v.coefficient * v.shape.value(base.r0 / c.sqrt())?;
    }
    Ok(delta)
}

pub fn perturbed_energy(
    base: &EnvelopeSolution,
    spec: &SystemSpec,
    pert: &PerturbationSpec,
) -> Result<f64> {
    Ok(base.energy + perturbation_correction(base, spec, pert)?)
}

/// True when a first-order correction exceeds 10% of the base energy.
pub fn correction_is_large(base_energy: f64, correction: f64) -> bool {
    correction.abs() > 0.1 * base_energy.abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingMode {
    OneBody,
    TwoBody,
}

/// Minimal coupling for which a short-range well binds a given level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalCoupling {
    /// Dimensionless stationary argument solving `2 w(y) + y w'(y) = 0`.
    pub y0: f64,
    pub value: f64,
    pub mode: CouplingMode,
    /// Whether `value` bounds the true critical coupling from above or below.
    pub bound: BoundKind,
}

/// Root of `2 w(y) + y w'(y)`; depends only on the shape.
pub fn critical_argument(shape: &PotentialLaw) -> Result<f64> {
    let w = shape.short_range_shape().ok_or(Error::NotShortRange)?;
    let h = |y: f64| 2.0 * w.w(y) + y * w.w_prime(y);
    let (lo, hi, per_decade) = (-4.0_f64, 4.0_f64, 64usize);
    let count = ((hi - lo) as usize) * per_decade + 1;
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..count {
        let y = 10f64.powf(lo + (hi - lo) * i as f64 / (count - 1) as f64);
        let v = h(y);
        if !v.is_finite() {
            prev = None;
            continue;
        }
        if let Some((ya, va)) = prev {
            if va > 0.0 && v <= 0.0 {
                let y0 = brent(|y| Ok(h(y)), ya, y, 0.0, 200)?.ok_or(Error::NoCriticalPoint)?;
                let scale = 2.0 * w.w(y0).abs() + (y0 * w.w_prime(y0)).abs();
                if h(y0).abs() <= 1e-12 * scale {
                    return Ok(y0);
                }
            }
        }
        prev = Some((y, v));
    }
    Err(Error::NoCriticalPoint)
}

/// Critical coupling of a nonrelativistic system of particles of mass `mass`.
///
/// Two-body: `g_c = 2 Q² / (m N (N-1)² R² y0² w(y0))`;
/// one-body: `k_c = Q² / (2 m N² R² y0² w(y0))`, with `R` the range of the shape.
pub fn critical_coupling(
    mode: CouplingMode,
    shape: &PotentialLaw,
    n: u32,
    q: QValue,
    mass: f64,
) -> Result<CriticalCoupling> {
    if n < 2 {
        return Err(crate::error::invalid("N", format!("must be >= 2, got {n}")));
    }
    if !(mass > 0.0) {
        return Err(crate::error::invalid("mass", format!("must be > 0, got {mass}")));
    }
    let w = shape.short_range_shape().ok_or(Error::NotShortRange)?;
    let y0 = critical_argument(shape)?;
    let nf = f64::from(n);
    let factor = match mode {
        CouplingMode::TwoBody => 2.0 / (nf * (nf - 1.0).powi(2)),
        CouplingMode::OneBody => 1.0 / (2.0 * nf * nf),
    };
    let q2 = q.value() * q.value();
    let value = factor * q2 / (mass * w.range * w.range * y0 * y0 * w.w(y0));

    // Curvature around the critical separation decides the bound direction.
    let x_crit = y0 * w.range;
    let kinetic = KineticLaw::non_relativistic(mass)?;
    let mut terms = BTreeMap::new();
    terms.insert(
        TermRole::Kinetic,
        term_convexity(&kinetic, BRole::KineticSquared, (1.0, 10.0))?,
    );
    let role = match mode {
        CouplingMode::TwoBody => TermRole::TwoBody,
        CouplingMode::OneBody => TermRole::OneBody,
    };
    terms.insert(
        role,
        term_convexity(shape, BRole::PotentialSquared, (x_crit / 10.0, x_crit * 10.0))?,
    );
    let bound = ConvexityVerdict::from_terms(terms).classification;
    Ok(CriticalCoupling {
        y0,
        value,
        mode,
        bound,
    })
}

/// Critical coupling for the short-range term of `spec`, which must have
/// nonrelativistic kinematics and exactly the potential selected by `mode`.
pub fn critical_coupling_for(
    spec: &SystemSpec,
    mode: CouplingMode,
    q: QValue,
) -> Result<CriticalCoupling> {
    let mass = match spec.kinetic().family() {
        KineticFamily::NonRelativistic { mass } => *mass,
        _ => return Err(Error::NonRelativisticRequired),
    };
    let shape = match mode {
        CouplingMode::TwoBody => spec.twobody(),
        CouplingMode::OneBody => spec.onebody(),
    }
    .ok_or(Error::NotShortRange)?;
    critical_coupling(mode, shape, spec.n(), q, mass)
}
