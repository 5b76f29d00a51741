//! Envelope stationarity systems.
//!
//! For N bodies the approximate eigenvalue is
//!
//! ```text
//! E  = N T(p0) + N U(r0/N) + C_N V(r0/√C_N)
//! r0 p0 = Q
//! N p0 T'(p0) = r0 U'(r0/N) + √C_N r0 V'(r0/√C_N)
//! ```
//!
//! and the two-body (or one-body) system is the special case
//! `E = T(p0) + V(r0)`, `r0 p0 = Q`, `p0 T'(p0) = r0 V'(r0)`.
//! Eliminating `p0 = Q/r0` leaves one transcendental equation in `r0`,
//! which is bracketed on a logarithmic scan and polished with Brent's
//! method. Every sign change is kept; the lowest-energy root is primary.

use crate::analysis::{self, BoundMode, SampleDomain};
use crate::error::{invalid, Error, Result};
use crate::model::{
    BoundKind, ConvexityVerdict, EnvelopeSolution, KineticLaw, PotentialLaw, StationaryRoot,
    SystemSpec, Term,
};
use crate::numeric::brent;
use crate::qnum::QValue;

/// Outermost log10 half-width the scan may grow to around its center.
const MAX_HALF_DECADES: f64 = 128.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Relative tolerance on the stationarity residual.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Growth factor of the scan window when no sign change is found.
    pub expansion_factor: f64,
    pub points_per_decade: usize,
    pub decades: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            max_iterations: 200,
            expansion_factor: 2.0,
            points_per_decade: 64,
            decades: 8.0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance <= 1e-6) {
            return Err(invalid("tolerance", "must lie in (0, 1e-6]"));
        }
        if self.max_iterations < 10 {
            return Err(invalid("max_iterations", "must be >= 10"));
        }
        if !(self.expansion_factor > 1.0) {
            return Err(invalid("expansion_factor", "must be > 1"));
        }
        if self.points_per_decade < 2 {
            return Err(invalid("points_per_decade", "must be >= 2"));
        }
        if !(self.decades > 0.0) {
            return Err(invalid("decades", "must be > 0"));
        }
        Ok(())
    }
}

/// Eigenvalue of `p²/2μ + ρ sgn(λ) r^λ` in terms of its global quantum number.
pub fn auxiliary_energy(mu: f64, rho: f64, lambda: f64, q: QValue) -> Result<f64> {
    if !(lambda > -2.0 && lambda != 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidAuxiliaryExponent(lambda));
    }
    if !(mu > 0.0) {
        return Err(invalid("mu", format!("must be > 0, got {mu}")));
    }
    if !(rho > 0.0) {
        return Err(invalid("rho", format!("must be > 0, got {rho}")));
    }
    let q = q.value();
    Ok((lambda + 2.0) / (2.0 * lambda)
        * (lambda.abs() * rho).powf(2.0 / (lambda + 2.0))
        * (q * q / mu).powf(lambda / (lambda + 2.0)))
}

/// N-body envelope energy at radius `r0` with `p0 = Q / r0`.
pub fn nbody_energy(spec: &SystemSpec, q: QValue, r0: f64) -> Result<f64> {
    let n = f64::from(spec.n());
    let c = spec.pair_count();
    let p0 = q.value() / r0;
    let mut e = n * spec.kinetic().value(p0)?;
    if let Some(u) = spec.onebody() {
        e += n * u.value(r0 / n)?;
    }
    if let Some(v) = spec.twobody() {
        e += c * v.value(r0 / c.sqrt())?;
    }
    Ok(e)
}

/// `F(r0) = N p0 T'(p0) - r0 U'(r0/N) - √C_N r0 V'(r0/√C_N)` with `p0 = Q/r0`.
///
/// `dE/dr0 = -F/r0`, so a sign change from + to - is a minimum of the energy.
pub fn stationary_residual(spec: &SystemSpec, q: QValue, r0: f64) -> Result<f64> {
    if !(r0 > 0.0) {
        return Err(Error::NonPositiveArgument(r0));
    }
    Ok(nbody_residual_parts(spec, q, r0)?.0)
}

/// Residual together with its kinetic scale `N p0 T'(p0)`.
fn nbody_residual_parts(spec: &SystemSpec, q: QValue, r0: f64) -> Result<(f64, f64)> {
    let n = f64::from(spec.n());
    let sqrt_c = spec.pair_count().sqrt();
    let p0 = q.value() / r0;
    let kinetic = n * p0 * spec.kinetic().derivative(p0)?;
    let mut f = kinetic;
    if let Some(u) = spec.onebody() {
        f -= r0 * u.derivative(r0 / n)?;
    }
    if let Some(v) = spec.twobody() {
        f -= sqrt_c * r0 * v.derivative(r0 / sqrt_c)?;
    }
    Ok((f, kinetic.abs()))
}

/// Solves the N-body envelope system for the given global quantum number.
pub fn solve_nbody(spec: &SystemSpec, q: QValue, cfg: &SolverConfig) -> Result<EnvelopeSolution> {
    cfg.validate()?;
    let radii = stationary_radii(|r| nbody_residual_parts(spec, q, r), q.value(), cfg)?;
    let mut roots = Vec::with_capacity(radii.len());
    for r0 in radii {
        roots.push(StationaryRoot {
            r0,
            p0: q.value() / r0,
            energy: nbody_energy(spec, q, r0)?,
        });
    }
    let primary = primary_root(&roots);
    let bound = analysis::classify_bound(
        spec,
        &SampleDomain::around(primary.r0, primary.p0),
        BoundMode::NBody,
    )
    .unwrap_or_else(|_| unknown_verdict());
    Ok(EnvelopeSolution {
        energy: primary.energy,
        r0: primary.r0,
        p0: primary.p0,
        q,
        bound,
        roots,
    })
}

/// Solves the one/two-body envelope system `H = T(p) + V(r)` built on the
/// auxiliary potential `sgn(λ) r^λ`.
pub fn solve_two_body(
    kinetic: &KineticLaw,
    potential: &PotentialLaw,
    lambda_aux: f64,
    q: QValue,
    cfg: &SolverConfig,
) -> Result<EnvelopeSolution> {
    cfg.validate()?;
    if !(lambda_aux > -2.0 && lambda_aux != 0.0) {
        return Err(Error::InvalidAuxiliaryExponent(lambda_aux));
    }
    let residual = |r0: f64| -> Result<(f64, f64)> {
        let p0 = q.value() / r0;
        let kin = p0 * kinetic.derivative(p0)?;
        Ok((kin - r0 * potential.derivative(r0)?, kin.abs()))
    };
    let radii = stationary_radii(residual, q.value(), cfg)?;
    let mut roots = Vec::with_capacity(radii.len());
    for r0 in radii {
        let p0 = q.value() / r0;
        roots.push(StationaryRoot {
            r0,
            p0,
            energy: kinetic.value(p0)? + potential.value(r0)?,
        });
    }
    let primary = primary_root(&roots);
    let domain = SampleDomain::around(primary.r0, primary.p0);
    let bound = analysis::classify_two_body(kinetic, potential, &domain, lambda_aux)
        .unwrap_or_else(|_| unknown_verdict());
    Ok(EnvelopeSolution {
        energy: primary.energy,
        r0: primary.r0,
        p0: primary.p0,
        q,
        bound,
        roots,
    })
}

fn unknown_verdict() -> ConvexityVerdict {
    ConvexityVerdict {
        classification: BoundKind::Unknown,
        terms: Default::default(),
    }
}

fn primary_root(roots: &[StationaryRoot]) -> StationaryRoot {
    *roots
        .iter()
        .min_by(|a, b| a.energy.total_cmp(&b.energy))
        .expect("at least one root")
}

/// Finds every bracketed root of `residual` on a logarithmic scan around
/// `center`, widening the window until a sign change appears.
///
/// `residual` returns `(F, scale)`; a polished root is accepted only when
/// `|F| <= tolerance * scale`, which rejects sign flips across poles.
fn stationary_radii<F>(residual: F, center: f64, cfg: &SolverConfig) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<(f64, f64)>,
{
    let log_center = center.log10();
    let mut half = 0.5 * cfg.decades;
    let mut first_error = None;
    let (mut seen_positive, mut seen_negative) = (false, false);
    loop {
        let lo = (log_center - half).max(-300.0);
        let hi = (log_center + half).min(300.0);
        let count = ((hi - lo) * cfg.points_per_decade as f64).ceil() as usize + 1;
        let mut samples = Vec::with_capacity(count);
        for i in 0..count {
            let r = 10f64.powf(lo + (hi - lo) * i as f64 / (count - 1) as f64);
            match residual(r) {
                Ok((f, _)) if f.is_finite() => samples.push((r, f)),
                Ok(_) => {}
                Err(e @ Error::EvaluationDomain { .. }) => {
                    first_error.get_or_insert(e);
                }
                Err(e) => return Err(e),
            }
        }
        let mut roots = Vec::new();
        for w in samples.windows(2) {
            let ((a, fa), (b, fb)) = (w[0], w[1]);
            if fa == 0.0 {
                roots.push(a);
                continue;
            }
            if fa.signum() == fb.signum() || fb == 0.0 {
                continue;
            }
            let polished = brent(|r| residual(r).map(|(f, _)| f), a, b, 0.0, cfg.max_iterations)?
                .ok_or_else(|| {
                    Error::ScanExhausted(format!(
                        "bracket [{a}, {b}] did not converge in {} iterations",
                        cfg.max_iterations
                    ))
                })?;
            roots.push(polished);
        }
        if let Some(&(last, 0.0)) = samples.last() {
            roots.push(last);
        }
        roots.dedup();
        let mut accepted = Vec::with_capacity(roots.len());
        for r in roots {
            let (f, scale) = residual(r)?;
            if f.abs() <= cfg.tolerance * scale {
                accepted.push(r);
            }
        }
        if !accepted.is_empty() {
            return Ok(accepted);
        }
        seen_positive |= samples.iter().any(|s| s.1 > 0.0);
        seen_negative |= samples.iter().any(|s| s.1 < 0.0);
        if samples.is_empty() && half >= MAX_HALF_DECADES {
            return Err(first_error.unwrap_or_else(|| {
                Error::ScanExhausted("residual is not finite anywhere on the scan".into())
            }));
        }
        if half >= MAX_HALF_DECADES || (seen_positive && seen_negative) {
            break;
        }
        half = (half * cfg.expansion_factor).min(MAX_HALF_DECADES);
    }
    let hint = match (seen_positive, seen_negative) {
        (true, false) => "kinetic pressure exceeds the attraction at every radius (unbound system)",
        (false, true) => "attraction exceeds the kinetic pressure at every radius (collapse)",
        _ => "residual changes sign only across singularities",
    };
    Err(Error::NoStationaryPoint { hint: hint.into() })
}
