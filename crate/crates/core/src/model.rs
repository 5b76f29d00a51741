//! Hamiltonian building blocks: kinetic and potential laws, the N-body
//! system record, the quantum-number state, and the solution record.
//!
//! All quantities are in natural units (ħ = c = 1).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::numeric;
use crate::qnum::QValue;

/// Relative finite-difference step used for b'' when no analytic form exists.
pub const B_FD_REL_STEP: f64 = 1e-4;

/// A user-supplied radial profile `x -> f(x)` on `x > 0`.
pub trait Profile: Send + Sync {
    fn value(&self, x: f64) -> f64;

    fn derivative(&self, x: f64) -> f64 {
        numeric::central_derivative(|y| self.value(y), x)
    }
}

impl<F> Profile for F
where
    F: Fn(f64) -> f64 + Send + Sync,
{
    fn value(&self, x: f64) -> f64 {
        self(x)
    }
}

/// Named wrapper around a shared [`Profile`]. Two custom profiles compare
/// equal only when they share the same evaluator.
#[derive(Clone)]
pub struct CustomProfile {
    name: String,
    inner: Arc<dyn Profile>,
    short_range: bool,
}

impl CustomProfile {
    pub fn new(name: impl Into<String>, profile: impl Profile + 'static) -> Self {
        Self {
            name: name.into(),
            inner: Arc::new(profile),
            short_range: false,
        }
    }

    /// Marks the profile as a short-range well, `W(x) = -w(x)` with
    /// `w > 0` vanishing at infinity.
    pub fn short_range(mut self) -> Self {
        self.short_range = true;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn value(&self, x: f64) -> f64 {
        self.inner.value(x)
    }

    pub fn derivative(&self, x: f64) -> f64 {
        self.inner.derivative(x)
    }
}

impl fmt::Debug for CustomProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CustomProfile({})", self.name)
    }
}

impl PartialEq for CustomProfile {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) && self.short_range == other.short_range
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    Value,
    FirstDerivative,
}

/// Substitution defining a b-function.
///
/// `KineticSquared` and `PotentialSquared` use `f(x) = b(x^2)`;
/// `PotentialAuxiliary(λ)` uses `V(x) = b(P(x))` with `P(x) = sgn(λ) x^λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BRole {
    KineticSquared,
    PotentialSquared,
    PotentialAuxiliary(f64),
}

impl BRole {
    fn name(self) -> &'static str {
        match self {
            BRole::KineticSquared => "KineticSquared",
            BRole::PotentialSquared => "PotentialSquared",
            BRole::PotentialAuxiliary(_) => "PotentialAuxiliary",
        }
    }

    /// Maps a physical argument `x > 0` to the b-function argument.
    pub fn image(self, x: f64) -> f64 {
        match self {
            BRole::KineticSquared | BRole::PotentialSquared => x * x,
            BRole::PotentialAuxiliary(lambda) => lambda.signum() * x.powf(lambda),
        }
    }

    /// Inverse of [`BRole::image`]; `None` outside the image.
    pub fn preimage(self, s: f64) -> Option<f64> {
        match self {
            BRole::KineticSquared | BRole::PotentialSquared => (s > 0.0).then(|| s.sqrt()),
            BRole::PotentialAuxiliary(lambda) => {
                let u = lambda.signum() * s;
                (u > 0.0).then(|| u.powf(1.0 / lambda))
            }
        }
    }
}

/// Curvature class of a b-function over a domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Convexity {
    Concave,
    Convex,
    Linear,
    Mixed,
}

/// Which Hamiltonian term a curvature entry belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum TermRole {
    Kinetic,
    OneBody,
    TwoBody,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    UpperBound,
    LowerBound,
    Exact,
    Unknown,
}

impl BoundKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundKind::UpperBound => "upper",
            BoundKind::LowerBound => "lower",
            BoundKind::Exact => "exact",
            BoundKind::Unknown => "unknown",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Variational character of an envelope energy.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityVerdict {
    pub classification: BoundKind,
    pub terms: BTreeMap<TermRole, Convexity>,
}

impl ConvexityVerdict {
    /// Aggregates per-term curvature: all linear gives `Exact`, all
    /// non-linear terms concave gives `UpperBound`, all convex gives
    /// `LowerBound`, anything else `Unknown`.
    pub fn from_terms(terms: BTreeMap<TermRole, Convexity>) -> Self {
        let nonlinear: Vec<Convexity> = terms
            .values()
            .copied()
            .filter(|c| *c != Convexity::Linear)
            .collect();
        let classification = if terms.is_empty() {
            BoundKind::Unknown
        } else if nonlinear.is_empty() {
            BoundKind::Exact
        } else if nonlinear.iter().all(|c| *c == Convexity::Concave) {
            BoundKind::UpperBound
        } else if nonlinear.iter().all(|c| *c == Convexity::Convex) {
            BoundKind::LowerBound
        } else {
            BoundKind::Unknown
        };
        Self {
            classification,
            terms,
        }
    }
}

/// Evaluation contract shared by kinetic and potential laws.
pub trait Term {
    fn family_name(&self) -> &'static str;

    /// Whether `role` is meaningful for this law.
    fn accepts_role(&self, role: BRole) -> bool;

    fn raw_value(&self, x: f64) -> f64;

    fn raw_derivative(&self, x: f64) -> f64;

    /// Closed-form b'' where the family admits one.
    fn analytic_b_second(&self, role: BRole, s: f64) -> Option<f64>;

    /// Curvature of the b-function known from the family's form alone.
    fn curvature_tag(&self, role: BRole) -> Option<Convexity>;

    fn value(&self, x: f64) -> Result<f64> {
        checked(self.family_name(), x, |x| self.raw_value(x))
    }

    fn derivative(&self, x: f64) -> Result<f64> {
        checked(self.family_name(), x, |x| self.raw_derivative(x))
    }

    fn eval(&self, x: f64, mode: EvalMode) -> Result<f64> {
        match mode {
            EvalMode::Value => self.value(x),
            EvalMode::FirstDerivative => self.derivative(x),
        }
    }

    /// Value of the b-function at `s` under `role`.
    fn b_value(&self, role: BRole, s: f64) -> Result<f64> {
        let x = role.preimage(s).ok_or(Error::EvaluationDomain {
            law: self.family_name(),
            x: s,
        })?;
        self.value(x)
    }

    fn b_second_derivative(&self, role: BRole, s: f64) -> Result<f64> {
        self.b_second_with_noise(role, s).map(|(d2, _)| d2)
    }

    /// b''(s) together with its round-off floor (zero when analytic).
    fn b_second_with_noise(&self, role: BRole, s: f64) -> Result<(f64, f64)> {
        if !self.accepts_role(role) {
            return Err(Error::RoleMismatch {
                role: role.name(),
                law: self.family_name(),
            });
        }
        if role.preimage(s).is_none() {
            return Err(Error::EvaluationDomain {
                law: self.family_name(),
                x: s,
            });
        }
        if let Some(d2) = self.analytic_b_second(role, s) {
            return Ok((d2, 0.0));
        }
        let (d2, magnitude) = numeric::second_derivative_richardson(
            |t| self.b_value(role, t),
            s,
            B_FD_REL_STEP,
        )?;
        let h = B_FD_REL_STEP * s.abs();
        Ok((d2, 64.0 * f64::EPSILON * magnitude / (h * h)))
    }
}

fn checked(law: &'static str, x: f64, f: impl Fn(f64) -> f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::NonPositiveArgument(x));
    }
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::EvaluationDomain { law, x })
    }
}

/// Evaluates a law or its derivative at `x > 0`.
pub fn eval_term(law: &dyn Term, x: f64, mode: EvalMode) -> Result<f64> {
    law.eval(x, mode)
}

/// b''(s) for `law` under the substitution `role`.
pub fn b_second_derivative(law: &dyn Term, role: BRole, s: f64) -> Result<f64> {
    law.b_second_derivative(role, s)
}

fn curvature_of(coefficient: f64) -> Convexity {
    if coefficient == 0.0 {
        Convexity::Linear
    } else if coefficient > 0.0 {
        Convexity::Convex
    } else {
        Convexity::Concave
    }
}

// ---------------------------------------------------------------------------
// Kinetic laws

#[derive(Debug, Clone, PartialEq)]
pub enum KineticFamily {
    /// `p^2 / 2m`
    NonRelativistic { mass: f64 },
    /// `sqrt(p^2 + m^2)`
    SemiRelativistic { mass: f64 },
    /// `p`
    UltraRelativistic,
    /// `p^2 / 2m + beta p^4 / m`
    MinimalLengthQuartic { mass: f64, beta: f64 },
    /// `exp(k p^2)`
    ExponentialQuadratic { stiffness: f64 },
    Custom(CustomProfile),
}

/// Kinetic energy `T(p)`; immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct KineticLaw {
    family: KineticFamily,
}

impl KineticLaw {
    pub fn non_relativistic(mass: f64) -> Result<Self> {
        positive("mass", mass)?;
        Ok(Self {
            family: KineticFamily::NonRelativistic { mass },
        })
    }

    pub fn semi_relativistic(mass: f64) -> Result<Self> {
        if !(mass >= 0.0 && mass.is_finite()) {
            return Err(invalid("mass", format!("must be >= 0, got {mass}")));
        }
        Ok(Self {
            family: KineticFamily::SemiRelativistic { mass },
        })
    }

    pub fn ultra_relativistic() -> Self {
        Self {
            family: KineticFamily::UltraRelativistic,
        }
    }

    pub fn minimal_length_quartic(mass: f64, beta: f64) -> Result<Self> {
        positive("mass", mass)?;
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(invalid("beta", format!("must be >= 0, got {beta}")));
        }
        Ok(Self {
            family: KineticFamily::MinimalLengthQuartic { mass, beta },
        })
    }

    pub fn exponential_quadratic(stiffness: f64) -> Result<Self> {
        positive("stiffness", stiffness)?;
        Ok(Self {
            family: KineticFamily::ExponentialQuadratic { stiffness },
        })
    }

    pub fn custom(profile: CustomProfile) -> Self {
        Self {
            family: KineticFamily::Custom(profile),
        }
    }

    pub fn family(&self) -> &KineticFamily {
        &self.family
    }

    /// Particle mass for families that carry one.
    pub fn mass(&self) -> Option<f64> {
        match self.family {
            KineticFamily::NonRelativistic { mass }
            | KineticFamily::SemiRelativistic { mass }
            | KineticFamily::MinimalLengthQuartic { mass, .. } => Some(mass),
            _ => None,
        }
    }

    /// The same function of its argument, usable as a potential. Used for
    /// the momentum/position swap.
    pub fn as_potential(&self) -> PotentialLaw {
        let law = self.clone();
        PotentialLaw::custom(CustomProfile::new(
            format!("swapped {}", self.family_name()),
            SwappedProfile(Arc::new(law)),
        ))
    }
}

impl Term for KineticLaw {
    fn family_name(&self) -> &'static str {
        match self.family {
            KineticFamily::NonRelativistic { .. } => "NonRelativistic",
            KineticFamily::SemiRelativistic { .. } => "SemiRelativistic",
            KineticFamily::UltraRelativistic => "UltraRelativistic",
            KineticFamily::MinimalLengthQuartic { .. } => "MinimalLengthQuartic",
            KineticFamily::ExponentialQuadratic { .. } => "ExponentialQuadratic",
            KineticFamily::Custom(_) => "CustomKinetic",
        }
    }

    fn accepts_role(&self, role: BRole) -> bool {
        role == BRole::KineticSquared
    }

    fn raw_value(&self, p: f64) -> f64 {
        match &self.family {
            KineticFamily::NonRelativistic { mass } => p * p / (2.0 * mass),
            KineticFamily::SemiRelativistic { mass } => p.hypot(*mass),
            KineticFamily::UltraRelativistic => p,
            KineticFamily::MinimalLengthQuartic { mass, beta } => {
                let p2 = p * p;
                p2 / (2.0 * mass) + beta * p2 * p2 / mass
            }
            KineticFamily::ExponentialQuadratic { stiffness } => (stiffness * p * p).exp(),
            KineticFamily::Custom(c) => c.value(p),
        }
    }

    fn raw_derivative(&self, p: f64) -> f64 {
        match &self.family {
            KineticFamily::NonRelativistic { mass } => p / mass,
            KineticFamily::SemiRelativistic { mass } => p / p.hypot(*mass),
            KineticFamily::UltraRelativistic => 1.0,
            KineticFamily::MinimalLengthQuartic { mass, beta } => {
                p / mass + 4.0 * beta * p * p * p / mass
            }
            KineticFamily::ExponentialQuadratic { stiffness } => {
                2.0 * stiffness * p * (stiffness * p * p).exp()
            }
            KineticFamily::Custom(c) => c.derivative(p),
        }
    }

    fn analytic_b_second(&self, _role: BRole, s: f64) -> Option<f64> {
        match self.family {
            KineticFamily::NonRelativistic { .. } => Some(0.0),
            KineticFamily::MinimalLengthQuartic { mass, beta } => Some(2.0 * beta / mass),
            KineticFamily::ExponentialQuadratic { stiffness } => {
                Some(stiffness * stiffness * (stiffness * s).exp())
            }
            _ => None,
        }
    }

    fn curvature_tag(&self, _role: BRole) -> Option<Convexity> {
        match self.family {
            KineticFamily::NonRelativistic { .. } => Some(Convexity::Linear),
            KineticFamily::MinimalLengthQuartic { beta, .. } => Some(curvature_of(beta)),
            KineticFamily::ExponentialQuadratic { .. } => Some(Convexity::Convex),
            KineticFamily::SemiRelativistic { .. } | KineticFamily::UltraRelativistic => {
                Some(Convexity::Concave)
            }
            KineticFamily::Custom(_) => None,
        }
    }
}

// ---------------------------------------------------------------------------
// Potential laws

#[derive(Debug, Clone, PartialEq)]
pub enum PotentialFamily {
    /// `A x^q`
    PowerLaw { amplitude: f64, exponent: f64 },
    /// `-a / x`
    Coulomb { strength: f64 },
    /// `c sqrt(x^2 + beta)`
    SquareRootWell { offset: f64, scale: f64 },
    /// `c ln x`
    Logarithmic { scale: f64 },
    /// `-g exp(-x/R) / (x/R)`
    Yukawa { coupling: f64, range: f64 },
    /// `-g exp(-x/R)`
    Exponential { coupling: f64, range: f64 },
    /// `-g exp(-(x/R)^2)`
    Gaussian { coupling: f64, range: f64 },
    Custom(CustomProfile),
}

/// One-body or two-body potential `W(x)`; immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialLaw {
    family: PotentialFamily,
}

/// Dimensionless well shape `w(y)` of a short-range potential
/// `W(x) = -coupling * w(x / range)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShortRangeShape {
    pub coupling: f64,
    pub range: f64,
    kind: ShapeKind,
}

#[derive(Debug, Clone, PartialEq)]
enum ShapeKind {
    Yukawa,
    Exponential,
    Gaussian,
    Custom(CustomProfile),
}

impl ShortRangeShape {
    pub fn w(&self, y: f64) -> f64 {
        match &self.kind {
            ShapeKind::Yukawa => (-y).exp() / y,
            ShapeKind::Exponential => (-y).exp(),
            ShapeKind::Gaussian => (-y * y).exp(),
            ShapeKind::Custom(c) => -c.value(y),
        }
    }

    pub fn w_prime(&self, y: f64) -> f64 {
        match &self.kind {
            ShapeKind::Yukawa => -(-y).exp() * (1.0 / y + 1.0 / (y * y)),
            ShapeKind::Exponential => -(-y).exp(),
            ShapeKind::Gaussian => -2.0 * y * (-y * y).exp(),
            ShapeKind::Custom(c) => -c.derivative(y),
        }
    }
}

impl PotentialLaw {
    pub fn power_law(amplitude: f64, exponent: f64) -> Result<Self> {
        if amplitude == 0.0 || !amplitude.is_finite() {
            return Err(invalid("amplitude", "must be finite and non-zero"));
        }
        if !(exponent > -2.0 && exponent.is_finite()) {
            return Err(invalid("exponent", format!("must be > -2, got {exponent}")));
        }
        Ok(Self {
            family: PotentialFamily::PowerLaw {
                amplitude,
                exponent,
            },
        })
    }

    pub fn coulomb(strength: f64) -> Result<Self> {
        positive("strength", strength)?;
        Ok(Self {
            family: PotentialFamily::Coulomb { strength },
        })
    }

    pub fn square_root_well(offset: f64, scale: f64) -> Result<Self> {
        if !(offset >= 0.0 && offset.is_finite()) {
            return Err(invalid("offset", format!("must be >= 0, got {offset}")));
        }
        if scale == 0.0 || !scale.is_finite() {
            return Err(invalid("scale", "must be finite and non-zero"));
        }
        Ok(Self {
            family: PotentialFamily::SquareRootWell { offset, scale },
        })
    }

    pub fn logarithmic(scale: f64) -> Result<Self> {
        if scale == 0.0 || !scale.is_finite() {
            return Err(invalid("scale", "must be finite and non-zero"));
        }
        Ok(Self {
            family: PotentialFamily::Logarithmic { scale },
        })
    }

    pub fn yukawa(coupling: f64, range: f64) -> Result<Self> {
        positive("coupling", coupling)?;
        positive("range", range)?;
        Ok(Self {
            family: PotentialFamily::Yukawa { coupling, range },
        })
    }

    pub fn exponential(coupling: f64, range: f64) -> Result<Self> {
        if coupling == 0.0 || !coupling.is_finite() {
            return Err(invalid("coupling", "must be finite and non-zero"));
        }
        positive("range", range)?;
        Ok(Self {
            family: PotentialFamily::Exponential { coupling, range },
        })
    }

    pub fn gaussian(coupling: f64, range: f64) -> Result<Self> {
        if coupling == 0.0 || !coupling.is_finite() {
            return Err(invalid("coupling", "must be finite and non-zero"));
        }
        positive("range", range)?;
        Ok(Self {
            family: PotentialFamily::Gaussian { coupling, range },
        })
    }

    pub fn custom(profile: CustomProfile) -> Self {
        Self {
            family: PotentialFamily::Custom(profile),
        }
    }

    pub fn family(&self) -> &PotentialFamily {
        &self.family
    }

    /// True for wells `W = -g w(x/R)` with `g > 0` and `w -> 0` at infinity.
    pub fn is_short_range(&self) -> bool {
        self.short_range_shape().is_some()
    }

    pub fn short_range_shape(&self) -> Option<ShortRangeShape> {
        let (coupling, range, kind) = match &self.family {
            PotentialFamily::Yukawa { coupling, range } => (*coupling, *range, ShapeKind::Yukawa),
            PotentialFamily::Exponential { coupling, range } if *coupling > 0.0 => {
                (*coupling, *range, ShapeKind::Exponential)
            }
            PotentialFamily::Gaussian { coupling, range } if *coupling > 0.0 => {
                (*coupling, *range, ShapeKind::Gaussian)
            }
            PotentialFamily::Custom(c) if c.short_range => (1.0, 1.0, ShapeKind::Custom(c.clone())),
            _ => return None,
        };
        Some(ShortRangeShape {
            coupling,
            range,
            kind,
        })
    }

    /// The same function of its argument, usable as a kinetic energy.
    pub fn as_kinetic(&self) -> KineticLaw {
        let law = self.clone();
        KineticLaw::custom(CustomProfile::new(
            format!("swapped {}", self.family_name()),
            SwappedProfile(Arc::new(law)),
        ))
    }

    fn power_form(&self) -> Option<(f64, f64)> {
        match self.family {
            PotentialFamily::PowerLaw {
                amplitude,
                exponent,
            } => Some((amplitude, exponent)),
            PotentialFamily::Coulomb { strength } => Some((-strength, -1.0)),
            _ => None,
        }
    }
}

impl Term for PotentialLaw {
    fn family_name(&self) -> &'static str {
        match self.family {
            PotentialFamily::PowerLaw { .. } => "PowerLaw",
            PotentialFamily::Coulomb { .. } => "Coulomb",
            PotentialFamily::SquareRootWell { .. } => "SquareRootWell",
            PotentialFamily::Logarithmic { .. } => "Logarithmic",
            PotentialFamily::Yukawa { .. } => "Yukawa",
            PotentialFamily::Exponential { .. } => "Exponential",
            PotentialFamily::Gaussian { .. } => "Gaussian",
            PotentialFamily::Custom(_) => "CustomPotential",
        }
    }

    fn accepts_role(&self, role: BRole) -> bool {
        match role {
            BRole::KineticSquared => false,
            BRole::PotentialSquared => true,
            BRole::PotentialAuxiliary(lambda) => lambda != 0.0 && lambda > -2.0,
        }
    }

    fn raw_value(&self, x: f64) -> f64 {
        match &self.family {
            PotentialFamily::PowerLaw {
                amplitude,
                exponent,
            } => amplitude * x.powf(*exponent),
            PotentialFamily::Coulomb { strength } => -strength / x,
            PotentialFamily::SquareRootWell { offset, scale } => scale * (x * x + offset).sqrt(),
            PotentialFamily::Logarithmic { scale } => scale * x.ln(),
            PotentialFamily::Yukawa { coupling, range } => {
                let y = x / range;
                -coupling * (-y).exp() / y
            }
            PotentialFamily::Exponential { coupling, range } => -coupling * (-x / range).exp(),
            PotentialFamily::Gaussian { coupling, range } => {
                let y = x / range;
                -coupling * (-y * y).exp()
            }
            PotentialFamily::Custom(c) => c.value(x),
        }
    }

    fn raw_derivative(&self, x: f64) -> f64 {
        match &self.family {
            PotentialFamily::PowerLaw {
                amplitude,
                exponent,
            } => amplitude * exponent * x.powf(exponent - 1.0),
            PotentialFamily::Coulomb { strength } => strength / (x * x),
            PotentialFamily::SquareRootWell { offset, scale } => {
                scale * x / (x * x + offset).sqrt()
            }
            PotentialFamily::Logarithmic { scale } => scale / x,
            PotentialFamily::Yukawa { coupling, range } => {
                let y = x / range;
                coupling * (-y).exp() * (1.0 / y + 1.0 / (y * y)) / range
            }
            PotentialFamily::Exponential { coupling, range } => {
                coupling * (-x / range).exp() / range
            }
            PotentialFamily::Gaussian { coupling, range } => {
                let y = x / range;
                2.0 * coupling * y * (-y * y).exp() / range
            }
            PotentialFamily::Custom(c) => c.derivative(x),
        }
    }

    fn analytic_b_second(&self, role: BRole, s: f64) -> Option<f64> {
        let (amplitude, exponent) = self.power_form()?;
        let a = match role {
            BRole::PotentialSquared => exponent / 2.0,
            BRole::PotentialAuxiliary(lambda) => exponent / lambda,
            BRole::KineticSquared => return None,
        };
        let coefficient = amplitude * a * (a - 1.0);
        if coefficient == 0.0 {
            return Some(0.0);
        }
        Some(coefficient * s.abs().powf(a - 2.0))
    }

    fn curvature_tag(&self, role: BRole) -> Option<Convexity> {
        if let Some((amplitude, exponent)) = self.power_form() {
            let a = match role {
                BRole::PotentialSquared => exponent / 2.0,
                BRole::PotentialAuxiliary(lambda) => exponent / lambda,
                BRole::KineticSquared => return None,
            };
            return Some(curvature_of(amplitude * a * (a - 1.0)));
        }
        match (&self.family, role) {
            (PotentialFamily::SquareRootWell { scale, .. }, BRole::PotentialSquared)
            | (PotentialFamily::SquareRootWell { scale, .. }, BRole::PotentialAuxiliary(2.0)) => {
                Some(curvature_of(-scale))
            }
            (PotentialFamily::Logarithmic { scale }, BRole::PotentialSquared) => {
                Some(curvature_of(-scale))
            }
            (PotentialFamily::Logarithmic { scale }, BRole::PotentialAuxiliary(lambda)) => {
                Some(curvature_of(-scale / lambda))
            }
            _ => None,
        }
    }
}

/// Adapter exposing a law as a bare profile.
struct SwappedProfile<L>(Arc<L>);

impl<L: Term + Send + Sync> Profile for SwappedProfile<L> {
    fn value(&self, x: f64) -> f64 {
        self.0.raw_value(x)
    }

    fn derivative(&self, x: f64) -> f64 {
        self.0.raw_derivative(x)
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, format!("must be > 0, got {v}")))
    }
}

// ---------------------------------------------------------------------------
// System and state records

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistics {
    Boson,
    Fermion { degeneracy: u32 },
    Unspecified,
}

/// N identical particles in D dimensions with one- and/or two-body forces.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    n: u32,
    dim: u32,
    kinetic: KineticLaw,
    onebody: Option<PotentialLaw>,
    twobody: Option<PotentialLaw>,
    statistics: Statistics,
}

impl SystemSpec {
    pub fn new(
        n: u32,
        dim: u32,
        kinetic: KineticLaw,
        onebody: Option<PotentialLaw>,
        twobody: Option<PotentialLaw>,
        statistics: Statistics,
    ) -> Result<Self> {
        if n < 2 {
            return Err(invalid("N", format!("must be >= 2, got {n}")));
        }
        if dim < 2 {
            return Err(invalid("D", format!("must be >= 2, got {dim}")));
        }
        if onebody.is_none() && twobody.is_none() {
            return Err(invalid("potential", "one-body or two-body law required"));
        }
        if let Statistics::Fermion { degeneracy: 0 } = statistics {
            return Err(invalid("degeneracy", "must be >= 1"));
        }
        Ok(Self {
            n,
            dim,
            kinetic,
            onebody,
            twobody,
            statistics,
        })
    }

    /// Two-body-only system of bosons, the most common setup.
    pub fn two_body(n: u32, dim: u32, kinetic: KineticLaw, twobody: PotentialLaw) -> Result<Self> {
        Self::new(n, dim, kinetic, None, Some(twobody), Statistics::Boson)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn kinetic(&self) -> &KineticLaw {
        &self.kinetic
    }

    pub fn onebody(&self) -> Option<&PotentialLaw> {
        self.onebody.as_ref()
    }

    pub fn twobody(&self) -> Option<&PotentialLaw> {
        self.twobody.as_ref()
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    /// Number of particle pairs `N(N-1)/2`.
    pub fn pair_count(&self) -> f64 {
        pair_count(self.n)
    }

    pub fn with_n(&self, n: u32) -> Result<Self> {
        Self::new(
            n,
            self.dim,
            self.kinetic.clone(),
            self.onebody.clone(),
            self.twobody.clone(),
            self.statistics,
        )
    }

    pub fn check_state(&self, state: &StateSpec) -> Result<()> {
        if state.particle_count() != self.n {
            return Err(invalid(
                "state",
                format!(
                    "expected {} quantum-number pairs, got {}",
                    self.n - 1,
                    state.quanta().len()
                ),
            ));
        }
        Ok(())
    }
}

pub fn pair_count(n: u32) -> f64 {
    let n = f64::from(n);
    n * (n - 1.0) / 2.0
}

/// Oscillator quantum numbers `(n_i, l_i)` for the N - 1 Jacobi modes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSpec {
    quanta: Vec<(u32, u32)>,
}

impl StateSpec {
    pub fn new(quanta: Vec<(u32, u32)>) -> Result<Self> {
        if quanta.is_empty() {
            return Err(Error::EmptyState);
        }
        Ok(Self { quanta })
    }

    /// All modes in their ground state.
    pub fn ground(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(invalid("N", format!("must be >= 2, got {n}")));
        }
        Self::new(vec![(0, 0); (n - 1) as usize])
    }

    pub fn quanta(&self) -> &[(u32, u32)] {
        &self.quanta
    }

    pub fn particle_count(&self) -> u32 {
        self.quanta.len() as u32 + 1
    }
}

/// One stationary point of the envelope system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryRoot {
    pub r0: f64,
    pub p0: f64,
    pub energy: f64,
}

/// Envelope approximation of one eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeSolution {
    pub energy: f64,
    /// Mean N-scaled radius.
    pub r0: f64,
    /// Mean momentum per particle.
    pub p0: f64,
    pub q: QValue,
    pub bound: ConvexityVerdict,
    /// Every stationary point found, ordered by increasing radius.
    pub roots: Vec<StationaryRoot>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn eval_examples() {
        let nr = KineticLaw::non_relativistic(1.0).unwrap();
        assert_eq!(eval_term(&nr, 2.0, EvalMode::Value).unwrap(), 2.0);
        let c = PotentialLaw::coulomb(1.0).unwrap();
        assert_eq!(eval_term(&c, 0.5, EvalMode::FirstDerivative).unwrap(), 4.0);
        let ml = KineticLaw::minimal_length_quartic(1.0, 0.1).unwrap();
        assert!(close(eval_term(&ml, 1.0, EvalMode::Value).unwrap(), 0.6, 1e-15));
    }

    #[test]
    fn b_second_examples() {
        let nr = KineticLaw::non_relativistic(1.0).unwrap();
        assert_eq!(b_second_derivative(&nr, BRole::KineticSquared, 3.0).unwrap(), 0.0);
        let c = PotentialLaw::coulomb(1.0).unwrap();
        let d2 = b_second_derivative(&c, BRole::PotentialSquared, 4.0).unwrap();
        assert!(close(d2, -0.0234375, 1e-14));
        let ex = KineticLaw::exponential_quadratic(1.0).unwrap();
        let d2 = b_second_derivative(&ex, BRole::KineticSquared, 1.0).unwrap();
        assert!(close(d2, std::f64::consts::E, 1e-14));
    }

    #[test]
    fn non_positive_argument_is_rejected() {
        let nr = KineticLaw::non_relativistic(1.0).unwrap();
        assert_eq!(nr.value(0.0), Err(Error::NonPositiveArgument(0.0)));
        assert_eq!(nr.value(-1.0), Err(Error::NonPositiveArgument(-1.0)));
    }

    #[test]
    fn role_mismatch() {
        let nr = KineticLaw::non_relativistic(1.0).unwrap();
        assert!(matches!(
            nr.b_second_derivative(BRole::PotentialSquared, 1.0),
            Err(Error::RoleMismatch { .. })
        ));
        let c = PotentialLaw::coulomb(1.0).unwrap();
        assert!(matches!(
            c.b_second_derivative(BRole::KineticSquared, 1.0),
            Err(Error::RoleMismatch { .. })
        ));
    }

    #[test]
    fn auxiliary_domain_follows_sign_of_lambda() {
        let c = PotentialLaw::coulomb(1.0).unwrap();
        // P(x) = -x^-1 is negative, so positive arguments are outside the image.
        assert!(matches!(
            c.b_second_derivative(BRole::PotentialAuxiliary(-1.0), 0.5),
            Err(Error::EvaluationDomain { .. })
        ));
        // Coulomb under its own auxiliary is linear.
        assert_eq!(
            c.b_second_derivative(BRole::PotentialAuxiliary(-1.0), -0.5).unwrap(),
            0.0
        );
    }

    #[test]
    fn finite_difference_b_matches_closed_form() {
        // b(s) = sqrt(s + m^2) has b'' = -(s + m^2)^(-3/2) / 4.
        let sr = KineticLaw::semi_relativistic(1.0).unwrap();
        let s = 2.5;
        let d2 = sr.b_second_derivative(BRole::KineticSquared, s).unwrap();
        let exact = -0.25 * (s + 1.0_f64).powf(-1.5);
        assert!((d2 - exact).abs() < 1e-6 * exact.abs());

        let well = PotentialLaw::square_root_well(0.1, 1.0).unwrap();
        let d2 = well.b_second_derivative(BRole::PotentialSquared, s).unwrap();
        let exact = -0.25 * (s + 0.1_f64).powf(-1.5);
        assert!((d2 - exact).abs() < 1e-6 * exact.abs());
    }

    #[test]
    fn constructors_validate() {
        assert!(KineticLaw::non_relativistic(0.0).is_err());
        assert!(KineticLaw::semi_relativistic(0.0).is_ok());
        assert!(PotentialLaw::power_law(1.0, -2.0).is_err());
        assert!(PotentialLaw::power_law(0.0, 1.0).is_err());
        let nr = KineticLaw::non_relativistic(1.0).unwrap();
        assert!(SystemSpec::new(3, 3, nr.clone(), None, None, Statistics::Boson).is_err());
        assert!(SystemSpec::two_body(1, 3, nr.clone(), PotentialLaw::coulomb(1.0).unwrap()).is_err());
        assert!(SystemSpec::two_body(3, 1, nr, PotentialLaw::coulomb(1.0).unwrap()).is_err());
        assert_eq!(StateSpec::new(vec![]), Err(Error::EmptyState));
    }

    #[test]
    fn short_range_flag() {
        assert!(PotentialLaw::yukawa(1.0, 1.0).unwrap().is_short_range());
        assert!(PotentialLaw::exponential(1.0, 1.0).unwrap().is_short_range());
        assert!(!PotentialLaw::exponential(-1.0, 1.0).unwrap().is_short_range());
        assert!(!PotentialLaw::coulomb(1.0).unwrap().is_short_range());
        let custom = CustomProfile::new("well", |x: f64| -(-x).exp()).short_range();
        assert!(PotentialLaw::custom(custom).is_short_range());
    }

    #[test]
    fn verdict_aggregation() {
        use Convexity::*;
        let v = |terms: &[(TermRole, Convexity)]| {
            ConvexityVerdict::from_terms(terms.iter().copied().collect()).classification
        };
        assert_eq!(v(&[(TermRole::Kinetic, Linear), (TermRole::TwoBody, Linear)]), BoundKind::Exact);
        assert_eq!(v(&[(TermRole::Kinetic, Linear), (TermRole::TwoBody, Concave)]), BoundKind::UpperBound);
        assert_eq!(v(&[(TermRole::Kinetic, Convex), (TermRole::TwoBody, Linear)]), BoundKind::LowerBound);
        assert_eq!(v(&[(TermRole::Kinetic, Convex), (TermRole::TwoBody, Concave)]), BoundKind::Unknown);
        assert_eq!(v(&[(TermRole::Kinetic, Mixed), (TermRole::TwoBody, Linear)]), BoundKind::Unknown);
    }

    #[test]
    fn swapped_laws_evaluate_identically() {
        let ex = KineticLaw::exponential_quadratic(0.3).unwrap();
        let pot = ex.as_potential();
        for x in [0.1, 1.0, 2.5] {
            assert_eq!(pot.value(x).unwrap(), ex.value(x).unwrap());
            assert_eq!(pot.derivative(x).unwrap(), ex.derivative(x).unwrap());
        }
    }
}
