//! Global quantum number `Q`.
//!
//! The envelope energy depends on the quantum numbers only through `Q`.
//! For N bodies it is the principal number of the auxiliary oscillator
//! tower; for one- and two-body problems it is fixed by the auxiliary
//! power-law potential and is known in closed form only for a few exponents.

mod airy;

pub use airy::{airy_ai, airy_zero};

use crate::error::{invalid, Error, Result};
use crate::model::StateSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QProvenance {
    OscillatorTower,
    BosonGroundState,
    FermionAsymptotic,
    CoulombExact,
    HarmonicExact,
    AiryLinear,
    UserDefined,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QValue {
    value: f64,
    provenance: QProvenance,
}

impl QValue {
    fn new(value: f64, provenance: QProvenance) -> Self {
        debug_assert!(value > 0.0);
        Self { value, provenance }
    }

    /// Caller-supplied Q, e.g. fitted from the auxiliary energy formula.
    pub fn user_defined(value: f64) -> Result<Self> {
        if value > 0.0 && value.is_finite() {
            Ok(Self::new(value, QProvenance::UserDefined))
        } else {
            Err(invalid("Q", format!("must be > 0, got {value}")))
        }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn provenance(&self) -> QProvenance {
        self.provenance
    }
}

/// `Σ (2 n_i + l_i) + (N - 1) D / 2`.
pub fn q_from_quanta(state: &StateSpec, dim: u32) -> Result<QValue> {
    if state.quanta().is_empty() {
        return Err(Error::EmptyState);
    }
    check_dim(dim)?;
    let excitation: u64 = state
        .quanta()
        .iter()
        .map(|&(n, l)| 2 * u64::from(n) + u64::from(l))
        .sum();
    let modes = state.quanta().len() as f64;
    Ok(QValue::new(
        excitation as f64 + modes * f64::from(dim) / 2.0,
        QProvenance::OscillatorTower,
    ))
}

/// Bosonic ground state, `(N - 1) D / 2`.
pub fn q_boson_ground(n: u32, dim: u32) -> Result<QValue> {
    if n < 2 {
        return Err(invalid("N", format!("must be >= 2, got {n}")));
    }
    check_dim(dim)?;
    Ok(QValue::new(
        f64::from(n - 1) * f64::from(dim) / 2.0,
        QProvenance::BosonGroundState,
    ))
}

/// Large-N fermionic ground state `D/(D+1) (D! N^(D+1) / d)^(1/D)`.
///
/// Only the N → ∞ asymptotic; at small N it is a rough estimate.
pub fn q_fermion_asymptotic(n: u32, dim: u32, degeneracy: u32) -> Result<QValue> {
    if n < 2 {
        return Err(invalid("N", format!("must be >= 2, got {n}")));
    }
    check_dim(dim)?;
    if degeneracy == 0 {
        return Err(invalid("degeneracy", "must be >= 1"));
    }
    let d = f64::from(dim);
    let ln_factorial: f64 = (2..=dim).map(|k| f64::from(k).ln()).sum();
    let ln_inner = ln_factorial + (d + 1.0) * f64::from(n).ln() - f64::from(degeneracy).ln();
    Ok(QValue::new(
        d / (d + 1.0) * (ln_inner / d).exp(),
        QProvenance::FermionAsymptotic,
    ))
}

/// Exact Q of the one/two-body auxiliary potential `sgn(λ) r^λ`, where known.
pub fn q_two_body_auxiliary(lambda: f64, n: u32, l: u32, dim: u32) -> Result<QValue> {
    check_dim(dim)?;
    let (n_f, l_f, d) = (f64::from(n), f64::from(l), f64::from(dim));
    if lambda == -1.0 {
        Ok(QValue::new(n_f + l_f + (d - 1.0) / 2.0, QProvenance::CoulombExact))
    } else if lambda == 2.0 {
        Ok(QValue::new(2.0 * n_f + l_f + d / 2.0, QProvenance::HarmonicExact))
    } else if lambda == 1.0 && dim == 3 && l == 0 {
        let alpha = airy_zero(n as usize);
        Ok(QValue::new(
            2.0 * (-alpha / 3.0).powf(1.5),
            QProvenance::AiryLinear,
        ))
    } else {
        Err(Error::UnsupportedAuxiliary { lambda, l, dim })
    }
}

fn check_dim(dim: u32) -> Result<()> {
    if dim < 2 {
        Err(invalid("D", format!("must be >= 2, got {dim}")))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(q: &[(u32, u32)]) -> StateSpec {
        StateSpec::new(q.to_vec()).unwrap()
    }

    #[test]
    fn quanta_examples() {
        assert_eq!(q_from_quanta(&state(&[(0, 0), (0, 0)]), 3).unwrap().value(), 3.0);
        assert_eq!(q_from_quanta(&state(&[(1, 2)]), 4).unwrap().value(), 6.0);
        assert_eq!(
            q_from_quanta(&state(&[(0, 1), (2, 0), (0, 0)]), 2).unwrap().value(),
            8.0
        );
        assert_eq!(
            q_from_quanta(&state(&[(0, 0)]), 3).unwrap().provenance(),
            QProvenance::OscillatorTower
        );
    }

    #[test]
    fn boson_examples() {
        assert_eq!(q_boson_ground(2, 3).unwrap().value(), 1.5);
        assert_eq!(q_boson_ground(10, 2).unwrap().value(), 9.0);
        assert_eq!(q_boson_ground(3, 5).unwrap().value(), 5.0);
    }

    #[test]
    fn fermion_examples() {
        // mpmath: 0.75 * (3e12)^(1/3) and (2/3) * (2e6)^(1/2)
        let q = q_fermion_asymptotic(1000, 3, 2).unwrap().value();
        assert!((q - 10_816.871_777_305_563).abs() < 1e-9 * q);
        let q = q_fermion_asymptotic(100, 2, 1).unwrap().value();
        assert!((q - 942.809_041_582_063_4).abs() < 1e-10 * q);
        let q1 = q_fermion_asymptotic(50, 3, 1).unwrap().value();
        let q2 = q_fermion_asymptotic(50, 3, 2).unwrap().value();
        assert!((q1 / q2 - 2f64.powf(1.0 / 3.0)).abs() < 1e-13);
    }

    #[test]
    fn auxiliary_examples() {
        assert_eq!(q_two_body_auxiliary(-1.0, 0, 0, 3).unwrap().value(), 1.0);
        assert_eq!(q_two_body_auxiliary(2.0, 1, 1, 4).unwrap().value(), 5.0);
        let q = q_two_body_auxiliary(1.0, 0, 0, 3).unwrap();
        assert_eq!(q.provenance(), QProvenance::AiryLinear);
        assert!((q.value() - 1.376_083_543_343_775).abs() < 1e-12);
    }

    #[test]
    fn unsupported_auxiliary() {
        assert!(matches!(
            q_two_body_auxiliary(1.0, 0, 1, 3),
            Err(Error::UnsupportedAuxiliary { .. })
        ));
        assert!(matches!(
            q_two_body_auxiliary(1.0, 0, 0, 2),
            Err(Error::UnsupportedAuxiliary { .. })
        ));
        assert!(matches!(
            q_two_body_auxiliary(0.5, 0, 0, 3),
            Err(Error::UnsupportedAuxiliary { .. })
        ));
    }

    #[test]
    fn user_defined_rejects_non_positive() {
        assert!(QValue::user_defined(0.0).is_err());
        assert_eq!(
            QValue::user_defined(2.0).unwrap().provenance(),
            QProvenance::UserDefined
        );
    }
}
