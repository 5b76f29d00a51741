//! Envelope-theory approximations for N identical particles in D ≥ 2
//! dimensions.
//!
//! A Hamiltonian `Σ T(p_i) + Σ U(|r_i - R|) + Σ_{i<j} V(|r_i - r_j|)` is
//! replaced by coupled harmonic oscillators whose parameters are optimized.
//! The resulting eigenvalue reduces to one transcendental equation in a
//! mean radius `r0`, and the convexity of the terms as functions of `x²`
//! decides whether it is an upper or a lower bound.
//!
//! ```
//! use envelope::model::{KineticLaw, PotentialLaw, SystemSpec};
//! use envelope::qnum::q_boson_ground;
//! use envelope::solver::{solve_nbody, SolverConfig};
//!
//! let spec = SystemSpec::two_body(
//!     3,
//!     3,
//!     KineticLaw::non_relativistic(1.0)?,
//!     PotentialLaw::power_law(0.5, 2.0)?,
//! )?;
//! let sol = solve_nbody(&spec, q_boson_ground(3, 3)?, &SolverConfig::default())?;
//! assert!((sol.energy - 3.0 * 3f64.sqrt()).abs() < 1e-12);
//! # Ok::<(), envelope::Error>(())
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod apps;
mod error;
pub mod model;
mod numeric;
pub mod oracle;
pub mod qnum;
pub mod solver;

pub use error::{Error, Result};
