//! Independent reference results: the exact spectrum of N coupled
//! oscillators, a numerical radial eigensolver in D dimensions, and the
//! semiclassical circle/simplex pictures of the envelope equations.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::model::{pair_count, EnvelopeSolution, PotentialLaw, StateSpec, SystemSpec, Term};
use crate::qnum::q_from_quanta;

/// Exact eigenvalue of
/// `Σ p_i²/2μ + ν Σ (r_i - R)² + ρ Σ_{i<j} (r_i - r_j)²`.
///
/// `Σ_{i<j} (r_i - r_j)² = N Σ_i (r_i - R)²`, so the Hamiltonian is a single
/// oscillator tower of frequency `ω = sqrt(2 (ν + N ρ) / μ)` in the N - 1
/// Jacobi coordinates, and the eigenvalue is `ω Q`.
pub fn harmonic_exact(n: u32, dim: u32, mu: f64, nu: f64, rho: f64, state: &StateSpec) -> Result<f64> {
    if state.particle_count() != n {
        return Err(invalid("state", format!("needs {} quantum-number pairs", n.saturating_sub(1))));
    }
    if !(mu > 0.0) {
        return Err(invalid("mu", format!("must be > 0, got {mu}")));
    }
    let stiffness = nu + f64::from(n) * rho;
    if !(stiffness > 0.0) {
        return Err(Error::UnboundOscillator(stiffness));
    }
    let q = q_from_quanta(state, dim)?;
    Ok((2.0 * stiffness / mu).sqrt() * q.value())
}

/// Radial problem `-(1/2μ) Δ + V(r)` in D dimensions at fixed angular momentum.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProblem {
    pub mu: f64,
    pub potential: PotentialLaw,
    pub dim: u32,
    pub l: u32,
    pub r_max: f64,
    pub points: usize,
}

/// Largest grid the convergence loop will try.
const MAX_POINTS: usize = 1 << 21;

/// Relative agreement required between successive grids.
const GRID_AGREEMENT: f64 = 1e-6;

impl RadialProblem {
    pub fn new(mu: f64, potential: PotentialLaw, dim: u32, l: u32, r_max: f64, points: usize) -> Result<Self> {
        if !(mu > 0.0) {
            return Err(invalid("mu", format!("must be > 0, got {mu}")));
        }
        if dim < 2 {
            return Err(invalid("D", format!("must be >= 2, got {dim}")));
        }
        if !(r_max > 0.0 && r_max.is_finite()) {
            return Err(invalid("r_max", format!("must be > 0, got {r_max}")));
        }
        if points < 200 {
            return Err(invalid("points", format!("must be >= 200, got {points}")));
        }
        Ok(Self {
            mu,
            potential,
            dim,
            l,
            r_max,
            points,
        })
    }

    /// Default grid: 4000 points out to 25 times the envelope radius `r0`,
    /// cut short where the potential is already far above its value at `r0`.
    pub fn around_envelope(mu: f64, potential: PotentialLaw, dim: u32, l: u32, r0: f64) -> Result<Self> {
        let v0 = potential.value(r0)?;
        let wall = v0 + 1e3 * (1.0 + v0.abs());
        let too_high = |r: f64| potential.value(r).map_or(true, |v| v > wall);
        let mut r_max = 25.0 * r0;
        if too_high(r_max) {
            let (mut lo, mut hi) = (r0, r_max);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if too_high(mid) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            r_max = hi;
        }
        Self::new(mu, potential, dim, l, r_max, 4000)
    }

    /// Symmetric tridiagonal (diagonal, off-diagonal) of the discretized
    /// operator on `points` cells.
    ///
    /// The radial function `R(r)` is discretized in flux form,
    /// `-(1/2μ) r^{1-D} (r^{D-1} R')' + [l(l+D-2)/(2μ r²) + V] R`, on cell
    /// centers `r_i = (i + 1/2) h`. With `u = r^{(D-1)/2} R` this is the
    /// reduced operator `-(1/2μ) u'' + [(l(l+D-2) + (D-1)(D-3)/4)/(2μ r²) + V] u`.
    /// The weight at the origin face vanishes and `R = 0` one cell past `r_max`.
    fn matrix(&self, points: usize) -> Result<(Vec<f64>, Vec<f64>)> {
        let h = self.r_max / points as f64;
        let power = f64::from(self.dim) - 1.0;
        let kin = 1.0 / (2.0 * self.mu * h * h);
        let centrifugal = f64::from(self.l) * (f64::from(self.l) + f64::from(self.dim) - 2.0);
        let face = |i: usize| ((i as f64) * h).powf(power);
        let mut diag = Vec::with_capacity(points);
        let mut off = Vec::with_capacity(points.saturating_sub(1));
        for i in 0..points {
            let r = (i as f64 + 0.5) * h;
            let w = r.powf(power);
            let v = self.potential.value(r)?;
            diag.push(kin * (face(i) + face(i + 1)) / w + centrifugal / (2.0 * self.mu * r * r) + v);
            if i + 1 < points {
                let w_next = ((i as f64 + 1.5) * h).powf(power);
                off.push(-kin * face(i + 1) / (w * w_next).sqrt());
            }
        }
        Ok((diag, off))
    }

    /// Fall to the centre: `2μ r² V(r)` stays below minus the Hardy
    /// constant `l(l+D-2) + (D-2)²/4` and does not recover as `r -> 0`.
    fn check_bounded_below(&self) -> Result<()> {
        let d = f64::from(self.dim);
        let l = f64::from(self.l);
        let hardy = l * (l + d - 2.0) + (d - 2.0).powi(2) / 4.0;
        let excess = |r: f64| {
            self.potential
                .value(r)
                .map_or(f64::NEG_INFINITY, |v| 2.0 * self.mu * r * r * v + hardy)
        };
        let (outer, inner) = (excess(1e-9 * self.r_max), excess(1e-12 * self.r_max));
        if outer < -1e-3 && inner <= outer + 1e-9 * outer.abs() {
            return Err(Error::UnboundedBelow);
        }
        Ok(())
    }
}

/// Number of eigenvalues of the symmetric tridiagonal matrix below `x`.
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut d = 1.0;
    for i in 0..diag.len() {
        let b2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        d = diag[i] - x - if i == 0 { 0.0 } else { b2 / d };
        if d == 0.0 {
            d = -f64::EPSILON * (diag[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// `index`-th smallest eigenvalue by Sturm bisection.
fn tridiagonal_eigenvalue(diag: &[f64], off: &[f64], index: usize) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..diag.len() {
        let radius = if i > 0 { off[i - 1].abs() } else { 0.0 }
            + if i < off.len() { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - radius);
        hi = hi.max(diag[i] + radius);
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(diag, off, mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// A converged radial eigenvalue with the two grids it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialEigenvalue {
    /// Richardson extrapolation of the two finest grids.
    pub energy: f64,
    pub coarse: f64,
    pub fine: f64,
    /// Cell count of the finer grid.
    pub points: usize,
}

/// `level`-th eigenvalue (0 = lowest) at fixed `l`. The grid is doubled until
/// two successive grids agree to 1e-6 relative.
pub fn radial_eigenvalue(prob: &RadialProblem, level: usize) -> Result<RadialEigenvalue> {
    let solve = |points: usize| -> Result<f64> {
        let (diag, off) = prob.matrix(points)?;
        if level >= points {
            return Err(invalid("level", "exceeds grid size"));
        }
        Ok(tridiagonal_eigenvalue(&diag, &off, level))
    };
    let mut points = prob.points;
    prob.check_bounded_below()?;
    let mut coarse = solve(points)?;
    while points * 2 <= MAX_POINTS {
        points *= 2;
        let fine = solve(points)?;
        if (fine - coarse).abs() <= GRID_AGREEMENT * fine.abs() {
            return Ok(RadialEigenvalue {
                energy: (4.0 * fine - coarse) / 3.0,
                coarse,
                fine,
                points,
            });
        }
        coarse = fine;
    }
    Err(Error::NotConverged(format!(
        "level {level} did not settle to {GRID_AGREEMENT} by {points} points"
    )))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geometry {
    /// Particles equally spaced on a circle of radius `r0/N`.
    Circle,
    /// Particles at the vertices of a regular simplex (needs D >= N - 1).
    Simplex,
}

/// Classical placement of the particles behind the envelope equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemiclassicalGeometry {
    pub n: u32,
    pub r0: f64,
    /// Orbit radius `r0 / N`.
    pub d0: f64,
    /// Mean chord between particles on the circle.
    pub e0: f64,
    /// Edge of the regular simplex, when it fits in D dimensions.
    pub simplex_edge: Option<f64>,
}

impl SemiclassicalGeometry {
    pub fn new(n: u32, dim: u32, r0: f64) -> Result<Self> {
        if n < 2 {
            return Err(invalid("N", format!("must be >= 2, got {n}")));
        }
        let (e0, _) = mean_separation(n, r0);
        Ok(Self {
            n,
            r0,
            d0: r0 / f64::from(n),
            e0,
            simplex_edge: (dim + 1 >= n).then(|| r0 / pair_count(n).sqrt()),
        })
    }
}

/// Mean chord `e0 = (r0 / C_N) cot(π / 2N)` of N equally spaced points on a
/// circle of radius `r0/N`, and its relative deviation from `r0 / √C_N`.
pub fn mean_separation(n: u32, r0: f64) -> (f64, f64) {
    let c = pair_count(n);
    let e0 = r0 / c / (PI / (2.0 * f64::from(n))).tan();
    let reference = r0 / c.sqrt();
    (e0, (e0 - reference).abs() / reference)
}

/// Relative imbalance `(F_c - F_1 - F_2) / F_c` between the centripetal force
/// of circular motion and the one- and two-body forces at a solution.
pub fn centripetal_balance(spec: &SystemSpec, sol: &EnvelopeSolution, geometry: Geometry) -> Result<f64> {
    let n = spec.n();
    let nf = f64::from(n);
    let (r0, p0) = (sol.r0, sol.p0);
    let centripetal = nf * p0 * spec.kinetic().derivative(p0)? / r0;
    let one_body = match spec.onebody() {
        Some(u) => u.derivative(r0 / nf)?,
        None => 0.0,
    };
    let two_body = match (spec.twobody(), geometry) {
        (None, _) => 0.0,
        (Some(v), Geometry::Circle) => {
            let (e0, _) = mean_separation(n, r0);
            v.derivative(e0)? / (PI / (2.0 * nf)).tan()
        }
        (Some(v), Geometry::Simplex) => {
            if spec.dim() + 1 < n {
                return Err(Error::DimensionTooSmall { n, dim: spec.dim() });
            }
            let sqrt_c = spec.pair_count().sqrt();
            sqrt_c * v.derivative(r0 / sqrt_c)?
        }
    };
    Ok((centripetal - one_body - two_body) / centripetal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CustomProfile, KineticLaw, PotentialLaw};
    use crate::qnum::q_boson_ground;
    use crate::solver::{solve_nbody, SolverConfig};

    #[test]
    fn harmonic_examples() {
        let gs3 = StateSpec::ground(3).unwrap();
        let e = harmonic_exact(3, 3, 1.0, 0.0, 0.5, &gs3).unwrap();
        assert!((e - 3.0 * 3f64.sqrt()).abs() < 1e-14);
        let gs2 = StateSpec::ground(2).unwrap();
        let e = harmonic_exact(2, 3, 1.0, 1.0, 0.0, &gs2).unwrap();
        assert!((e - 1.5 * 2f64.sqrt()).abs() < 1e-14);
        let e4 = harmonic_exact(3, 3, 1.0, 0.4, 2.0, &gs3).unwrap();
        let e1 = harmonic_exact(3, 3, 1.0, 0.1, 0.5, &gs3).unwrap();
        assert!((e4 - 2.0 * e1).abs() < 1e-13);
        assert_eq!(
            harmonic_exact(3, 3, 1.0, -1.0, 0.2, &gs3),
            Err(Error::UnboundOscillator(-1.0 + 3.0 * 0.2))
        );
    }

    #[test]
    fn hydrogen_and_oscillator() {
        let p = RadialProblem::new(1.0, PotentialLaw::coulomb(1.0).unwrap(), 3, 0, 40.0, 4000).unwrap();
        let e = radial_eigenvalue(&p, 0).unwrap();
        assert!((e.energy + 0.5).abs() < 1e-6, "{e:?}");
        let p = RadialProblem::new(1.0, PotentialLaw::power_law(1.0, 2.0).unwrap(), 3, 0, 10.0, 4000).unwrap();
        let e = radial_eigenvalue(&p, 0).unwrap();
        assert!((e.energy - 1.5 * 2f64.sqrt()).abs() < 1e-6, "{e:?}");
    }

    #[test]
    fn linear_potential_matches_airy() {
        let p = RadialProblem::new(1.0, PotentialLaw::power_law(1.0, 1.0).unwrap(), 3, 0, 20.0, 4000).unwrap();
        let e = radial_eigenvalue(&p, 0).unwrap();
        let exact = 0.5f64.powf(1.0 / 3.0) * -crate::qnum::airy_zero(0);
        assert!((e.energy - exact).abs() < 1e-5, "{e:?} vs {exact}");
    }

    #[test]
    fn fall_to_center_is_detected() {
        let inverse_square = |c: f64| PotentialLaw::custom(CustomProfile::new("-c/r^2", move |r: f64| -c / (r * r)));
        let steep = PotentialLaw::custom(CustomProfile::new("-r^-2.5", |r: f64| -0.1 * r.powf(-2.5)));
        for v in [inverse_square(1.0), steep] {
            let p = RadialProblem::new(1.0, v, 3, 0, 10.0, 400).unwrap();
            assert_eq!(radial_eigenvalue(&p, 0), Err(Error::UnboundedBelow));
        }
        // below the Hardy constant, or less singular than r^-2: bounded
        let p = RadialProblem::new(1.0, inverse_square(0.1), 3, 0, 10.0, 400).unwrap();
        assert_ne!(radial_eigenvalue(&p, 0), Err(Error::UnboundedBelow));
        let p = RadialProblem::new(1.0, PotentialLaw::power_law(-5.0, -1.9).unwrap(), 3, 0, 10.0, 400).unwrap();
        assert_ne!(radial_eigenvalue(&p, 0), Err(Error::UnboundedBelow));
        let p = RadialProblem::new(1.0, PotentialLaw::coulomb(1.0).unwrap(), 2, 0, 40.0, 4000).unwrap();
        let e = radial_eigenvalue(&p, 0).unwrap();
        assert!((e.energy + 2.0).abs() < 1e-5, "{e:?}");
    }

    #[test]
    fn problem_validation() {
        let v = PotentialLaw::coulomb(1.0).unwrap();
        assert!(RadialProblem::new(1.0, v.clone(), 3, 0, 10.0, 100).is_err());
        assert!(RadialProblem::new(0.0, v.clone(), 3, 0, 10.0, 400).is_err());
        assert!(RadialProblem::new(1.0, v, 3, 0, -1.0, 400).is_err());
    }

    #[test]
    fn separation_examples() {
        let (e0, dev) = mean_separation(2, 1.0);
        assert!((e0 - 1.0).abs() < 1e-15 && dev < 1e-15);
        let (e0, dev) = mean_separation(3, 1.0);
        assert!((e0 - 1.0 / 3f64.sqrt()).abs() < 1e-15 && dev < 1e-14);
        let (e0, dev) = mean_separation(4, 1.0);
        assert!((e0 - (1.0 + 2f64.sqrt()) / 6.0).abs() < 1e-15);
        assert!((dev - 0.014_401_440_346_511_22).abs() < 1e-12);
    }

    #[test]
    fn simplex_balance_vanishes() {
        let spec = SystemSpec::two_body(
            3,
            3,
            KineticLaw::semi_relativistic(1.0).unwrap(),
            PotentialLaw::power_law(1.0, 1.0).unwrap(),
        )
        .unwrap();
        let sol = solve_nbody(&spec, q_boson_ground(3, 3).unwrap(), &SolverConfig::default()).unwrap();
        let res = centripetal_balance(&spec, &sol, Geometry::Simplex).unwrap();
        assert!(res.abs() <= 1e-12, "{res}");
        let res = centripetal_balance(&spec, &sol, Geometry::Circle).unwrap();
        assert!(res.abs() <= 1e-12, "{res}");
    }

    #[test]
    fn simplex_needs_room() {
        let spec = SystemSpec::two_body(
            5,
            2,
            KineticLaw::non_relativistic(1.0).unwrap(),
            PotentialLaw::power_law(1.0, 2.0).unwrap(),
        )
        .unwrap();
        let sol = solve_nbody(&spec, q_boson_ground(5, 2).unwrap(), &SolverConfig::default()).unwrap();
        assert_eq!(
            centripetal_balance(&spec, &sol, Geometry::Simplex),
            Err(Error::DimensionTooSmall { n: 5, dim: 2 })
        );
        let g = SemiclassicalGeometry::new(5, 2, sol.r0).unwrap();
        assert!(g.simplex_edge.is_none());
    }
}
