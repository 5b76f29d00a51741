use envelope::model::*;
use envelope::oracle::*;
use envelope::qnum::*;
use envelope::solver::{solve_nbody, solve_two_body, SolverConfig};

/// Ai by Taylor stepping of `y'' = x y` from the origin, independent of the
/// library's series/asymptotic split.
fn airy_by_stepping(target: f64) -> f64 {
    const AI0: f64 = 0.355_028_053_887_817_2;
    const AIP0: f64 = -0.258_819_403_792_806_8;
    let steps = (target.abs() / 0.01).ceil().max(1.0) as usize;
    let h = target / steps as f64;
    let (mut y, mut yp) = (AI0, AIP0);
    for i in 0..steps {
        let x0 = i as f64 * h;
        let mut c = [0.0f64; 40];
        c[0] = y;
        c[1] = yp;
        c[2] = x0 * c[0] / 2.0;
        for k in 1..38 {
            c[k + 2] = (x0 * c[k] + c[k - 1]) / ((k + 2) as f64 * (k + 1) as f64);
        }
        let (mut ny, mut nyp, mut hp) = (0.0, 0.0, 1.0);
        for k in 0..40 {
            ny += c[k] * hp;
            if k + 1 < 40 {
                nyp += (k + 1) as f64 * c[k + 1] * hp;
            }
            hp *= h;
        }
        y = ny;
        yp = nyp;
    }
    y
}

#[test]
fn airy_zeros_vanish_under_independent_evaluation() {
    assert!((airy_by_stepping(0.0) - airy_ai(0.0)).abs() < 1e-15);
    assert!((airy_by_stepping(-1.0) - airy_ai(-1.0)).abs() < 1e-12);
    for n in 0..10 {
        let z = airy_zero(n);
        assert!(airy_by_stepping(z).abs() < 1e-10, "zero {n} at {z}");
        if n > 0 {
            assert!(z < airy_zero(n - 1));
        }
    }
}

#[test]
fn coulomb_two_body_matches_radial_oracle() {
    let cfg = SolverConfig::default();
    let (mu, a) = (0.5, 1.0);
    let kinetic = KineticLaw::non_relativistic(mu).unwrap();
    let pot = PotentialLaw::coulomb(a).unwrap();
    for dim in [3u32, 5] {
        for n in 0..2u32 {
            for l in 0..2u32 {
                let q = q_two_body_auxiliary(-1.0, n, l, dim).unwrap();
                let sol = solve_two_body(&kinetic, &pot, -1.0, q, &cfg).unwrap();
                let exact = -mu * a * a / (2.0 * q.value() * q.value());
                assert!((sol.energy - exact).abs() <= 1e-12 * exact.abs());
                let prob = RadialProblem::new(mu, pot.clone(), dim, l, 60.0 * sol.r0, 4000).unwrap();
                let e = radial_eigenvalue(&prob, n as usize).unwrap().energy;
                assert!((e - exact).abs() <= 1e-6 * exact.abs(), "D={dim} n={n} l={l}: {e} vs {exact}");
            }
        }
    }
}

/// N = 2 envelope energy against the relative-motion radial problem.
fn check_side(kinetic: KineticLaw, twobody: PotentialLaw, oracle_mu: f64, oracle_pot: PotentialLaw, swapped: bool, expected: BoundKind) {
    let cfg = SolverConfig::default();
    let dim = 3;
    let spec = SystemSpec::two_body(2, dim, kinetic, twobody).unwrap();
    for (n, l) in [(0u32, 0u32), (1, 0), (0, 1)] {
        let state = StateSpec::new(vec![(n, l)]).unwrap();
        let sol = solve_nbody(&spec, q_from_quanta(&state, dim).unwrap(), &cfg).unwrap();
        assert_eq!(sol.bound.classification, expected);
        let scale = if swapped { sol.p0 } else { sol.r0 };
        let prob = RadialProblem::around_envelope(oracle_mu, oracle_pot.clone(), dim, l, scale).unwrap();
        let e = radial_eigenvalue(&prob, n as usize).unwrap().energy;
        match expected {
            BoundKind::UpperBound => assert!(sol.energy >= e - 1e-8, "({n},{l}) {} < {e}", sol.energy),
            BoundKind::LowerBound => assert!(sol.energy <= e + 1e-8, "({n},{l}) {} > {e}", sol.energy),
            _ => unreachable!(),
        }
    }
}

#[test]
fn bound_direction_holds_for_two_bodies() {
    let m = 1.0;
    let nr = || KineticLaw::non_relativistic(m).unwrap();
    let coulomb = PotentialLaw::coulomb(1.0).unwrap();
    check_side(nr(), coulomb.clone(), m / 2.0, coulomb, false, BoundKind::UpperBound);
    let linear = PotentialLaw::power_law(1.0, 1.0).unwrap();
    check_side(nr(), linear.clone(), m / 2.0, linear, false, BoundKind::UpperBound);
    let cubic = PotentialLaw::power_law(0.5, 3.0).unwrap();
    check_side(nr(), cubic.clone(), m / 2.0, cubic, false, BoundKind::LowerBound);
    let well = PotentialLaw::square_root_well(0.2, 1.0).unwrap();
    check_side(nr(), well.clone(), m / 2.0, well, false, BoundKind::UpperBound);

    // 2 T(p) + r² is solved as p² + 2 T(r).
    let beta = 0.05;
    let quartic = KineticLaw::minimal_length_quartic(m, beta).unwrap();
    let doubled = PotentialLaw::custom(CustomProfile::new("2T", move |r: f64| {
        2.0 * (r * r / (2.0 * m) + beta * r.powi(4) / m)
    }));
    check_side(quartic, PotentialLaw::power_law(1.0, 2.0).unwrap(), 0.5, doubled, true, BoundKind::LowerBound);
}

#[test]
fn fourier_swap_leaves_energy_unchanged() {
    let cfg = SolverConfig::default();
    let pairs = [
        (KineticLaw::semi_relativistic(1.0).unwrap(), PotentialLaw::power_law(1.0, 1.0).unwrap()),
        (KineticLaw::exponential_quadratic(0.3).unwrap(), PotentialLaw::power_law(0.5, 2.0).unwrap()),
        (KineticLaw::non_relativistic(2.0).unwrap(), PotentialLaw::square_root_well(0.1, 1.0).unwrap()),
    ];
    for (t, v) in pairs {
        for q in [1.5, 2.5, 4.5] {
            let q = QValue::user_defined(q).unwrap();
            let direct = solve_two_body(&t, &v, 2.0, q, &cfg).unwrap();
            let swapped = solve_two_body(&v.as_kinetic(), &t.as_potential(), 2.0, q, &cfg).unwrap();
            assert!((direct.energy - swapped.energy).abs() <= 1e-11 * direct.energy.abs());
            assert!((direct.r0 - swapped.p0).abs() <= 1e-8 * direct.r0);
            assert_eq!(
                direct.bound.classification,
                swapped.bound.classification,
                "{t:?} / {v:?}"
            );
        }
    }
}

#[test]
fn radial_levels_are_ordered() {
    let pot = PotentialLaw::power_law(1.0, 1.0).unwrap();
    let mut by_l = Vec::new();
    for l in 0..3 {
        let prob = RadialProblem::new(1.0, pot.clone(), 3, l, 25.0, 4000).unwrap();
        let levels: Vec<f64> = (0..3).map(|n| radial_eigenvalue(&prob, n).unwrap().energy).collect();
        assert!(levels.windows(2).all(|w| w[0] < w[1]));
        by_l.push(levels[0]);
    }
    assert!(by_l.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn simplex_balance_vanishes_and_circle_is_close() {
    let cfg = SolverConfig::default();
    for n in 2..=5u32 {
        let spec = SystemSpec::two_body(
            n,
            4,
            KineticLaw::non_relativistic(1.0).unwrap(),
            PotentialLaw::power_law(1.0, 2.0).unwrap(),
        )
        .unwrap();
        let sol = solve_nbody(&spec, q_boson_ground(n, 4).unwrap(), &cfg).unwrap();
        let simplex = centripetal_balance(&spec, &sol, Geometry::Simplex).unwrap();
        assert!(simplex.abs() <= 1e-10, "N={n}: {simplex}");
        let circle = centripetal_balance(&spec, &sol, Geometry::Circle).unwrap();
        if n <= 3 {
            assert!(circle.abs() <= 1e-10);
        } else if n == 4 {
            assert!(circle.abs() <= 0.03, "{circle}");
        }
    }
}
