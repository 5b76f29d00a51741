//! Command dispatch and CSV emission.

use envelope::analysis::{critical_coupling_for, perturbation_correction, correction_is_large, CouplingMode};
use envelope::apps::{
    baryon_bounds, boson_star_limit, boson_star_mass, boson_star_max_mass, minimal_length_correction,
    minimal_length_energy, minimal_length_is_first_order, BaryonParams, BosonStarParams,
};
use envelope::model::{
    Convexity, CustomProfile, EnvelopeSolution, KineticFamily, PotentialFamily, PotentialLaw, TermRole,
};
use envelope::oracle::{radial_eigenvalue, RadialProblem};
use envelope::solver::{solve_nbody, solve_two_body};
use envelope::Error;

use crate::config::{is_integer_param, ConfigError, RunConfig};

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_COLLAPSE: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Solve,
    Bounds,
    Critical(CouplingMode),
    Perturb,
    Baryon,
    BosonStar,
    MinLength,
    Sweep(SweepSpec),
    Oracle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub param: String,
    pub from: f64,
    pub to: f64,
    /// Number of points; integer parameters default to unit steps, real ones to 11 points.
    pub steps: Option<usize>,
}

/// Failure of a command, carrying its process exit code.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{message}")]
pub struct RunError {
    pub code: i32,
    pub message: String,
}

impl RunError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NoStationaryPoint { .. }
            | Error::ScanExhausted(_)
            | Error::CollapseRegime(_)
            | Error::NoCriticalPoint => EXIT_COLLAPSE,
            Error::NotConverged(_) | Error::UnboundedBelow => EXIT_NOT_CONVERGED,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        Self::usage(e.to_string())
    }
}

/// Rows of a CSV table, already formatted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// Column index by header name.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

/// Locale-independent float with 15 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.14e}")
}

fn convexity_name(c: Option<&Convexity>) -> &'static str {
    match c {
        None => "-",
        Some(Convexity::Concave) => "concave",
        Some(Convexity::Convex) => "convex",
        Some(Convexity::Linear) => "linear",
        Some(Convexity::Mixed) => "mixed",
    }
}

pub fn run(cfg: &RunConfig, cmd: &Command) -> Result<Table, RunError> {
    match cmd {
        Command::Solve => solve(cfg),
        Command::Bounds => bounds(cfg),
        Command::Critical(mode) => critical(cfg, *mode),
        Command::Perturb => perturb(cfg),
        Command::Baryon => baryon(cfg),
        Command::BosonStar => bosonstar(cfg),
        Command::MinLength => minlength(cfg),
        Command::Sweep(spec) => sweep(cfg, spec),
        Command::Oracle => oracle(cfg),
    }
}

/// The envelope solution selected by the configuration.
pub fn envelope_solution(cfg: &RunConfig) -> Result<EnvelopeSolution, RunError> {
    let q = cfg.q_value()?;
    match cfg.auxiliary {
        None => Ok(solve_nbody(&cfg.system, q, &cfg.solver)?),
        Some(lambda) => {
            if cfg.system.onebody().is_some() {
                return Err(RunError::usage("auxiliary solves take a [twobody] potential only"));
            }
            let v = cfg.system.twobody().expect("validated: some potential present");
            Ok(solve_two_body(cfg.system.kinetic(), v, lambda, q, &cfg.solver)?)
        }
    }
}

pub const SOLVE_HEADER: &[&str] = &["N", "D", "Q", "E", "r0", "p0", "bound", "n_roots"];

fn solve_row(cfg: &RunConfig, sol: &EnvelopeSolution) -> Vec<String> {
    vec![
        cfg.system.n().to_string(),
        cfg.system.dim().to_string(),
        fmt_float(sol.q.value()),
        fmt_float(sol.energy),
        fmt_float(sol.r0),
        fmt_float(sol.p0),
        sol.bound.classification.to_string(),
        sol.roots.len().to_string(),
    ]
}

fn solve(cfg: &RunConfig) -> Result<Table, RunError> {
    let sol = envelope_solution(cfg)?;
    let mut t = Table::new(SOLVE_HEADER);
    t.rows.push(solve_row(cfg, &sol));
    Ok(t)
}

fn bounds(cfg: &RunConfig) -> Result<Table, RunError> {
    let sol = envelope_solution(cfg)?;
    let mut t = Table::new(&["N", "D", "Q", "E", "bound", "kinetic", "onebody", "twobody"]);
    let terms = &sol.bound.terms;
    t.rows.push(vec![
        cfg.system.n().to_string(),
        cfg.system.dim().to_string(),
        fmt_float(sol.q.value()),
        fmt_float(sol.energy),
        sol.bound.classification.to_string(),
        convexity_name(terms.get(&TermRole::Kinetic)).into(),
        convexity_name(terms.get(&TermRole::OneBody)).into(),
        convexity_name(terms.get(&TermRole::TwoBody)).into(),
    ]);
    Ok(t)
}

fn critical(cfg: &RunConfig, mode: CouplingMode) -> Result<Table, RunError> {
    let q = cfg.q_value()?;
    let c = critical_coupling_for(&cfg.system, mode, q)?;
    let mut t = Table::new(&["mode", "N", "Q", "y0", "value", "bound"]);
    t.rows.push(vec![
        match mode {
            CouplingMode::OneBody => "onebody",
            CouplingMode::TwoBody => "twobody",
        }
        .into(),
        cfg.system.n().to_string(),
        fmt_float(q.value()),
        fmt_float(c.y0),
        fmt_float(c.value),
        c.bound.to_string(),
    ]);
    Ok(t)
}

fn perturb(cfg: &RunConfig) -> Result<Table, RunError> {
    if cfg.perturbation.is_empty() {
        return Err(RunError::usage("perturb needs a [perturbation.kinetic|onebody|twobody] section"));
    }
    let sol = envelope_solution(cfg)?;
    let delta = perturbation_correction(&sol, &cfg.system, &cfg.perturbation)?;
    let mut t = Table::new(&["N", "D", "Q", "E0", "correction", "E", "large"]);
    t.rows.push(vec![
        cfg.system.n().to_string(),
        cfg.system.dim().to_string(),
        fmt_float(sol.q.value()),
        fmt_float(sol.energy),
        fmt_float(delta),
        fmt_float(sol.energy + delta),
        correction_is_large(sol.energy, delta).to_string(),
    ]);
    Ok(t)
}

fn baryon(cfg: &RunConfig) -> Result<Table, RunError> {
    let b = cfg.baryon.ok_or_else(|| RunError::usage("baryon needs a [baryon] section"))?;
    let (n, dim) = (cfg.system.n(), cfg.system.dim());
    let bounds = baryon_bounds(&BaryonParams::new(b.a1, b.a2, b.b, n, dim)?)?;
    let mut t = Table::new(&["N", "D", "a1", "a2", "b", "upper", "lower"]);
    t.rows.push(vec![
        n.to_string(),
        dim.to_string(),
        fmt_float(b.a1),
        fmt_float(b.a2),
        fmt_float(b.b),
        fmt_float(bounds.upper),
        fmt_float(bounds.lower),
    ]);
    Ok(t)
}

fn kinetic_mass(cfg: &RunConfig, explicit: Option<f64>, section: &str) -> Result<f64, RunError> {
    explicit
        .or_else(|| cfg.system.kinetic().mass())
        .ok_or_else(|| RunError::usage(format!("[{section}] needs `mass` when the kinetic law has none")))
}

fn bosonstar(cfg: &RunConfig) -> Result<Table, RunError> {
    let b = cfg.bosonstar.ok_or_else(|| RunError::usage("bosonstar needs a [bosonstar] section"))?;
    let dim = cfg.system.dim();
    if let Some(n_max) = b.n_max {
        let best = boson_star_max_mass(b.alpha, dim, n_max)?;
        let mut t = Table::new(&["D", "alpha", "n_max", "N", "N_continuous", "M_Gm", "limit"]);
        t.rows.push(vec![
            dim.to_string(),
            fmt_float(b.alpha),
            n_max.to_string(),
            best.n.to_string(),
            fmt_float(best.n_continuous),
            fmt_float(best.mass_gm),
            fmt_float(boson_star_limit(dim)),
        ]);
        return Ok(t);
    }
    let mass = kinetic_mass(cfg, b.mass, "bosonstar")?;
    let q = cfg.q_value()?;
    let n = cfg.system.n();
    let m = boson_star_mass(&BosonStarParams::new(n, mass, b.alpha, q)?)?;
    let mut t = Table::new(&["N", "D", "Q", "mass", "alpha", "M"]);
    t.rows.push(vec![
        n.to_string(),
        dim.to_string(),
        fmt_float(q.value()),
        fmt_float(mass),
        fmt_float(b.alpha),
        fmt_float(m),
    ]);
    Ok(t)
}

fn minlength(cfg: &RunConfig) -> Result<Table, RunError> {
    let o = cfg.minlength.ok_or_else(|| RunError::usage("minlength needs a [minlength] section"))?;
    let mass = kinetic_mass(cfg, o.mass, "minlength")?;
    let q = cfg.q_value()?;
    let (n, dim) = (cfg.system.n(), cfg.system.dim());
    let e = minimal_length_energy(n, dim, mass, o.k, o.beta, q)?;
    let mut t = Table::new(&["N", "D", "Q", "mass", "k", "beta", "E", "correction", "first_order"]);
    t.rows.push(vec![
        n.to_string(),
        dim.to_string(),
        fmt_float(q.value()),
        fmt_float(mass),
        fmt_float(o.k),
        fmt_float(o.beta),
        fmt_float(e),
        fmt_float(minimal_length_correction(o.k, o.beta, q)),
        minimal_length_is_first_order(n, mass, o.k, o.beta, q).to_string(),
    ]);
    Ok(t)
}

/// Points of a sweep, formatted exactly as they are fed back into the config.
pub fn sweep_values(spec: &SweepSpec) -> Result<Vec<String>, RunError> {
    if !(spec.from.is_finite() && spec.to.is_finite()) {
        return Err(RunError::usage("--from and --to must be finite"));
    }
    if is_integer_param(&spec.param) {
        if spec.from.fract() != 0.0 || spec.to.fract() != 0.0 || spec.from < 0.0 || spec.to < 0.0 {
            return Err(RunError::usage(format!("{} takes non-negative integer bounds", spec.param)));
        }
        let (a, b) = (spec.from as i64, spec.to as i64);
        let span = (b - a).unsigned_abs() as usize;
        let steps = spec.steps.unwrap_or(span + 1);
        if steps == 0 || (steps > 1 && !span.is_multiple_of(steps - 1)) || (steps == 1 && span != 0) {
            return Err(RunError::usage(format!(
                "{} steps do not divide the integer range {a}..{b}",
                steps
            )));
        }
        let stride = if steps > 1 { (b - a) / (steps as i64 - 1) } else { 0 };
        return Ok((0..steps as i64).map(|i| (a + i * stride).to_string()).collect());
    }
    let steps = spec.steps.unwrap_or(11);
    if steps == 0 {
        return Err(RunError::usage("--steps must be >= 1"));
    }
    Ok((0..steps)
        .map(|i| {
            let x = if steps == 1 {
                spec.from
            } else {
                spec.from + (spec.to - spec.from) * i as f64 / (steps - 1) as f64
            };
            format!("{x}")
        })
        .collect())
}

fn sweep(cfg: &RunConfig, spec: &SweepSpec) -> Result<Table, RunError> {
    let values = sweep_values(spec)?;
    let mut header = vec![spec.param.as_str()];
    header.extend_from_slice(SOLVE_HEADER);
    let mut t = Table::new(&header);
    for v in values {
        let point = cfg.with_value(&spec.param, &v)?;
        let sol = envelope_solution(&point)?;
        let mut row = vec![v];
        row.extend(solve_row(&point, &sol));
        t.rows.push(row);
    }
    Ok(t)
}

/// Radial oracle for the two-body relative motion, against the envelope value.
///
/// With nonrelativistic kinetics the oracle is solved in position space with
/// the reduced mass; any other kinetic law is handled by swapping position
/// and momentum when the potential is a pure oscillator `A r²`.
fn oracle(cfg: &RunConfig) -> Result<Table, RunError> {
    if cfg.auxiliary.is_none() && cfg.system.n() != 2 {
        return Err(RunError::usage("oracle compares two-body spectra: set n = 2 or an auxiliary exponent"));
    }
    if cfg.system.onebody().is_some() {
        return Err(RunError::usage("oracle takes a [twobody] potential only"));
    }
    let v = cfg.system.twobody().expect("validated: some potential present").clone();
    let sol = envelope_solution(cfg)?;
    let (n, l) = cfg.radial_quanta();
    // T(p1) + T(p2) = 2 T(p) in the N-body form; a single T in the auxiliary form.
    let copies = if cfg.auxiliary.is_some() { 1.0 } else { 2.0 };
    let kinetic = cfg.system.kinetic().clone();
    let (mu, potential, scale) = match (kinetic.family(), v.family()) {
        (KineticFamily::NonRelativistic { mass }, _) => (mass / copies, v, sol.r0),
        (_, PotentialFamily::PowerLaw { amplitude, exponent }) if *exponent == 2.0 && *amplitude > 0.0 => {
            let swapped = PotentialLaw::custom(CustomProfile::new("swapped kinetic", move |r: f64| {
                use envelope::model::Term;
                copies * kinetic.value(r).unwrap_or(f64::INFINITY)
            }));
            (1.0 / (2.0 * amplitude), swapped, sol.p0)
        }
        _ => {
            return Err(RunError::usage(
                "oracle needs nonrelativistic kinetics, or a pure r^2 potential for the swapped form",
            ))
        }
    };
    let prob = match (cfg.oracle.r_max, cfg.oracle.points) {
        (None, None) => RadialProblem::around_envelope(mu, potential, cfg.system.dim(), l, scale)?,
        (r_max, points) => RadialProblem::new(
            mu,
            potential,
            cfg.system.dim(),
            l,
            r_max.unwrap_or(25.0 * scale),
            points.unwrap_or(4000),
        )?,
    };
    let e = radial_eigenvalue(&prob, n as usize)?;
    let mut t = Table::new(&[
        "N", "D", "n", "l", "E_env", "bound", "E_oracle", "coarse", "fine", "points", "rel_error",
    ]);
    t.rows.push(vec![
        cfg.system.n().to_string(),
        cfg.system.dim().to_string(),
        n.to_string(),
        l.to_string(),
        fmt_float(sol.energy),
        sol.bound.classification.to_string(),
        fmt_float(e.energy),
        fmt_float(e.coarse),
        fmt_float(e.fine),
        e.points.to_string(),
        fmt_float((sol.energy - e.energy) / e.energy.abs()),
    ]);
    Ok(t)
}

/// Relative gap between a printed float and a recomputed value.
pub fn relative_gap(printed: &str, value: f64) -> Option<f64> {
    let p: f64 = printed.parse().ok()?;
    Some((p - value).abs() / value.abs().max(f64::MIN_POSITIVE))
}
