//! Sectioned `key = value` run configuration.
//!
//! ```text
//! # three particles in a harmonic trap
//! [system]
//! n = 3
//! d = 3
//!
//! [kinetic]
//! type = nonrelativistic
//! mass = 1
//!
//! [twobody]
//! type = powerlaw
//! amplitude = 0.5
//! exponent = 2
//!
//! [state]
//! tower = boson-gs
//! ```
//!
//! Section and key names are case-insensitive and stored in lowercase.
//! `#` starts a comment. Every key is validated; unknown keys are rejected.

use std::fmt;

use envelope::analysis::{Perturbation, PerturbationSpec};
use envelope::model::{KineticLaw, PotentialLaw, Statistics, StateSpec, SystemSpec};
use envelope::qnum::{
    q_boson_ground, q_fermion_asymptotic, q_from_quanta, q_two_body_auxiliary, QValue,
};
use envelope::solver::SolverConfig;

const SECTIONS: &[&str] = &[
    "system",
    "kinetic",
    "onebody",
    "twobody",
    "state",
    "solver",
    "perturbation.kinetic",
    "perturbation.onebody",
    "perturbation.twobody",
    "baryon",
    "bosonstar",
    "minlength",
    "oracle",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConfigErrorKind {
    UnknownKey,
    MissingSection,
    TypeMismatch,
    ConstraintViolation,
}

impl fmt::Display for ConfigErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConfigErrorKind::UnknownKey => "unknown key",
            ConfigErrorKind::MissingSection => "missing section",
            ConfigErrorKind::TypeMismatch => "type mismatch",
            ConfigErrorKind::ConstraintViolation => "constraint violation",
        })
    }
}

/// Diagnostic naming the offending line (1-based, 0 when not tied to a line) and key.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}: {kind} `{key}`: {message}")]
pub struct ConfigError {
    pub kind: ConfigErrorKind,
    pub line: usize,
    pub key: String,
    pub message: String,
}

impl ConfigError {
    fn new(kind: ConfigErrorKind, line: usize, key: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            kind,
            line,
            key: key.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Entry {
    key: String,
    value: String,
    line: usize,
}

#[derive(Debug, Clone, PartialEq)]
struct Section {
    name: String,
    line: usize,
    entries: Vec<Entry>,
}

impl Section {
    fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    fn key_line(&self, key: &str) -> usize {
        self.get(key).map_or(self.line, |e| e.line)
    }

    fn allow(&self, keys: &[&str]) -> Result<(), ConfigError> {
        match self.entries.iter().find(|e| !keys.contains(&e.key.as_str())) {
            Some(e) => Err(ConfigError::new(
                ConfigErrorKind::UnknownKey,
                e.line,
                &e.key,
                format!("not valid in [{}]; expected one of {}", self.name, keys.join(", ")),
            )),
            None => Ok(()),
        }
    }

    fn required(&self, key: &str) -> Result<&Entry, ConfigError> {
        self.get(key).ok_or_else(|| {
            ConfigError::new(
                ConfigErrorKind::ConstraintViolation,
                self.line,
                key,
                format!("required in [{}]", self.name),
            )
        })
    }

    fn f64(&self, key: &str) -> Result<f64, ConfigError> {
        parse_f64(self.required(key)?)
    }

    fn opt_f64(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        self.get(key).map(parse_f64).transpose()
    }

    fn opt_u32(&self, key: &str) -> Result<Option<u32>, ConfigError> {
        self.get(key).map(parse_u32).transpose()
    }

    fn u32(&self, key: &str) -> Result<u32, ConfigError> {
        parse_u32(self.required(key)?)
    }

    fn str(&self, key: &str) -> Result<&str, ConfigError> {
        Ok(&self.required(key)?.value)
    }
}

fn parse_f64(e: &Entry) -> Result<f64, ConfigError> {
    let v: f64 = e.value.parse().map_err(|_| {
        ConfigError::new(
            ConfigErrorKind::TypeMismatch,
            e.line,
            &e.key,
            format!("expected a number, got `{}`", e.value),
        )
    })?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ConfigError::new(
            ConfigErrorKind::ConstraintViolation,
            e.line,
            &e.key,
            "must be finite",
        ))
    }
}

fn parse_u32(e: &Entry) -> Result<u32, ConfigError> {
    e.value.parse().map_err(|_| {
        ConfigError::new(
            ConfigErrorKind::TypeMismatch,
            e.line,
            &e.key,
            format!("expected a non-negative integer, got `{}`", e.value),
        )
    })
}

/// Raw sections in file order.
#[derive(Debug, Clone, PartialEq)]
struct Document {
    sections: Vec<Section>,
}

impl Document {
    fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut sections: Vec<Section> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(name) = content.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| {
                        ConfigError::new(ConfigErrorKind::TypeMismatch, line, content, "unterminated section header")
                    })?
                    .trim()
                    .to_ascii_lowercase();
                if !SECTIONS.contains(&name.as_str()) {
                    return Err(ConfigError::new(
                        ConfigErrorKind::UnknownKey,
                        line,
                        &name,
                        format!("unknown section; expected one of {}", SECTIONS.join(", ")),
                    ));
                }
                if sections.iter().any(|s| s.name == name) {
                    return Err(ConfigError::new(
                        ConfigErrorKind::MissingSection,
                        line,
                        &name,
                        format!("duplicate section {name}"),
                    ));
                }
                sections.push(Section {
                    name,
                    line,
                    entries: Vec::new(),
                });
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| {
                ConfigError::new(ConfigErrorKind::TypeMismatch, line, content, "expected `key = value`")
            })?;
            let key = key.trim().to_ascii_lowercase();
            let value = value.trim().to_string();
            let section = sections.last_mut().ok_or_else(|| {
                ConfigError::new(ConfigErrorKind::MissingSection, line, &key, "key appears before any section")
            })?;
            if section.get(&key).is_some() {
                return Err(ConfigError::new(
                    ConfigErrorKind::ConstraintViolation,
                    line,
                    &key,
                    format!("duplicate key in [{}]", section.name),
                ));
            }
            section.entries.push(Entry { key, value, line });
        }
        Ok(Self { sections })
    }

    fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    fn require(&self, name: &str) -> Result<&Section, ConfigError> {
        self.section(name).ok_or_else(|| {
            ConfigError::new(ConfigErrorKind::MissingSection, 0, name, format!("section [{name}] is required"))
        })
    }

    fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.sections.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            out.push_str(&format!("[{}]\n", s.name));
            for e in &s.entries {
                out.push_str(&format!("{} = {}\n", e.key, e.value));
            }
        }
        out
    }
}

/// How the global quantum number is chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum StateChoice {
    BosonGround,
    FermionAsymptotic { degeneracy: u32 },
    Quanta(StateSpec),
    Explicit(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaryonOptions {
    pub a1: f64,
    pub a2: f64,
    pub b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BosonStarOptions {
    pub alpha: f64,
    pub mass: Option<f64>,
    pub n_max: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinLengthOptions {
    pub k: f64,
    pub beta: f64,
    pub mass: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OracleOptions {
    pub r_max: Option<f64>,
    pub points: Option<usize>,
}

/// A fully validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    doc: Document,
    pub system: SystemSpec,
    pub state: StateChoice,
    pub solver: SolverConfig,
    /// Exponent of the auxiliary power law for one/two-body solves; `None`
    /// selects the N-body oscillator envelope.
    pub auxiliary: Option<f64>,
    pub perturbation: PerturbationSpec,
    pub baryon: Option<BaryonOptions>,
    pub bosonstar: Option<BosonStarOptions>,
    pub minlength: Option<MinLengthOptions>,
    pub oracle: OracleOptions,
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    RunConfig::from_document(Document::parse(text)?)
}

fn violation(section: &Section, err: envelope::Error) -> ConfigError {
    match err {
        envelope::Error::InvalidParameter { name, reason } => {
            let key = name.to_ascii_lowercase();
            ConfigError::new(
                ConfigErrorKind::ConstraintViolation,
                section.key_line(&key),
                name,
                reason,
            )
        }
        other => ConfigError::new(
            ConfigErrorKind::ConstraintViolation,
            section.line,
            &section.name,
            other.to_string(),
        ),
    }
}

fn at_least(section: &Section, key: &str, label: &str, value: u32, min: u32) -> Result<u32, ConfigError> {
    if value < min {
        Err(ConfigError::new(
            ConfigErrorKind::ConstraintViolation,
            section.key_line(key),
            label,
            format!("{label} must satisfy {label} >= {min}, got {value}"),
        ))
    } else {
        Ok(value)
    }
}

fn kinetic_law(s: &Section) -> Result<KineticLaw, ConfigError> {
    let kind = s.str("type")?.to_ascii_lowercase();
    let (keys, law): (&[&str], _) = match kind.as_str() {
        "nonrelativistic" => (&["type", "mass"], KineticLaw::non_relativistic(s.f64("mass")?)),
        "semirelativistic" => (&["type", "mass"], KineticLaw::semi_relativistic(s.f64("mass")?)),
        "ultrarelativistic" => (&["type"], Ok(KineticLaw::ultra_relativistic())),
        "minimallength" => (
            &["type", "mass", "beta"],
            KineticLaw::minimal_length_quartic(s.f64("mass")?, s.f64("beta")?),
        ),
        "expquadratic" => (&["type", "stiffness"], KineticLaw::exponential_quadratic(s.f64("stiffness")?)),
        other => {
            return Err(ConfigError::new(
                ConfigErrorKind::TypeMismatch,
                s.key_line("type"),
                "type",
                format!(
                    "unknown kinetic law `{other}`; expected nonrelativistic, semirelativistic, \
                     ultrarelativistic, minimallength or expquadratic"
                ),
            ))
        }
    };
    s.allow(keys)?;
    law.map_err(|e| violation(s, e))
}

/// Potential law from a section; `extra` lists additional keys the section may hold.
fn potential_law(s: &Section, extra: &[&str]) -> Result<PotentialLaw, ConfigError> {
    let kind = s.str("type")?.to_ascii_lowercase();
    let (keys, law): (&[&str], _) = match kind.as_str() {
        "powerlaw" => (
            &["amplitude", "exponent"],
            PotentialLaw::power_law(s.f64("amplitude")?, s.f64("exponent")?),
        ),
        "coulomb" => (&["strength"], PotentialLaw::coulomb(s.f64("strength")?)),
        "sqrtwell" => (
            &["offset", "scale"],
            PotentialLaw::square_root_well(s.f64("offset")?, s.f64("scale")?),
        ),
        "log" => (&["scale"], PotentialLaw::logarithmic(s.f64("scale")?)),
        "yukawa" => (&["coupling", "range"], PotentialLaw::yukawa(s.f64("coupling")?, s.f64("range")?)),
        "exponential" => (
            &["coupling", "range"],
            PotentialLaw::exponential(s.f64("coupling")?, s.f64("range")?),
        ),
        "gaussian" => (&["coupling", "range"], PotentialLaw::gaussian(s.f64("coupling")?, s.f64("range")?)),
        other => {
            return Err(ConfigError::new(
                ConfigErrorKind::TypeMismatch,
                s.key_line("type"),
                "type",
                format!(
                    "unknown potential law `{other}`; expected powerlaw, coulomb, sqrtwell, log, \
                     yukawa, exponential or gaussian"
                ),
            ))
        }
    };
    let mut allowed = vec!["type"];
    allowed.extend_from_slice(keys);
    allowed.extend_from_slice(extra);
    s.allow(&allowed)?;
    law.map_err(|e| violation(s, e))
}

fn parse_quanta(e: &Entry) -> Result<StateSpec, ConfigError> {
    let bad = |msg: String| ConfigError::new(ConfigErrorKind::TypeMismatch, e.line, &e.key, msg);
    let mut quanta = Vec::new();
    for token in e.value.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
        let (n, l) = token
            .split_once(':')
            .ok_or_else(|| bad(format!("expected `n:l` pairs, got `{token}`")))?;
        let n = n.parse().map_err(|_| bad(format!("bad radial number in `{token}`")))?;
        let l = l.parse().map_err(|_| bad(format!("bad orbital number in `{token}`")))?;
        quanta.push((n, l));
    }
    StateSpec::new(quanta)
        .map_err(|err| ConfigError::new(ConfigErrorKind::ConstraintViolation, e.line, &e.key, err.to_string()))
}

impl RunConfig {
    fn from_document(doc: Document) -> Result<Self, ConfigError> {
        let sys = doc.require("system")?;
        sys.allow(&["n", "d", "statistics", "degeneracy"])?;
        let n = at_least(sys, "n", "N", sys.u32("n")?, 2)?;
        let dim = at_least(sys, "d", "D", sys.u32("d")?, 2)?;
        let statistics = match sys.get("statistics").map(|e| e.value.to_ascii_lowercase()) {
            None => Statistics::Boson,
            Some(v) if v == "boson" => Statistics::Boson,
            Some(v) if v == "fermion" => Statistics::Fermion {
                degeneracy: at_least(sys, "degeneracy", "degeneracy", sys.opt_u32("degeneracy")?.unwrap_or(2), 1)?,
            },
            Some(v) => {
                return Err(ConfigError::new(
                    ConfigErrorKind::TypeMismatch,
                    sys.key_line("statistics"),
                    "statistics",
                    format!("expected boson or fermion, got `{v}`"),
                ))
            }
        };
        if statistics == Statistics::Boson && sys.get("degeneracy").is_some() {
            return Err(ConfigError::new(
                ConfigErrorKind::ConstraintViolation,
                sys.key_line("degeneracy"),
                "degeneracy",
                "only meaningful with statistics = fermion",
            ));
        }

        let kinetic = kinetic_law(doc.require("kinetic")?)?;
        let onebody = doc.section("onebody").map(|s| potential_law(s, &[])).transpose()?;
        let twobody = doc.section("twobody").map(|s| potential_law(s, &[])).transpose()?;
        if onebody.is_none() && twobody.is_none() {
            return Err(ConfigError::new(
                ConfigErrorKind::MissingSection,
                0,
                "onebody/twobody",
                "at least one of [onebody] or [twobody] is required",
            ));
        }
        let system = SystemSpec::new(n, dim, kinetic, onebody, twobody, statistics).map_err(|e| violation(sys, e))?;

        let st = doc.require("state")?;
        st.allow(&["tower", "degeneracy", "quanta", "q"])?;
        let chosen = ["tower", "quanta", "q"].iter().filter(|k| st.get(k).is_some()).count();
        if chosen != 1 {
            return Err(ConfigError::new(
                ConfigErrorKind::ConstraintViolation,
                st.line,
                "state",
                "exactly one of tower, quanta or q must be given",
            ));
        }
        let state = if let Some(e) = st.get("tower") {
            match e.value.to_ascii_lowercase().as_str() {
                "boson-gs" => StateChoice::BosonGround,
                "fermion-asymptotic" => StateChoice::FermionAsymptotic {
                    degeneracy: at_least(st, "degeneracy", "degeneracy", st.opt_u32("degeneracy")?.unwrap_or(2), 1)?,
                },
                other => {
                    return Err(ConfigError::new(
                        ConfigErrorKind::TypeMismatch,
                        e.line,
                        "tower",
                        format!("expected boson-gs or fermion-asymptotic, got `{other}`"),
                    ))
                }
            }
        } else if let Some(e) = st.get("quanta") {
            StateChoice::Quanta(parse_quanta(e)?)
        } else {
            let q = st.f64("q")?;
            QValue::user_defined(q).map_err(|e| violation(st, e))?;
            StateChoice::Explicit(q)
        };
        if !matches!(state, StateChoice::FermionAsymptotic { .. }) && st.get("degeneracy").is_some() {
            return Err(ConfigError::new(
                ConfigErrorKind::ConstraintViolation,
                st.key_line("degeneracy"),
                "degeneracy",
                "only meaningful with tower = fermion-asymptotic",
            ));
        }

        let mut solver = SolverConfig::default();
        let mut auxiliary = None;
        if let Some(s) = doc.section("solver") {
            s.allow(&["tolerance", "max_iterations", "expansion_factor", "points_per_decade", "decades", "auxiliary"])?;
            if let Some(v) = s.opt_f64("tolerance")? {
                solver.tolerance = v;
            }
            if let Some(v) = s.opt_u32("max_iterations")? {
                solver.max_iterations = v as usize;
            }
            if let Some(v) = s.opt_f64("expansion_factor")? {
                solver.expansion_factor = v;
            }
            if let Some(v) = s.opt_u32("points_per_decade")? {
                solver.points_per_decade = v as usize;
            }
            if let Some(v) = s.opt_f64("decades")? {
                solver.decades = v;
            }
            solver.validate().map_err(|e| violation(s, e))?;
            if let Some(lambda) = s.opt_f64("auxiliary")? {
                if !(lambda > -2.0 && lambda != 0.0) {
                    return Err(ConfigError::new(
                        ConfigErrorKind::ConstraintViolation,
                        s.key_line("auxiliary"),
                        "auxiliary",
                        format!("auxiliary exponent must satisfy 0 != lambda > -2, got {lambda}"),
                    ));
                }
                auxiliary = Some(lambda);
            }
        }
        if let (Some(_), StateChoice::Quanta(q)) = (auxiliary, &state) {
            if q.quanta().len() != 1 {
                return Err(ConfigError::new(
                    ConfigErrorKind::ConstraintViolation,
                    st.key_line("quanta"),
                    "quanta",
                    "auxiliary solves take a single n:l pair",
                ));
            }
        }
        if let (None, StateChoice::Quanta(q)) = (auxiliary, &state) {
            system
                .check_state(q)
                .map_err(|e| ConfigError::new(ConfigErrorKind::ConstraintViolation, st.key_line("quanta"), "quanta", e.to_string()))?;
        }

        let perturbation_term = |name: &str| -> Result<Option<Perturbation>, ConfigError> {
            doc.section(name)
                .map(|s| {
                    Ok(Perturbation {
                        coefficient: s.f64("coefficient")?,
                        shape: potential_law(s, &["coefficient"])?,
                    })
                })
                .transpose()
        };
        let perturbation = PerturbationSpec {
            kinetic: perturbation_term("perturbation.kinetic")?,
            onebody: perturbation_term("perturbation.onebody")?,
            twobody: perturbation_term("perturbation.twobody")?,
        };

        let non_negative = |s: &Section, key: &str, v: f64| -> Result<f64, ConfigError> {
            if v >= 0.0 {
                Ok(v)
            } else {
                Err(ConfigError::new(
                    ConfigErrorKind::ConstraintViolation,
                    s.key_line(key),
                    key,
                    format!("must be >= 0, got {v}"),
                ))
            }
        };
        let positive = |s: &Section, key: &str, v: f64| -> Result<f64, ConfigError> {
            if v > 0.0 {
                Ok(v)
            } else {
                Err(ConfigError::new(
                    ConfigErrorKind::ConstraintViolation,
                    s.key_line(key),
                    key,
                    format!("must be > 0, got {v}"),
                ))
            }
        };

        let baryon = doc
            .section("baryon")
            .map(|s| -> Result<_, ConfigError> {
                s.allow(&["a1", "a2", "b"])?;
                let get = |k: &str| -> Result<f64, ConfigError> { non_negative(s, k, s.opt_f64(k)?.unwrap_or(0.0)) };
                Ok(BaryonOptions {
                    a1: get("a1")?,
                    a2: get("a2")?,
                    b: get("b")?,
                })
            })
            .transpose()?;
        let bosonstar = doc
            .section("bosonstar")
            .map(|s| -> Result<_, ConfigError> {
                s.allow(&["alpha", "mass", "n_max"])?;
                Ok(BosonStarOptions {
                    alpha: non_negative(s, "alpha", s.f64("alpha")?)?,
                    mass: s.opt_f64("mass")?.map(|m| positive(s, "mass", m)).transpose()?,
                    n_max: s.opt_u32("n_max")?.map(|v| at_least(s, "n_max", "n_max", v, 2)).transpose()?,
                })
            })
            .transpose()?;
        let minlength = doc
            .section("minlength")
            .map(|s| -> Result<_, ConfigError> {
                s.allow(&["k", "beta", "mass"])?;
                Ok(MinLengthOptions {
                    k: positive(s, "k", s.f64("k")?)?,
                    beta: non_negative(s, "beta", s.f64("beta")?)?,
                    mass: s.opt_f64("mass")?.map(|m| positive(s, "mass", m)).transpose()?,
                })
            })
            .transpose()?;
        let oracle = match doc.section("oracle") {
            None => OracleOptions::default(),
            Some(s) => {
                s.allow(&["r_max", "points"])?;
                OracleOptions {
                    r_max: s.opt_f64("r_max")?.map(|v| positive(s, "r_max", v)).transpose()?,
                    points: s
                        .opt_u32("points")?
                        .map(|v| at_least(s, "points", "points", v, 200).map(|v| v as usize))
                        .transpose()?,
                }
            }
        };

        Ok(Self {
            doc,
            system,
            state,
            solver,
            auxiliary,
            perturbation,
            baryon,
            bosonstar,
            minlength,
            oracle,
        })
    }

    /// Canonical text form; parsing it yields an equal configuration.
    pub fn to_text(&self) -> String {
        self.doc.to_text()
    }

    /// Copy with one value replaced, re-validated from scratch.
    ///
    /// `param` is `section.key`, or one of the shorthands `n`, `d`, `q`.
    /// Setting `state.q` drops any other state selector.
    pub fn with_value(&self, param: &str, value: &str) -> Result<Self, ConfigError> {
        let (section, key) = resolve_param(param)?;
        let mut doc = self.doc.clone();
        if !doc.sections.iter().any(|s| s.name == section) {
            doc.sections.push(Section {
                name: section.clone(),
                line: 0,
                entries: Vec::new(),
            });
        }
        let target = doc.sections.iter_mut().find(|s| s.name == section).expect("section present");
        if section == "state" && key == "q" {
            target.entries.retain(|e| e.key == "q");
        }
        match target.entries.iter_mut().find(|e| e.key == key) {
            Some(e) => e.value = value.to_string(),
            None => target.entries.push(Entry {
                key,
                value: value.to_string(),
                line: 0,
            }),
        }
        Self::from_document(doc)
    }

    /// Global quantum number selected by the `[state]` section.
    pub fn q_value(&self) -> envelope::Result<QValue> {
        let (n, dim) = (self.system.n(), self.system.dim());
        match (&self.state, self.auxiliary) {
            (StateChoice::Explicit(q), _) => QValue::user_defined(*q),
            (StateChoice::BosonGround, None) => q_boson_ground(n, dim),
            (StateChoice::FermionAsymptotic { degeneracy }, None) => q_fermion_asymptotic(n, dim, *degeneracy),
            (StateChoice::Quanta(state), None) => q_from_quanta(state, dim),
            (_, Some(lambda)) => {
                let (rn, l) = self.radial_quanta();
                q_two_body_auxiliary(lambda, rn, l, dim)
            }
        }
    }

    /// `(n, l)` of a single-pair state; the ground state otherwise.
    pub fn radial_quanta(&self) -> (u32, u32) {
        match &self.state {
            StateChoice::Quanta(s) if s.quanta().len() == 1 => s.quanta()[0],
            _ => (0, 0),
        }
    }
}

/// True for parameters that only take integer values.
pub fn is_integer_param(param: &str) -> bool {
    matches!(
        resolve_param(param).as_ref().map(|(s, k)| (s.as_str(), k.as_str())),
        Ok(("system", "n" | "d" | "degeneracy"))
            | Ok(("state", "degeneracy"))
            | Ok(("solver", "max_iterations" | "points_per_decade"))
            | Ok(("bosonstar", "n_max"))
            | Ok(("oracle", "points"))
    )
}

fn resolve_param(param: &str) -> Result<(String, String), ConfigError> {
    let p = param.trim().to_ascii_lowercase();
    let (section, key) = match p.as_str() {
        "n" => ("system".to_string(), "n".to_string()),
        "d" => ("system".to_string(), "d".to_string()),
        "q" => ("state".to_string(), "q".to_string()),
        _ => match p.rsplit_once('.') {
            Some((s, k)) if SECTIONS.contains(&s) && !k.is_empty() => (s.to_string(), k.to_string()),
            _ => {
                return Err(ConfigError::new(
                    ConfigErrorKind::UnknownKey,
                    0,
                    param,
                    "expected `section.key` or one of n, d, q",
                ))
            }
        },
    };
    Ok((section, key))
}

#[cfg(test)]
mod tests {
    use super::*;

    const HARMONIC: &str = "\
[system]
n = 3
d = 3

[kinetic]
type = nonrelativistic
mass = 1

[twobody]
type = powerlaw
amplitude = 0.5
exponent = 2

[state]
tower = boson-gs
";

    #[test]
    fn parses_harmonic_config() {
        let cfg = parse_config(HARMONIC).unwrap();
        assert_eq!(cfg.system.n(), 3);
        assert_eq!(cfg.state, StateChoice::BosonGround);
        assert_eq!(cfg.q_value().unwrap().value(), 3.0);
        assert_eq!(cfg.auxiliary, None);
    }

    #[test]
    fn text_round_trip_is_lossless() {
        let cfg = parse_config(HARMONIC).unwrap();
        let again = parse_config(&cfg.to_text()).unwrap();
        assert_eq!(again.to_text(), cfg.to_text());
        assert_eq!(again.system, cfg.system);
        assert_eq!(again.state, cfg.state);
    }

    #[test]
    fn keys_are_case_insensitive() {
        let cfg = parse_config(&HARMONIC.replace("n = 3", "N = 4").replace("[system]", "[System]")).unwrap();
        assert_eq!(cfg.system.n(), 4);
    }

    #[test]
    fn dimension_one_is_a_constraint_violation() {
        let err = parse_config(&HARMONIC.replace("d = 3", "D = 1")).unwrap_err();
        assert_eq!(err.kind, ConfigErrorKind::ConstraintViolation);
        assert_eq!(err.key, "D");
        assert_eq!(err.line, 3);
        assert!(err.message.contains("D >= 2"), "{err}");
    }

    #[test]
    fn duplicate_section_is_reported() {
        let err = parse_config(&format!("{HARMONIC}\n[kinetic]\ntype = ultrarelativistic\n")).unwrap_err();
        assert_eq!(err.kind, ConfigErrorKind::MissingSection);
        assert!(err.message.contains("duplicate section kinetic"));
        assert_eq!(err.line, 17);
    }

    #[test]
    fn unknown_key_and_type_mismatch() {
        let err = parse_config(&HARMONIC.replace("mass = 1", "mass = 1\ncolour = red")).unwrap_err();
        assert_eq!(err.kind, ConfigErrorKind::UnknownKey);
        assert_eq!((err.line, err.key.as_str()), (8, "colour"));
        let err = parse_config(&HARMONIC.replace("mass = 1", "mass = heavy")).unwrap_err();
        assert_eq!(err.kind, ConfigErrorKind::TypeMismatch);
        assert_eq!(err.key, "mass");
        let err = parse_config(&HARMONIC.replace("mass = 1", "mass = -1")).unwrap_err();
        assert_eq!(err.kind, ConfigErrorKind::ConstraintViolation);
        assert_eq!(err.line, 7);
    }

    #[test]
    fn missing_sections() {
        let err = parse_config("[system]\nn = 2\nd = 3\n[kinetic]\ntype = ultrarelativistic\n[state]\ntower = boson-gs\n")
            .unwrap_err();
        assert_eq!(err.kind, ConfigErrorKind::MissingSection);
        let err = parse_config("n = 2\n").unwrap_err();
        assert_eq!(err.kind, ConfigErrorKind::MissingSection);
    }

    #[test]
    fn quanta_and_overrides() {
        let cfg = parse_config(&HARMONIC.replace("tower = boson-gs", "quanta = 1:0, 0:2")).unwrap();
        assert_eq!(cfg.q_value().unwrap().value(), 7.0);
        let err = parse_config(&HARMONIC.replace("tower = boson-gs", "quanta = 1:0")).unwrap_err();
        assert_eq!(err.kind, ConfigErrorKind::ConstraintViolation);
        let cfg = cfg.with_value("N", "5").unwrap_err();
        assert_eq!(cfg.key, "quanta");
        let cfg = parse_config(HARMONIC).unwrap().with_value("n", "5").unwrap();
        assert_eq!(cfg.q_value().unwrap().value(), 6.0);
        let cfg = cfg.with_value("q", "2.5").unwrap();
        assert_eq!(cfg.state, StateChoice::Explicit(2.5));
        assert!(is_integer_param("N"));
        assert!(!is_integer_param("twobody.amplitude"));
    }
}
