//! JSON scenario configuration.
//!
//! A config is a single object whose `scenario` field selects one of the
//! seven registered scenarios; the remaining keys are scenario specific and
//! unknown keys are rejected.

use crate::error::{Error, Result};
use crate::mimetic3d::GridSpec3;
use serde::{Deserialize, Serialize};

pub const SCENARIOS: [&str; 7] = [
    "oscillator",
    "odesys",
    "wave1d",
    "scalarwave3d",
    "maxwell3d",
    "transport1d",
    "diffusion1d",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scenario", rename_all = "lowercase")]
pub enum RunConfig {
    Oscillator(OscillatorConfig),
    Odesys(OdeSysConfig),
    Wave1d(Wave1dConfig),
    Scalarwave3d(ScalarWave3dConfig),
    Maxwell3d(Maxwell3dConfig),
    Transport1d(Transport1dConfig),
    Diffusion1d(Diffusion1dConfig),
}

fn one() -> f64 {
    1.0
}

fn default_seed() -> u64 {
    crate::linalg::DEFAULT_SEED
}

fn default_tol() -> f64 {
    1e-10
}

/// Harmonic oscillator from the collocated pair `(u0, v0)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OscillatorConfig {
    pub omega: f64,
    pub dt: Option<f64>,
    #[serde(alias = "dt_factor")]
    pub cfl_factor: Option<f64>,
    pub steps: u64,
    #[serde(default = "one")]
    pub u0: f64,
    #[serde(default)]
    pub v0: f64,
}

/// Skew system with a seeded random `rows × cols` matrix, optionally of
/// reduced `rank`, and seeded random initial data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OdeSysConfig {
    pub rows: usize,
    pub cols: usize,
    #[serde(default)]
    pub rank: Option<usize>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub dt: Option<f64>,
    #[serde(alias = "dt_factor")]
    pub cfl_factor: Option<f64>,
    pub steps: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Wave1dInitial {
    /// `u⁰ = exp(−((x − center·L)/(width·L))²)`, `v⁰ = 0`.
    Gaussian { center: f64, width: f64 },
    /// `u⁰ = sin(2π mode x/L)`; `v⁰ = u⁰` when `traveling`, else 0.
    Sine {
        mode: usize,
        #[serde(default)]
        traveling: bool,
    },
}

impl Default for Wave1dInitial {
    fn default() -> Self {
        Wave1dInitial::Gaussian {
            center: 0.5,
            width: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Wave1dConfig {
    pub n: usize,
    #[serde(default = "one")]
    pub length: f64,
    #[serde(default = "one")]
    pub c: f64,
    pub dt: Option<f64>,
    #[serde(alias = "dt_factor")]
    pub cfl_factor: Option<f64>,
    pub steps: u64,
    #[serde(default)]
    pub initial: Wave1dInitial,
    #[serde(default)]
    pub snapshot_every: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MaterialConfig {
    Constant {
        #[serde(default = "one")]
        a: f64,
        #[serde(default = "one")]
        b: f64,
        #[serde(rename = "A", default = "one")]
        upper_a: f64,
        #[serde(rename = "B", default = "one")]
        upper_b: f64,
    },
    /// Every lattice uniform in `[lo, hi)`.
    Random { lo: f64, hi: f64, seed: u64 },
}

impl Default for MaterialConfig {
    fn default() -> Self {
        MaterialConfig::Constant {
            a: 1.0,
            b: 1.0,
            upper_a: 1.0,
            upper_b: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ScalarInitial {
    /// Gaussian bump; `center` in fractions of the box, `width` in fractions
    /// of the shortest box side.
    Gaussian { center: [f64; 3], width: f64 },
    /// `cos(2π k·x/L)` sampled on the `u` lattice.
    Mode { k: [usize; 3] },
}

impl Default for ScalarInitial {
    fn default() -> Self {
        ScalarInitial::Gaussian {
            center: [0.5; 3],
            width: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalarWave3dConfig {
    pub grid: GridSpec3,
    #[serde(default)]
    pub material: MaterialConfig,
    pub dt: Option<f64>,
    #[serde(alias = "dt_factor")]
    pub cfl_factor: Option<f64>,
    pub steps: u64,
    #[serde(default)]
    pub starred: bool,
    #[serde(default)]
    pub initial: ScalarInitial,
    #[serde(default)]
    pub snapshot_every: Option<u64>,
    #[serde(default = "default_tol")]
    pub norm_tol: f64,
}

/// A positive lattice: one value everywhere, or seeded uniform samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum LatticeConfig {
    Constant(f64),
    Random { lo: f64, hi: f64, seed: u64 },
}

impl Default for LatticeConfig {
    fn default() -> Self {
        LatticeConfig::Constant(1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MaxwellInitial {
    /// Divergence-free `E_z = sin(2π(kx x/Lx + ky y/Ly))`, other components 0.
    Mode { kx: usize, ky: usize },
    /// Seeded random `E` in `[-1, 1)`; not divergence free.
    Random { seed: u64 },
}

impl Default for MaxwellInitial {
    fn default() -> Self {
        MaxwellInitial::Mode { kx: 1, ky: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Maxwell3dConfig {
    pub grid: GridSpec3,
    #[serde(default)]
    pub eps: LatticeConfig,
    #[serde(default)]
    pub mu: LatticeConfig,
    pub dt: Option<f64>,
    #[serde(alias = "dt_factor")]
    pub cfl_factor: Option<f64>,
    pub steps: u64,
    #[serde(default)]
    pub initial: MaxwellInitial,
    #[serde(default)]
    pub snapshot_every: Option<u64>,
    #[serde(default = "default_tol")]
    pub norm_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum VelocityProfile {
    Uniform {
        v: f64,
    },
    /// `v = slope·(x − L/2)`; a negative slope collapses toward the center.
    Linear {
        slope: f64,
    },
    /// `v = amplitude·sin(2π mode x/L)`.
    Sine {
        amplitude: f64,
        mode: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DensityProfile {
    /// `hi` on cells whose centers lie in `[start·L, end·L)`, `lo` elsewhere.
    Square { lo: f64, hi: f64, start: f64, end: f64 },
    /// `base + exp(−((x − center·L)/(width·L))²)`.
    Gaussian {
        center: f64,
        width: f64,
        #[serde(default)]
        base: f64,
    },
}

impl Default for DensityProfile {
    fn default() -> Self {
        DensityProfile::Square {
            lo: 0.0,
            hi: 1.0,
            start: 0.25,
            end: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Transport1dConfig {
    pub n: usize,
    #[serde(default = "one")]
    pub length: f64,
    pub velocity: VelocityProfile,
    #[serde(default)]
    pub initial: DensityProfile,
    pub dt: Option<f64>,
    #[serde(alias = "dt_factor")]
    pub cfl_factor: Option<f64>,
    pub steps: u64,
    #[serde(default)]
    pub snapshot_every: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DiffusionProfile {
    Constant {
        d: f64,
    },
    /// `D = base + amplitude·sin(2π mode x/L)`.
    Sine {
        base: f64,
        amplitude: f64,
        mode: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Diffusion1dConfig {
    pub n: usize,
    #[serde(default = "one")]
    pub length: f64,
    pub diffusion: DiffusionProfile,
    #[serde(default)]
    pub initial: DensityProfile,
    pub dt: Option<f64>,
    #[serde(alias = "dt_factor")]
    pub cfl_factor: Option<f64>,
    pub steps: u64,
    #[serde(default)]
    pub snapshot_every: Option<u64>,
}

fn variant<T: serde::de::DeserializeOwned>(value: serde_json::Value) -> Result<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner().to_string();
        if inner.starts_with("unknown field") {
            let at = if path == "." {
                String::new()
            } else {
                format!(" in `{path}`")
            };
            Error::Config(format!("unknown key{at}: {inner}"))
        } else {
            Error::Config(format!("invalid value at `{path}`: {inner}"))
        }
    })
}

/// Parses and validates a JSON config.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Config(format!("malformed JSON: {e}")))?;
    let obj = value
        .as_object_mut()
        .ok_or_else(|| Error::Config("config must be a JSON object".into()))?;
    let scenario = obj
        .remove("scenario")
        .ok_or_else(|| Error::Config("missing key `scenario`".into()))?;
    let config = match scenario.as_str() {
        Some("oscillator") => RunConfig::Oscillator(variant(value)?),
        Some("odesys") => RunConfig::Odesys(variant(value)?),
        Some("wave1d") => RunConfig::Wave1d(variant(value)?),
        Some("scalarwave3d") => RunConfig::Scalarwave3d(variant(value)?),
        Some("maxwell3d") => RunConfig::Maxwell3d(variant(value)?),
        Some("transport1d") => RunConfig::Transport1d(variant(value)?),
        Some("diffusion1d") => RunConfig::Diffusion1d(variant(value)?),
        _ => {
            return Err(Error::Config(format!(
                "unknown scenario {scenario} at `scenario`, expected one of {}",
                SCENARIOS.join(", ")
            )))
        }
    };
    config.validate()?;
    Ok(config)
}

fn invalid(path: &str, reason: impl std::fmt::Display) -> Error {
    Error::Config(format!("invalid value at `{path}`: {reason}"))
}

fn check_positive(path: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(invalid(path, format!("must be positive and finite, got {x}")))
    }
}

fn check_nonnegative(path: &str, x: f64) -> Result<()> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(invalid(path, format!("must be nonnegative and finite, got {x}")))
    }
}

fn check_dt_rule(dt: Option<f64>, cfl: Option<f64>) -> Result<()> {
    match (dt, cfl) {
        (Some(dt), None) => check_positive("dt", dt),
        (None, Some(f)) => check_positive("cfl_factor", f),
        (Some(_), Some(_)) => Err(Error::Config("give either `dt` or `cfl_factor`, not both".into())),
        (None, None) => Err(Error::Config("missing time step: give `dt` or `cfl_factor`".into())),
    }
}

fn check_range(path: &str, lo: f64, hi: f64) -> Result<()> {
    check_positive(&format!("{path}.lo"), lo)?;
    if !(hi.is_finite() && hi > lo) {
        return Err(invalid(
            &format!("{path}.hi"),
            format!("must exceed lo = {lo}, got {hi}"),
        ));
    }
    Ok(())
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(invalid("n", format!("need at least 2 points, got {n}")));
    }
    Ok(())
}

fn check_lattice(path: &str, l: &LatticeConfig) -> Result<()> {
    match l {
        LatticeConfig::Constant(x) => check_positive(path, *x),
        LatticeConfig::Random { lo, hi, .. } => check_range(path, *lo, *hi),
    }
}

fn check_density(p: &DensityProfile) -> Result<()> {
    match p {
        DensityProfile::Square { lo, hi, start, end } => {
            check_nonnegative("initial.square.lo", *lo)?;
            check_nonnegative("initial.square.hi", *hi)?;
            if !(start < end) {
                return Err(invalid(
                    "initial.square",
                    format!("start {start} must be below end {end}"),
                ));
            }
            Ok(())
        }
        DensityProfile::Gaussian { width, base, .. } => {
            check_positive("initial.gaussian.width", *width)?;
            check_nonnegative("initial.gaussian.base", *base)
        }
    }
}

impl RunConfig {
    pub fn scenario(&self) -> &'static str {
        match self {
            RunConfig::Oscillator(_) => "oscillator",
            RunConfig::Odesys(_) => "odesys",
            RunConfig::Wave1d(_) => "wave1d",
            RunConfig::Scalarwave3d(_) => "scalarwave3d",
            RunConfig::Maxwell3d(_) => "maxwell3d",
            RunConfig::Transport1d(_) => "transport1d",
            RunConfig::Diffusion1d(_) => "diffusion1d",
        }
    }

    pub fn steps(&self) -> u64 {
        match self {
            RunConfig::Oscillator(c) => c.steps,
            RunConfig::Odesys(c) => c.steps,
            RunConfig::Wave1d(c) => c.steps,
            RunConfig::Scalarwave3d(c) => c.steps,
            RunConfig::Maxwell3d(c) => c.steps,
            RunConfig::Transport1d(c) => c.steps,
            RunConfig::Diffusion1d(c) => c.steps,
        }
    }

    fn dt_rule(&self) -> (Option<f64>, Option<f64>) {
        match self {
            RunConfig::Oscillator(c) => (c.dt, c.cfl_factor),
            RunConfig::Odesys(c) => (c.dt, c.cfl_factor),
            RunConfig::Wave1d(c) => (c.dt, c.cfl_factor),
            RunConfig::Scalarwave3d(c) => (c.dt, c.cfl_factor),
            RunConfig::Maxwell3d(c) => (c.dt, c.cfl_factor),
            RunConfig::Transport1d(c) => (c.dt, c.cfl_factor),
            RunConfig::Diffusion1d(c) => (c.dt, c.cfl_factor),
        }
    }

    /// Non-fatal issues worth reporting before a run.
    pub fn warnings(&self) -> Vec<String> {
        match self.dt_rule().1 {
            Some(f) if f > 1.0 => {
                vec![format!(
                    "cfl_factor = {f} exceeds 1; the run is expected to be unstable"
                )]
            }
            _ => Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (dt, cfl) = self.dt_rule();
        check_dt_rule(dt, cfl)?;
        match self {
            RunConfig::Oscillator(c) => {
                check_positive("omega", c.omega)?;
                if !(c.u0.is_finite() && c.v0.is_finite()) {
                    return Err(invalid("u0", "initial data must be finite"));
                }
            }
            RunConfig::Odesys(c) => {
                if c.rows == 0 || c.cols == 0 {
                    return Err(invalid(
                        "rows",
                        format!("matrix must be nonempty, got {}x{}", c.rows, c.cols),
                    ));
                }
                if let Some(r) = c.rank {
                    if r == 0 || r > c.rows.min(c.cols) {
                        return Err(invalid(
                            "rank",
                            format!("must lie in 1..={}, got {r}", c.rows.min(c.cols)),
                        ));
                    }
                }
            }
            RunConfig::Wave1d(c) => {
                check_n(c.n)?;
                check_positive("length", c.length)?;
                check_positive("c", c.c)?;
                if let Wave1dInitial::Gaussian { width, .. } = c.initial {
                    check_positive("initial.gaussian.width", width)?;
                }
            }
            RunConfig::Scalarwave3d(c) => {
                c.grid.validate().map_err(|e| invalid("grid", e))?;
                check_positive("norm_tol", c.norm_tol)?;
                match c.material {
                    MaterialConfig::Constant { a, b, upper_a, upper_b } => {
                        check_positive("material.constant.a", a)?;
                        check_positive("material.constant.b", b)?;
                        check_positive("material.constant.A", upper_a)?;
                        check_positive("material.constant.B", upper_b)?;
                    }
                    MaterialConfig::Random { lo, hi, .. } => check_range("material.random", lo, hi)?,
                }
                if let ScalarInitial::Gaussian { width, .. } = c.initial {
                    check_positive("initial.gaussian.width", width)?;
                }
            }
            RunConfig::Maxwell3d(c) => {
                c.grid.validate().map_err(|e| invalid("grid", e))?;
                check_positive("norm_tol", c.norm_tol)?;
                check_lattice("eps", &c.eps)?;
                check_lattice("mu", &c.mu)?;
            }
            RunConfig::Transport1d(c) => {
                check_n(c.n)?;
                check_positive("length", c.length)?;
                check_density(&c.initial)?;
                let finite = match c.velocity {
                    VelocityProfile::Uniform { v } => v.is_finite(),
                    VelocityProfile::Linear { slope } => slope.is_finite(),
                    VelocityProfile::Sine { amplitude, .. } => amplitude.is_finite(),
                };
                if !finite {
                    return Err(invalid("velocity", "must be finite"));
                }
            }
            RunConfig::Diffusion1d(c) => {
                check_n(c.n)?;
                check_positive("length", c.length)?;
                check_density(&c.initial)?;
                match c.diffusion {
                    DiffusionProfile::Constant { d } => check_nonnegative("diffusion.constant.d", d)?,
                    DiffusionProfile::Sine { base, amplitude, .. } => {
                        if !(base.is_finite() && amplitude.is_finite() && base >= amplitude.abs()) {
                            return Err(invalid("diffusion.sine", "need base >= |amplitude| so that D >= 0"));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Time step from the config's rule: `dt` as given, or `cfl_factor · dt_max`.
pub(crate) fn resolve_dt(
    dt: Option<f64>,
    cfl_factor: Option<f64>,
    dt_max: impl FnOnce() -> Result<f64>,
) -> Result<f64> {
    match (dt, cfl_factor) {
        (Some(dt), _) => Ok(dt),
        (None, Some(f)) => Ok(f * dt_max()?),
        (None, None) => Err(Error::Config("missing time step".into())),
    }
}
