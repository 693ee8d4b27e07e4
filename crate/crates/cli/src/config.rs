//! Run configuration: JSON with a versioned `schema` field.
//!
//! Every numeric field is read in the unit system named by `units`; the
//! conversion to Planck units happens once, in [`RunConfig::resolve`].

use std::path::{Path, PathBuf};

use gravidec_core::special::kappa_constants;
use gravidec_core::stochastic::MCConfig;
use gravidec_core::{
    BathMode, GravitonState, InternalBath, QuadratureSpec, SpatialVector, StateKind, SuperpositionPath, UnitSystem,
};
use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "gravidec/1";

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: String,
    #[serde(default)]
    pub units: UnitSystem,
    /// Particle mass.
    pub m0: f64,
    pub state: StateBlock,
    pub bath: BathBlock,
    pub path: PathBlock,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    #[serde(default)]
    pub mc: McBlock,
    #[serde(default)]
    pub output: OutputBlock,
    #[serde(default)]
    pub method: MethodChoice,
    /// Also report the decoherence time.
    #[serde(default)]
    pub tau_dec: bool,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
}

/// Graviton state. Cutoffs are rates (inverse time).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateBlock {
    Vacuum {
        cutoff: f64,
    },
    /// Give either `beta_g` or `temperature_g`.
    Thermal {
        cutoff: f64,
        #[serde(default)]
        beta_g: Option<f64>,
        #[serde(default)]
        temperature_g: Option<f64>,
    },
    Coherent {
        cutoff: f64,
        alpha: f64,
        #[serde(default)]
        state_cutoff: Option<f64>,
    },
    Squeezed {
        cutoff: f64,
        r: f64,
        phi: f64,
        #[serde(default)]
        state_cutoff: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BathModeChoice {
    #[default]
    WhiteNoise,
    FullIntegral,
}

/// Internal bath. Exactly one of `gamma`/`kappa` and one of
/// `beta`/`temperature` must be present. `kappa` fixes γ so that the κ of
/// the configured graviton state takes this value. γ is always in Planck
/// units.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathBlock {
    pub lambda: f64,
    #[serde(default)]
    pub gamma: Option<f64>,
    #[serde(default)]
    pub kappa: Option<f64>,
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default)]
    pub temperature: Option<f64>,
    #[serde(default)]
    pub mode: BathModeChoice,
    #[serde(default)]
    pub cutoff_int: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathBlock {
    pub v: [f64; 3],
    pub xi: [f64; 3],
    #[serde(default)]
    pub mean_velocity: [f64; 3],
    pub t_f: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct McBlock {
    /// Adds a Monte-Carlo estimate of the graviton term to `gamma`.
    pub enabled: bool,
    pub n_steps: usize,
    pub n_samples: usize,
    pub seed: u64,
    pub psd_jitter: f64,
}

impl Default for McBlock {
    fn default() -> Self {
        let d = MCConfig::default();
        McBlock { enabled: false, n_steps: d.n_steps, n_samples: d.n_samples, seed: d.seed, psd_jitter: d.psd_jitter }
    }
}

impl McBlock {
    pub fn to_core(&self) -> MCConfig {
        MCConfig { n_steps: self.n_steps, n_samples: self.n_samples, seed: self.seed, psd_jitter: self.psd_jitter }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputBlock {
    pub format: Option<Format>,
    pub path: Option<PathBuf>,
    /// Significant digits in CSV output.
    pub precision: usize,
}

impl Default for OutputBlock {
    fn default() -> Self {
        OutputBlock { format: None, path: None, precision: 12 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodChoice {
    #[default]
    Closed,
    Quadrature,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    #[serde(rename = "t_f")]
    TF,
    Cutoff,
    #[serde(rename = "beta_g")]
    BetaG,
    Alpha,
    R,
    Phi,
    Gamma,
    Kappa,
    Beta,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::TF => "t_f",
            SweepParam::Cutoff => "cutoff",
            SweepParam::BetaG => "beta_g",
            SweepParam::Alpha => "alpha",
            SweepParam::R => "r",
            SweepParam::Phi => "phi",
            SweepParam::Gamma => "gamma",
            SweepParam::Kappa => "kappa",
            SweepParam::Beta => "beta",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

/// What the `gamma_grav` and `gamma_mixed` sweep columns hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Terms {
    /// The full graviton and mixed terms of the rate.
    #[default]
    Full,
    /// Only the bracket carrying the state's own κ: the thermal or coherent
    /// addition, or the `sinh 2r` part of the squeezed rate. `gamma_total`
    /// stays the full rate.
    State,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default)]
    pub scale: Scale,
    #[serde(default)]
    pub terms: Terms,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), String> {
        if self.count < 2 {
            return Err(format!("sweep.count must be at least 2, got {}", self.count));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(format!("sweep needs finite min < max, got [{}, {}]", self.min, self.max));
        }
        if self.scale == Scale::Log && self.min <= 0.0 {
            return Err("log-scale sweep needs min > 0".into());
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.count;
        (0..n)
            .map(|i| {
                // endpoints exactly as written
                if i == 0 {
                    return self.min;
                }
                if i == n - 1 {
                    return self.max;
                }
                let u = i as f64 / (n - 1) as f64;
                match self.scale {
                    Scale::Linear => self.min + (self.max - self.min) * u,
                    Scale::Log => (self.min.ln() + (self.max.ln() - self.min.ln()) * u).exp(),
                }
            })
            .collect()
    }
}

/// Everything a command needs, in Planck units.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub units: UnitSystem,
    pub m0: f64,
    pub state: GravitonState,
    pub bath: InternalBath,
    pub path: SuperpositionPath,
}

/// A configuration problem; always maps to exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn bad(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

fn one_of(what: &str, a: (&str, Option<f64>), b: (&str, Option<f64>)) -> Result<(bool, f64), ConfigError> {
    match (a.1, b.1) {
        (Some(x), None) => Ok((true, x)),
        (None, Some(y)) => Ok((false, y)),
        (Some(_), Some(_)) => Err(bad(format!("{what}: give only one of `{}` and `{}`", a.0, b.0))),
        (None, None) => Err(bad(format!("{what}: missing field, need `{}` or `{}`", a.0, b.0))),
    }
}

fn vector(units: UnitSystem, a: [f64; 3], to: fn(UnitSystem, f64) -> f64) -> SpatialVector {
    SpatialVector::new(to(units, a[0]), to(units, a[1]), to(units, a[2]))
}

impl RunConfig {
    /// Parses and validates; serde errors carry line and column.
    pub fn from_json(text: &str) -> Result<RunConfig, ConfigError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| bad(format!("config: {e}")))?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<RunConfig, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| bad(format!("{}: {}", path.display(), e.0)))
    }

    /// Static checks that do not need any computation.
    pub fn check(&self) -> Result<(), ConfigError> {
        if self.schema != SCHEMA {
            return Err(bad(format!("schema: expected \"{SCHEMA}\", got \"{}\"", self.schema)));
        }
        if let Some(s) = &self.sweep {
            s.validate().map_err(|e| bad(format!("sweep: {e}")))?;
        }
        if self.output.precision == 0 || self.output.precision > 17 {
            return Err(bad("output.precision must be in 1..=17"));
        }
        self.quadrature.validate().map_err(|e| bad(format!("quadrature: {e}")))?;
        if self.mc.enabled {
            self.mc.to_core().validate().map_err(|e| bad(format!("mc: {e}")))?;
        }
        self.resolve().map(|_| ())
    }

    pub fn resolve(&self) -> Result<Resolved, ConfigError> {
        let u = self.units;
        let m0 = u.mass_to_planck(self.m0);
        if !(m0 > 0.0 && m0.is_finite()) {
            return Err(bad(format!("m0 must be positive, got {}", self.m0)));
        }
        let rate = |x: f64| u.rate_to_planck(x);
        let state = match &self.state {
            StateBlock::Vacuum { cutoff } => GravitonState::vacuum(rate(*cutoff)),
            StateBlock::Thermal { cutoff, beta_g, temperature_g } => {
                let (is_beta, x) = one_of("state", ("beta_g", *beta_g), ("temperature_g", *temperature_g))?;
                let beta_g = if is_beta {
                    u.time_to_planck(x)
                } else {
                    u.beta_from_temperature(x).map_err(|e| bad(format!("state.temperature_g: {e}")))?
                };
                GravitonState::thermal(rate(*cutoff), beta_g)
            }
            StateBlock::Coherent { cutoff, alpha, state_cutoff } => GravitonState {
                cutoff: rate(*cutoff),
                kind: StateKind::Coherent { alpha: *alpha, cutoff: state_cutoff.map(rate) },
            },
            StateBlock::Squeezed { cutoff, r, phi, state_cutoff } => GravitonState {
                cutoff: rate(*cutoff),
                kind: StateKind::Squeezed { r: *r, phi: *phi, cutoff: state_cutoff.map(rate) },
            },
        };
        state.validate().map_err(|e| bad(format!("state: {e}")))?;

        let b = &self.bath;
        let (is_beta, x) = one_of("bath", ("beta", b.beta), ("temperature", b.temperature))?;
        let beta = if is_beta {
            u.time_to_planck(x)
        } else {
            u.beta_from_temperature(x).map_err(|e| bad(format!("bath.temperature: {e}")))?
        };
        let mode = match b.mode {
            BathModeChoice::WhiteNoise => {
                if b.cutoff_int.is_some() {
                    return Err(bad("bath.cutoff_int only applies to mode \"full_integral\""));
                }
                BathMode::WhiteNoise
            }
            BathModeChoice::FullIntegral => BathMode::FullIntegral { cutoff_int: b.cutoff_int.map(rate) },
        };
        let (is_gamma, g) = one_of("bath", ("gamma", b.gamma), ("kappa", b.kappa))?;
        let mut bath = InternalBath { lambda: b.lambda, gamma: 1.0, beta, mode };
        bath.gamma = if is_gamma {
            g
        } else {
            // κ is linear in γ
            let per_gamma = kappa_constants(&bath, &state, m0).map_err(|e| bad(format!("bath.kappa: {e}")))?;
            g / per_gamma
        };
        bath.validate().map_err(|e| bad(format!("bath: {e}")))?;

        let p = &self.path;
        let path = SuperpositionPath::new(
            vector(u, p.v, UnitSystem::velocity_to_planck),
            vector(u, p.xi, UnitSystem::length_to_planck),
            vector(u, p.mean_velocity, UnitSystem::velocity_to_planck),
            u.time_to_planck(p.t_f),
        )
        .map_err(|e| bad(format!("path: {e}")))?;
        Ok(Resolved { units: u, m0, state, bath, path })
    }

    /// Copy with the swept parameter set to `value` (config units).
    pub fn with_param(&self, param: SweepParam, value: f64) -> Result<RunConfig, ConfigError> {
        let mut c = self.clone();
        let wrong = |name: &str| bad(format!("sweep.param \"{name}\" does not apply to this graviton state"));
        match param {
            SweepParam::TF => c.path.t_f = value,
            SweepParam::Cutoff => match &mut c.state {
                StateBlock::Vacuum { cutoff }
                | StateBlock::Thermal { cutoff, .. }
                | StateBlock::Coherent { cutoff, .. }
                | StateBlock::Squeezed { cutoff, .. } => *cutoff = value,
            },
            SweepParam::BetaG => match &mut c.state {
                StateBlock::Thermal { beta_g, temperature_g, .. } => {
                    *beta_g = Some(value);
                    *temperature_g = None;
                }
                _ => return Err(wrong("beta_g")),
            },
            SweepParam::Alpha => match &mut c.state {
                StateBlock::Coherent { alpha, .. } => *alpha = value,
                _ => return Err(wrong("alpha")),
            },
            SweepParam::R => match &mut c.state {
                StateBlock::Squeezed { r, .. } => *r = value,
                _ => return Err(wrong("r")),
            },
            SweepParam::Phi => match &mut c.state {
                StateBlock::Squeezed { phi, .. } => *phi = value,
                _ => return Err(wrong("phi")),
            },
            SweepParam::Gamma => {
                c.bath.gamma = Some(value);
                c.bath.kappa = None;
            }
            SweepParam::Kappa => {
                c.bath.kappa = Some(value);
                c.bath.gamma = None;
            }
            SweepParam::Beta => {
                c.bath.beta = Some(value);
                c.bath.temperature = None;
            }
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"{
        "schema": "gravidec/1",
        "m0": 1.0,
        "state": {"variant": "vacuum", "cutoff": 1.0},
        "bath": {"lambda": 1.0, "gamma": 0.5, "beta": 2.0},
        "path": {"v": [0.1, 0.0, 0.0], "xi": [1.0, 0.0, 0.0], "t_f": 5.0}
    }"#;

    #[test]
    fn minimal_config_resolves() {
        let c = RunConfig::from_json(BASE).unwrap();
        let r = c.resolve().unwrap();
        assert_eq!(r.bath.gamma, 0.5);
        assert_eq!(r.path.t_f, 5.0);
    }

    #[test]
    fn unknown_key_names_field_and_line() {
        let text = BASE.replace("\"m0\": 1.0,", "\"m0\": 1.0,\n \"mass\": 2,");
        let e = RunConfig::from_json(&text).unwrap_err();
        assert!(e.0.contains("unknown field `mass`") && e.0.contains("line"), "{e}");
    }

    #[test]
    fn missing_state_field() {
        let text = BASE.replace(r#"{"variant": "vacuum", "cutoff": 1.0}"#, r#"{"variant": "thermal", "cutoff": 1.0}"#);
        let e = RunConfig::from_json(&text).unwrap_err();
        assert!(e.0.contains("beta_g"), "{e}");
    }

    #[test]
    fn wrong_schema_rejected() {
        let e = RunConfig::from_json(&BASE.replace("gravidec/1", "gravidec/0")).unwrap_err();
        assert!(e.0.contains("schema"));
    }

    #[test]
    fn kappa_sets_gamma() {
        let text = BASE.replace("\"gamma\": 0.5", "\"kappa\": 1e-4");
        let r = RunConfig::from_json(&text).unwrap().resolve().unwrap();
        let k = kappa_constants(&r.bath, &r.state, r.m0).unwrap();
        assert!((k / 1e-4 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn sweep_values() {
        let s = SweepSpec { param: SweepParam::TF, min: 0.1, max: 10.0, count: 3, scale: Scale::Log, terms: Terms::Full };
        let v = s.values();
        assert_eq!(v.len(), 3);
        assert!((v[1] - 1.0).abs() < 1e-14 && v[2] == 10.0 && v[0] == 0.1);
        let bad = SweepSpec { count: 1, ..s.clone() };
        assert!(bad.validate().is_err());
        let bad = SweepSpec { min: -1.0, ..s };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn sweep_param_must_fit_state() {
        let c = RunConfig::from_json(BASE).unwrap();
        assert!(c.with_param(SweepParam::Alpha, 1.0).is_err());
        assert!(c.with_param(SweepParam::Kappa, 1e-3).unwrap().resolve().is_ok());
    }

    #[test]
    fn si_units_convert() {
        let text = BASE.replace("\"schema\": \"gravidec/1\",", "\"schema\": \"gravidec/1\", \"units\": \"si\",");
        let r = RunConfig::from_json(&text).unwrap().resolve().unwrap();
        let tp = gravidec_core::units::constants::planck_time();
        assert!((r.path.t_f * tp / 5.0 - 1.0).abs() < 1e-12);
        assert!((r.state.cutoff / tp - 1.0).abs() < 1e-12);
    }
}
