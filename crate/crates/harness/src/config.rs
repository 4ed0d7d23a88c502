//! Experiment configuration in a flat `key = value` text format.
//!
//! ```text
//! # comments start with '#'
//! geometry.altitude = 20
//! geometry.eve = 200, 0, 0
//! sweep.power_dbm = 10, 20, 30
//! strategies = ais, fixed(0.5), fixed(0.9)
//! ```
//!
//! Every key is optional; missing keys take the default flight scenario.
//! Points are `x, y, z` in metres, lists are comma separated.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;
use uavdm_core::{AisConfig, ArrayConfig, Point3, ScenarioGeometry};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` given twice")]
    DuplicateKey { line: usize, key: String },
    #[error("{key}: {message}")]
    Invalid { key: String, message: String },
}

impl ConfigError {
    fn invalid(key: &str, message: impl Into<String>) -> Self {
        ConfigError::Invalid {
            key: key.to_string(),
            message: message.into(),
        }
    }

    /// The offending key, when the error is tied to one.
    pub fn key(&self) -> Option<&str> {
        match self {
            ConfigError::UnknownKey { key, .. }
            | ConfigError::DuplicateKey { key, .. }
            | ConfigError::Invalid { key, .. } => Some(key),
            _ => None,
        }
    }
}

/// How the power split is chosen at each sampling point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strategy {
    /// Alternating beamforming and closed-form Max-SR power allocation.
    Ais,
    /// Leakage beamformers with a fixed split, no iteration.
    Fixed(f64),
    /// The alternating loop with the split found by exhaustive grid search.
    GridOracle,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Ais => write!(f, "ais"),
            Strategy::Fixed(beta) => write!(f, "fixed({beta})"),
            Strategy::GridOracle => write!(f, "grid_oracle"),
        }
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        match s {
            "ais" => return Ok(Strategy::Ais),
            "grid_oracle" => return Ok(Strategy::GridOracle),
            _ => {}
        }
        let inner = s
            .strip_prefix("fixed(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| {
                format!("unknown strategy `{s}` (expected ais, fixed(<beta>) or grid_oracle)")
            })?;
        let beta: f64 = inner
            .trim()
            .parse()
            .map_err(|_| format!("fixed strategy needs a numeric split, got `{inner}`"))?;
        if !(beta > 0.0 && beta < 1.0) {
            return Err(format!("fixed split must lie in (0, 1), got {beta}"));
        }
        Ok(Strategy::Fixed(beta))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!(
                "unknown output format `{other}` (expected csv or json)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub geometry: ScenarioGeometry,
    /// Element spacing and the default antenna count.
    pub array: ArrayConfig,
    pub noise_dbm_bob: f64,
    pub noise_dbm_eve: f64,
    pub power_sweep_dbm: Vec<f64>,
    pub antenna_sweep: Vec<usize>,
    pub strategies: Vec<Strategy>,
    pub ais: AisConfig,
    pub grid_step: f64,
    pub output_path: PathBuf,
    pub output_format: OutputFormat,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            geometry: ScenarioGeometry::default(),
            array: ArrayConfig {
                num_antennas: 8,
                spacing: 0.5,
            },
            noise_dbm_bob: -70.0,
            noise_dbm_eve: -70.0,
            power_sweep_dbm: vec![10.0, 20.0, 30.0],
            antenna_sweep: vec![8],
            strategies: vec![Strategy::Ais, Strategy::Fixed(0.5), Strategy::Fixed(0.9)],
            ais: AisConfig::default(),
            grid_step: 1e-4,
            output_path: PathBuf::from("results.csv"),
            output_format: OutputFormat::Csv,
        }
    }
}

const KEYS: &[&str] = &[
    "geometry.alice",
    "geometry.eve",
    "geometry.start",
    "geometry.end",
    "geometry.altitude",
    "geometry.speed",
    "geometry.sample_interval",
    "geometry.path_loss_exponent",
    "geometry.reference_gain",
    "array.antennas",
    "array.spacing",
    "noise.bob_dbm",
    "noise.eve_dbm",
    "sweep.power_dbm",
    "sweep.antennas",
    "strategies",
    "ais.beta_init",
    "ais.epsilon",
    "ais.max_iterations",
    "grid.step",
    "output.path",
    "output.format",
];

fn parse_number(key: &str, raw: &str) -> Result<f64, ConfigError> {
    let v: f64 = raw.trim().parse().map_err(|_| {
        ConfigError::invalid(key, format!("expected a number, got `{}`", raw.trim()))
    })?;
    if !v.is_finite() {
        return Err(ConfigError::invalid(key, "value must be finite"));
    }
    Ok(v)
}

fn parse_count(key: &str, raw: &str) -> Result<usize, ConfigError> {
    raw.trim().parse().map_err(|_| {
        ConfigError::invalid(
            key,
            format!("expected a whole number, got `{}`", raw.trim()),
        )
    })
}

fn split_list(raw: &str) -> impl Iterator<Item = &str> {
    raw.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn parse_point(key: &str, raw: &str) -> Result<Point3, ConfigError> {
    let parts: Vec<f64> = split_list(raw)
        .map(|p| parse_number(key, p))
        .collect::<Result<_, _>>()?;
    <[f64; 3]>::try_from(parts.as_slice()).map_err(|_| {
        ConfigError::invalid(
            key,
            format!("expected three coordinates, got {}", parts.len()),
        )
    })
}

fn positive(key: &str, what: &str, v: f64) -> Result<(), ConfigError> {
    if v > 0.0 {
        Ok(())
    } else {
        Err(ConfigError::invalid(
            key,
            format!("{what} must be positive"),
        ))
    }
}

fn fmt_point(p: Point3) -> String {
    format!("{}, {}, {}", p[0], p[1], p[2])
}

fn fmt_list<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

impl ExperimentConfig {
    /// Checks every invariant and names the key at fault.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let g = &self.geometry;
        positive("geometry.altitude", "altitude", g.altitude)?;
        positive("geometry.speed", "speed", g.speed)?;
        positive(
            "geometry.sample_interval",
            "sample interval",
            g.sample_interval,
        )?;
        positive(
            "geometry.path_loss_exponent",
            "path loss exponent",
            g.path_loss_exponent,
        )?;
        positive(
            "geometry.reference_gain",
            "reference gain",
            g.reference_gain,
        )?;
        if g.start[2] != g.altitude {
            return Err(ConfigError::invalid(
                "geometry.start",
                format!(
                    "flight start must be at the altitude {} m, got z = {}",
                    g.altitude, g.start[2]
                ),
            ));
        }
        if g.end[2] != g.altitude {
            return Err(ConfigError::invalid(
                "geometry.end",
                format!(
                    "flight end must be at the altitude {} m, got z = {}",
                    g.altitude, g.end[2]
                ),
            ));
        }
        if g.flight_length() <= 0.0 {
            return Err(ConfigError::invalid(
                "geometry.end",
                "flight start and end coincide",
            ));
        }
        if g.num_samples() == 0 {
            return Err(ConfigError::invalid(
                "geometry.end",
                "flight is shorter than one sampling interval",
            ));
        }
        if g.alice == g.eve {
            return Err(ConfigError::invalid(
                "geometry.eve",
                "Eve cannot share Alice's position",
            ));
        }
        g.validate()
            .map_err(|e| ConfigError::invalid("geometry", e.to_string()))?;

        self.array
            .validate()
            .map_err(|e| ConfigError::invalid("array", e.to_string()))?;
        if self.power_sweep_dbm.is_empty() {
            return Err(ConfigError::invalid(
                "sweep.power_dbm",
                "power sweep must not be empty",
            ));
        }
        if self.antenna_sweep.is_empty() {
            return Err(ConfigError::invalid(
                "sweep.antennas",
                "antenna sweep must not be empty",
            ));
        }
        if let Some(m) = self.antenna_sweep.iter().find(|&&m| m < 2) {
            return Err(ConfigError::invalid(
                "sweep.antennas",
                format!("antenna count must be at least 2, got {m}"),
            ));
        }
        if self.strategies.is_empty() {
            return Err(ConfigError::invalid(
                "strategies",
                "at least one strategy is required",
            ));
        }
        if !(self.grid_step > 0.0 && self.grid_step <= 1e-2) {
            return Err(ConfigError::invalid(
                "grid.step",
                format!("grid step must lie in (0, 0.01], got {}", self.grid_step),
            ));
        }
        if !(self.ais.beta_init > 0.0 && self.ais.beta_init < 1.0) {
            return Err(ConfigError::invalid(
                "ais.beta_init",
                "initial split must lie in (0, 1)",
            ));
        }
        positive("ais.epsilon", "convergence tolerance", self.ais.epsilon)?;
        if self.ais.max_iterations == 0 {
            return Err(ConfigError::invalid(
                "ais.max_iterations",
                "iteration cap must be at least 1",
            ));
        }
        Ok(())
    }

    /// Serializes every key, so that parsing the result reproduces `self`.
    pub fn to_config_string(&self) -> String {
        let g = &self.geometry;
        let lines = [
            ("geometry.alice", fmt_point(g.alice)),
            ("geometry.eve", fmt_point(g.eve)),
            ("geometry.start", fmt_point(g.start)),
            ("geometry.end", fmt_point(g.end)),
            ("geometry.altitude", g.altitude.to_string()),
            ("geometry.speed", g.speed.to_string()),
            ("geometry.sample_interval", g.sample_interval.to_string()),
            (
                "geometry.path_loss_exponent",
                g.path_loss_exponent.to_string(),
            ),
            ("geometry.reference_gain", g.reference_gain.to_string()),
            ("array.antennas", self.array.num_antennas.to_string()),
            ("array.spacing", self.array.spacing.to_string()),
            ("noise.bob_dbm", self.noise_dbm_bob.to_string()),
            ("noise.eve_dbm", self.noise_dbm_eve.to_string()),
            ("sweep.power_dbm", fmt_list(&self.power_sweep_dbm)),
            ("sweep.antennas", fmt_list(&self.antenna_sweep)),
            ("strategies", fmt_list(&self.strategies)),
            ("ais.beta_init", self.ais.beta_init.to_string()),
            ("ais.epsilon", self.ais.epsilon.to_string()),
            ("ais.max_iterations", self.ais.max_iterations.to_string()),
            ("grid.step", self.grid_step.to_string()),
            ("output.path", self.output_path.display().to_string()),
            ("output.format", self.output_format.to_string()),
        ];
        lines.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }
}

/// Reads and validates a config file.
pub fn parse_config(path: &Path) -> Result<ExperimentConfig, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config_str(&text)
}

pub fn parse_config_str(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut entries: BTreeMap<&str, &str> = BTreeMap::new();
    for (i, raw_line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line: line_no,
            message: format!("expected `key = value`, got `{line}`"),
        })?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(ConfigError::UnknownKey {
                line: line_no,
                key: key.to_string(),
            });
        }
        if entries.insert(key, value.trim()).is_some() {
            return Err(ConfigError::DuplicateKey {
                line: line_no,
                key: key.to_string(),
            });
        }
    }

    let mut cfg = ExperimentConfig::default();
    let num = |key: &str, fallback: f64| {
        entries
            .get(key)
            .map_or(Ok(fallback), |v| parse_number(key, v))
    };

    let g = &mut cfg.geometry;
    g.altitude = num("geometry.altitude", g.altitude)?;
    g.start[2] = g.altitude;
    g.end[2] = g.altitude;
    g.speed = num("geometry.speed", g.speed)?;
    g.sample_interval = num("geometry.sample_interval", g.sample_interval)?;
    g.path_loss_exponent = num("geometry.path_loss_exponent", g.path_loss_exponent)?;
    g.reference_gain = num("geometry.reference_gain", g.reference_gain)?;
    for (key, slot) in [
        ("geometry.alice", &mut g.alice),
        ("geometry.eve", &mut g.eve),
        ("geometry.start", &mut g.start),
        ("geometry.end", &mut g.end),
    ] {
        if let Some(v) = entries.get(key) {
            *slot = parse_point(key, v)?;
        }
    }

    if let Some(v) = entries.get("array.antennas") {
        cfg.array.num_antennas = parse_count("array.antennas", v)?;
        cfg.antenna_sweep = vec![cfg.array.num_antennas];
    }
    cfg.array.spacing = num("array.spacing", cfg.array.spacing)?;
    cfg.noise_dbm_bob = num("noise.bob_dbm", cfg.noise_dbm_bob)?;
    cfg.noise_dbm_eve = num("noise.eve_dbm", cfg.noise_dbm_eve)?;

    if let Some(v) = entries.get("sweep.power_dbm") {
        cfg.power_sweep_dbm = split_list(v)
            .map(|p| parse_number("sweep.power_dbm", p))
            .collect::<Result<_, _>>()?;
    }
    if let Some(v) = entries.get("sweep.antennas") {
        cfg.antenna_sweep = split_list(v)
            .map(|p| parse_count("sweep.antennas", p))
            .collect::<Result<_, _>>()?;
    }
    if let Some(v) = entries.get("strategies") {
        cfg.strategies = split_list(v)
            .map(|s| s.parse().map_err(|m| ConfigError::invalid("strategies", m)))
            .collect::<Result<_, _>>()?;
    }

    cfg.ais.beta_init = num("ais.beta_init", cfg.ais.beta_init)?;
    cfg.ais.epsilon = num("ais.epsilon", cfg.ais.epsilon)?;
    if let Some(v) = entries.get("ais.max_iterations") {
        cfg.ais.max_iterations = parse_count("ais.max_iterations", v)?;
    }
    cfg.grid_step = num("grid.step", cfg.grid_step)?;
    if let Some(v) = entries.get("output.path") {
        cfg.output_path = PathBuf::from(v);
    }
    if let Some(v) = entries.get("output.format") {
        cfg.output_format = v
            .parse()
            .map_err(|m| ConfigError::invalid("output.format", m))?;
    }

    cfg.validate()?;
    Ok(cfg)
}
