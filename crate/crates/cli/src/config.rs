//! Flat, line-oriented key-value config files.
//!
//! One `key = value` per line, dotted keys, `#` comments, blank lines
//! ignored. Duplicate and unknown keys are rejected, and every constraint
//! violation is reported with the offending key and source line. Missing keys
//! fall back to the documented defaults, so the empty file is a valid
//! single-station config.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use gmud_core::channel::{FadingParams, Position};
use gmud_core::experiment::{
    build_single_bs_scenario, build_two_bs_scenario, Scenario, SingleBsConfig, StationId,
    SweepSpec, SweepVariable, TwoBsConfig, UserSpec, DEFAULT_K_DB, DEFAULT_MU, DEFAULT_NOISE_VAR,
    DEFAULT_RHO, DEFAULT_SEED, DEFAULT_SIGMA_S_DB, DEFAULT_SINGLE_BS_DISTANCES, DEFAULT_SNR_DB,
    DEFAULT_TWO_BS_DISTANCES, DEFAULT_TWO_BS_SEPARATION,
};
use gmud_core::partition::{CoalitionStructure, PlayerId};
use gmud_core::payoff::SystemParams;

/// A config problem attributed to its source, line, and key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub source: String,
    pub line: Option<usize>,
    pub key: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "{}:{line}: {}: {}", self.source, self.key, self.message),
            None => write!(f, "{}: {}: {}", self.source, self.key, self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

/// Which canned layout (or custom geometry) a config selects.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScenarioKind {
    SingleBs,
    TwoBs,
    Custom,
}

impl ScenarioKind {
    fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::SingleBs => "single_bs",
            ScenarioKind::TwoBs => "two_bs",
            ScenarioKind::Custom => "custom",
        }
    }
}

/// A fully validated configuration: the scenario is built and every numeric
/// constraint has already been re-checked.
#[derive(Clone, Debug)]
pub struct Config {
    pub kind: ScenarioKind,
    pub scenario: Scenario,
    pub snr_db: f64,
    pub sweep: Option<SweepSpec>,
    pub filter: Option<Vec<CoalitionStructure>>,
    pub db_offset_column: bool,
    pub output: Option<PathBuf>,
    echo: Vec<String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, ConfigError> {
        let source = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            source: source.clone(),
            line: None,
            key: "config".into(),
            message: format!("cannot read file: {e}"),
        })?;
        Config::from_str(&text, &source)
    }

    pub fn from_str(text: &str, source: &str) -> Result<Config, ConfigError> {
        let raw = Raw::parse(text, source)?;
        build_config(&raw)
    }

    /// Canonical `key = value` rendering of the effective settings; embedded
    /// and hashed in CSV output.
    pub fn echo_lines(&self) -> &[String] {
        &self.echo
    }

    /// Replaces the master seed (used by `preset --seed`).
    pub fn set_seed(&mut self, seed: u64) {
        self.scenario.seed = seed;
        for line in &mut self.echo {
            if line.starts_with("seed = ") {
                *line = format!("seed = {seed}");
            }
        }
    }
}

struct Raw<'a> {
    source: &'a str,
    entries: BTreeMap<String, (String, usize)>,
}

impl<'a> Raw<'a> {
    fn parse(text: &str, source: &'a str) -> Result<Raw<'a>, ConfigError> {
        let mut entries: BTreeMap<String, (String, usize)> = BTreeMap::new();
        for (i, raw_line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw_line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError {
                    source: source.into(),
                    line: Some(line_no),
                    key: line.into(),
                    message: "expected `key = value`".into(),
                });
            };
            let key = key.trim();
            let value = value.trim();
            if key.is_empty()
                || !key
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
            {
                return Err(ConfigError {
                    source: source.into(),
                    line: Some(line_no),
                    key: key.into(),
                    message: "malformed key".into(),
                });
            }
            if !is_known_key(key) {
                return Err(ConfigError {
                    source: source.into(),
                    line: Some(line_no),
                    key: key.into(),
                    message: "unknown key".into(),
                });
            }
            if entries
                .insert(key.into(), (value.into(), line_no))
                .is_some()
            {
                return Err(ConfigError {
                    source: source.into(),
                    line: Some(line_no),
                    key: key.into(),
                    message: "duplicate key".into(),
                });
            }
        }
        Ok(Raw { source, entries })
    }

    fn err(&self, key: &str, message: impl Into<String>) -> ConfigError {
        ConfigError {
            source: self.source.into(),
            line: self.entries.get(key).map(|(_, l)| *l),
            key: key.into(),
            message: message.into(),
        }
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(v, _)| v.as_str())
    }

    fn f64_or(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| self.err(key, format!("`{v}` is not a number"))),
        }
    }

    fn u64_or(&self, key: &str, default: u64) -> Result<u64, ConfigError> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| self.err(key, format!("`{v}` is not an unsigned integer"))),
        }
    }

    fn bool_or(&self, key: &str, default: bool) -> Result<bool, ConfigError> {
        match self.raw(key) {
            None => Ok(default),
            Some("true") => Ok(true),
            Some("false") => Ok(false),
            Some(v) => Err(self.err(key, format!("`{v}` is not `true` or `false`"))),
        }
    }

    fn f64_list_or(&self, key: &str, default: &[f64]) -> Result<Vec<f64>, ConfigError> {
        match self.raw(key) {
            None => Ok(default.to_vec()),
            Some(v) => parse_f64_list(v).map_err(|m| self.err(key, m)),
        }
    }
}

fn is_known_key(key: &str) -> bool {
    const PLAIN: &[&str] = &[
        "scenario",
        "seed",
        "mc_runs",
        "system.rho",
        "system.noise_var",
        "system.snr_db",
        "fading.k_db",
        "fading.mu",
        "fading.sigma_s_db",
        "single_bs.distances",
        "two_bs.distances",
        "two_bs.separation",
        "sweep.variable",
        "sweep.values",
        "sweep.structures",
        "output",
        "output.db_offset_column",
    ];
    PLAIN.contains(&key)
        || key
            .strip_prefix("station.")
            .is_some_and(|n| n.parse::<usize>().is_ok())
        || key
            .strip_prefix("user.")
            .is_some_and(|n| n.parse::<usize>().is_ok())
}

fn parse_f64_list(value: &str) -> Result<Vec<f64>, String> {
    value
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("`{}` is not a number", t.trim()))
        })
        .collect()
}

/// `start:stop:step` (inclusive where the grid lands on `stop`) or an
/// explicit comma-separated list.
fn parse_sweep_values(value: &str) -> Result<Vec<f64>, String> {
    if value.contains(':') {
        let parts: Vec<&str> = value.split(':').collect();
        if parts.len() != 3 {
            return Err("range form is `start:stop:step`".into());
        }
        let nums: Vec<f64> = parts
            .iter()
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("`{}` is not a number", t.trim()))
            })
            .collect::<Result<_, String>>()?;
        let (start, stop, step) = (nums[0], nums[1], nums[2]);
        if step == 0.0 || !step.is_finite() {
            return Err("step must be non-zero".into());
        }
        if (stop - start) * step < 0.0 {
            return Err("step direction does not reach stop".into());
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize;
        Ok((0..=count).map(|k| start + k as f64 * step).collect())
    } else {
        parse_f64_list(value)
    }
}

fn key_for_param(name: &str) -> &'static str {
    match name {
        "rho" => "system.rho",
        "noise_var" => "system.noise_var",
        "snr_db" => "system.snr_db",
        "tx_power" => "system.snr_db",
        "k_db" => "fading.k_db",
        "mu" => "fading.mu",
        "sigma_s_db" => "fading.sigma_s_db",
        "mc_runs" => "mc_runs",
        _ => "scenario",
    }
}

fn build_config(raw: &Raw<'_>) -> Result<Config, ConfigError> {
    let kind = match raw.raw("scenario").unwrap_or("single_bs") {
        "single_bs" => ScenarioKind::SingleBs,
        "two_bs" => ScenarioKind::TwoBs,
        "custom" => ScenarioKind::Custom,
        other => {
            return Err(raw.err(
                "scenario",
                format!("`{other}` is not one of single_bs, two_bs, custom"),
            ))
        }
    };

    // Geometry keys are scoped to their scenario kind.
    for (key, scope) in [
        ("single_bs.distances", ScenarioKind::SingleBs),
        ("two_bs.distances", ScenarioKind::TwoBs),
        ("two_bs.separation", ScenarioKind::TwoBs),
    ] {
        if raw.raw(key).is_some() && kind != scope {
            return Err(raw.err(
                key,
                format!("only valid for scenario = {}", scope.as_str()),
            ));
        }
    }
    if kind != ScenarioKind::Custom {
        for key in raw.entries.keys() {
            if key.starts_with("station.") || key.starts_with("user.") {
                return Err(raw.err(key, "only valid for scenario = custom"));
            }
        }
    }

    let seed = raw.u64_or("seed", DEFAULT_SEED)?;
    let mc_runs = raw.u64_or("mc_runs", 1)?;
    let mc_runs = u32::try_from(mc_runs)
        .map_err(|_| raw.err("mc_runs", "too large"))
        .and_then(|n| {
            if n == 0 {
                Err(raw.err("mc_runs", "mc_runs must be at least 1"))
            } else {
                Ok(n)
            }
        })?;
    let rho = raw.f64_or("system.rho", DEFAULT_RHO)?;
    let noise_var = raw.f64_or("system.noise_var", DEFAULT_NOISE_VAR)?;
    let snr_db = raw.f64_or("system.snr_db", DEFAULT_SNR_DB)?;
    let k_db = raw.f64_or("fading.k_db", DEFAULT_K_DB)?;
    let mu = raw.f64_or("fading.mu", DEFAULT_MU)?;
    let sigma_s_db = raw.f64_or("fading.sigma_s_db", DEFAULT_SIGMA_S_DB)?;

    let attribute = |e: gmud_core::Error| -> ConfigError {
        match e {
            gmud_core::Error::InvalidParameter { name, constraint } => {
                raw.err(key_for_param(name), format!("{name} must be {constraint}"))
            }
            other => raw.err("scenario", other.to_string()),
        }
    };

    let mut echo = vec![
        format!("scenario = {}", kind.as_str()),
        format!("seed = {seed}"),
        format!("mc_runs = {mc_runs}"),
        format!("system.rho = {rho}"),
        format!("system.noise_var = {noise_var}"),
        format!("system.snr_db = {snr_db}"),
        format!("fading.k_db = {k_db}"),
        format!("fading.mu = {mu}"),
        format!("fading.sigma_s_db = {sigma_s_db}"),
    ];

    let scenario = match kind {
        ScenarioKind::SingleBs => {
            let distances =
                raw.f64_list_or("single_bs.distances", &DEFAULT_SINGLE_BS_DISTANCES)?;
            echo.push(format!("single_bs.distances = {}", join_f64(&distances)));
            build_single_bs_scenario(&SingleBsConfig {
                distances: distances.clone(),
                k_db,
                mu,
                sigma_s_db,
                rho,
                noise_var,
                snr_db,
                mc_runs,
                seed,
            })
            .map_err(|e| match e {
                gmud_core::Error::NonPositiveDistance
                | gmud_core::Error::InvalidPlayerCount { .. } => raw.err(
                    "single_bs.distances",
                    "needs 1..=12 strictly positive distances",
                ),
                other => attribute(other),
            })?
        }
        ScenarioKind::TwoBs => {
            let distances = raw.f64_list_or("two_bs.distances", &DEFAULT_TWO_BS_DISTANCES)?;
            let separation = raw.f64_or("two_bs.separation", DEFAULT_TWO_BS_SEPARATION)?;
            echo.push(format!("two_bs.distances = {}", join_f64(&distances)));
            echo.push(format!("two_bs.separation = {separation}"));
            build_two_bs_scenario(&TwoBsConfig {
                distances: distances.clone(),
                separation,
                k_db,
                mu,
                sigma_s_db,
                rho,
                noise_var,
                snr_db,
                mc_runs,
                seed,
            })
            .map_err(|e| match e {
                gmud_core::Error::NonPositiveDistance
                | gmud_core::Error::InvalidPlayerCount { .. } => raw.err(
                    "two_bs.distances",
                    "needs 1..=12 strictly positive distances and a positive separation",
                ),
                other => attribute(other),
            })?
        }
        ScenarioKind::Custom => build_custom_scenario(
            raw,
            CustomRadio {
                rho,
                noise_var,
                snr_db,
                k_db,
                mu,
                sigma_s_db,
                mc_runs,
                seed,
            },
            &mut echo,
        )?,
    };

    let sweep = match (raw.raw("sweep.variable"), raw.raw("sweep.values")) {
        (None, None) => None,
        (Some(var), Some(values)) => {
            let variable: SweepVariable = var
                .parse()
                .map_err(|e: gmud_core::Error| raw.err("sweep.variable", e.to_string()))?;
            let values =
                parse_sweep_values(values).map_err(|m| raw.err("sweep.values", m))?;
            let spec = SweepSpec::new(variable, values)
                .map_err(|e| raw.err("sweep.values", e.to_string()))?;
            echo.push(format!("sweep.variable = {}", variable.as_str()));
            echo.push(format!("sweep.values = {}", join_f64(spec.values())));
            Some(spec)
        }
        (Some(_), None) => return Err(raw.err("sweep.values", "missing (sweep.variable is set)")),
        (None, Some(_)) => {
            return Err(raw.err("sweep.variable", "missing (sweep.values is set)"))
        }
    };

    let filter = match raw.raw("sweep.structures") {
        None => None,
        Some(list) => {
            let m = scenario.player_count_of(StationId::new(0));
            let parsed = list
                .split(',')
                .map(|label| {
                    CoalitionStructure::parse_label(label.trim(), m).map_err(|e| {
                        raw.err("sweep.structures", format!("`{}`: {e}", label.trim()))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            echo.push(format!(
                "sweep.structures = {}",
                parsed
                    .iter()
                    .map(|s| s.label())
                    .collect::<Vec<_>>()
                    .join(",")
            ));
            Some(parsed)
        }
    };

    let db_offset_column = raw.bool_or("output.db_offset_column", false)?;
    echo.push(format!("output.db_offset_column = {db_offset_column}"));
    let output = raw.raw("output").map(PathBuf::from);

    Ok(Config {
        kind,
        scenario,
        snr_db,
        sweep,
        filter,
        db_offset_column,
        output,
        echo,
    })
}

struct CustomRadio {
    rho: f64,
    noise_var: f64,
    snr_db: f64,
    k_db: f64,
    mu: f64,
    sigma_s_db: f64,
    mc_runs: u32,
    seed: u64,
}

fn build_custom_scenario(
    raw: &Raw<'_>,
    radio: CustomRadio,
    echo: &mut Vec<String>,
) -> Result<Scenario, ConfigError> {
    let attribute = |e: gmud_core::Error| -> ConfigError {
        match e {
            gmud_core::Error::InvalidParameter { name, constraint } => {
                raw.err(key_for_param(name), format!("{name} must be {constraint}"))
            }
            other => raw.err("scenario", other.to_string()),
        }
    };

    let mut stations = Vec::new();
    loop {
        let key = format!("station.{}", stations.len());
        let Some(value) = raw.raw(&key) else { break };
        let coords = parse_f64_list(value).map_err(|m| raw.err(&key, m))?;
        if coords.len() != 2 {
            return Err(raw.err(&key, "expected `x,y`"));
        }
        echo.push(format!("{key} = {}", join_f64(&coords)));
        stations.push((
            StationId::new(stations.len()),
            Position::new(coords[0], coords[1]),
        ));
    }
    if stations.is_empty() {
        return Err(raw.err("station.0", "custom scenario needs at least one station"));
    }

    let mut users: Vec<UserSpec> = Vec::new();
    let mut per_station_count = vec![0usize; stations.len()];
    loop {
        let key = format!("user.{}", users.len());
        let Some(value) = raw.raw(&key) else { break };
        let fields = parse_f64_list(value).map_err(|m| raw.err(&key, m))?;
        if fields.len() != 3 {
            return Err(raw.err(&key, "expected `home_station,x,y`"));
        }
        let home = fields[0] as usize;
        if fields[0].fract() != 0.0 || home >= stations.len() {
            return Err(raw.err(&key, "home_station must index a listed station"));
        }
        echo.push(format!("{key} = {}", join_f64(&fields)));
        users.push(UserSpec {
            player: PlayerId::new(per_station_count[home]),
            position: Position::new(fields[1], fields[2]),
            home: StationId::new(home),
        });
        per_station_count[home] += 1;
    }

    // Reject stray indices beyond the consecutive runs consumed above.
    for key in raw.entries.keys() {
        if let Some(n) = key.strip_prefix("station.") {
            if n.parse::<usize>().unwrap_or(0) >= stations.len() {
                return Err(raw.err(key, "station indices must be consecutive from 0"));
            }
        }
        if let Some(n) = key.strip_prefix("user.") {
            if n.parse::<usize>().unwrap_or(0) >= users.len() {
                return Err(raw.err(key, "user indices must be consecutive from 0"));
            }
        }
    }

    let scenario = Scenario {
        stations,
        users,
        fading: FadingParams::new(radio.k_db, radio.mu, radio.sigma_s_db).map_err(attribute)?,
        system: SystemParams::with_snr_db(radio.rho, radio.noise_var, radio.snr_db)
            .map_err(attribute)?,
        mc_runs: radio.mc_runs,
        seed: radio.seed,
    };
    scenario
        .validate()
        .map_err(|e| raw.err("scenario", e.to_string()))?;
    Ok(scenario)
}

fn join_f64(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v}"))
        .collect::<Vec<_>>()
        .join(",")
}
