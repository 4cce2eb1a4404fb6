use std::path::{Path, PathBuf};

use super::{ChannelSpec, ModeSelection, SweepConfig};
use crate::error::{QfiError, Result};
use crate::qfi::DEFAULT_EPSILON;
use crate::states::StateSpec;

/// Environment variable overriding the default support tolerance.
pub const EPSILON_ENV: &str = "QFI_EPSILON";

/// Partially specified sweep settings, merged from CLI flags and an
/// optional `key=value` file before defaults are filled in.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepSettings {
    pub state: Option<StateSpec>,
    pub n_qubits: Option<usize>,
    pub channels: Option<Vec<ChannelSpec>>,
    pub p_start: Option<f64>,
    pub p_end: Option<f64>,
    pub steps: Option<usize>,
    pub mode: Option<ModeSelection>,
    pub epsilon: Option<f64>,
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub n_m: Option<u64>,
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| QfiError::InvalidArgument(format!("{key}={value}: {e}")))
}

impl SweepSettings {
    /// Parses `key = value` lines. Keys use the flag names (`p-start`),
    /// with `_` accepted in place of `-`. Blank lines and `#` comments are
    /// skipped.
    pub fn from_kv_str(text: &str) -> Result<Self> {
        let mut s = SweepSettings::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                QfiError::InvalidArgument(format!("config line {}: expected key=value", idx + 1))
            })?;
            let key = key.trim().replace('_', "-");
            let value = value.trim();
            match key.as_str() {
                "state" => s.state = Some(value.parse()?),
                "n" | "n-qubits" => s.n_qubits = Some(parse_value(&key, value)?),
                "channel" => s.channels = Some(ChannelSpec::parse_list(value)?),
                "p-start" => s.p_start = Some(parse_value(&key, value)?),
                "p-end" => s.p_end = Some(parse_value(&key, value)?),
                "steps" => s.steps = Some(parse_value(&key, value)?),
                "mode" => s.mode = Some(value.parse()?),
                "epsilon" => s.epsilon = Some(parse_value(&key, value)?),
                "csv" => s.csv = Some(PathBuf::from(value)),
                "svg" => s.svg = Some(PathBuf::from(value)),
                "n-m" => s.n_m = Some(parse_value(&key, value)?),
                other => {
                    return Err(QfiError::InvalidArgument(format!(
                        "config line {}: unknown key {other:?}",
                        idx + 1
                    )))
                }
            }
        }
        Ok(s)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| QfiError::io(path, e))?;
        Self::from_kv_str(&text)
    }

    /// Fields set in `self` win over those in `fallback`.
    pub fn or(self, fallback: SweepSettings) -> SweepSettings {
        SweepSettings {
            state: self.state.or(fallback.state),
            n_qubits: self.n_qubits.or(fallback.n_qubits),
            channels: self.channels.or(fallback.channels),
            p_start: self.p_start.or(fallback.p_start),
            p_end: self.p_end.or(fallback.p_end),
            steps: self.steps.or(fallback.steps),
            mode: self.mode.or(fallback.mode),
            epsilon: self.epsilon.or(fallback.epsilon),
            csv: self.csv.or(fallback.csv),
            svg: self.svg.or(fallback.svg),
            n_m: self.n_m.or(fallback.n_m),
        }
    }

    /// Fills defaults and validates. `env_epsilon` is the raw value of
    /// [`EPSILON_ENV`], consulted only when no explicit epsilon was given.
    pub fn finish(self, env_epsilon: Option<&str>) -> Result<SweepConfig> {
        let d = SweepConfig::default();
        let cfg = SweepConfig {
            state: self.state.unwrap_or(d.state),
            n_qubits: self.n_qubits.unwrap_or(d.n_qubits),
            channels: self.channels.unwrap_or(d.channels),
            p_start: self.p_start.unwrap_or(d.p_start),
            p_end: self.p_end.unwrap_or(d.p_end),
            steps: self.steps.unwrap_or(d.steps),
            mode: self.mode.unwrap_or(d.mode),
            epsilon: resolve_epsilon(self.epsilon, env_epsilon)?,
            csv: self.csv,
            svg: self.svg,
            n_m: self.n_m.unwrap_or(d.n_m),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Explicit value, else the environment override, else the default.
pub fn resolve_epsilon(explicit: Option<f64>, env_value: Option<&str>) -> Result<f64> {
    let eps = match (explicit, env_value) {
        (Some(e), _) => e,
        (None, Some(raw)) => parse_value(EPSILON_ENV, raw.trim())?,
        (None, None) => DEFAULT_EPSILON,
    };
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(QfiError::InvalidArgument(format!(
            "epsilon must be positive, got {eps}"
        )));
    }
    Ok(eps)
}
