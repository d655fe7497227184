//! Strict parser for the line-oriented `key = value` run configuration.
//!
//! One level of `[section]` grouping is supported (only `[grid]` exists).
//! Unknown keys, malformed values and misplaced sections are rejected with
//! their line number before any computation starts.

use std::path::PathBuf;

use thiserror::Error;

use qch_core::potential::PotentialSpec;
use qch_core::scenario::{Engine, Scenario, ScenarioConfig};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

fn err(line: usize, msg: impl Into<String>) -> ConfigError {
    ConfigError::Parse {
        line,
        msg: msg.into(),
    }
}

/// Parse a configuration document into a validated [`ScenarioConfig`].
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let mut builder = Builder::default();
    let mut section: Option<String> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| err(line_no, "unterminated section header"))?
                .trim();
            if name != "grid" {
                return Err(err(line_no, format!("unknown section `[{name}]`")));
            }
            section = Some(name.to_string());
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(line_no, "expected `key = value`"))?;
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() || value.is_empty() {
            return Err(err(line_no, "expected `key = value`"));
        }
        let full_key = match &section {
            Some(s) => format!("{s}.{key}"),
            None => key.to_string(),
        };
        builder.set(&full_key, value, line_no)?;
    }
    builder.finish()
}

/// Apply one `key=value` override (dotted form for section keys) on top of
/// an existing config.
pub fn apply_override(config: &mut ScenarioConfig, spec: &str) -> Result<(), ConfigError> {
    let (key, value) = spec
        .split_once('=')
        .ok_or_else(|| ConfigError::Invalid(format!("override `{spec}` is not key=value")))?;
    let mut builder = Builder::from_config(config.clone());
    builder.set(key.trim(), value.trim(), 0)?;
    *config = builder.finish()?;
    Ok(())
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Accumulates keys, then validates the assembled config once.
struct Builder {
    config: ScenarioConfig,
    scenario_seen: bool,
    potential: Option<String>,
    k_spring: f64,
    amplitude: f64,
    width: f64,
}

impl Default for Builder {
    fn default() -> Self {
        Builder {
            config: ScenarioConfig::defaults(Scenario::Harmonic),
            scenario_seen: false,
            potential: None,
            k_spring: 1.0,
            amplitude: 1.0,
            width: 1.0,
        }
    }
}

impl Builder {
    fn from_config(config: ScenarioConfig) -> Self {
        Builder {
            config,
            scenario_seen: true,
            potential: None,
            k_spring: 1.0,
            amplitude: 1.0,
            width: 1.0,
        }
    }

    fn set(&mut self, key: &str, value: &str, line: usize) -> Result<(), ConfigError> {
        match key {
            "scenario" => {
                self.config.scenario = match value {
                    "harmonic" => Scenario::Harmonic,
                    "repulsive" => Scenario::Repulsive,
                    "free" => Scenario::Free,
                    "custom" => Scenario::Custom,
                    other => {
                        return Err(err(
                            line,
                            format!("unknown scenario `{other}` (harmonic|repulsive|free|custom)"),
                        ))
                    }
                };
                self.scenario_seen = true;
            }
            "alpha" => self.config.alpha = parse_f64(key, value, line)?,
            "mass_ratio" => self.config.mass_ratio = parse_f64(key, value, line)?,
            "dt" => self.config.dt = parse_f64(key, value, line)?,
            "t_max" => self.config.t_max = parse_f64(key, value, line)?,
            "record_every" => self.config.record_every = parse_usize(key, value, line)?,
            "snapshot_every" => self.config.snapshot_every = parse_usize(key, value, line)?,
            "qm_phase_k" => self.config.qm_phase_k = parse_f64(key, value, line)?,
            "qm_n" => self.config.qm_n = parse_usize(key, value, line)?,
            "seed" => {
                self.config.seed = value
                    .parse::<u64>()
                    .map_err(|_| err(line, format!("`{key}` expects an unsigned integer")))?
            }
            "n_paths" => self.config.n_paths = parse_usize(key, value, line)?,
            "out_dir" => self.config.out_dir = Some(PathBuf::from(value)),
            "r1_0" => self.config.r1_0 = parse_f64(key, value, line)?,
            "v1_0" => self.config.v1_0 = parse_f64(key, value, line)?,
            "engines" => {
                let inner = value
                    .strip_prefix('[')
                    .and_then(|v| v.strip_suffix(']'))
                    .ok_or_else(|| err(line, "`engines` expects a list like [qch, classical]"))?;
                let mut engines = Vec::new();
                for item in inner.split(',') {
                    let item = item.trim();
                    if item.is_empty() {
                        continue;
                    }
                    engines.push(match item {
                        "qch" => Engine::Qch,
                        "qm2d" => Engine::Qm2d,
                        "classical" => Engine::Classical,
                        "sampler" => Engine::Sampler,
                        other => {
                            return Err(err(
                                line,
                                format!("unknown engine `{other}` (qch|qm2d|classical|sampler)"),
                            ))
                        }
                    });
                }
                self.config.engines = engines;
            }
            "potential" => self.potential = Some(value.to_string()),
            "k_spring" => self.k_spring = parse_f64(key, value, line)?,
            "amplitude" => self.amplitude = parse_f64(key, value, line)?,
            "width" => self.width = parse_f64(key, value, line)?,
            "grid.x_min" => self.config.grid.x_min = parse_f64(key, value, line)?,
            "grid.x_max" => self.config.grid.x_max = parse_f64(key, value, line)?,
            "grid.n" => self.config.grid.n = parse_usize(key, value, line)?,
            other => return Err(err(line, format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    fn finish(mut self) -> Result<ScenarioConfig, ConfigError> {
        if !self.scenario_seen {
            return Err(ConfigError::Invalid(
                "missing required key `scenario`".into(),
            ));
        }
        if let Some(name) = &self.potential {
            let pot = match name.as_str() {
                "zero" => PotentialSpec::Zero,
                "harmonic" => PotentialSpec::Harmonic { k: self.k_spring },
                "gaussian_repulsive" => PotentialSpec::GaussianRepulsive {
                    amplitude: self.amplitude,
                    width: self.width,
                },
                other => {
                    return Err(ConfigError::Invalid(format!(
                        "unknown potential `{other}` (zero|harmonic|gaussian_repulsive)"
                    )))
                }
            };
            self.config.custom_potential = Some(pot);
        }
        self.config
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(self.config)
    }
}

fn parse_f64(key: &str, value: &str, line: usize) -> Result<f64, ConfigError> {
    value
        .parse::<f64>()
        .map_err(|_| err(line, format!("`{key}` expects a number, got `{value}`")))
}

fn parse_usize(key: &str, value: &str, line: usize) -> Result<usize, ConfigError> {
    value.parse::<usize>().map_err(|_| {
        err(
            line,
            format!("`{key}` expects a non-negative integer, got `{value}`"),
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let c = parse_config("scenario = harmonic\nalpha = 1.0\n").unwrap();
        assert_eq!(c.scenario, Scenario::Harmonic);
        assert_eq!(c.mass_ratio, 5.0);
        assert_eq!(c.grid.n, 512);
        assert_eq!(c.dt, 1e-3);
    }

    #[test]
    fn negative_alpha_is_rejected() {
        let e = parse_config("scenario = harmonic\nalpha = -1\n").unwrap_err();
        assert!(e.to_string().contains("alpha must be positive"), "{e}");
    }

    #[test]
    fn unknown_key_reports_line_number() {
        let e = parse_config("scenario = harmonic\nalpah = 1.0\n").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        assert!(e.to_string().contains("alpah"), "{e}");
    }

    #[test]
    fn type_mismatch_reports_line_number() {
        let e = parse_config("scenario = harmonic\n\n[grid]\nn = twelve\n").unwrap_err();
        assert!(e.to_string().contains("line 4"), "{e}");
    }

    #[test]
    fn free_scenario_with_engines() {
        let c = parse_config("scenario = free\nengines = [qch]\n").unwrap();
        assert_eq!(c.engines, vec![Engine::Qch]);
    }

    #[test]
    fn grid_section_and_comments() {
        let text =
            "# run setup\nscenario = free\n[grid]\nx_min = -20 # wide\nx_max = 20\nn = 1024\n";
        let c = parse_config(text).unwrap();
        assert_eq!(c.grid.x_min, -20.0);
        assert_eq!(c.grid.n, 1024);
    }

    #[test]
    fn unknown_engine_rejected() {
        let e = parse_config("scenario = free\nengines = [qch, qm3d]\n").unwrap_err();
        assert!(e.to_string().contains("qm3d"), "{e}");
    }

    #[test]
    fn overrides_use_dotted_keys() {
        let mut c = parse_config("scenario = harmonic\n").unwrap();
        apply_override(&mut c, "grid.n=256").unwrap();
        apply_override(&mut c, "alpha=2").unwrap();
        assert_eq!(c.grid.n, 256);
        assert_eq!(c.alpha, 2.0);
        assert!(apply_override(&mut c, "nonsense=1").is_err());
    }

    #[test]
    fn custom_scenario_requires_potential() {
        assert!(parse_config("scenario = custom\n").is_err());
        let c = parse_config("scenario = custom\npotential = harmonic\nk_spring = 2.0\n").unwrap();
        assert_eq!(c.custom_potential, Some(PotentialSpec::Harmonic { k: 2.0 }));
    }
}
