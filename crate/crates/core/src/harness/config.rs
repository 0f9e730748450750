use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::adversary::AttackStrategy;
use crate::protocol::{DetectionPolicy, ProtocolConfig};

/// Environment variable overriding the default output directory.
pub const OUTPUT_DIR_ENV: &str = "QDIALOGUE_OUTPUT_DIR";
pub const DEFAULT_OUTPUT_DIR: &str = "qdialogue-results";

/// Keys accepted in config files; each mirrors the CLI flag `--<key>`.
pub const CONFIG_KEYS: [&str; 10] = [
    "attack",
    "beta2",
    "c",
    "n-pairs",
    "trials",
    "seed",
    "detection-policy",
    "max-restarts",
    "out",
    "format",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            _ => Err(HarnessError::InvalidValue {
                key: "format".into(),
                value: s.into(),
            }),
        }
    }
}

/// A validated experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub attack: AttackStrategy,
    pub c: f64,
    pub n_pairs: usize,
    pub trials: u64,
    pub master_seed: u64,
    pub detection_policy: DetectionPolicy,
    pub max_restarts: u32,
    pub output_path: Option<PathBuf>,
    pub output_format: OutputFormat,
}

impl ExperimentConfig {
    pub fn protocol(&self) -> ProtocolConfig {
        ProtocolConfig {
            control_probability: self.c,
            n_pairs: self.n_pairs,
            max_restarts: self.max_restarts,
            detection_policy: self.detection_policy,
        }
    }

    /// `--out` if given, else `<output dir>/<stem>.<ext>` where the directory
    /// comes from [`OUTPUT_DIR_ENV`] or [`DEFAULT_OUTPUT_DIR`].
    pub fn resolve_output(&self, stem: &str) -> PathBuf {
        self.output_path.clone().unwrap_or_else(|| {
            let dir = std::env::var_os(OUTPUT_DIR_ENV)
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR));
            dir.join(format!("{stem}.{}", self.output_format.extension()))
        })
    }

    pub fn builder() -> ConfigBuilder {
        ConfigBuilder::default()
    }
}

/// Raw key-value settings, merged from a config file and CLI flags.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigBuilder {
    pub attack: Option<String>,
    pub beta2: Option<f64>,
    pub c: Option<f64>,
    pub n_pairs: Option<usize>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub detection_policy: Option<DetectionPolicy>,
    pub max_restarts: Option<u32>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, HarnessError> {
    value.parse().map_err(|_| HarnessError::InvalidValue {
        key: key.to_string(),
        value: value.to_string(),
    })
}

impl ConfigBuilder {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), HarnessError> {
        match key {
            "attack" => self.attack = Some(value.to_string()),
            "beta2" => self.beta2 = Some(parse(key, value)?),
            "c" => self.c = Some(parse(key, value)?),
            "n-pairs" => self.n_pairs = Some(parse(key, value)?),
            "trials" => self.trials = Some(parse(key, value)?),
            "seed" => self.seed = Some(parse(key, value)?),
            "detection-policy" => {
                self.detection_policy = Some(match value {
                    "terminal" => DetectionPolicy::Terminal,
                    "reinitialize" => DetectionPolicy::Reinitialize,
                    _ => {
                        return Err(HarnessError::InvalidValue {
                            key: key.into(),
                            value: value.into(),
                        })
                    }
                })
            }
            "max-restarts" => self.max_restarts = Some(parse(key, value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => self.format = Some(value.parse()?),
            _ => return Err(HarnessError::UnknownKey(key.to_string())),
        }
        Ok(())
    }

    /// Flat `key = value` text; `#` starts a comment, blank lines are ignored.
    pub fn parse_text(text: &str) -> Result<Self, HarnessError> {
        let mut builder = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| HarnessError::Syntax {
                line: lineno + 1,
                text: raw.to_string(),
            })?;
            builder.set(key.trim(), value.trim())?;
        }
        Ok(builder)
    }

    pub fn from_file(path: &Path) -> Result<Self, HarnessError> {
        let text = fs::read_to_string(path).map_err(|source| HarnessError::ReadConfig {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse_text(&text)
    }

    /// Fields set in `overrides` win.
    pub fn merge(self, overrides: ConfigBuilder) -> Self {
        Self {
            attack: overrides.attack.or(self.attack),
            beta2: overrides.beta2.or(self.beta2),
            c: overrides.c.or(self.c),
            n_pairs: overrides.n_pairs.or(self.n_pairs),
            trials: overrides.trials.or(self.trials),
            seed: overrides.seed.or(self.seed),
            detection_policy: overrides.detection_policy.or(self.detection_policy),
            max_restarts: overrides.max_restarts.or(self.max_restarts),
            out: overrides.out.or(self.out),
            format: overrides.format.or(self.format),
        }
    }

    pub fn build(self) -> Result<ExperimentConfig, HarnessError> {
        let attack = AttackStrategy::from_name(self.attack.as_deref().unwrap_or("none"), self.beta2)?;
        let c = self.c.unwrap_or(0.5);
        if !(c > 0.0 && c < 1.0) {
            return Err(HarnessError::ControlProbability(c));
        }
        let n_pairs = self.n_pairs.unwrap_or(8);
        if n_pairs == 0 {
            return Err(HarnessError::ZeroPairs);
        }
        let trials = self.trials.unwrap_or(1000);
        if trials == 0 {
            return Err(HarnessError::ZeroTrials);
        }
        Ok(ExperimentConfig {
            attack,
            c,
            n_pairs,
            trials,
            master_seed: self.seed.unwrap_or(1),
            detection_policy: self.detection_policy.unwrap_or_default(),
            max_restarts: self.max_restarts.unwrap_or(0),
            output_path: self.out,
            output_format: self.format.unwrap_or_default(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::AttackError;

    #[test]
    fn parses_flat_text() {
        let text = "# probe run\nattack = entangle-measure\nbeta2 = 0.25\nc=0.5\nn-pairs = 32 # half-length\ntrials = 5000\nseed = 9\n";
        let config = ConfigBuilder::parse_text(text).unwrap().build().unwrap();
        assert_eq!(config.attack, AttackStrategy::EntangleMeasure { beta2: 0.25 });
        assert_eq!(config.n_pairs, 32);
        assert_eq!(config.trials, 5000);
        assert_eq!(config.master_seed, 9);
        assert_eq!(config.detection_policy, DetectionPolicy::Terminal);
    }

    #[test]
    fn cli_overrides_file() {
        let file = ConfigBuilder::parse_text("c = 0.25\ntrials = 10").unwrap();
        let mut cli = ConfigBuilder::default();
        cli.set("c", "0.75").unwrap();
        let config = file.merge(cli).build().unwrap();
        assert_eq!(config.c, 0.75);
        assert_eq!(config.trials, 10);
    }

    #[test]
    fn distinct_diagnostics() {
        let mut b = ConfigBuilder::default();
        assert!(matches!(b.set("colour", "red"), Err(HarnessError::UnknownKey(_))));
        assert!(matches!(b.set("c", "abc"), Err(HarnessError::InvalidValue { .. })));
        assert!(matches!(
            ConfigBuilder::parse_text("just words"),
            Err(HarnessError::Syntax { line: 1, .. })
        ));
        b.set("attack", "wiretap").unwrap();
        assert!(matches!(
            b.clone().build(),
            Err(HarnessError::Attack(AttackError::UnknownStrategy(_)))
        ));
        b.set("attack", "none").unwrap();
        b.set("c", "1.5").unwrap();
        assert!(matches!(b.clone().build(), Err(HarnessError::ControlProbability(_))));
        b.set("c", "0.5").unwrap();
        b.set("trials", "0").unwrap();
        assert!(matches!(b.build(), Err(HarnessError::ZeroTrials)));
    }

    #[test]
    fn every_key_is_settable() {
        let values = ["none", "0.1", "0.5", "4", "10", "3", "reinitialize", "2", "x.json", "csv"];
        let mut b = ConfigBuilder::default();
        for (key, value) in CONFIG_KEYS.iter().zip(values) {
            b.set(key, value).unwrap();
        }
        // beta2 with a non-probe attack is rejected at build time
        assert!(matches!(b.build(), Err(HarnessError::Attack(AttackError::UnexpectedBeta2(_)))));
    }
}
