//! Experiment configuration shared by the CLI flags and TOML config files.
//! Config-file keys use the same names as the long flags.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use chanlab::channel::DEFAULT_BUDGET;
use chanlab::concentration::ObjectiveFamily;
use chanlab::optimize::OptimizerConfig;
use serde::{Deserialize, Serialize};

use crate::HarnessError;

/// Commands accepted by the harness.
pub const COMMANDS: [&str; 12] = [
    "violation",
    "singular-window",
    "eigen-window",
    "central-value",
    "levy-tail",
    "lipschitz-restriction",
    "omega-membership",
    "oscillation",
    "schatten4-roundness",
    "subgaussian-pair",
    "dudley",
    "net-certificate",
];

/// Names accepted by `--constant name=value`, with their defaults.
pub const CONSTANT_DEFAULTS: [(&str, f64); 7] = [
    ("c_win", 2.0),
    ("c0", 6.0),
    ("a", 2.0),
    ("distance", 0.2),
    ("points", 1000.0),
    ("cloud", 100_000.0),
    ("center_trials", 1000.0),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, HarnessError> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(HarnessError::Config(format!("unknown format '{other}' (expected json or csv)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case", deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: String,
    /// Grid of `k` values.
    pub k: Vec<usize>,
    /// Grid of `d` values; empty means `{4k², 16k²}` for each `k`.
    pub d: Vec<usize>,
    /// Grid of `m` values; empty means `{d/8, d/2}` for each `d`.
    pub m: Vec<usize>,
    pub trials: usize,
    pub subspace_trials: usize,
    pub seed: u64,
    pub starts: usize,
    pub max_iters: usize,
    /// Random probes per section, merged with optimizer estimates.
    pub probes: usize,
    /// Objective family for central-value, levy-tail and oscillation.
    pub family: ObjectiveFamily,
    pub constants: BTreeMap<String, f64>,
    pub budget: u64,
    pub bits: bool,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            command: "violation".into(),
            k: (2..=8).collect(),
            d: Vec::new(),
            m: Vec::new(),
            trials: 100,
            subspace_trials: 20,
            seed: 0,
            starts: 8,
            max_iters: 200,
            probes: 1000,
            family: ObjectiveFamily::GTilde,
            constants: BTreeMap::new(),
            budget: DEFAULT_BUDGET as u64,
            bits: false,
            format: OutputFormat::Json,
            out: None,
        }
    }
}

/// One `(k, d, m)` point of the experiment grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridPoint {
    pub k: usize,
    pub d: usize,
    pub m: usize,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        toml::from_str(text).map_err(|e| HarnessError::Config(format!("config file: {e}")))
    }

    pub fn constant(&self, name: &str) -> f64 {
        self.constants.get(name).copied().unwrap_or_else(|| {
            CONSTANT_DEFAULTS
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, v)| *v)
                .expect("constant names are checked in validate")
        })
    }

    /// `alpha` for the Dudley bound; defaults to half the dimension.
    pub fn alpha(&self, n: usize) -> f64 {
        self.constants.get("alpha").copied().unwrap_or(n as f64 / 2.0)
    }

    pub fn optimizer(&self) -> OptimizerConfig {
        OptimizerConfig {
            starts: self.starts,
            max_iters: self.max_iters,
            seed: self.seed,
            ..OptimizerConfig::default()
        }
    }

    fn needs_subspace(&self) -> bool {
        matches!(
            self.command.as_str(),
            "violation" | "omega-membership" | "oscillation" | "schatten4-roundness"
        )
    }

    /// Commands on the sphere of `C^k`, where `k` is the only dimension.
    fn sphere_only(&self) -> bool {
        matches!(self.command.as_str(), "subgaussian-pair" | "dudley" | "net-certificate")
    }

    /// The grid, expanded with the default `d` and `m` rules. Unused
    /// dimensions are reported as 0.
    pub fn grid(&self) -> Vec<GridPoint> {
        let mut points = Vec::new();
        for &k in &self.k {
            if self.sphere_only() {
                points.push(GridPoint { k, d: 0, m: 0 });
                continue;
            }
            let ds = if self.d.is_empty() { vec![4 * k * k, 16 * k * k] } else { self.d.clone() };
            for d in ds {
                let ms = if !self.needs_subspace() {
                    vec![0]
                } else if self.m.is_empty() {
                    vec![(d / 8).max(1), (d / 2).max(1)]
                } else {
                    self.m.clone()
                };
                for m in ms {
                    points.push(GridPoint { k, d, m });
                }
            }
        }
        points
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |msg: String| Err(HarnessError::Config(msg));
        if !COMMANDS.contains(&self.command.as_str()) {
            return bad(format!("unknown command '{}'; expected one of {}", self.command, COMMANDS.join(", ")));
        }
        if self.k.is_empty() {
            return bad("the k grid is empty".into());
        }
        if self.k.iter().chain(&self.d).chain(&self.m).any(|&x| x == 0) {
            return bad("grid dimensions must be positive".into());
        }
        if self.trials == 0 || self.subspace_trials == 0 {
            return bad("trials and subspace-trials must be positive".into());
        }
        if let Some(name) = self.constants.keys().find(|n| {
            n.as_str() != "alpha" && !CONSTANT_DEFAULTS.iter().any(|(c, _)| c == n)
        }) {
            return bad(format!("unknown constant '{name}'"));
        }
        if let Some((name, v)) = self.constants.iter().find(|(_, v)| !v.is_finite()) {
            return bad(format!("constant {name} = {v} is not finite"));
        }
        self.optimizer()
            .validate()
            .map_err(|e| HarnessError::Config(format!("optimizer settings: {e}")))?;
        for p in self.grid() {
            match self.command.as_str() {
                "violation" if p.k < 2 => return bad(format!("violation needs k >= 2, got {}", p.k)),
                "singular-window" | "eigen-window" if p.d < p.k => {
                    return bad(format!("window experiments need d >= k, got k = {}, d = {}", p.k, p.d))
                }
                "central-value" | "levy-tail" if self.trials < 100 => {
                    return bad("central values need at least 100 trials".into())
                }
                _ => {}
            }
            if self.needs_subspace() && p.m > p.k * p.d {
                return bad(format!("m = {} exceeds k·d = {}", p.m, p.k * p.d));
            }
        }
        match self.command.as_str() {
            "subgaussian-pair" => {
                let dist = self.constant("distance");
                if !(dist > 0.0 && dist <= 2.0) {
                    return bad(format!("distance {dist} outside (0, 2]"));
                }
                if self.k.iter().any(|&n| n < 2) {
                    return bad("subgaussian-pair needs dimension k >= 2".into());
                }
            }
            "dudley" | "net-certificate" => {
                let key = if self.command == "dudley" { "points" } else { "cloud" };
                if !(self.constant(key) >= 1.0) {
                    return bad(format!("constant {key} must be at least 1"));
                }
                if self.alpha(1) <= 0.0 {
                    return bad("alpha must be positive".into());
                }
            }
            _ => {}
        }
        Ok(())
    }
}

/// Parses `name=value`.
pub fn parse_constant(text: &str) -> Result<(String, f64), HarnessError> {
    let (name, value) = text
        .split_once('=')
        .ok_or_else(|| HarnessError::Config(format!("constant '{text}' is not name=value")))?;
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|_| HarnessError::Config(format!("constant '{text}' has a non-numeric value")))?;
    Ok((name.trim().to_string(), value))
}

/// Parses a comma-separated list of positive integers.
pub fn parse_grid(text: &str) -> Result<Vec<usize>, HarnessError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| HarnessError::Config(format!("'{s}' in grid '{text}' is not a nonnegative integer")))
        })
        .collect()
}
