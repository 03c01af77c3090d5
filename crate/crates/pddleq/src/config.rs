//! Run configuration: defaults, an optional TOML file, then `PDDLEQ_*`
//! environment variables. Command-line flags are applied last by the caller.

use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub oracle: OracleConfig,
    pub planner: PlannerConfig,
    /// Worker threads; `None` uses every core.
    pub workers: Option<usize>,
    /// Overrides the manifest's seed when set.
    pub seed: Option<u64>,
    pub relax_typing: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleConfig {
    pub max_states: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlannerConfig {
    /// Expanded-state budget for breadth-first search.
    pub budget: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            oracle: OracleConfig::default(),
            planner: PlannerConfig::default(),
            workers: None,
            seed: None,
            relax_typing: false,
        }
    }
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_states: pddleq_core::fullspec::DEFAULT_MAX_STATES,
        }
    }
}

impl Default for PlannerConfig {
    fn default() -> Self {
        PlannerConfig {
            budget: pddleq_core::planning::DEFAULT_NODE_BUDGET,
        }
    }
}

pub const ENV_PREFIX: &str = "PDDLEQ_";

impl Config {
    /// Defaults, overlaid with `file` if given, overlaid with the process
    /// environment.
    pub fn load(file: Option<&Path>) -> Result<Config> {
        let mut config = match file {
            Some(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
            }
            None => Config::default(),
        };
        config.apply_env(std::env::vars())?;
        Ok(config)
    }

    /// Applies `PDDLEQ_ORACLE_MAX_STATES`, `PDDLEQ_PLANNER_BUDGET`,
    /// `PDDLEQ_WORKERS`, `PDDLEQ_SEED` and `PDDLEQ_RELAX_TYPING`.
    pub fn apply_env(&mut self, vars: impl IntoIterator<Item = (String, String)>) -> Result<()> {
        for (key, value) in vars {
            let Some(name) = key.strip_prefix(ENV_PREFIX) else { continue };
            let bad = || format!("invalid value `{value}` for {key}");
            match name {
                "ORACLE_MAX_STATES" => self.oracle.max_states = value.parse().with_context(bad)?,
                "PLANNER_BUDGET" => self.planner.budget = value.parse().with_context(bad)?,
                "WORKERS" => self.workers = Some(value.parse().with_context(bad)?),
                "SEED" => self.seed = Some(value.parse().with_context(bad)?),
                "RELAX_TYPING" => {
                    self.relax_typing = match value.to_ascii_lowercase().as_str() {
                        "1" | "true" | "yes" | "on" => true,
                        "0" | "false" | "no" | "off" | "" => false,
                        _ => anyhow::bail!(bad()),
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }
}
