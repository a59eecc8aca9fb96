//! Declarative run configuration (TOML).
//!
//! ```toml
//! schema_version = 1
//!
//! [budgets]
//! seed = 7
//! move_budget = 100000
//!
//! [[runs]]
//! manifold = "surface(2)"
//! chain = "mod2-cyclic"
//! depth = 6
//! ```

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::chain::{ChainError, ChainSpec};
use super::report::Budgets;

pub const CONFIG_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config parse error: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("config schema version {0} unsupported (expected {CONFIG_SCHEMA_VERSION})")]
    Version(u32),
    #[error("run {run}: {source}")]
    Chain { run: usize, source: ChainError },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSpec {
    pub manifold: String,
    pub chain: String,
    pub depth: usize,
}

impl RunSpec {
    pub fn chain_spec(&self) -> Result<ChainSpec, ChainError> {
        Ok(ChainSpec {
            strategy: self.chain.parse()?,
            depth: self.depth,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Config {
    pub schema_version: u32,
    #[serde(default)]
    pub budgets: Budgets,
    #[serde(default)]
    pub runs: Vec<RunSpec>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            schema_version: CONFIG_SCHEMA_VERSION,
            budgets: Budgets::default(),
            runs: Vec::new(),
        }
    }
}

pub fn parse_config(text: &str) -> Result<Config, ConfigError> {
    let c: Config = toml::from_str(text)?;
    if c.schema_version != CONFIG_SCHEMA_VERSION {
        return Err(ConfigError::Version(c.schema_version));
    }
    for (run, r) in c.runs.iter().enumerate() {
        r.chain_spec().map_err(|source| ConfigError::Chain { run, source })?;
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::ChainStrategy;

    #[test]
    fn parses_runs_and_defaults() {
        let c = parse_config(
            r#"
schema_version = 1
[budgets]
seed = 7
[[runs]]
manifold = "torus(2)"
chain = "sublattice:2"
depth = 2
"#,
        )
        .unwrap();
        assert_eq!(c.budgets.seed, 7);
        assert_eq!(c.budgets.move_budget, Budgets::default().move_budget);
        assert_eq!(c.runs[0].chain_spec().unwrap().strategy, ChainStrategy::Sublattice { factor: 2 });
    }

    #[test]
    fn rejects_wrong_version_and_bad_chain() {
        assert!(matches!(parse_config("schema_version = 2"), Err(ConfigError::Version(2))));
        let bad = "schema_version = 1\n[[runs]]\nmanifold = \"circle\"\nchain = \"mod4\"\ndepth = 1\n";
        assert!(matches!(parse_config(bad), Err(ConfigError::Chain { run: 0, .. })));
    }

    #[test]
    fn round_trips() {
        let c = Config::default();
        assert_eq!(parse_config(&toml::to_string(&c).unwrap()).unwrap(), c);
    }
}
