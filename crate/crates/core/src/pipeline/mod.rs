//! Manifold catalog, chain construction, orchestration of the gradient
//! runs and report emission.

pub mod analysis;
pub mod catalog;
pub mod chain;
pub mod config;
pub mod report;

pub use analysis::{analyze, verify_lemmas, Analysis, LemmaReport};
pub use catalog::{generate_catalog_manifold, standard_catalog, CatalogEntry, CatalogError, CatalogName, KnownValue};
pub use chain::{build_chain, Chain, ChainError, ChainSpec, ChainStrategy};
pub use config::{parse_config, Config, ConfigError, RunSpec, CONFIG_SCHEMA_VERSION};
pub use report::{
    run_theorem_report, validate_report, Budgets, LevelLemma, Report, ReportError, ReportRow, ReportSummary,
    REPORT_SCHEMA_VERSION,
};
