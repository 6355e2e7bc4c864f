//! Seeded verification campaigns over the `modspin-core` identities, with
//! JSON/CSV reports and a fixed exit-code contract.

pub mod config;
pub mod report;
pub mod suites;

pub use config::{ConfigError, Format, Suite, SuiteConfig};
pub use report::{CheckRecord, Report};
pub use suites::{run, run_suite, run_suites};
