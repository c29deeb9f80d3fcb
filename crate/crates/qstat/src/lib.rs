//! Scenario runner, file formats and command-line support for `qstat-core`.

pub mod demos;
pub mod error;
pub mod formats;
pub mod num;
pub mod ops;
pub mod random;
pub mod runner;
pub mod scenario;
pub mod system;
pub mod value;

pub use error::{Result, ScenarioError};
pub use runner::{run_scenario, RunOptions, RunReport, TaskReport, TaskStatus};
pub use scenario::{parse_scenario, validate, Scenario};
pub use value::Value;
