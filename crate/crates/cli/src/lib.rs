//! Configuration-driven front end: named scenario runs with CSV output,
//! laboratory-unit estimates, and the shipped verification scenarios.

pub mod config;
pub mod estimate;
pub mod output;
pub mod scenarios;
pub mod tasks;

pub use config::ScenarioConfig;
pub use estimate::{estimate_physical, SiEstimate};
pub use scenarios::{run_all, run_one, CriterionReport};
pub use tasks::run_scenario;
