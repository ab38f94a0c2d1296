//! Configuration, analysis pipeline and report rendering for the `cydyn`
//! command-line tool.

pub mod analysis;
pub mod config;
pub mod fmt;
pub mod report;

/// Built-in configuration: the three translations on the (1,1,1)^3
/// complete intersection in P^2 x P^2 x P^2.
pub const EXAMPLE_CONFIG: &str = include_str!("../configs/three-translations.toml");
