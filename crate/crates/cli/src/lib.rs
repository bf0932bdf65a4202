//! Library side of the `paramp` binary: scenario configs, writers, and
//! execution, kept importable so integration tests can parse artifacts.

pub mod config;
pub mod report;
pub mod scenarios;
