//! Text format, JSON reports and command-line driver for `semiquant-core`.

pub mod cli;
pub mod exprio;
pub mod grid;
pub mod parallel;
pub mod report;

pub use exprio::{format, parse, ParseError};
