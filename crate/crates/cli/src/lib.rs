//! Batch experiments on generalized medians.
//!
//! The `gmedian` binary wraps [`commands`]; the same functions are usable
//! from tests. Experiments are configured by JSON files ([`config`]), write
//! CSV tables with a versioned schema line ([`table`]) and a JSON summary,
//! and can be re-checked with [`validate`].

// Negated comparisons are how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod commands;
pub mod config;
pub mod dataset;
pub mod error;
pub mod experiments;
pub mod kits;
pub mod table;
pub mod trials;
pub mod validate;

pub use error::{CliError, CliResult};
