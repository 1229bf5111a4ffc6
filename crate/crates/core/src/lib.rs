//! Predict serverless function execution time at every memory size from
//! monitoring data collected at a single size, and recommend the size with
//! the best cost/performance tradeoff.
//!
//! The crate is organized bottom-up:
//!
//! - [`domain`]: memory sizes, pricing, metric vectors and measurement records.
//! - [`simgen`]: a parametric ground-truth simulator that composes synthetic
//!   functions from behavioral segments and samples their measurements.
//! - [`stability`]: Mann-Whitney U, Cliff's delta and measurement-duration analysis.
//! - [`features`]: feature sets, ratio targets and sequential forward selection.
//! - [`model`]: a from-scratch multi-target MLP regressor with cross-validation,
//!   grid search and a versioned JSON model format.
//! - [`optimizer`]: cost/performance scoring and memory-size selection.
//!
//! Data-parallel loops (dataset generation, cross-validation folds, grid
//! search, stability tests) go through [`parallel::par_map`], which uses rayon
//! when the `parallel` feature is enabled and falls back to a plain loop
//! otherwise. Results are always merged in input order.

pub mod domain;
pub mod error;
pub mod features;
pub mod model;
pub mod optimizer;
pub mod parallel;
pub mod seed;
pub mod simgen;
pub mod split;
pub mod stability;

pub use error::{Error, Result};
