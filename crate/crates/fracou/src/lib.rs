//! Simulation laboratory for nearly unstable AR(1) processes driven by
//! long-memory innovations.
//!
//! The crate has three layers:
//!
//! - finite-sample world: innovation generators whose partial sums are
//!   attracted to fractional Brownian motion ([`noise`]), the near-unit-root
//!   recursion and its least-squares statistics ([`ar1`]);
//! - limit world: discretized fractional Ornstein-Uhlenbeck functionals and
//!   pathwise stochastic integrals ([`fou`]), plus closed-form/quadrature
//!   values of the expected limit functional and its asymptotes
//!   ([`asymptotics`]);
//! - verification machinery: replicated experiments tying the two worlds
//!   together with Kolmogorov-Smirnov comparisons and quantile tables
//!   ([`montecarlo`]), and a batch command-line front end ([`cli`]).
//!
//! All randomness flows through counter-based streams ([`rng`]), so every
//! experiment is bitwise reproducible at any thread count.
//!
//! ```
//! use fracou::montecarlo::{ks_two_sample, run_finite_sample, run_limit, ExperimentConfig};
//! use fracou::noise::{HurstIndex, NoiseSpec};
//!
//! let noise = NoiseSpec::ExactFgn { h: HurstIndex::new(0.75)? };
//! let config = ExperimentConfig::new(noise, 2.0, 256, 256, 200, 42)?;
//! let finite = run_finite_sample(&config)?;
//! let limit = run_limit(&config)?;
//! let distance = ks_two_sample(&finite.bs(), &limit.bs());
//! assert!(distance < 1.0);
//! # Ok::<(), fracou::Error>(())
//! ```

// frozen reference constants keep their full generated digits
#![allow(clippy::excessive_precision)]

pub mod ar1;
pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod fou;
pub mod montecarlo;
pub mod noise;
pub mod quad;
pub mod rng;
pub mod special;

pub use error::{Error, Result};
