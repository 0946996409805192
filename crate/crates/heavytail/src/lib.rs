//! Heavy-tailed distribution families connected by product representations:
//! strictly stable, Weibull, Mittag-Leffler and Linnik laws, plus the
//! auxiliary K and Q scaling laws and the ratio-of-stables density.
//!
//! The crate provides three layers:
//!
//! * evaluators — characteristic functions, densities, CDFs and Laplace
//!   transforms, with series/quadrature/tail regimes where no closed form
//!   exists;
//! * samplers — every family is sampled through its product representation
//!   (normal scale mixtures, mixed exponentials, stable subordination),
//!   driven by a reproducible counter-based stream RNG;
//! * a statistical harness — Kolmogorov-Smirnov and empirical-CF tests that
//!   turn each distributional identity into a pass/fail report, and a
//!   random-sum experiment engine for the convergence-to-Linnik limit
//!   theorem.
//!
//! Batch sampling and experiment replications fan out with rayon when the
//! default `parallel` feature is enabled; the sequential fallback produces
//! bit-identical output.

pub mod elementary;
mod error;
pub mod linnik;
pub mod mittag_leffler;
pub mod quad;
pub mod randsum;
pub mod rng;
pub mod spec;
pub mod stable;
pub mod stattest;
pub mod suite;
mod table;

pub use error::{Error, Result};
pub use rng::RngState;
pub use spec::{DistributionSpec, SampleBatch};
pub use stattest::IdentityReport;
