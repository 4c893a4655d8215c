//! Adaptive metric dimensionality reduction.
//!
//! Given a finite labeled sample in a metric space, this crate finds a
//! nearly-lowest-distortion perturbation of the sample onto a subset of low
//! doubling dimension (an LP-relaxation-and-rounding bicriteria algorithm),
//! and uses it to drive Lipschitz-extension classification with explicitly
//! computable generalization bounds. For Euclidean data, a PCA cutoff
//! selector plays the same role for linear classifiers.
//!
//! The pipeline for the metric case is:
//!
//! 1. [`sample::MetricSample`] — validated, deduplicated, diameter-normalized
//!    input.
//! 2. [`hierarchy::NetHierarchy`] — nested 2^{-i}-nets spanning the scales of
//!    the sample.
//! 3. [`program::LdmProgram`] — the low-dimensional-mapping relaxation:
//!    nesting, covering, packing and cost rows over net-point indicators.
//! 4. [`solver`] — approximate packing-covering solve (multiplicative
//!    weights) with budget bisection, plus an exact simplex reference for
//!    small instances.
//! 5. [`rounding`] — three-step rounding to an integral sub-hierarchy, with
//!    an independent audit of its packing/covering/nesting structure.
//! 6. [`lipschitz`] — margin losses, Lipschitz-extension prediction, metric
//!    Rademacher/generalization bounds and model selection over the target
//!    dimension.
//!
//! The Euclidean path is [`pca`]: singular-value profiles, the linear-class
//! Rademacher bound and hinge-bound cutoff selection.
//!
//! [`oracle`] holds brute-force ground truth (exact doubling dimension,
//! exact mapping optimum, exact LP reference, Monte-Carlo Rademacher
//! estimators) for small instances; it exists to certify the fast paths,
//! not to compete with them.
//!
//! The crate is `no_std`-compatible (requires `alloc`); disable the default
//! `std` feature for embedded use. All operations are deterministic: the
//! only randomness is routed through the counter-based generator in [`rng`],
//! seeded explicitly.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(missing_debug_implementations)]

extern crate alloc;

pub mod error;
pub mod hierarchy;
#[cfg(test)]
pub(crate) mod testutil;
pub mod lipschitz;
pub mod oracle;
pub mod pca;
pub mod program;
pub mod rng;
pub mod rounding;
pub mod sample;
pub mod simplex;
pub mod solver;

pub use error::Error;
pub use sample::MetricSample;

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
