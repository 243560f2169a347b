//! # properboost
//!
//! A boosting library and experiment harness for **proper-loss boosting over
//! partition-linear models**, together with the Long–Servedio adversarial
//! datasets on which convex-loss *linear* boosting collapses under symmetric
//! label noise.
//!
//! The library answers an apparent paradox. Proper losses (square, log,
//! Matusita, …) have a convex surrogate form that fits the classical
//! margin-loss blueprint for which Long and Servedio proved a strong negative
//! result: with any amount of symmetric label noise, boosting a *linear
//! separator* by minimizing such a surrogate can be driven to fair-coin
//! accuracy. Yet the same losses, boosted by the same blueprint over a
//! slightly richer model class — a decision tree with a single constant root,
//! or a leveraged nearest-neighbor rule — recover the Bayes-optimal
//! prediction on the very same data. The culprit is the model class, not the
//! convexity of the loss.
//!
//! ## Layout
//!
//! - [`losses`] — CPE proper losses: partial losses, Bayes risk, canonical
//!   links, convex surrogates, boosting weights (four concrete losses).
//! - [`datasets`] — the Long–Servedio clean/noisy multiset datasets with a
//!   margin parameter, duplication structure, and an optional rotation.
//! - [`models`] — partition-linear model states: linear separators, decision
//!   trees, alternating decision trees, leveraged K-NN, labeled branching
//!   programs.
//! - [`weak_learners`] — edge computation, axis/stump/constant hypothesis
//!   searches, the companion-hypothesis construction, and the J-criterion
//!   region choice.
//! - [`booster`] — the TOPDOWNGEN loop: weight initialization, leveraging
//!   coefficients by monotone bisection, weight refresh, stopping, telemetry.
//! - [`experiments`] — sweep harness, the ideal (population) linear
//!   minimizer, boosting-rate formulas, CSV/SVG emitters.
//!
//! ## Quick start
//!
//! Boost a decision tree on the noisy Long–Servedio data and observe the
//! one-call convergence to the Bayes posterior:
//!
//! ```
//! use properboost::booster::{run, ModelClass, RunConfig};
//! use properboost::datasets::LsDatasetSpec;
//! use properboost::losses::{make_loss, LossKind};
//!
//! let loss = make_loss(LossKind::Square);
//! let spec = LsDatasetSpec::new(0.1, 5.0, 3, 0.0).unwrap();
//! let noisy = spec.make_noisy();
//! let state = run(&loss, ModelClass::Dt, &noisy, &RunConfig::default()).unwrap();
//!
//! assert_eq!(state.weak_calls, 1);
//! let clean = spec.make_clean();
//! for ex in &clean.examples {
//!     // every observation is scored at the forward link of 1 - eta = 0.75
//!     let h = state.model.score(&ex.x);
//!     assert!((loss.inv_link(h) - 0.75).abs() < 1e-9);
//! }
//! ```

pub mod booster;
pub mod datasets;
pub mod experiments;
pub mod guide;
pub mod losses;
pub mod models;
pub mod weak_learners;

/// Crate-wide error type.
///
/// The CLI maps these onto process exit codes: configuration errors exit
/// with status 2, numeric failures (solver saturation, non-convergence,
/// degenerate leveraging targets) with status 3, and I/O errors with 1.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Invalid configuration or arguments (bad grids, empty multisets,
    /// out-of-domain parameters).
    #[error("configuration error: {0}")]
    Config(String),
    /// A numerical procedure failed (bracket saturation, residual not met,
    /// gradient descent did not converge).
    #[error("numeric failure: {0}")]
    Numeric(String),
    /// Filesystem problems while writing experiment artifacts.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// The process exit status the CLI uses for this error: 2 for
    /// configuration errors, 3 for numeric failures, 1 for I/O errors.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Config(_) => 2,
            Error::Numeric(_) => 3,
            Error::Io(_) => 1,
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
