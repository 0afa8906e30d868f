//! Adaptive LASSO in the Gaussian location and regression models.
//!
//! The crate evaluates the estimator, its exact finite-sample distribution,
//! the limit laws of every tuning regime, the worst-case behaviour of
//! estimators of its cdf, and a simulation study with correlated
//! regressors. The `book/` directory next to the workspace walks through the
//! ideas; every code block there is compiled as a doctest of this crate.
//!
//! ```
//! use alasso::{exact_dist, LocationModel};
//!
//! let model = LocationModel::new(10, 0.1, 0.05)?;
//! let dist = exact_dist::FiniteSampleDist::new(model, exact_dist::Scale::SqrtN);
//! assert!((dist.atom_location + 0.3162).abs() < 1e-4);
//! # Ok::<(), alasso::Error>(())
//! ```

pub mod asymptotics;
pub mod cdf_estimation;
pub mod error;
pub mod estimators;
pub mod exact_dist;
pub mod extended;
pub mod model;
pub mod montecarlo;
pub mod normal;
pub mod quadrature;
pub mod sequence;
pub mod stats;
pub mod validate;

pub use error::{Error, Result};
pub use extended::ExtendedReal;
pub use model::LocationModel;
pub use sequence::{limit_of, LimitForm, PowerLawSequence};

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/estimator.md")]
    mod estimator {}
    #[doc = include_str!("../../../book/src/finite-sample.md")]
    mod finite_sample {}
    #[doc = include_str!("../../../book/src/limits.md")]
    mod limits {}
    #[doc = include_str!("../../../book/src/impossibility.md")]
    mod impossibility {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
