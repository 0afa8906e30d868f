use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Extended-real arithmetic hit `inf - inf`, `0 * inf` or similar.
    #[error("indeterminate form: {0}")]
    Indeterminate(&'static str),

    /// A least-squares coefficient is (numerically) zero, so its adaptive
    /// weight `1/|theta_ls|` is undefined.
    #[error("degenerate adaptive weight: least-squares coefficient {index} is {value:e}")]
    DegenerateWeight { index: usize, value: f64 },

    /// The coordinate-descent solver hit its iteration cap.
    #[error("no convergence after {iterations} cycles (last change {last_change:e})")]
    NonConvergence {
        iterations: usize,
        last_change: f64,
        last_iterate: Vec<f64>,
    },

    /// Design matrix is not of full column rank.
    #[error("design matrix is rank deficient (singular value ratio {ratio:e})")]
    RankDeficient { ratio: f64 },

    /// The sequences supplied do not determine a limit case.
    #[error("unresolved limit case: {0}")]
    Unresolved(String),

    /// Kernel bandwidth would be zero.
    #[error("degenerate bandwidth: sample has no spread")]
    DegenerateBandwidth,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
