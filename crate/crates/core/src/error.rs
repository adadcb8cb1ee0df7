use thiserror::Error;

/// Errors raised by the model, construction, and search routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or out-of-range input.
    #[error("invalid input: {0}")]
    Input(String),

    /// A recommendation policy that cannot be realized for the given population.
    #[error("infeasible recommendation parameters: {0}")]
    Feasibility(String),

    /// A ratio whose denominator is zero or negative.
    #[error("degenerate denominator: {0}")]
    DegenerateDenominator(String),

    /// A search space larger than the caller's budget.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// The bound machinery does not cover these parameters.
    #[error("bounds inapplicable: {0}")]
    Inapplicable(String),

    /// A guarantee of the construction did not hold.
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
