use thiserror::Error;

/// Errors raised by the geometry, envelope and certification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The stored homology basis is negatively oriented.
    #[error("orientation error: basis determinant {0} is negative")]
    Orientation(f64),

    /// A complete (horospherical) cusp has no finite surgery coefficient.
    #[error("infinite coefficient: the cusp is complete")]
    InfiniteCoefficient,

    /// The holonomy of the basis is singular.
    #[error("degenerate holonomy: {0}")]
    Degenerate(String),

    /// The input lies outside the range where the bounds are certified.
    #[error("uncertifiable: {0}")]
    Uncertifiable(String),

    /// Adaptive quadrature exhausted its subdivision budget.
    #[error("quadrature failed: {0}")]
    Quadrature(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
