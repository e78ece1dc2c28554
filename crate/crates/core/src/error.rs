use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported discriminant: {0}")]
    UnsupportedDiscriminant(String),

    #[error("entries use conflicting quadratic extensions sqrt({0}) and sqrt({1})")]
    ConflictingDiscriminant(i64, i64),

    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("no polynomial particular solution of degree <= {max_degree}")]
    NoPolynomialParticularSolution { max_degree: usize },

    #[error("matrices A and B do not commute")]
    NotCommuting,

    #[error("transformation matrix is singular")]
    SingularP,

    #[error("invalid transformation step: {0}")]
    InvalidStep(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("integration produced a non-finite state at x = {x}")]
    NonFiniteState { x: f64 },

    #[error("flowed abscissae are not strictly increasing at node {index}")]
    NonMonotoneReparametrization { index: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the CLI for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::MalformedInput(_) | Error::Json(_) | Error::Io(_) => 2,
            Error::UnsupportedDiscriminant(_) | Error::ConflictingDiscriminant(..) => 3,
            Error::NoPolynomialParticularSolution { .. }
            | Error::NotCommuting
            | Error::SingularP
            | Error::InvalidStep(_) => 4,
            Error::InternalInconsistency(_) => 5,
            Error::NonFiniteState { .. } | Error::NonMonotoneReparametrization { .. } => 6,
        }
    }
}
