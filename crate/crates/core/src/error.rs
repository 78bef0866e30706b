use thiserror::Error;

use crate::tensor::Tensor;

/// Every failure the library can report.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    InputShape(String),

    #[error("not a Lie algebra: {reason} (basis triple {triple:?})")]
    NotALieAlgebra { reason: String, triple: (String, String, String) },

    #[error("subspace is not a subalgebra: {0}")]
    NotASubalgebra(String),

    #[error("invalid Hermitian data: {0}")]
    InvalidHermitian(String),

    #[error("complex structure is not integrable (Nijenhuis component {component})")]
    NotIntegrable {
        component: String,
        nijenhuis: Box<Tensor>,
        torsion: Option<Box<Tensor>>,
    },

    #[error("not invariant under the isotropy: {0}")]
    NotInvariant(String),

    #[error("no invariant form with the required restrictions: {0}")]
    NoKostantForm(String),

    #[error("invariant form is not unique: solution space of dimension {kernel_dim}")]
    NonUniqueKostantForm { kernel_dim: usize },

    #[error("input is not Bismut Ambrose-Singer: {0}")]
    NotBas(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("representation has a trivial submodule of dimension {0}")]
    TrivialSubmodule(usize),

    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),

    #[error("unsupported hypothesis: {0}")]
    UnsupportedHypothesis(String),

    #[error("witness failure: {0}")]
    WitnessFailure(String),

    #[error("admissibility violated: {0}")]
    Admissibility(String),

    #[error("unknown catalog entry {0:?}")]
    UnknownEntry(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}

impl Error {
    /// True for errors caused by malformed or invalid input (as opposed to a
    /// mathematical property failing).
    pub fn is_invalid_input(&self) -> bool {
        matches!(
            self,
            Error::InputShape(_)
                | Error::NotALieAlgebra { .. }
                | Error::NotASubalgebra(_)
                | Error::InvalidHermitian(_)
                | Error::NotInvariant(_)
                | Error::TrivialSubmodule(_)
                | Error::InvalidRepresentation(_)
                | Error::UnknownEntry(_)
                | Error::Parse { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn shape(msg: impl Into<String>) -> Error {
    Error::InputShape(msg.into())
}

pub(crate) fn inconsistent(msg: impl Into<String>) -> Error {
    Error::InternalInconsistency(msg.into())
}
