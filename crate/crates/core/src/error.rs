use thiserror::Error;

/// Errors raised by the lifting and decomposition routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite matrix entry")]
    NonFinite,

    #[error("quaternion is not unit norm (|q|^2 - 1 = {0:e})")]
    NotUnitNorm(f64),

    #[error("matrix is not unitary (||U U^dag - I||_F = {0:e})")]
    NotUnitary(f64),

    #[error("determinant is not 1 (|det - 1| = {0:e})")]
    BadDeterminant(f64),

    #[error("matrix is not orthogonal (||O^T O - I||_F = {0:e})")]
    NotOrthogonal(f64),

    #[error("Bell-trace radicand {0:e} is negative; matrix is not special orthogonal")]
    NegativeRadicand(f64),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    BadTrace(f64),

    #[error("imaginary residue {0:e} exceeds tolerance")]
    ImaginaryResidue(f64),

    #[error("not a state: minimum eigenvalue {0:e} is negative")]
    NotAState(f64),

    #[error("precondition violated: {0}")]
    Precondition(&'static str),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors that reflect an internal numerical failure rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_) | Error::Precondition(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
