use thiserror::Error;

/// CLI failures, each tied to a stable process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// unreadable, malformed or wrongly shaped input (exit 2)
    #[error("malformed input: {0}")]
    Malformed(String),

    /// well-formed input that violates a numerical invariant (exit 3)
    #[error("invariant violated ({invariant}): {source}")]
    Invariant {
        invariant: &'static str,
        source: su2lift::Error,
    },

    /// a residual or consistency check failed inside the library (exit 4)
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Malformed(_) => 2,
            CliError::Invariant { .. } => 3,
            CliError::Internal(_) => 4,
        }
    }
}

fn invariant_name(e: &su2lift::Error) -> &'static str {
    use su2lift::Error::*;
    match e {
        NonFinite => "finite entries",
        NotUnitNorm(_) => "unit norm",
        NotUnitary(_) => "unitarity",
        BadDeterminant(_) => "determinant",
        NotOrthogonal(_) => "orthogonality",
        NegativeRadicand(_) => "special orthogonality",
        NotHermitian(_) => "hermiticity",
        BadTrace(_) => "unit trace",
        ImaginaryResidue(_) => "real expectation values",
        NotAState(_) => "positive semidefinite",
        Precondition(_) | Internal(_) => "internal",
    }
}

impl From<su2lift::Error> for CliError {
    fn from(e: su2lift::Error) -> Self {
        if e.is_internal() {
            CliError::Internal(e.to_string())
        } else {
            CliError::Invariant {
                invariant: invariant_name(&e),
                source: e,
            }
        }
    }
}
