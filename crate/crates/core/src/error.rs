use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max elementwise defect {0:e})")]
    NotHermitian(f64),

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})")]
    EigenNoConvergence { sweeps: usize, residual: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositiveSemidefinite(f64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid factor permutation {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("ket has zero norm")]
    ZeroNorm,

    #[error("unknown or duplicated subsystem label `{0}`")]
    BadLabel(String),

    #[error("Schmidt coefficient a = {0} outside the admissible range")]
    SchmidtOutOfRange(f64),

    #[error("state is not pure (purity {0})")]
    NotPure(f64),

    #[error("Kraus operators are incomplete (‖ΣA†A − I‖ = {0:e})")]
    IncompleteKraus(f64),

    #[error("no sign change of {what} on [{lo}, {hi}]")]
    NoBracket { what: &'static str, lo: f64, hi: f64 },

    #[error("invalid unitary parameters: {0}")]
    InvalidParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;
