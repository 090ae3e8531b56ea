use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("matrix is not unitary: ‖U†U − id‖_F = {defect:.3e}")]
    NotUnitary { defect: f64 },

    #[error("matrix is not special unitary: |det − 1| = {defect:.3e}")]
    NotSpecial { defect: f64 },

    #[error("matrix is not an element of K: {reason}")]
    NotInK { reason: String },

    #[error("eigenphase {phase:.6} lies on the branch cut ±π; logarithm is not unique")]
    BranchCut { phase: f64 },

    #[error("cosine-sine decomposition failed: reconstruction residual {residual:.3e}")]
    CsdFailure { residual: f64 },

    #[error("drive amplitudes are zero")]
    ZeroDrive,

    #[error("invalid drive: {0}")]
    InvalidDrive(String),

    #[error("({a1}, {a2}) is not r-majorized by ({b1}, {b2})")]
    NotMajorized { a1: f64, a2: f64, b1: f64, b2: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
