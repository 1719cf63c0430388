use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("columns are not orthonormal (max deviation {deviation:e})")]
    NonIsometry { deviation: f64 },
    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("eigen-solver did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("matrix is rank deficient (smallest singular value {sigma_min:e})")]
    RankDeficient { sigma_min: f64 },
    #[error("POVM completeness violated (residual {residual:e})")]
    IncompletePovm { residual: f64 },
    #[error("POVM element {index} degenerates to zero weight")]
    DegenerateElement { index: usize },
    #[error("state is not a SIC fiducial (overlap residual {residual:e})")]
    NotFiducial { residual: f64 },
    #[error("POVM is not informationally complete")]
    NotIc,
    #[error("POVM is not symmetric informationally complete (residual {residual:e})")]
    NotSic { residual: f64 },
    #[error("no k3 sign change found on any scanned axis (surrogate range {min:e} .. {max:e})")]
    SearchFailed { min: f64, max: f64 },
    #[error("synthesized circuit deviates from target (residual {residual:e})")]
    SynthesisMismatch { residual: f64 },
    #[error("invalid relaxation times: t={t:e}, T1={t1:e}, T2={t2:e}")]
    InvalidTimes { t: f64, t1: f64, t2: f64 },
    #[error("{n} qubits exceeds the supported maximum of {max}")]
    TooLarge { n: usize, max: usize },
    #[error("all measurement branches have vanishing probability (total {total:e})")]
    ZeroProbabilityBranch { total: f64 },
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
