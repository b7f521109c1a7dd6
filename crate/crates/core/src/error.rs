use thiserror::Error;

/// Errors produced by the analysis and synthesis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NonSymmetric { asymmetry: f64 },

    #[error("{routine} did not converge within {iterations} iterations")]
    NoConvergence {
        routine: &'static str,
        iterations: usize,
    },

    #[error("Lyapunov equation is numerically singular")]
    SingularLyapunov,

    #[error("no stabilizing initial gain found; (A, B) appears not stabilizable")]
    NotStabilizable,

    #[error("state matrix is not Hurwitz")]
    NotStable,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix contains non-finite entries: {0}")]
    NonFinite(String),

    #[error("certificate matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("Lyapunov inequality not strictly satisfied (margin {margin:e}, required < {threshold:e})")]
    RejectedLyapunov { margin: f64, threshold: f64 },

    #[error("trace bound not satisfied (tr(E'PE) = {trace:e}, gamma = {gamma:e})")]
    RejectedTrace { trace: f64, gamma: f64 },

    #[error("problem is not in standard form: {0}")]
    NotStandardForm(String),

    #[error("gamma {gamma:e} is infeasible; smallest certifiable value is {achieved:e}")]
    GammaInfeasible { gamma: f64, achieved: f64 },

    #[error("gain does not synchronize the network: mode {mode} (lambda = {lambda:e}) is not stable")]
    NotSynchronizing { mode: usize, lambda: f64 },

    #[error("invalid Laplacian spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("coupling strength {c:e} outside admissible range {range}")]
    COutOfRange { c: f64, range: String },

    #[error("Riccati synthesis failed: {0}")]
    RiccatiFailure(Box<Error>),

    #[error("disagreement stays below 1e-14; decay rate undefined")]
    DegenerateTrajectory,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
