use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("non-finite entry in input")]
    NonFinite,
    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off:.3e})")]
    NonConvergence { sweeps: usize, off: f64 },
    #[error("singular norm weight: smallest |eigenvalue| = {0:.3e}")]
    SingularWeight(f64),
    #[error("closed-form spectral abscissa supports only 1x1 and 2x2 matrices, got {0}x{0}")]
    UnsupportedDimension(usize),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("W is singular at tolerance {0:.3e}; route to the singular-kernel certificate")]
    SingularW(f64),
    #[error("W is invertible at tolerance {0:.3e}; no kernel to split")]
    NoKernel(f64),
    #[error("exhaustive vertex enumeration capped at n = 20, got n = {0}")]
    TooManyVertices(usize),
    #[error("matrix is not positive definite (min eigenvalue {0:.3e})")]
    NotPositiveDefinite(f64),
    #[error("gain matrix is not Hurwitz for alpha(W) = {0}")]
    NotHurwitz(f64),
    #[error("no contraction claim for alpha(W) = {0}: {1}")]
    DegenerateRate(f64, String),
    #[error("unsupported activation for the tightness probe: {0}")]
    UnsupportedActivation(String),
    #[error("non-finite state reached at t = {0}")]
    NonFiniteState(f64),
    #[error("residual {residual:.3e} above target {target:.3e} at horizon t = {horizon}")]
    HorizonExceeded {
        residual: f64,
        target: f64,
        horizon: f64,
    },
    #[error("active-set oracle limited to n <= 12, got n = {0}")]
    TooLarge(usize),
    #[error("no feasible KKT point found by active-set enumeration")]
    NoKktPoint,
    #[error("coordinate {0} lies outside the box beyond tolerance")]
    OutOfBox(usize),
    #[error("matrix is not symmetric: |a[{i}][{j}] - a[{j}][{i}]| = {gap:.3e}")]
    NotSymmetric { i: usize, j: usize, gap: f64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
