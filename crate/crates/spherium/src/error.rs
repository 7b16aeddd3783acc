//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by state construction, special-function evaluation and
/// the integral machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("ln_gamma requires a positive argument, got {0}")]
    GammaDomain(f64),

    #[error("spatial dimension must be >= {min}, got d={d}")]
    DimensionTooSmall { d: u32, min: u32 },

    #[error("spatial dimension d={d} exceeds the cap {cap} (raise the cap for large-d runs)")]
    DimensionCapExceeded { d: u32, cap: u32 },

    #[error("polynomial degree parameter n must be >= 1, got {0}")]
    InvalidDegree(u32),

    #[error("hypergeometric lower parameter {0} is zero or a negative integer")]
    InvalidLowerParameter(f64),

    #[error("hypergeometric series at unit argument diverges: convergence margin {0} <= 0")]
    DivergentSeries(f64),

    #[error("hypergeometric series did not converge within {max_terms} terms (last term {last_term:e})")]
    SeriesConvergence { max_terms: usize, last_term: f64 },

    #[error("no positive real energy root for d={d}, n={n}: invalid combination")]
    EmptySpectrum { d: u32, n: u32 },

    #[error("no state with excitation index m={m} for d={d}, n={n} ({count} admissible)")]
    NoSuchState { d: u32, n: u32, m: u32, count: usize },

    #[error("node counts of the solved states for d={d}, n={n} do not enumerate 0..{count}: {counts:?}")]
    NodeCountMismatch { d: u32, n: u32, count: usize, counts: Vec<usize> },

    #[error("wavefunction zero of multiplicity > 1 suspected near u={0}")]
    DegenerateZero(f64),

    #[error("chord length u={u} outside [0, {max}]: cannot exceed the sphere diameter")]
    ChordOutOfRange { u: f64, max: f64 },

    #[error("expected {expected} hyperspherical angles per electron for d={d}, got {got}")]
    BadAngleCount { d: u32, expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
