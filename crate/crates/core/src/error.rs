use thiserror::Error;

/// Errors shared by every module in the crate.
///
/// The CLI maps these onto exit codes: `NearDependence` → 3, everything else
/// here → 4 (unphysical or unusable input); file/flag parse problems never
/// reach this enum.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A scalar argument is outside its documented domain (non-finite, out of
    /// range, wrong sign, …).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Two objects that must share mode count / branch count do not.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A covariance block is numerically singular (condition number past 1e14).
    #[error("degenerate covariance: {0}")]
    DegenerateCovariance(String),

    /// A pair quantity (overlap, characteristic function) hit a degenerate
    /// denominator that a valid pure-state pair cannot produce.
    #[error("degenerate branch pair: {0}")]
    DegeneratePair(String),

    /// The operation is only defined for a smaller number of modes.
    #[error("unsupported dimension: {0}")]
    UnsupportedDimension(String),

    /// The branch Gram matrix is too close to singular to orthogonalize.
    #[error(
        "near-dependent branches: min Gram eigenvalue {min_eigenvalue:.3e} \
         at or below threshold {threshold:.3e}"
    )]
    NearDependence { min_eigenvalue: f64, threshold: f64 },

    /// A covariance matrix violates purity or the uncertainty relation.
    #[error("unphysical covariance: {0}")]
    UnphysicalCovariance(String),

    /// A matrix that must be a density/Gram matrix fails its invariants.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A superposition annihilates itself (squared norm below tolerance).
    #[error("destructive interference: squared norm {0:.3e} below tolerance")]
    DestructiveInterference(f64),

    /// A Fock truncation is too short for the requested comparison.
    #[error("insufficient cutoff: truncation deficit {deficit:.3e} exceeds {required:.3e}")]
    InsufficientCutoff { deficit: f64, required: f64 },

    /// A state normalization vanished identically (e.g. ab·cos φ → -1 exactly).
    #[error("degenerate state: {0}")]
    DegenerateState(String),
}

pub type Result<T> = std::result::Result<T, Error>;
