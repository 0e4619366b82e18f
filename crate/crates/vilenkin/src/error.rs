//! Error type shared by the whole crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong when building or evaluating objects on a
/// Vilenkin group.  Variants are grouped by contract class rather than by
/// module so callers can match on the kind of violation.
#[derive(Debug, Error)]
pub enum Error {
    /// Two objects built over different generator sequences (or with
    /// incompatible digit lengths) were combined.
    #[error("structure mismatch: {0}")]
    StructureMismatch(String),

    /// An index, rank, or digit fell outside its admissible range.
    #[error("out of range: {0}")]
    OutOfRange(String),

    /// A step function or kernel was requested at a resolution too small to
    /// represent it.
    #[error("resolution error: {0}")]
    Resolution(String),

    /// A value outside the mathematical domain of an operation (for example
    /// the order of zero, or a point outside a stated coset).
    #[error("domain error: {0}")]
    Domain(String),

    /// A weight sequence that breaks the preconditions of a mean or kernel
    /// (for example a vanishing normalizer Q_n).
    #[error("degenerate weights: {0}")]
    DegenerateWeights(String),

    /// A documented contract of an operation was violated by the caller
    /// (for example a monotonicity requirement on weights).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A textual specification (radix list, weight family, range) failed to
    /// parse.
    #[error("parse error: {0}")]
    Parse(String),

    /// Underlying I/O failure when reading or writing files.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
