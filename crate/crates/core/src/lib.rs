//! Exact distributions of Jordan types of random unipotent matrices over
//! finite fields, partition growth samplers targeting those laws, and
//! eigenvalue statistics of the induced permutation action on projective
//! lines.
//!
//! Everything probabilistic here is computed in exact rational arithmetic;
//! floating point appears only in human-readable report columns. Closed
//! forms are cross-checked against brute-force enumeration oracles over
//! small prime fields (matrix censuses, subgroup lattices, line orbits,
//! flag counts), and the two growth samplers are validated statistically
//! against the exact laws they target.

pub mod arcs;
pub mod growth;
pub mod limits;
pub mod lines;
pub mod matrix;
pub mod measures;
pub mod partition;
pub mod pgroup;
pub mod qseries;
pub mod report;
pub mod tableau;
pub mod verify;

pub use arcs::{ArcMeanBounds, ArcQuery};
pub use growth::SamplerSpec;
pub use lines::LineOrbitProfile;
pub use matrix::MatrixFp;
pub use measures::{JordanDistribution, Model};
pub use partition::Partition;
pub use qseries::Rational;
pub use report::CheckResult;
pub use tableau::StandardTableau;

/// Errors surfaced by bound checks and input validation.
///
/// Violations of internal mathematical invariants (a count that must be an
/// integer failing to be one, an orbit size that is not a power of p) are
/// bugs, not inputs, and panic instead.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{what}: requested {requested} exceeds limit {limit}")]
    BoundExceeded {
        what: &'static str,
        requested: u128,
        limit: u128,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("matrix is not unipotent")]
    NotUnipotent,
}

pub type Result<T> = std::result::Result<T, Error>;
