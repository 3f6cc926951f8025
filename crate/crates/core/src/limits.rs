//! Desk-scale bounds for enumerations and brute-force oracles.
//!
//! Formula paths stay fast at these sizes; the caps exist to stop runaway
//! enumerations, not to mark a precision limit. Element-count caps (the
//! `cell_cap` family) can be raised or lowered through the
//! `UNISPEC_MAX_CELLS` environment variable.

/// Largest n accepted by partition enumeration.
pub const MAX_PARTITION_N: usize = 40;

/// Largest |shape| accepted by standard-tableau enumeration and by the
/// tableau-sum routes built on it.
pub const MAX_SYT_CELLS: usize = 14;

/// Default variable-count bound for direct Hall-Littlewood evaluation;
/// coset enumeration degrades factorially in the number of distinct parts.
pub const MAX_HL_VARS: usize = 8;

/// Largest n for the full-matrix Jordan distribution.
pub const MAX_GL_DIST_N: usize = 30;

/// Largest n for the upper-triangular Jordan distribution.
pub const MAX_TRIANGULAR_DIST_N: usize = MAX_SYT_CELLS;

/// Matrix oracles work over F_p with p prime up to this value.
pub const MAX_MATRIX_P: u64 = 7;

/// Matrix oracles work with square matrices up to this dimension.
pub const MAX_MATRIX_N: usize = 6;

/// Dimension/field caps for complete-flag enumeration.
pub const MAX_FLAG_N: usize = 4;
pub const MAX_FLAG_P: u64 = 3;

/// Default element-count caps for the enumeration oracles.
pub const DEFAULT_GROUP_CELLS: u64 = 1 << 12;
pub const DEFAULT_LINE_CELLS: u64 = 20_000;
pub const DEFAULT_TRIANGULAR_CELLS: u64 = 1_000_000;
pub const DEFAULT_GL_CELLS: u64 = 10_000_000;

/// Returns the effective element-count cap for an oracle: the
/// `UNISPEC_MAX_CELLS` environment variable when set and parseable,
/// otherwise the oracle's default.
pub fn cell_cap(default_cap: u64) -> u64 {
    std::env::var("UNISPEC_MAX_CELLS")
        .ok()
        .and_then(|s| s.trim().parse::<u64>().ok())
        .unwrap_or(default_cap)
}
