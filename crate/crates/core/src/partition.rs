//! Integer partitions: the index set shared by unipotent conjugacy classes,
//! Jordan types, and abelian p-group types.
//!
//! A partition is its weakly decreasing list of positive parts. Conjugates,
//! part multiplicities, and the statistic n(λ) = Σ_i (i−1)λ_i are computed
//! on demand; the sizes in play are tiny and nothing is cached. Conjugate
//! parts are defined for every index, with λ'_j = 0 once j exceeds the
//! largest part, because the growth algorithms probe one column past the
//! edge of the diagram.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::limits::MAX_PARTITION_N;
use crate::{Error, Result};

/// A partition of a non-negative integer into weakly decreasing positive
/// parts. The empty partition (of 0) is allowed.
///
/// The derived ordering compares part lists lexicographically, so iterating
/// a sorted collection of same-size partitions in descending order visits
/// them in reverse-lexicographic order, the canonical report order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Panics unless `parts` is weakly decreasing with all parts positive.
    pub fn new(parts: Vec<usize>) -> Self {
        assert!(
            parts.windows(2).all(|w| w[0] >= w[1]),
            "partition parts must be weakly decreasing: {parts:?}"
        );
        assert!(
            parts.last().is_none_or(|&last| last >= 1),
            "partition parts must be positive: {parts:?}"
        );
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// |λ|, the integer being partitioned.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of parts, i.e. λ'_1.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// λ_i with 1-indexed `i`; 0 beyond the last part.
    pub fn part(&self, i: usize) -> usize {
        assert!(i >= 1, "parts are 1-indexed");
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    /// λ'_j, the length of column `j` (1-indexed); 0 for j > λ_1.
    pub fn conjugate_part(&self, j: usize) -> usize {
        assert!(j >= 1, "columns are 1-indexed");
        self.parts.iter().take_while(|&&part| part >= j).count()
    }

    /// λ'_1 + ⋯ + λ'_r, equal to Σ_i min(λ_i, r). Saturates at |λ| once
    /// r ≥ λ_1, so any r is accepted.
    pub fn conjugate_prefix_sum(&self, r: usize) -> usize {
        self.parts.iter().map(|&part| part.min(r)).sum()
    }

    /// Σ_j (λ'_j)², the exponent appearing in every class-size formula.
    pub fn sum_conjugate_squares(&self) -> usize {
        (1..=self.part(1))
            .map(|j| {
                let col = self.conjugate_part(j);
                col * col
            })
            .sum()
    }

    /// The conjugate (transposed diagram) partition.
    pub fn conjugate(&self) -> Partition {
        let parts = (1..=self.part(1)).map(|j| self.conjugate_part(j)).collect();
        Partition { parts }
    }

    /// n(λ) = Σ_i (i−1) λ_i.
    pub fn n_stat(&self) -> usize {
        self.parts
            .iter()
            .enumerate()
            .map(|(idx, &part)| idx * part)
            .sum()
    }

    /// m_i(λ), the number of parts equal to `i`.
    pub fn multiplicity(&self, i: usize) -> usize {
        self.parts.iter().filter(|&&part| part == i).count()
    }

    /// All part multiplicities, keyed by part size.
    pub fn multiplicities(&self) -> BTreeMap<usize, usize> {
        let mut map = BTreeMap::new();
        for &part in &self.parts {
            *map.entry(part).or_insert(0) += 1;
        }
        map
    }

    /// Whether a cell may be appended to column `col` (1-indexed) and still
    /// leave a partition diagram.
    pub fn can_add_in_column(&self, col: usize) -> bool {
        col == 1 || self.conjugate_part(col) < self.conjugate_part(col - 1)
    }

    /// The partition with one cell appended to column `col`. Panics if the
    /// result would not be a partition.
    pub fn add_cell_in_column(&self, col: usize) -> Partition {
        assert!(self.can_add_in_column(col), "cannot grow column {col} of {self}");
        let row = self.conjugate_part(col) + 1;
        let mut parts = self.parts.clone();
        if row > parts.len() {
            parts.push(1);
        } else {
            parts[row - 1] += 1;
        }
        Partition { parts }
    }

    /// Removable corner cells as (row, column) pairs, both 1-indexed,
    /// ordered by row.
    pub fn corners(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (idx, &part) in self.parts.iter().enumerate() {
            let below = self.parts.get(idx + 1).copied().unwrap_or(0);
            if part > below {
                out.push((idx + 1, part));
            }
        }
        out
    }

    /// The partition with the corner cell in row `row` removed. Panics if
    /// that cell is not a removable corner.
    pub fn remove_corner_at_row(&self, row: usize) -> Partition {
        let below = self.parts.get(row).copied().unwrap_or(0);
        assert!(
            row >= 1 && row <= self.parts.len() && self.parts[row - 1] > below,
            "row {row} of {self} has no removable corner"
        );
        let mut parts = self.parts.clone();
        parts[row - 1] -= 1;
        if parts[row - 1] == 0 {
            parts.remove(row - 1);
        }
        Partition { parts }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (idx, part) in self.parts.iter().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{part}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses the bracketed text form, e.g. `[5,4,4,1]` or `[]`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|rest| rest.strip_suffix(']'))
            .ok_or_else(|| Error::InvalidParameter(format!("partition must look like [a,b,...]: {s:?}")))?;
        let inner = inner.trim();
        let mut parts = Vec::new();
        if !inner.is_empty() {
            for piece in inner.split(',') {
                let part: usize = piece
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("bad partition part {piece:?} in {s:?}")))?;
                if part == 0 {
                    return Err(Error::InvalidParameter(format!("partition parts must be positive: {s:?}")));
                }
                parts.push(part);
            }
        }
        if !parts.windows(2).all(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(format!(
                "partition parts must be weakly decreasing: {s:?}"
            )));
        }
        Ok(Partition { parts })
    }
}

/// All partitions of `n` in reverse-lexicographic order, from `[n]` down to
/// `[1,1,...,1]`.
pub fn enumerate_partitions(n: usize) -> Result<Vec<Partition>> {
    if n > MAX_PARTITION_N {
        return Err(Error::BoundExceeded {
            what: "enumerate_partitions",
            requested: n as u128,
            limit: MAX_PARTITION_N as u128,
        });
    }
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    descend(n, n, &mut prefix, &mut out);
    Ok(out)
}

fn descend(remaining: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition { parts: prefix.clone() });
        return;
    }
    for part in (1..=remaining.min(max_part)).rev() {
        prefix.push(part);
        descend(remaining - part, part, prefix, out);
        prefix.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec())
    }

    /// Independent count of partitions of n via the pentagonal-number
    /// recurrence, used as the oracle for enumeration counts.
    fn partition_count(n: usize) -> i64 {
        let mut counts = vec![0i64; n + 1];
        counts[0] = 1;
        for m in 1..=n {
            let mut total = 0i64;
            let mut k = 1i64;
            loop {
                let g1 = k * (3 * k - 1) / 2;
                let g2 = k * (3 * k + 1) / 2;
                if g1 as usize > m && g2 as usize > m {
                    break;
                }
                let sign = if k % 2 == 0 { -1 } else { 1 };
                if g1 as usize <= m {
                    total += sign * counts[m - g1 as usize];
                }
                if g2 as usize <= m {
                    total += sign * counts[m - g2 as usize];
                }
                k += 1;
            }
            counts[m] = total;
        }
        counts[n]
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(p(&[5, 4, 4, 1]).conjugate(), p(&[4, 3, 3, 3, 1]));
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
        assert_eq!(p(&[6]).conjugate(), p(&[1, 1, 1, 1, 1, 1]));
    }

    #[test]
    fn conjugation_is_an_involution_up_to_12() {
        for n in 0..=12 {
            for lam in enumerate_partitions(n).unwrap() {
                assert_eq!(lam.conjugate().conjugate(), lam);
            }
        }
    }

    #[test]
    fn n_stat_examples() {
        assert_eq!(p(&[5, 4, 4, 1]).n_stat(), 15);
        assert_eq!(p(&[7]).n_stat(), 0);
        assert_eq!(p(&[1, 1, 1]).n_stat(), 3);
    }

    #[test]
    fn multiplicity_examples() {
        let lam = p(&[5, 4, 4, 1]);
        let mults = lam.multiplicities();
        assert_eq!(mults.get(&5), Some(&1));
        assert_eq!(mults.get(&4), Some(&2));
        assert_eq!(mults.get(&1), Some(&1));
        assert_eq!(mults.len(), 3);
        assert!(Partition::empty().multiplicities().is_empty());
        assert_eq!(p(&[2, 2, 2]).multiplicities().get(&2), Some(&3));
    }

    #[test]
    fn conjugate_square_sum_matches_row_form() {
        // Σ_j (λ'_j)² = Σ_i (2i−1) λ_i, a standard diagram identity used to
        // cross-check both statistics.
        for n in 0..=12 {
            for lam in enumerate_partitions(n).unwrap() {
                let row_form: usize = lam
                    .parts()
                    .iter()
                    .enumerate()
                    .map(|(idx, &part)| (2 * (idx + 1) - 1) * part)
                    .sum();
                assert_eq!(lam.sum_conjugate_squares(), row_form, "λ = {lam}");
            }
        }
    }

    #[test]
    fn enumeration_counts_and_order() {
        assert_eq!(enumerate_partitions(0).unwrap(), vec![Partition::empty()]);
        let four: Vec<String> = enumerate_partitions(4)
            .unwrap()
            .iter()
            .map(|lam| lam.to_string())
            .collect();
        assert_eq!(four, vec!["[4]", "[3,1]", "[2,2]", "[2,1,1]", "[1,1,1,1]"]);
        for n in 0..=15 {
            let listed = enumerate_partitions(n).unwrap();
            assert_eq!(listed.len() as i64, partition_count(n), "p({n})");
            for lam in &listed {
                assert_eq!(lam.size(), n);
            }
            // Reverse-lexicographic means strictly decreasing in the derived order.
            for pair in listed.windows(2) {
                assert!(pair[0] > pair[1]);
            }
        }
        assert_eq!(enumerate_partitions(10).unwrap().len(), 42);
    }

    #[test]
    fn enumeration_bound() {
        assert!(matches!(
            enumerate_partitions(MAX_PARTITION_N + 1),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn conjugate_parts_past_the_edge_are_zero() {
        let lam = p(&[3, 1]);
        assert_eq!(lam.conjugate_part(3), 1);
        assert_eq!(lam.conjugate_part(4), 0);
        assert_eq!(lam.conjugate_part(100), 0);
        assert_eq!(lam.conjugate_prefix_sum(100), 4);
    }

    #[test]
    fn corner_addition_and_removal() {
        let lam = p(&[3, 1]);
        assert!(lam.can_add_in_column(1));
        assert!(lam.can_add_in_column(2));
        assert!(!lam.can_add_in_column(3));
        assert!(lam.can_add_in_column(4));
        assert_eq!(lam.add_cell_in_column(2), p(&[3, 2]));
        assert_eq!(lam.add_cell_in_column(4), p(&[4, 1]));
        assert_eq!(lam.corners(), vec![(1, 3), (2, 1)]);
        assert_eq!(lam.remove_corner_at_row(2), p(&[3]));
        assert_eq!(p(&[1]).remove_corner_at_row(1), Partition::empty());
    }

    #[test]
    fn parse_and_display() {
        for text in ["[]", "[1]", "[5,4,4,1]", "[2,2,2]"] {
            let lam: Partition = text.parse().unwrap();
            assert_eq!(lam.to_string(), text);
        }
        assert_eq!(" [ 3 , 1 ] ".parse::<Partition>().unwrap(), p(&[3, 1]));
        for bad in ["", "3,1", "[3,4]", "[0]", "[a]", "[1,]"] {
            assert!(bad.parse::<Partition>().is_err(), "{bad:?} should not parse");
        }
    }

    proptest! {
        #[test]
        fn display_roundtrips(parts in proptest::collection::vec(1usize..12, 0..8)) {
            let mut sorted = parts.clone();
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            let lam = Partition::new(sorted);
            let back: Partition = lam.to_string().parse().unwrap();
            prop_assert_eq!(back, lam);
        }

        #[test]
        fn conjugate_involution_random(parts in proptest::collection::vec(1usize..15, 0..10)) {
            let mut sorted = parts.clone();
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            let lam = Partition::new(sorted);
            prop_assert_eq!(lam.conjugate().conjugate(), lam.clone());
            prop_assert_eq!(lam.conjugate().size(), lam.size());
        }
    }
}
