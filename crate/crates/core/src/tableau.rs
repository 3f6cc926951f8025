//! Standard Young tableaux, encoded as column growth sequences.
//!
//! A standard tableau of shape λ with n cells is the same thing as a path
//! ∅ = Λ_0 ⊂ Λ_1 ⊂ ⋯ ⊂ Λ_n = λ in Young's lattice, so we store only the
//! column in which each entry lands. Rows, prefix shapes, and the statistic
//! m*(Λ_j) — the number of parts of Λ_j equal to the column of entry j —
//! are recovered from that sequence.

use crate::limits::MAX_SYT_CELLS;
use crate::partition::Partition;
use crate::{Error, Result};

/// A standard Young tableau: entries 1..n filling the diagram of `shape`,
/// strictly increasing along rows and columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardTableau {
    shape: Partition,
    /// columns[j-1] is the 1-indexed column of entry j.
    columns: Vec<usize>,
}

impl StandardTableau {
    /// Builds a tableau from the column of each entry, validating that every
    /// prefix is a partition diagram and that the final shape matches.
    pub fn from_columns(columns: Vec<usize>) -> Result<Self> {
        let mut shape = Partition::empty();
        for (idx, &col) in columns.iter().enumerate() {
            if !shape.can_add_in_column(col) {
                return Err(Error::InvalidParameter(format!(
                    "entry {} in column {col} does not extend {shape}",
                    idx + 1
                )));
            }
            shape = shape.add_cell_in_column(col);
        }
        Ok(StandardTableau { shape, columns })
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn size(&self) -> usize {
        self.columns.len()
    }

    /// Column of entry `j` (both 1-indexed).
    pub fn column_of(&self, j: usize) -> usize {
        assert!(j >= 1 && j <= self.size(), "entry {j} out of range");
        self.columns[j - 1]
    }

    /// Row of entry `j`: one more than the number of earlier entries in the
    /// same column.
    pub fn row_of(&self, j: usize) -> usize {
        let col = self.column_of(j);
        self.columns[..j].iter().filter(|&&c| c == col).count()
    }

    /// Λ_j, the shape formed by entries 1..j. Λ_0 is empty.
    pub fn prefix_shape(&self, j: usize) -> Partition {
        assert!(j <= self.size(), "prefix {j} out of range");
        let mut counts: Vec<usize> = Vec::new();
        for &col in &self.columns[..j] {
            if col > counts.len() {
                counts.resize(col, 0);
            }
            counts[col - 1] += 1;
        }
        // counts[c-1] = Λ'_c; transpose back to row lengths.
        let max_rows = counts.first().copied().unwrap_or(0);
        let parts = (1..=max_rows)
            .map(|row| counts.iter().take_while(|&&len| len >= row).count())
            .collect();
        Partition::new(parts)
    }

    /// m*(Λ_j): the number of parts of Λ_j equal to the column of entry j.
    pub fn m_star(&self, j: usize) -> usize {
        assert!(j >= 1 && j <= self.size(), "entry {j} out of range");
        let col = self.column_of(j);
        self.prefix_shape(j).multiplicity(col)
    }

    /// The rows of the tableau with their entries, for display and tests.
    pub fn entries_by_row(&self) -> Vec<Vec<usize>> {
        let mut rows: Vec<Vec<usize>> = vec![Vec::new(); self.shape.len()];
        for j in 1..=self.size() {
            rows[self.row_of(j) - 1].push(j);
        }
        rows
    }
}

/// All standard Young tableaux of the given shape, in lexicographic order of
/// their column sequences.
pub fn enumerate_syt(shape: &Partition) -> Result<Vec<StandardTableau>> {
    if shape.size() > MAX_SYT_CELLS {
        return Err(Error::BoundExceeded {
            what: "enumerate_syt",
            requested: shape.size() as u128,
            limit: MAX_SYT_CELLS as u128,
        });
    }
    let mut out = Vec::new();
    let mut columns = Vec::with_capacity(shape.size());
    grow(shape, &Partition::empty(), &mut columns, &mut out);
    Ok(out)
}

/// Visits every growth path from `current` up to `shape`, one cell at a time.
fn grow(
    shape: &Partition,
    current: &Partition,
    columns: &mut Vec<usize>,
    out: &mut Vec<StandardTableau>,
) {
    if current.size() == shape.size() {
        out.push(StandardTableau {
            shape: current.clone(),
            columns: columns.clone(),
        });
        return;
    }
    for col in 1..=shape.part(1) {
        if current.conjugate_part(col) < shape.conjugate_part(col) && current.can_add_in_column(col) {
            let next = current.add_cell_in_column(col);
            columns.push(col);
            grow(shape, &next, columns, out);
            columns.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::enumerate_partitions;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec())
    }

    /// Hook-length count of standard tableaux, the oracle for enumeration.
    fn hook_length_count(shape: &Partition) -> u64 {
        let n = shape.size();
        let mut numerator: u128 = 1;
        for k in 1..=n as u128 {
            numerator *= k;
        }
        let mut hooks: u128 = 1;
        for (row_idx, &row_len) in shape.parts().iter().enumerate() {
            for col in 1..=row_len {
                let arm = row_len - col;
                let leg = shape.conjugate_part(col) - (row_idx + 1);
                hooks *= (arm + leg + 1) as u128;
            }
        }
        assert_eq!(numerator % hooks, 0);
        (numerator / hooks) as u64
    }

    #[test]
    fn tiny_shapes() {
        assert_eq!(enumerate_syt(&p(&[2, 1])).unwrap().len(), 2);
        assert_eq!(enumerate_syt(&p(&[6])).unwrap().len(), 1);
        assert_eq!(enumerate_syt(&Partition::empty()).unwrap().len(), 1);
        assert_eq!(enumerate_syt(&p(&[1, 1, 1])).unwrap().len(), 1);
    }

    #[test]
    fn counts_match_hook_lengths_up_to_10() {
        for n in 0..=10 {
            for shape in enumerate_partitions(n).unwrap() {
                let tableaux = enumerate_syt(&shape).unwrap();
                assert_eq!(tableaux.len() as u64, hook_length_count(&shape), "shape {shape}");
                for t in &tableaux {
                    assert_eq!(t.shape(), &shape);
                }
            }
        }
    }

    #[test]
    fn tableaux_are_distinct() {
        for shape in enumerate_partitions(6).unwrap() {
            let tableaux = enumerate_syt(&shape).unwrap();
            for i in 0..tableaux.len() {
                for j in i + 1..tableaux.len() {
                    assert_ne!(tableaux[i], tableaux[j]);
                }
            }
        }
    }

    #[test]
    fn the_432_tableau_appears() {
        // Row filling [1,3,5,6] / [2,4,7] / [8,9] is a standard tableau of
        // shape (4,3,2) and must be produced by the enumeration.
        let target = vec![vec![1, 3, 5, 6], vec![2, 4, 7], vec![8, 9]];
        let found = enumerate_syt(&p(&[4, 3, 2]))
            .unwrap()
            .into_iter()
            .find(|t| t.entries_by_row() == target)
            .expect("tableau not enumerated");
        assert_eq!(found.row_of(9), 3);
        assert_eq!(found.column_of(9), 2);
        assert_eq!(found.m_star(9), 1);
    }

    #[test]
    fn m_star_examples() {
        // Entry 1 always sits alone in column 1.
        for shape in enumerate_partitions(5).unwrap() {
            for t in enumerate_syt(&shape).unwrap() {
                assert_eq!(t.m_star(1), 1);
            }
        }
        let column_pair = StandardTableau::from_columns(vec![1, 1]).unwrap();
        assert_eq!(column_pair.shape(), &p(&[1, 1]));
        assert_eq!(column_pair.m_star(2), 2);
    }

    #[test]
    fn prefix_shapes_grow_one_cell_at_a_time() {
        for shape in enumerate_partitions(7).unwrap() {
            for t in enumerate_syt(&shape).unwrap() {
                let mut previous = Partition::empty();
                for j in 1..=t.size() {
                    let current = t.prefix_shape(j);
                    assert_eq!(current.size(), previous.size() + 1);
                    // The two shapes differ in exactly one column length.
                    let max_col = current.part(1);
                    let diffs = (1..=max_col)
                        .filter(|&c| current.conjugate_part(c) != previous.conjugate_part(c))
                        .count();
                    assert_eq!(diffs, 1);
                    previous = current;
                }
                assert_eq!(&previous, t.shape());
            }
        }
    }

    #[test]
    fn from_columns_rejects_bad_growth() {
        assert!(StandardTableau::from_columns(vec![2]).is_err());
        assert!(StandardTableau::from_columns(vec![1, 3]).is_err());
        assert!(StandardTableau::from_columns(vec![1, 2, 2, 2]).is_err());
    }

    #[test]
    fn syt_bound() {
        let row = Partition::new(vec![MAX_SYT_CELLS + 1]);
        assert!(matches!(enumerate_syt(&row), Err(Error::BoundExceeded { .. })));
    }
}
