//! Dense bit matrices over GF(2) with at most 64 columns.
//!
//! Every row is a single `u64`; bit `j` of row `i` is entry `(i, j)`. Rank is
//! computed by forward elimination on a scratch copy, pivoting on the lowest
//! set column.

use std::fmt;

use thiserror::Error;

/// Maximum number of columns (and vertices) supported by the kernel.
pub const MAX_COLS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("column count {0} exceeds the {MAX_COLS}-column limit")]
    TooManyColumns(usize),
    #[error("row {row} has bits outside the {n_cols} declared columns")]
    StrayBits { row: usize, n_cols: usize },
    #[error("row index {index} out of range for {len} rows")]
    RowOutOfRange { index: usize, len: usize },
    #[error("column index {index} out of range for {len} columns")]
    ColOutOfRange { index: usize, len: usize },
}

#[inline]
pub(crate) const fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// An `n_rows x n_cols` matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    n_rows: usize,
    n_cols: usize,
    rows: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Result<Self, Gf2Error> {
        if n_cols > MAX_COLS {
            return Err(Gf2Error::TooManyColumns(n_cols));
        }
        Ok(Self {
            n_rows,
            n_cols,
            rows: vec![0; n_rows],
        })
    }

    pub fn identity(n: usize) -> Result<Self, Gf2Error> {
        let mut m = Self::zeros(n, n)?;
        for (i, row) in m.rows.iter_mut().enumerate() {
            *row = 1 << i;
        }
        Ok(m)
    }

    /// Builds a matrix from packed rows, rejecting bits at positions `>= n_cols`.
    pub fn from_rows(n_cols: usize, rows: Vec<u64>) -> Result<Self, Gf2Error> {
        if n_cols > MAX_COLS {
            return Err(Gf2Error::TooManyColumns(n_cols));
        }
        let mask = low_mask(n_cols);
        if let Some(row) = rows.iter().position(|r| r & !mask != 0) {
            return Err(Gf2Error::StrayBits { row, n_cols });
        }
        Ok(Self {
            n_rows: rows.len(),
            n_cols,
            rows,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.n_rows && j < self.n_cols, "entry ({i},{j}) out of range");
        self.rows[i] >> j & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.n_rows && j < self.n_cols, "entry ({i},{j}) out of range");
        if value {
            self.rows[i] |= 1 << j;
        } else {
            self.rows[i] &= !(1 << j);
        }
    }

    /// Row rank over GF(2). Does not modify `self`.
    pub fn rank(&self) -> usize {
        rank_of_rows(&self.rows)
    }

    /// The submatrix `M[rows, cols]`, with rows and columns taken in
    /// ascending index order. Duplicate indices are collapsed.
    pub fn submatrix(&self, row_subset: &[usize], col_subset: &[usize]) -> Result<Self, Gf2Error> {
        let mut rs = row_subset.to_vec();
        rs.sort_unstable();
        rs.dedup();
        let mut cs = col_subset.to_vec();
        cs.sort_unstable();
        cs.dedup();
        if let Some(&index) = rs.iter().find(|&&i| i >= self.n_rows) {
            return Err(Gf2Error::RowOutOfRange {
                index,
                len: self.n_rows,
            });
        }
        if let Some(&index) = cs.iter().find(|&&j| j >= self.n_cols) {
            return Err(Gf2Error::ColOutOfRange {
                index,
                len: self.n_cols,
            });
        }
        let rows = rs
            .iter()
            .map(|&i| {
                cs.iter()
                    .enumerate()
                    .fold(0u64, |acc, (new_j, &j)| acc | ((self.rows[i] >> j & 1) << new_j))
            })
            .collect();
        Ok(Self {
            n_rows: rs.len(),
            n_cols: cs.len(),
            rows,
        })
    }

    /// Transpose; only defined when the matrix has at most 64 rows.
    pub fn transpose(&self) -> Result<Self, Gf2Error> {
        if self.n_rows > MAX_COLS {
            return Err(Gf2Error::TooManyColumns(self.n_rows));
        }
        let mut rows = vec![0u64; self.n_cols];
        for (i, &r) in self.rows.iter().enumerate() {
            let mut bits = r;
            while bits != 0 {
                let j = bits.trailing_zeros() as usize;
                rows[j] |= 1 << i;
                bits &= bits - 1;
            }
        }
        Ok(Self {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            rows,
        })
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.n_rows, self.n_cols)?;
        for &r in &self.rows {
            let line: String = (0..self.n_cols)
                .map(|j| if r >> j & 1 == 1 { '1' } else { '0' })
                .collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

/// GF(2) rank of a list of packed rows.
///
/// Forward elimination: for each pivot the lowest set column of the current
/// row is used, and every later row with that column set is reduced.
pub fn rank_of_rows(rows: &[u64]) -> usize {
    let mut scratch = [0u64; MAX_COLS];
    if rows.len() <= MAX_COLS {
        scratch[..rows.len()].copy_from_slice(rows);
        eliminate(&mut scratch[..rows.len()])
    } else {
        // Rank is at most 64, so the tail rows only matter through the span.
        eliminate(&mut rows.to_vec())
    }
}

fn eliminate(rows: &mut [u64]) -> usize {
    let mut rank = 0;
    let len = rows.len();
    for i in 0..len {
        let r = rows[i];
        if r == 0 {
            continue;
        }
        let pivot = r & r.wrapping_neg();
        for later in &mut rows[i + 1..] {
            if *later & pivot != 0 {
                *later ^= r;
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_small_cases() {
        assert_eq!(BitMatrix::zeros(3, 3).unwrap().rank(), 0);
        assert_eq!(BitMatrix::identity(3).unwrap().rank(), 3);
        assert_eq!(BitMatrix::from_rows(2, vec![0b11, 0b11]).unwrap().rank(), 1);
    }

    #[test]
    fn rank_is_pure() {
        let m = BitMatrix::from_rows(3, vec![0b011, 0b110, 0b101]).unwrap();
        let before = m.clone();
        assert_eq!(m.rank(), 2);
        assert_eq!(m, before);
    }

    #[test]
    fn submatrix_examples() {
        let id = BitMatrix::identity(3).unwrap();
        assert_eq!(id.submatrix(&[0, 2], &[0, 2]).unwrap(), BitMatrix::identity(2).unwrap());

        let empty = id.submatrix(&[], &[0, 1]).unwrap();
        assert_eq!((empty.n_rows(), empty.n_cols(), empty.rank()), (0, 2, 0));

        let ones = BitMatrix::from_rows(2, vec![0b11, 0b11]).unwrap();
        let one = ones.submatrix(&[0], &[1]).unwrap();
        assert_eq!(one.rows(), &[1]);
        assert_eq!(one.n_cols(), 1);
    }

    #[test]
    fn submatrix_out_of_range() {
        let id = BitMatrix::identity(3).unwrap();
        assert_eq!(
            id.submatrix(&[3], &[0]),
            Err(Gf2Error::RowOutOfRange { index: 3, len: 3 })
        );
        assert_eq!(
            id.submatrix(&[0], &[7]),
            Err(Gf2Error::ColOutOfRange { index: 7, len: 3 })
        );
    }

    #[test]
    fn construction_rejects_stray_bits() {
        assert!(matches!(
            BitMatrix::from_rows(2, vec![0b100]),
            Err(Gf2Error::StrayBits { row: 0, .. })
        ));
        assert!(BitMatrix::zeros(1, 65).is_err());
    }

    #[test]
    fn rank_handles_more_than_64_rows() {
        let rows: Vec<u64> = (0..100).map(|i| 1u64 << (i % 64)).collect();
        assert_eq!(rank_of_rows(&rows), 64);
    }

    #[test]
    fn transpose_roundtrip() {
        let m = BitMatrix::from_rows(3, vec![0b001, 0b110]).unwrap();
        let t = m.transpose().unwrap();
        assert_eq!((t.n_rows(), t.n_cols()), (3, 2));
        assert!(t.get(0, 0) && t.get(1, 1) && t.get(2, 1) && !t.get(0, 1));
        assert_eq!(t.transpose().unwrap(), m);
    }
}
