//! Partially filled arrays of nonzero signed integers.
//!
//! A `PFArray` is an `m x n` grid in which some cells hold a nonzero integer
//! and the rest are empty. Empty is a distinct state, not the value zero.
//! Positions are 1-based; index arithmetic on rows and columns is cyclic with
//! reduced residues `{1, ..., n}`.
//!
//! Alongside the cell store this module carries the skeleton/diagonal
//! geometry: wrap-around diagonals `D_i`, the cyclically k-diagonal predicate
//! and its block variant for arrays assembled from `s x s` blocks.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A 1-based cell position; `row` before `col` in the derived ordering, so
/// iteration over sorted positions is row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Position {
    pub row: usize,
    pub col: usize,
}

impl Position {
    pub fn new(row: usize, col: usize) -> Self {
        Position { row, col }
    }
}

/// Reduces `x` to the residue system `{1, ..., n}`.
pub fn reduce_index(x: i64, n: usize) -> usize {
    ((x - 1).rem_euclid(n as i64)) as usize + 1
}

/// The wrap-around diagonal `D_i = {(i,1), (i+1,2), ..., (i-1,n)}` of an
/// `n x n` grid, listed by increasing column.
pub fn diagonal_cells(n: usize, i: usize) -> Result<Vec<Position>> {
    if i < 1 || i > n {
        return Err(Error::Index { index: i, n });
    }
    Ok((1..=n)
        .map(|c| Position::new(reduce_index((i + c - 1) as i64, n), c))
        .collect())
}

/// Index of the diagonal containing `pos` in an `n x n` grid, in `[1, n]`.
pub fn diagonal_index(pos: Position, n: usize) -> usize {
    reduce_index(pos.row as i64 - pos.col as i64 + 1, n)
}

/// An `m x n` partially filled array.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PFArray {
    rows: usize,
    cols: usize,
    cells: BTreeMap<Position, i64>,
}

impl PFArray {
    /// An empty `rows x cols` array.
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::domain("array dimensions must be positive"));
        }
        Ok(PFArray {
            rows,
            cols,
            cells: BTreeMap::new(),
        })
    }

    /// An empty `n x n` array.
    pub fn square(n: usize) -> Result<Self> {
        PFArray::new(n, n)
    }

    /// Builds an array from row vectors where `None` marks an empty cell.
    pub fn from_rows(rows: &[Vec<Option<i64>>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map(|r| r.len()).unwrap_or(0);
        let mut a = PFArray::new(m, n)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Dimension(m, n, m, row.len()));
            }
            for (j, cell) in row.iter().enumerate() {
                if let Some(value) = cell {
                    a.insert(Position::new(i + 1, j + 1), *value)?;
                }
            }
        }
        Ok(a)
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Number of filled cells.
    pub fn filled(&self) -> usize {
        self.cells.len()
    }

    pub fn get(&self, pos: Position) -> Option<i64> {
        self.cells.get(&pos).copied()
    }

    /// Fills an empty in-bounds cell with a nonzero value.
    pub fn insert(&mut self, pos: Position, value: i64) -> Result<()> {
        if value == 0 {
            return Err(Error::ZeroEntry);
        }
        if pos.row < 1 || pos.row > self.rows || pos.col < 1 || pos.col > self.cols {
            return Err(Error::OutOfBounds {
                row: pos.row,
                col: pos.col,
                rows: self.rows,
                cols: self.cols,
            });
        }
        if self.cells.contains_key(&pos) {
            return Err(Error::Overlap { pos });
        }
        self.cells.insert(pos, value);
        Ok(())
    }

    /// Filled cells in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = (Position, i64)> + '_ {
        self.cells.iter().map(|(p, v)| (*p, *v))
    }

    /// The multiset of absolute values of the filled entries, sorted.
    /// Duplicates are kept so a verifier can reject them.
    pub fn support(&self) -> Vec<i64> {
        let mut s: Vec<i64> = self.cells.values().map(|v| v.abs()).collect();
        s.sort_unstable();
        s
    }

    /// The set of filled positions.
    pub fn skeleton(&self) -> BTreeSet<Position> {
        self.cells.keys().copied().collect()
    }

    /// Entries of row `r`, left to right.
    pub fn row_entries(&self, r: usize) -> Vec<i64> {
        (1..=self.cols)
            .filter_map(|c| self.get(Position::new(r, c)))
            .collect()
    }

    /// Entries of column `c`, top to bottom.
    pub fn col_entries(&self, c: usize) -> Vec<i64> {
        (1..=self.rows)
            .filter_map(|r| self.get(Position::new(r, c)))
            .collect()
    }

    /// Integer row sum; accumulated exactly in 128 bits and clamped, so a
    /// nonzero sum never reads as zero whatever the inputs.
    pub fn row_sum(&self, r: usize) -> i64 {
        clamp_sum(self.row_entries(r).iter().map(|&e| e as i128).sum())
    }

    pub fn col_sum(&self, c: usize) -> i64 {
        clamp_sum(self.col_entries(c).iter().map(|&e| e as i128).sum())
    }

    /// Union of two arrays with the same shape and disjoint skeletons.
    pub fn union_disjoint(&self, other: &PFArray) -> Result<PFArray> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        let mut result = self.clone();
        for (pos, value) in other.cells() {
            result.insert(pos, value)?;
        }
        Ok(result)
    }

    /// `A ± x`: adds `x` to every positive entry and `-x` to every negative
    /// entry. The skeleton is unchanged. Overflow is a hard error.
    pub fn shift(&self, x: i64) -> Result<PFArray> {
        if x < 0 {
            return Err(Error::domain("shift amount must be nonnegative"));
        }
        let mut result = PFArray::new(self.rows, self.cols)?;
        for (pos, value) in self.cells() {
            let shifted = if value > 0 {
                value.checked_add(x)
            } else {
                value.checked_sub(x)
            }
            .ok_or(Error::Overflow)?;
            result.cells.insert(pos, shifted);
        }
        Ok(result)
    }

    /// True iff every row and every column holds equally many positive and
    /// negative entries.
    pub fn is_shiftable(&self) -> bool {
        let mut row_balance = vec![0i64; self.rows + 1];
        let mut col_balance = vec![0i64; self.cols + 1];
        for (pos, value) in self.cells() {
            let sign = value.signum();
            row_balance[pos.row] += sign;
            col_balance[pos.col] += sign;
        }
        row_balance.iter().all(|&b| b == 0) && col_balance.iter().all(|&b| b == 0)
    }

    /// Moves every cell `offset` columns to the right, cyclically. Entries
    /// are unchanged; each diagonal `D_i` becomes `D_{i-offset}`.
    pub fn rotate_cols(&self, offset: usize) -> PFArray {
        let mut result = PFArray {
            rows: self.rows,
            cols: self.cols,
            cells: BTreeMap::new(),
        };
        for (pos, value) in self.cells() {
            let c = reduce_index(pos.col as i64 + offset as i64, self.cols);
            result.cells.insert(Position::new(pos.row, c), value);
        }
        result
    }

    /// Indices of the diagonals that contain at least one filled cell.
    pub fn filled_diagonals(&self) -> Result<BTreeSet<usize>> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        Ok(self
            .cells
            .keys()
            .map(|p| diagonal_index(*p, self.rows))
            .collect())
    }

    /// One skeleton bitmask per row (bit `c-1` set when `(r, c)` is
    /// filled), available up to 64 columns.
    pub(crate) fn row_masks(&self) -> Option<Vec<u64>> {
        if self.cols > 64 {
            return None;
        }
        let mut masks = vec![0u64; self.rows];
        for pos in self.cells.keys() {
            masks[pos.row - 1] |= 1u64 << (pos.col - 1);
        }
        Some(masks)
    }

    /// True iff the filled cells are exactly `k` consecutive diagonals
    /// `D_i, ..., D_{i+k-1}` (indices mod `n`), each completely filled.
    pub fn is_cyclically_k_diagonal(&self, k: usize) -> Result<bool> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        if k < 1 || k > n {
            return Err(Error::domain(format!(
                "diagonal count {k} outside [1, {n}]"
            )));
        }
        if self.filled() != k * n {
            return Ok(false);
        }
        match self.row_masks() {
            Some(masks) => Ok(kdiag_from_masks(&masks, n, k)),
            None => {
                let present = self.filled_diagonals()?;
                Ok(present.len() == k && consecutive_mod(&present, n))
            }
        }
    }

    /// The smallest column rotation under which the nonempty `s x s` blocks
    /// of this array are exactly `k` consecutive block diagonals, if any.
    pub fn sk_diagonal_rotation(&self, s: usize, k: usize) -> Result<Option<usize>> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        if s < 1 || n % s != 0 {
            return Err(Error::Divisibility {
                divisor: s,
                value: n,
            });
        }
        let m = n / s;
        if k < 1 || k > m {
            return Err(Error::domain(format!(
                "block diagonal count {k} outside [1, {m}]"
            )));
        }
        if let Some(masks) = self.row_masks() {
            return Ok(sk_rotation_from_masks(&masks, n, s, k));
        }
        'rotation: for j in 0..n {
            let mut nonempty = vec![false; m * m];
            let mut count = 0usize;
            for (pos, _) in self.cells() {
                let c = reduce_index(pos.col as i64 + j as i64, n);
                let block = (pos.row - 1) / s * m + (c - 1) / s;
                if !nonempty[block] {
                    nonempty[block] = true;
                    count += 1;
                }
            }
            // Exactly k full block diagonals hold k*m blocks.
            if count != k * m {
                continue;
            }
            let mut diagonals: BTreeSet<usize> = BTreeSet::new();
            for (block, filled) in nonempty.iter().enumerate() {
                if *filled {
                    let (br, bc) = (block / m + 1, block % m + 1);
                    diagonals.insert(reduce_index(br as i64 - bc as i64 + 1, m));
                }
            }
            if diagonals.len() != k || !consecutive_mod(&diagonals, m) {
                continue 'rotation;
            }
            return Ok(Some(j));
        }
        Ok(None)
    }

    /// True iff some column rotation of this array is the `s`-blowup of a
    /// cyclically `k`-diagonal array of size `n/s`.
    pub fn is_cyclically_sk_diagonal(&self, s: usize, k: usize) -> Result<bool> {
        Ok(self.sk_diagonal_rotation(s, k)?.is_some())
    }
}

/// Rotates the low `n` bits of `mask` left by `offset` (column `c` moves to
/// `c + offset` mod `n`).
pub(crate) fn bit_rotate(mask: u64, offset: usize, n: usize) -> u64 {
    debug_assert!(offset < n && n <= 64);
    if offset == 0 {
        return mask;
    }
    let ones = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    ((mask << offset) | (mask >> (n - offset))) & ones
}

/// Skeleton check on row bitmasks: exactly `k` consecutive full diagonals.
pub(crate) fn kdiag_from_masks(masks: &[u64], n: usize, k: usize) -> bool {
    let mut counts = vec![0usize; n];
    for (r0, mask) in masks.iter().enumerate() {
        let mut m = *mask;
        while m != 0 {
            let c0 = m.trailing_zeros() as usize;
            m &= m - 1;
            counts[(r0 + n - c0) % n] += 1;
        }
    }
    let present: BTreeSet<usize> = (0..n)
        .filter(|d0| counts[*d0] > 0)
        .map(|d0| d0 + 1)
        .collect();
    present.len() == k && present.iter().all(|d| counts[d - 1] == n) && consecutive_mod(&present, n)
}

/// Block-skeleton scan on row bitmasks: the smallest column rotation whose
/// nonempty `s x s` blocks are exactly `k` consecutive block diagonals.
pub(crate) fn sk_rotation_from_masks(masks: &[u64], n: usize, s: usize, k: usize) -> Option<usize> {
    let m = n / s;
    let block_ones = if s == 64 { u64::MAX } else { (1u64 << s) - 1 };
    let mut block_rows = vec![0u64; m];
    'rotation: for j in 0..n {
        block_rows.iter_mut().for_each(|b| *b = 0);
        for (r0, mask) in masks.iter().enumerate() {
            block_rows[r0 / s] |= bit_rotate(*mask, j, n);
        }
        let mut diag_counts = vec![0usize; m];
        let mut total = 0usize;
        for (br, acc) in block_rows.iter().enumerate() {
            for bc in 0..m {
                if (acc >> (bc * s)) & block_ones != 0 {
                    diag_counts[(br + m - bc) % m] += 1;
                    total += 1;
                }
            }
        }
        if total != k * m {
            continue;
        }
        let present: BTreeSet<usize> = (0..m)
            .filter(|d0| diag_counts[*d0] > 0)
            .map(|d0| d0 + 1)
            .collect();
        if present.len() != k || !consecutive_mod(&present, m) {
            continue 'rotation;
        }
        return Some(j);
    }
    None
}

fn clamp_sum(sum: i128) -> i64 {
    sum.clamp(i64::MIN as i128, i64::MAX as i128) as i64
}

/// True iff `set` is a run of consecutive residues mod `n` (residues `1..=n`).
fn consecutive_mod(set: &BTreeSet<usize>, n: usize) -> bool {
    let len = set.len();
    if len == n {
        return true;
    }
    set.iter().any(|&start| {
        (0..len).all(|offset| set.contains(&reduce_index((start + offset) as i64, n)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn singleton(m: usize, n: usize, pos: Position, value: i64) -> PFArray {
        let mut a = PFArray::new(m, n).unwrap();
        a.insert(pos, value).unwrap();
        a
    }

    #[test]
    fn empty_array_has_empty_support_and_skeleton() {
        let a = PFArray::new(3, 4).unwrap();
        assert!(a.support().is_empty());
        assert!(a.skeleton().is_empty());
        assert!(a.is_shiftable());
    }

    #[test]
    fn zero_entries_are_rejected() {
        let mut a = PFArray::new(2, 2).unwrap();
        assert_eq!(a.insert(Position::new(1, 1), 0), Err(Error::ZeroEntry));
    }

    #[test]
    fn support_is_a_multiset() {
        let mut a = PFArray::new(1, 2).unwrap();
        a.insert(Position::new(1, 1), 5).unwrap();
        a.insert(Position::new(1, 2), -5).unwrap();
        assert_eq!(a.support(), vec![5, 5]);
    }

    #[test]
    fn skeleton_of_single_cell() {
        let a = singleton(3, 4, Position::new(2, 3), 7);
        assert_eq!(
            a.skeleton().into_iter().collect::<Vec<_>>(),
            vec![Position::new(2, 3)]
        );
    }

    #[test]
    fn union_with_empty_is_identity() {
        let a = singleton(2, 2, Position::new(1, 1), 3);
        let empty = PFArray::new(2, 2).unwrap();
        assert_eq!(a.union_disjoint(&empty).unwrap(), a);
    }

    #[test]
    fn union_rejects_overlap_and_shape_mismatch() {
        let a = singleton(2, 2, Position::new(1, 1), 3);
        let b = singleton(2, 2, Position::new(1, 1), 4);
        assert!(matches!(
            a.union_disjoint(&b),
            Err(Error::Overlap { pos }) if pos == Position::new(1, 1)
        ));
        let c = PFArray::new(2, 3).unwrap();
        assert!(matches!(a.union_disjoint(&c), Err(Error::Dimension(..))));
    }

    #[test]
    fn union_sums_add_linewise() {
        let mut a = PFArray::new(2, 2).unwrap();
        a.insert(Position::new(1, 1), 3).unwrap();
        a.insert(Position::new(2, 2), -4).unwrap();
        let mut b = PFArray::new(2, 2).unwrap();
        b.insert(Position::new(1, 2), 10).unwrap();
        b.insert(Position::new(2, 1), -1).unwrap();
        let u = a.union_disjoint(&b).unwrap();
        for r in 1..=2 {
            assert_eq!(u.row_sum(r), a.row_sum(r) + b.row_sum(r));
        }
        for c in 1..=2 {
            assert_eq!(u.col_sum(c), a.col_sum(c) + b.col_sum(c));
        }
    }

    #[test]
    fn shift_by_zero_is_identity() {
        let a = singleton(2, 2, Position::new(1, 2), -9);
        assert_eq!(a.shift(0).unwrap(), a);
    }

    #[test]
    fn shift_moves_entries_away_from_zero() {
        let mut a = PFArray::new(1, 2).unwrap();
        a.insert(Position::new(1, 1), 2).unwrap();
        a.insert(Position::new(1, 2), -3).unwrap();
        let shifted = a.shift(10).unwrap();
        assert_eq!(shifted.get(Position::new(1, 1)), Some(12));
        assert_eq!(shifted.get(Position::new(1, 2)), Some(-13));
        assert_eq!(shifted.skeleton(), a.skeleton());
    }

    #[test]
    fn shift_composes_additively() {
        let mut a = PFArray::new(2, 2).unwrap();
        a.insert(Position::new(1, 1), 1).unwrap();
        a.insert(Position::new(2, 1), -6).unwrap();
        let lhs = a.shift(3).unwrap().shift(4).unwrap();
        assert_eq!(lhs, a.shift(7).unwrap());
    }

    #[test]
    fn shift_overflow_is_an_error() {
        let a = singleton(1, 1, Position::new(1, 1), i64::MAX - 1);
        assert_eq!(a.shift(5), Err(Error::Overflow));
    }

    #[test]
    fn shiftable_block_from_two_by_two() {
        let e0 = PFArray::from_rows(&[vec![Some(1), Some(-2)], vec![Some(-3), Some(4)]]).unwrap();
        assert!(e0.is_shiftable());
    }

    #[test]
    fn diagonal_cells_small_cases() {
        assert_eq!(
            diagonal_cells(3, 1).unwrap(),
            vec![
                Position::new(1, 1),
                Position::new(2, 2),
                Position::new(3, 3)
            ]
        );
        assert_eq!(
            diagonal_cells(3, 3).unwrap(),
            vec![
                Position::new(3, 1),
                Position::new(1, 2),
                Position::new(2, 3)
            ]
        );
        assert!(matches!(diagonal_cells(3, 4), Err(Error::Index { .. })));
        assert!(matches!(diagonal_cells(3, 0), Err(Error::Index { .. })));
    }

    #[test]
    fn diagonal_cells_wraps_rows() {
        // Unrolling D_2 of a 7x7 grid at c = 7 gives row 2 + 6 = 8 = 1.
        assert!(diagonal_cells(7, 2).unwrap().contains(&Position::new(1, 7)));
    }

    #[test]
    fn diagonals_partition_the_grid() {
        for n in [1usize, 2, 3, 5, 8] {
            let mut seen = BTreeSet::new();
            for i in 1..=n {
                for pos in diagonal_cells(n, i).unwrap() {
                    assert!(seen.insert(pos), "diagonals overlap at {pos:?}");
                    assert_eq!(diagonal_index(pos, n), i);
                }
            }
            assert_eq!(seen.len(), n * n);
        }
    }

    #[test]
    fn fully_filled_square_is_n_diagonal() {
        let n = 4;
        let mut a = PFArray::square(n).unwrap();
        for r in 1..=n {
            for c in 1..=n {
                a.insert(Position::new(r, c), (r * n + c) as i64).unwrap();
            }
        }
        assert!(a.is_cyclically_k_diagonal(n).unwrap());
        assert!(!a.is_cyclically_k_diagonal(2).unwrap());
    }

    #[test]
    fn k_diagonal_requires_square() {
        let a = PFArray::new(2, 3).unwrap();
        assert!(matches!(
            a.is_cyclically_k_diagonal(1),
            Err(Error::NotSquare(2, 3))
        ));
    }

    #[test]
    fn rotate_cols_translates_diagonals() {
        let n = 5;
        let mut a = PFArray::square(n).unwrap();
        for pos in diagonal_cells(n, 3).unwrap() {
            a.insert(pos, 1).unwrap();
        }
        let rotated = a.rotate_cols(2);
        let diagonals = rotated.filled_diagonals().unwrap();
        assert_eq!(diagonals.into_iter().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn sk_diagonal_requires_divisible_size() {
        let a = PFArray::square(6).unwrap();
        assert!(matches!(
            a.sk_diagonal_rotation(4, 1),
            Err(Error::Divisibility { .. })
        ));
    }
}
