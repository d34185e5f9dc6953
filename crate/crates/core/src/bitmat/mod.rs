//! Sparse binary matrices, Boolean algebra on them, and contiguity predicates.
//!
//! A [`BinaryMatrix`] stores only its ones, indexed both by row and by column
//! so that a column slice restricted to a row set can be scanned in time
//! proportional to the ones it contains.

mod index_set;
mod io;

pub use index_set::IndexSet;
pub use io::{load_dense, load_sparse, to_dense_string, to_sparse_string};

use crate::error::{input_err, Error, Result};
use crate::factorizer::Factorization;

/// Immutable rectangular 0/1 matrix stored as its set of ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMatrix {
    n_rows: usize,
    n_cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    // for each column-major entry, the position of the same cell in row-major order
    col_to_row_entry: Vec<usize>,
}

impl BinaryMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self::from_sorted_cells(n_rows, n_cols, Vec::new())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_sorted_cells(n, n, (0..n).map(|i| (i, i)).collect())
    }

    pub fn ones(n_rows: usize, n_cols: usize) -> Self {
        let cells = (0..n_rows).flat_map(|i| (0..n_cols).map(move |j| (i, j))).collect();
        Self::from_sorted_cells(n_rows, n_cols, cells)
    }

    /// Builds a matrix from a list of cells; duplicates collapse.
    pub fn from_cells(
        n_rows: usize,
        n_cols: usize,
        cells: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut cells: Vec<(usize, usize)> = cells.into_iter().collect();
        if let Some(&(i, j)) = cells.iter().find(|&&(i, j)| i >= n_rows || j >= n_cols) {
            return input_err(format!("cell ({i}, {j}) outside {n_rows}x{n_cols} matrix"));
        }
        cells.sort_unstable();
        cells.dedup();
        Ok(Self::from_sorted_cells(n_rows, n_cols, cells))
    }

    /// Builds a matrix from a dense row-major boolean grid.
    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self> {
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        let cells = rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().enumerate().filter(|(_, &b)| b).map(move |(j, _)| (i, j)))
            .collect();
        Ok(Self::from_sorted_cells(rows.len(), n_cols, cells))
    }

    fn from_sorted_cells(n_rows: usize, n_cols: usize, cells: Vec<(usize, usize)>) -> Self {
        let nnz = cells.len();
        let mut row_ptr = vec![0usize; n_rows + 1];
        let mut col_count = vec![0usize; n_cols + 1];
        for &(i, j) in &cells {
            row_ptr[i + 1] += 1;
            col_count[j + 1] += 1;
        }
        for i in 0..n_rows {
            row_ptr[i + 1] += row_ptr[i];
        }
        for j in 0..n_cols {
            col_count[j + 1] += col_count[j];
        }
        let col_ptr = col_count.clone();
        let mut cursor = col_count;
        let mut row_idx = vec![0usize; nnz];
        let mut col_to_row_entry = vec![0usize; nnz];
        let col_idx: Vec<usize> = cells.iter().map(|&(_, j)| j).collect();
        for (entry, &(i, j)) in cells.iter().enumerate() {
            let slot = cursor[j];
            row_idx[slot] = i;
            col_to_row_entry[slot] = entry;
            cursor[j] += 1;
        }
        Self { n_rows, n_cols, row_ptr, col_idx, col_ptr, row_idx, col_to_row_entry }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n_rows, self.n_cols)
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.col_idx.len()
    }

    /// Column indices of the ones in row `i`, ascending.
    pub fn row(&self, i: usize) -> &[usize] {
        &self.col_idx[self.row_ptr[i]..self.row_ptr[i + 1]]
    }

    /// Row indices of the ones in column `j`, ascending.
    pub fn col(&self, j: usize) -> &[usize] {
        &self.row_idx[self.col_ptr[j]..self.col_ptr[j + 1]]
    }

    /// Row-major entry ids of row `i`; entry ids number the ones `0..nnz`.
    pub(crate) fn row_entries(&self, i: usize) -> std::ops::Range<usize> {
        self.row_ptr[i]..self.row_ptr[i + 1]
    }

    /// Row-major entry ids of the ones in column `j`, aligned with [`Self::col`].
    pub(crate) fn col_entries(&self, j: usize) -> &[usize] {
        &self.col_to_row_entry[self.col_ptr[j]..self.col_ptr[j + 1]]
    }

    /// Row-major entry id of cell `(i, j)` if it is a one.
    pub(crate) fn entry(&self, i: usize, j: usize) -> Option<usize> {
        self.row(i).binary_search(&j).ok().map(|k| self.row_ptr[i] + k)
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        i < self.n_rows && j < self.n_cols && self.row(i).binary_search(&j).is_ok()
    }

    /// All ones in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n_rows).flat_map(move |i| self.row(i).iter().map(move |&j| (i, j)))
    }

    pub fn transpose(&self) -> Self {
        let cells = (0..self.n_cols).flat_map(|j| self.col(j).iter().map(move |&i| (j, i))).collect();
        Self::from_sorted_cells(self.n_cols, self.n_rows, cells)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.n_rows).all(|i| self.row(i) == self.col(i))
    }

    /// Dense row-major boolean grid.
    pub fn to_rows(&self) -> Vec<Vec<bool>> {
        let mut out = vec![vec![false; self.n_cols]; self.n_rows];
        for (i, j) in self.cells() {
            out[i][j] = true;
        }
        out
    }

    /// New matrix of this shape holding the given (unsorted, possibly repeated) in-range cells.
    pub(crate) fn map_cells(&self, cells: Vec<(usize, usize)>) -> Self {
        let mut cells = cells;
        cells.sort_unstable();
        cells.dedup();
        Self::from_sorted_cells(self.n_rows, self.n_cols, cells)
    }
}

fn check_same_shape(a: &BinaryMatrix, b: &BinaryMatrix) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::Shape(format!(
            "{}x{} vs {}x{}",
            a.n_rows, a.n_cols, b.n_rows, b.n_cols
        )));
    }
    Ok(())
}

/// Boolean product `Xᵀ ∘ Y` of a `k×n` matrix `x` and a `k×m` matrix `y`.
pub fn boolean_product(x: &BinaryMatrix, y: &BinaryMatrix) -> Result<BinaryMatrix> {
    if x.n_rows != y.n_rows {
        return Err(Error::Shape(format!(
            "inner dimensions differ: {} vs {}",
            x.n_rows, y.n_rows
        )));
    }
    let mut cells = Vec::new();
    for l in 0..x.n_rows {
        for &i in x.row(l) {
            cells.extend(y.row(l).iter().map(|&j| (i, j)));
        }
    }
    Ok(BinaryMatrix::zeros(x.n_cols, y.n_cols).map_cells(cells))
}

/// Elementwise OR.
pub fn boolean_sum(a: &BinaryMatrix, b: &BinaryMatrix) -> Result<BinaryMatrix> {
    check_same_shape(a, b)?;
    Ok(a.map_cells(a.cells().chain(b.cells()).collect()))
}

/// Number of cells where `a` and `b` disagree.
pub fn hamming_error(a: &BinaryMatrix, b: &BinaryMatrix) -> Result<u64> {
    check_same_shape(a, b)?;
    let mut common = 0u64;
    for i in 0..a.n_rows {
        let (ra, rb) = (a.row(i), b.row(i));
        let (mut p, mut q) = (0, 0);
        while p < ra.len() && q < rb.len() {
            match ra[p].cmp(&rb[q]) {
                std::cmp::Ordering::Less => p += 1,
                std::cmp::Ordering::Greater => q += 1,
                std::cmp::Ordering::Equal => {
                    common += 1;
                    p += 1;
                    q += 1;
                }
            }
        }
    }
    Ok(a.nnz() as u64 + b.nnz() as u64 - 2 * common)
}

/// Disagreements between `reference` and `approx` divided by the ones in `reference`.
pub fn relative_error(reference: &BinaryMatrix, approx: &BinaryMatrix) -> Result<f64> {
    let err = hamming_error(reference, approx)?;
    if reference.nnz() == 0 {
        return Err(Error::UndefinedRatio);
    }
    Ok(err as f64 / reference.nnz() as f64)
}

/// Union of the factorization's tiles (and their transposes for symmetric variants).
pub fn reconstruct(f: &Factorization) -> BinaryMatrix {
    let (n, m) = (f.n_rows(), f.n_cols());
    let symmetric = f.variant.is_symmetric();
    let mut cells = Vec::new();
    for factor in &f.factors {
        for i in factor.rows.iter() {
            cells.extend(factor.cols.iter().map(|j| (i, j)));
        }
        if symmetric {
            for j in factor.cols.iter() {
                cells.extend(factor.rows.iter().map(|i| (j, i)));
            }
        }
    }
    BinaryMatrix::zeros(n, m).map_cells(cells)
}

fn positions(order: &[usize], universe: usize) -> Result<Vec<usize>> {
    if order.len() != universe {
        return input_err(format!("order has {} entries, universe is {universe}", order.len()));
    }
    let mut pos = vec![usize::MAX; universe];
    for (p, &u) in order.iter().enumerate() {
        if u >= universe || pos[u] != usize::MAX {
            return input_err("order is not a permutation");
        }
        pos[u] = p;
    }
    Ok(pos)
}

fn universe_of(sets: &[IndexSet], order: &[usize]) -> usize {
    sets.first().map_or(order.len(), IndexSet::universe)
}

/// True iff every set occupies consecutive positions under `order`.
pub fn is_unimodal_under(sets: &[IndexSet], order: &[usize]) -> Result<bool> {
    let pos = positions(order, universe_of(sets, order))?;
    Ok(sets.iter().all(|s| is_contiguous(s.as_slice(), &pos)))
}

/// True iff every set occupies consecutive positions modulo wrap-around under `order`.
pub fn is_cyclic_under(sets: &[IndexSet], order: &[usize]) -> Result<bool> {
    let pos = positions(order, universe_of(sets, order))?;
    Ok(sets.iter().all(|s| is_cyclically_contiguous(s.as_slice(), &pos)))
}

pub(crate) fn is_contiguous(members: &[usize], pos: &[usize]) -> bool {
    if members.is_empty() {
        return true;
    }
    let (lo, hi) = members
        .iter()
        .fold((usize::MAX, 0), |(lo, hi), &u| (lo.min(pos[u]), hi.max(pos[u])));
    hi - lo + 1 == members.len()
}

pub(crate) fn is_cyclically_contiguous(members: &[usize], pos: &[usize]) -> bool {
    let n = pos.len();
    if members.is_empty() || members.len() == n {
        return true;
    }
    let mut ps: Vec<usize> = members.iter().map(|&u| pos[u]).collect();
    ps.sort_unstable();
    let mut breaks = ps.windows(2).filter(|w| w[1] - w[0] > 1).count();
    if ps[0] + n - ps[ps.len() - 1] > 1 {
        breaks += 1;
    }
    breaks <= 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(text: &str) -> BinaryMatrix {
        load_dense(text).unwrap()
    }

    fn set(universe: usize, items: &[usize]) -> IndexSet {
        IndexSet::new(universe, items.iter().copied()).unwrap()
    }

    #[test]
    fn product_of_identities() {
        let id = BinaryMatrix::identity(2);
        assert_eq!(boolean_product(&id, &id).unwrap(), id);
    }

    #[test]
    fn product_single_tile() {
        let x = m("11");
        let y = m("10");
        let z = boolean_product(&x, &y).unwrap();
        assert_eq!(z, m("10\n10"));
    }

    #[test]
    fn product_dimension_mismatch() {
        let x = BinaryMatrix::zeros(2, 3);
        let y = BinaryMatrix::zeros(3, 3);
        assert!(matches!(boolean_product(&x, &y), Err(Error::Shape(_))));
    }

    #[test]
    fn sum_identities() {
        let a = m("101\n011");
        let zero = BinaryMatrix::zeros(2, 3);
        assert_eq!(boolean_sum(&a, &zero).unwrap(), a);
        assert_eq!(boolean_sum(&a, &a).unwrap(), a);
        let union = boolean_sum(&BinaryMatrix::identity(2), &m("01\n10")).unwrap();
        assert_eq!(union, BinaryMatrix::ones(2, 2));
        assert!(boolean_sum(&a, &BinaryMatrix::zeros(3, 2)).is_err());
    }

    #[test]
    fn hamming_examples() {
        let d = m("110\n011\n000");
        assert_eq!(hamming_error(&d, &d).unwrap(), 0);
        assert_eq!(hamming_error(&d, &BinaryMatrix::zeros(3, 3)).unwrap(), 4);
        assert_eq!(
            hamming_error(&BinaryMatrix::identity(3), &BinaryMatrix::ones(3, 3)).unwrap(),
            6
        );
        assert!(hamming_error(&d, &BinaryMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn relative_examples() {
        let d = m("110\n011");
        assert_eq!(relative_error(&d, &d).unwrap(), 0.0);
        assert_eq!(relative_error(&d, &BinaryMatrix::zeros(2, 3)).unwrap(), 1.0);
        assert_eq!(
            relative_error(&BinaryMatrix::zeros(2, 2), &BinaryMatrix::identity(2)),
            Err(Error::UndefinedRatio)
        );
    }

    #[test]
    fn transpose_and_symmetry() {
        let d = m("110\n001");
        assert_eq!(d.transpose(), m("10\n10\n01"));
        assert!(!d.is_symmetric());
        assert!(m("011\n100\n100").is_symmetric());
    }

    #[test]
    fn unimodal_examples() {
        let sets = [set(3, &[0, 1]), set(3, &[1, 2])];
        assert!(is_unimodal_under(&sets, &[0, 1, 2]).unwrap());
        let split = [set(3, &[0, 2])];
        assert!(!is_unimodal_under(&split, &[0, 1, 2]).unwrap());
        assert!(is_unimodal_under(&split, &[0, 2, 1]).unwrap());
        assert!(is_cyclic_under(&split, &[0, 1, 2]).unwrap());
        assert!(is_unimodal_under(&split, &[0, 0, 1]).is_err());
    }

    #[test]
    fn cyclic_needs_single_gap() {
        let sets = [set(6, &[0, 2, 4])];
        assert!(!is_cyclic_under(&sets, &[0, 1, 2, 3, 4, 5]).unwrap());
        let wrap = [set(6, &[5, 0, 1])];
        assert!(is_cyclic_under(&wrap, &[0, 1, 2, 3, 4, 5]).unwrap());
        assert!(!is_unimodal_under(&wrap, &[0, 1, 2, 3, 4, 5]).unwrap());
    }
}
