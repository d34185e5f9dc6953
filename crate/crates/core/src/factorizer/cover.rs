use std::collections::HashSet;

use crate::bitmat::BinaryMatrix;

/// Cells already explained by accepted factors.
///
/// Covered ones are flagged per stored one of the data matrix; covered zeros
/// are kept in per-row and per-column lists so weight computation never has
/// to scan uncovered zeros.
#[derive(Debug, Clone)]
pub struct Cover {
    one: Vec<bool>,
    zero_by_row: Vec<Vec<usize>>,
    zero_by_col: Vec<Vec<usize>>,
    zeros: HashSet<(usize, usize)>,
}

impl Cover {
    pub fn new(d: &BinaryMatrix) -> Self {
        Self {
            one: vec![false; d.nnz()],
            zero_by_row: vec![Vec::new(); d.n_rows()],
            zero_by_col: vec![Vec::new(); d.n_cols()],
            zeros: HashSet::new(),
        }
    }

    pub fn is_covered(&self, d: &BinaryMatrix, i: usize, j: usize) -> bool {
        match d.entry(i, j) {
            Some(e) => self.one[e],
            None => self.zeros.contains(&(i, j)),
        }
    }

    /// Marks a cell; returns the change in disagreements (-1 for a newly
    /// covered one, +1 for a newly covered zero, 0 if already covered).
    pub(crate) fn mark(&mut self, d: &BinaryMatrix, i: usize, j: usize) -> i64 {
        match d.entry(i, j) {
            Some(e) if !self.one[e] => {
                self.one[e] = true;
                -1
            }
            Some(_) => 0,
            None => {
                if self.zeros.insert((i, j)) {
                    self.zero_by_row[i].push(j);
                    self.zero_by_col[j].push(i);
                    1
                } else {
                    0
                }
            }
        }
    }

    pub(crate) fn one_covered(&self, entry: usize) -> bool {
        self.one[entry]
    }

    pub(crate) fn zeros_in_row(&self, i: usize) -> &[usize] {
        &self.zero_by_row[i]
    }

    pub(crate) fn zeros_in_col(&self, j: usize) -> &[usize] {
        &self.zero_by_col[j]
    }

    pub fn covered_ones(&self) -> usize {
        self.one.iter().filter(|&&c| c).count()
    }

    pub fn covered_zeros(&self) -> usize {
        self.zeros.len()
    }
}
