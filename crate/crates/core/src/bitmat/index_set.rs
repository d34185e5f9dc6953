use std::fmt;

use crate::error::{input_err, Result};

/// A sorted, duplicate-free set of indices drawn from `0..universe`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet {
    universe: usize,
    members: Vec<usize>,
}

impl IndexSet {
    pub fn empty(universe: usize) -> Self {
        Self { universe, members: Vec::new() }
    }

    pub fn full(universe: usize) -> Self {
        Self { universe, members: (0..universe).collect() }
    }

    pub fn singleton(universe: usize, element: usize) -> Result<Self> {
        Self::new(universe, [element])
    }

    /// Builds a set from arbitrary indices; duplicates collapse.
    pub fn new(universe: usize, items: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = items.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if let Some(&last) = members.last() {
            if last >= universe {
                return input_err(format!("index {last} outside universe of size {universe}"));
            }
        }
        Ok(Self { universe, members })
    }

    /// Builds a set from members already known to be sorted, unique and in range.
    pub(crate) fn from_sorted_unchecked(universe: usize, members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(members.last().is_none_or(|&m| m < universe));
        Self { universe, members }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, element: usize) -> bool {
        self.members.binary_search(&element).is_ok()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn complement(&self) -> Self {
        let mut out = Vec::with_capacity(self.universe - self.members.len());
        let mut it = self.members.iter().peekable();
        for u in 0..self.universe {
            if it.peek() == Some(&&u) {
                it.next();
            } else {
                out.push(u);
            }
        }
        Self { universe: self.universe, members: out }
    }

    /// Membership as a dense boolean mask.
    pub fn mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.universe];
        for &m in &self.members {
            mask[m] = true;
        }
        mask
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, m) in self.members.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}
