//! Exhaustive references for tests and `obmf check`. Exponential by design,
//! so every entry point refuses inputs above a small bound.

use std::collections::BTreeSet;

use crate::bitmat::{self, BinaryMatrix, IndexSet};
use crate::error::{Error, Result};
use crate::factorizer::{constrain, Side, StepState};

pub const ORDERS_BOUND: usize = 8;
pub const BEST_ROW_BOUND: usize = 10;
pub const RANK1_BOUND: usize = 16;

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    // lexicographic successor, plain and easy to trust
    let mut p: Vec<usize> = (0..n).collect();
    let mut out = vec![p.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else { return out };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
        p.swap(i - 1, j);
        p[i..].reverse();
        out.push(p.clone());
    }
}

/// Every permutation of `0..n` under which each set is contiguous
/// (cyclically contiguous when `cyclic`).
pub fn brute_orders(sets: &[IndexSet], n: usize, cyclic: bool) -> Result<BTreeSet<Vec<usize>>> {
    if n > ORDERS_BOUND {
        return Err(Error::Bound { size: n, bound: ORDERS_BOUND });
    }
    let mut out = BTreeSet::new();
    for perm in all_permutations(n) {
        let ok = if cyclic { bitmat::is_cyclic_under(sets, &perm)? } else { bitmat::is_unimodal_under(sets, &perm)? };
        if ok {
            out.insert(perm);
        }
    }
    Ok(out)
}

/// Gain of extending the tile `fixed` (on `side`) by each element of the
/// opposite side, counted cell by cell.
fn direct_weights(d: &BinaryMatrix, state: &StepState, fixed: &IndexSet, side: Side) -> Vec<i64> {
    let value = |i: usize, j: usize| -> i64 {
        match (state.cover().is_covered(d, i, j), d.get(i, j)) {
            (true, _) => 0,
            (false, true) => 1,
            (false, false) => -1,
        }
    };
    let symmetric = state.variant().is_symmetric();
    let other = match side {
        Side::Rows => d.n_cols(),
        Side::Cols => d.n_rows(),
    };
    (0..other)
        .map(|u| {
            fixed
                .iter()
                .map(|f| {
                    let direct = if side == Side::Rows { value(f, u) } else { value(u, f) };
                    if symmetric {
                        direct + if side == Side::Rows { value(u, f) } else { value(f, u) }
                    } else {
                        direct
                    }
                })
                .sum()
        })
        .collect()
}

/// Exhaustive best set on the side opposite `fixed` over all subsets the
/// state admits, plus the empty set. Ties keep the first subset found in
/// increasing bitmask order.
pub fn brute_best_row(d: &BinaryMatrix, state: &StepState, fixed: &IndexSet, side: Side) -> Result<(IndexSet, i64)> {
    let n = match side {
        Side::Rows => d.n_cols(),
        Side::Cols => d.n_rows(),
    };
    if n > BEST_ROW_BOUND {
        return Err(Error::Bound { size: n, bound: BEST_ROW_BOUND });
    }
    let w = direct_weights(d, state, fixed, side);
    let cyclic = state.variant().is_cyclic();
    let mut tree = state.tree(side.other_side()).clone();
    if state.variant().is_symmetric() {
        constrain(&mut tree, fixed, cyclic)?;
    }
    let mut best = (IndexSet::empty(n), 0i64);
    for mask in 1u32..(1 << n) {
        let members: Vec<usize> = (0..n).filter(|&u| mask >> u & 1 == 1).collect();
        let gain: i64 = members.iter().map(|&u| w[u]).sum();
        if gain <= best.1 {
            continue;
        }
        let set = IndexSet::new(n, members)?;
        let probe = if cyclic && set.contains(0) { set.complement() } else { set.clone() };
        if tree.admits(&probe)? {
            best = (set, gain);
        }
    }
    Ok(best)
}

/// Exhaustive best single tile: minimum Hamming error over all row × column
/// subsets (the empty tile included).
pub fn brute_rank1(d: &BinaryMatrix) -> Result<(IndexSet, IndexSet, u64)> {
    let (n, m) = d.shape();
    if n + m > RANK1_BOUND {
        return Err(Error::Bound { size: n + m, bound: RANK1_BOUND });
    }
    let nnz = d.nnz() as i64;
    let mut best = (0u32, 0u32, nnz);
    for rows in 1u32..(1 << n) {
        // per column: ones minus zeros inside the chosen rows
        let col_gain: Vec<i64> = (0..m)
            .map(|j| (0..n).filter(|&i| rows >> i & 1 == 1).map(|i| if d.get(i, j) { 1 } else { -1 }).sum())
            .collect();
        for cols in 1u32..(1 << m) {
            let gain: i64 = (0..m).filter(|&j| cols >> j & 1 == 1).map(|j| col_gain[j]).sum();
            if nnz - gain < best.2 {
                best = (rows, cols, nnz - gain);
            }
        }
    }
    let to_set = |mask: u32, len: usize| IndexSet::new(len, (0..len).filter(|&i| mask >> i & 1 == 1));
    Ok((to_set(best.0, n)?, to_set(best.1, m)?, best.2 as u64))
}
