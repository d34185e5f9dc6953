//! Greedy alternating factorization with PQ-tree constrained factors.
//!
//! Each round evaluates every seed column set independently: starting from
//! the seed, the best row set for the fixed columns and the best column set
//! for the fixed rows are found in turn until the tile gain stops improving.
//! The best tile over all seeds is accepted, its cells are marked covered and
//! the PQ-trees are reduced so later factors stay orderable together with it.
//!
//! Cyclic variants keep trees over the anchor-complemented family: a set
//! containing element 0 is stored through its complement. Every order of such
//! a tree, read circularly, keeps all accepted sets cyclically contiguous.
//!
//! Symmetric variants keep a single tree over the nodes of a square matrix
//! and reconstruct with each tile and its transpose.

mod cover;
mod report;
mod seeds;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

pub use cover::Cover;
pub use report::{parse_report, to_report};
pub use seeds::{seeds_all, seeds_sample, SeedMode};

use crate::bitmat::{self, BinaryMatrix, IndexSet};
use crate::error::{input_err, Error, Result};
use crate::optset::{best_compatible_set, best_cyclic_set, WeightVector};
use crate::pqtree::PqTree;

/// Default cap on alternation sweeps per seed.
pub const MAX_ITERATIONS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Plain,
    Cyclic,
    Sym,
    CyclicSym,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::Plain, Variant::Cyclic, Variant::Sym, Variant::CyclicSym];

    pub fn is_cyclic(self) -> bool {
        matches!(self, Variant::Cyclic | Variant::CyclicSym)
    }

    pub fn is_symmetric(self) -> bool {
        matches!(self, Variant::Sym | Variant::CyclicSym)
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Plain => "plain",
            Variant::Cyclic => "cyclic",
            Variant::Sym => "sym",
            Variant::CyclicSym => "cyclic-sym",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown variant {s:?}")))
    }
}

/// One rank-1 tile: `rows × cols` (plus `cols × rows` for symmetric variants).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub rows: IndexSet,
    pub cols: IndexSet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    pub variant: Variant,
    pub factors: Vec<Factor>,
    /// Row order; the shared node order for symmetric variants.
    pub row_order: Vec<usize>,
    /// Column order; equal to `row_order` for symmetric variants.
    pub col_order: Vec<usize>,
    pub error: u64,
    pub relative_error: Option<f64>,
    pub rank_requested: usize,
}

impl Factorization {
    pub fn rank_used(&self) -> usize {
        self.factors.len()
    }

    pub fn n_rows(&self) -> usize {
        self.row_order.len()
    }

    pub fn n_cols(&self) -> usize {
        self.col_order.len()
    }

    pub fn row_sets(&self) -> Vec<IndexSet> {
        self.factors.iter().map(|f| f.rows.clone()).collect()
    }

    pub fn col_sets(&self) -> Vec<IndexSet> {
        self.factors.iter().map(|f| f.cols.clone()).collect()
    }

    /// Checks that every factor is contiguous (or cyclically contiguous) under the stored orders.
    pub fn is_valid(&self) -> Result<bool> {
        let check = |sets: &[IndexSet], order: &[usize]| {
            if self.variant.is_cyclic() {
                bitmat::is_cyclic_under(sets, order)
            } else {
                bitmat::is_unimodal_under(sets, order)
            }
        };
        if self.variant.is_symmetric() {
            if self.row_order != self.col_order {
                return Ok(false);
            }
            let mut stacked = self.row_sets();
            stacked.extend(self.col_sets());
            check(&stacked, &self.row_order)
        } else {
            Ok(check(&self.row_sets(), &self.row_order)? && check(&self.col_sets(), &self.col_order)?)
        }
    }
}

/// Which side of the matrix a fixed index set lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Rows,
    Cols,
}

impl Side {
    pub fn other_side(self) -> Side {
        match self {
            Side::Rows => Side::Cols,
            Side::Cols => Side::Rows,
        }
    }
}

/// Working state between rounds: trees, cover and accepted factors.
#[derive(Debug, Clone)]
pub struct StepState {
    variant: Variant,
    row_tree: PqTree,
    // unused for symmetric variants, where `row_tree` is the node tree
    col_tree: PqTree,
    cover: Cover,
    accepted: Vec<Factor>,
    current_error: u64,
}

impl StepState {
    pub fn new(d: &BinaryMatrix, variant: Variant) -> Result<Self> {
        if d.n_rows() == 0 || d.n_cols() == 0 {
            return input_err("matrix must have at least one row and one column");
        }
        if variant.is_symmetric() && !d.is_square() {
            return Err(Error::Shape(format!(
                "{variant} needs a square matrix, got {}x{}",
                d.n_rows(),
                d.n_cols()
            )));
        }
        Ok(Self {
            variant,
            row_tree: PqTree::universal(d.n_rows())?,
            col_tree: PqTree::universal(d.n_cols())?,
            cover: Cover::new(d),
            accepted: Vec::new(),
            current_error: d.nnz() as u64,
        })
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn cover(&self) -> &Cover {
        &self.cover
    }

    pub fn accepted(&self) -> &[Factor] {
        &self.accepted
    }

    pub fn current_error(&self) -> u64 {
        self.current_error
    }

    /// Tree constraining sets on `side`; the node tree for symmetric variants.
    pub fn tree(&self, side: Side) -> &PqTree {
        match (self.variant.is_symmetric(), side) {
            (true, _) | (false, Side::Rows) => &self.row_tree,
            (false, Side::Cols) => &self.col_tree,
        }
    }

    /// Whether `set` can still be added on `side` under the variant's contiguity rule.
    pub fn admits(&self, side: Side, set: &IndexSet) -> Result<bool> {
        let tree = self.tree(side);
        if self.variant.is_cyclic() && set.contains(0) {
            tree.admits(&set.complement())
        } else {
            tree.admits(set)
        }
    }

    /// Accepts a tile: constrains the tree(s), marks its cells covered and updates the error.
    pub fn accept(&mut self, d: &BinaryMatrix, factor: Factor) -> Result<i64> {
        let cyclic = self.variant.is_cyclic();
        if self.variant.is_symmetric() {
            let mut tree = self.row_tree.clone();
            constrain(&mut tree, &factor.rows, cyclic)?;
            constrain(&mut tree, &factor.cols, cyclic)?;
            self.row_tree = tree;
        } else {
            let mut rows = self.row_tree.clone();
            let mut cols = self.col_tree.clone();
            constrain(&mut rows, &factor.rows, cyclic)?;
            constrain(&mut cols, &factor.cols, cyclic)?;
            self.row_tree = rows;
            self.col_tree = cols;
        }
        let mut delta = 0i64;
        for i in factor.rows.iter() {
            for j in factor.cols.iter() {
                delta += self.cover.mark(d, i, j);
                if self.variant.is_symmetric() {
                    delta += self.cover.mark(d, j, i);
                }
            }
        }
        self.current_error = (self.current_error as i64 + delta) as u64;
        self.accepted.push(factor);
        Ok(-delta)
    }
}

/// Reduces `tree` by `set`, through its complement when cyclic and the set holds the anchor 0.
pub(crate) fn constrain(tree: &mut PqTree, set: &IndexSet, cyclic: bool) -> Result<()> {
    if cyclic && set.contains(0) {
        tree.reduce(&set.complement())
    } else {
        tree.reduce(set)
    }
}

/// Per-element gain `p - n` on the side opposite `fixed`, over uncovered cells.
///
/// `p` counts uncovered ones and `n` uncovered zeros between `fixed` and the
/// element. Work is proportional to the ones and covered zeros in the slice.
pub fn step_weights(d: &BinaryMatrix, state: &StepState, fixed: &IndexSet, side: Side) -> Result<WeightVector> {
    if fixed.is_empty() {
        return input_err("fixed set must be non-empty");
    }
    let expected = match side {
        Side::Rows => d.n_rows(),
        Side::Cols => d.n_cols(),
    };
    if fixed.universe() != expected {
        return Err(Error::Shape(format!(
            "fixed set over {} elements, matrix side has {expected}",
            fixed.universe()
        )));
    }
    Ok(WeightVector(raw_weights(d, &state.cover, fixed, side)))
}

fn raw_weights(d: &BinaryMatrix, cover: &Cover, fixed: &IndexSet, side: Side) -> Vec<i64> {
    let base = -(fixed.len() as i64);
    match side {
        Side::Rows => {
            let mut w = vec![base; d.n_cols()];
            for i in fixed.iter() {
                for (e, &j) in d.row_entries(i).zip(d.row(i)) {
                    w[j] += if cover.one_covered(e) { 1 } else { 2 };
                }
                for &j in cover.zeros_in_row(i) {
                    w[j] += 1;
                }
            }
            w
        }
        Side::Cols => {
            let mut w = vec![base; d.n_rows()];
            for j in fixed.iter() {
                for (&e, &i) in d.col_entries(j).iter().zip(d.col(j)) {
                    w[i] += if cover.one_covered(e) { 1 } else { 2 };
                }
                for &i in cover.zeros_in_col(j) {
                    w[i] += 1;
                }
            }
            w
        }
    }
}

/// Node weights for symmetric variants: each node collects from both the
/// tile and its transpose, so diagonal cells count twice.
pub fn symmetric_step_weights(d: &BinaryMatrix, state: &StepState, fixed: &IndexSet) -> Result<WeightVector> {
    if !d.is_square() {
        return Err(Error::Shape("symmetric weights need a square matrix".into()));
    }
    let mut w = step_weights(d, state, fixed, Side::Rows)?;
    let by_rows = raw_weights(d, &state.cover, fixed, Side::Cols);
    for (a, b) in w.0.iter_mut().zip(by_rows) {
        *a += b;
    }
    Ok(w)
}

/// Best admissible set on the side opposite `fixed`, with its weight.
///
/// For symmetric variants the node tree is first constrained by `fixed`, so
/// the returned set can be accepted together with it; the weight is then
/// the two-term surrogate gain.
pub fn obmf_step(d: &BinaryMatrix, state: &StepState, fixed: &IndexSet, side: Side) -> Result<(IndexSet, i64)> {
    let cyclic = state.variant.is_cyclic();
    let solve = |tree: &PqTree, w: &WeightVector| {
        if cyclic {
            best_cyclic_set(tree, w)
        } else {
            best_compatible_set(tree, w)
        }
    };
    if state.variant.is_symmetric() {
        let w = symmetric_step_weights(d, state, fixed)?;
        let mut tree = state.row_tree.clone();
        constrain(&mut tree, fixed, cyclic)?;
        solve(&tree, &w)
    } else {
        let w = step_weights(d, state, fixed, side)?;
        solve(state.tree(side.other_side()), &w)
    }
}

/// True change in disagreements from adding `rows × cols` (and its transpose when symmetric).
pub fn tile_gain(d: &BinaryMatrix, state: &StepState, rows: &IndexSet, cols: &IndexSet) -> i64 {
    let value = |i: usize, j: usize| -> i64 {
        if state.cover.is_covered(d, i, j) {
            0
        } else if d.get(i, j) {
            1
        } else {
            -1
        }
    };
    let mut gain = 0;
    for i in rows.iter() {
        for j in cols.iter() {
            gain += value(i, j);
        }
    }
    if state.variant.is_symmetric() {
        for j in cols.iter() {
            for i in rows.iter() {
                // skip cells already counted by the direct tile
                if !(rows.contains(j) && cols.contains(i)) {
                    gain += value(j, i);
                }
            }
        }
    }
    gain
}

/// Result of alternating from one seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alternation {
    pub rows: IndexSet,
    pub cols: IndexSet,
    /// Decrease in disagreements if the tile were accepted.
    pub gain: i64,
    /// Step objective after each half-step; equals the tile gain for
    /// non-symmetric variants.
    pub trace: Vec<i64>,
}

/// Alternates row and column steps from `seed` (a column set; a node set for
/// symmetric variants) until the step objective stops strictly increasing.
pub fn alternate(d: &BinaryMatrix, state: &StepState, seed: &IndexSet) -> Result<Alternation> {
    alternate_capped(d, state, seed, MAX_ITERATIONS)
}

pub fn alternate_capped(
    d: &BinaryMatrix,
    state: &StepState,
    seed: &IndexSet,
    max_iterations: usize,
) -> Result<Alternation> {
    let mut cols = seed.clone();
    let mut rows = IndexSet::empty(d.n_rows());
    let mut best: Option<(IndexSet, IndexSet)> = None;
    let mut trace = Vec::new();
    let mut last = i64::MIN;
    'sweeps: for _ in 0..max_iterations {
        for side in [Side::Cols, Side::Rows] {
            let fixed = if side == Side::Cols { &cols } else { &rows };
            let (found, value) = obmf_step(d, state, fixed, side)?;
            if found.is_empty() || value <= last {
                break 'sweeps;
            }
            trace.push(value);
            last = value;
            if side == Side::Cols {
                rows = found;
            } else {
                cols = found;
            }
            best = Some((rows.clone(), cols.clone()));
        }
    }
    Ok(match best {
        Some((rows, cols)) => {
            let gain = tile_gain(d, state, &rows, &cols);
            Alternation { rows, cols, gain, trace }
        }
        None => Alternation {
            rows: IndexSet::empty(d.n_rows()),
            cols: IndexSet::empty(d.n_cols()),
            gain: 0,
            trace,
        },
    })
}

#[derive(Debug, Clone)]
pub struct FactorizeOptions {
    pub k: usize,
    pub variant: Variant,
    pub seeds: SeedMode,
    pub rng_seed: u64,
    pub threads: usize,
    pub max_iterations: usize,
}

impl FactorizeOptions {
    pub fn new(k: usize, variant: Variant) -> Self {
        Self { k, variant, seeds: SeedMode::All, rng_seed: 0, threads: 1, max_iterations: MAX_ITERATIONS }
    }
}

/// Outcome of one greedy round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Round {
    pub seed_index: usize,
    pub alternation: Alternation,
    pub error_after: u64,
}

/// Round-by-round driver behind [`factorize`].
pub struct Factorizer<'a> {
    d: &'a BinaryMatrix,
    k: usize,
    seeds: Vec<IndexSet>,
    max_iterations: usize,
    pool: Option<rayon::ThreadPool>,
    state: StepState,
    finished: bool,
}

impl<'a> Factorizer<'a> {
    pub fn new(d: &'a BinaryMatrix, opts: &FactorizeOptions) -> Result<Self> {
        if opts.k == 0 {
            return input_err("rank k must be at least 1");
        }
        if opts.threads == 0 {
            return input_err("thread count must be at least 1");
        }
        let state = StepState::new(d, opts.variant)?;
        let seeds = opts.seeds.seeds(d.n_cols(), opts.rng_seed)?;
        if seeds.iter().any(|s| s.universe() != d.n_cols()) {
            return Err(Error::Shape("seed sets must range over columns".into()));
        }
        let pool = if opts.threads > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(opts.threads)
                .build()
                .map_err(|e| Error::Input(format!("thread pool: {e}")))?;
            Some(pool)
        } else {
            None
        };
        Ok(Self { d, k: opts.k, seeds, max_iterations: opts.max_iterations, pool, state, finished: false })
    }

    pub fn state(&self) -> &StepState {
        &self.state
    }

    pub fn seeds(&self) -> &[IndexSet] {
        &self.seeds
    }

    /// Runs one round; `None` once `k` factors are accepted or no seed gains.
    pub fn round(&mut self) -> Result<Option<Round>> {
        if self.finished || self.state.accepted.len() >= self.k {
            return Ok(None);
        }
        let (d, state, cap) = (self.d, &self.state, self.max_iterations);
        let evaluate = |(idx, seed): (usize, &IndexSet)| -> Result<Option<(usize, Alternation)>> {
            if !state.admits(Side::Cols, seed)? {
                return Ok(None);
            }
            alternate_capped(d, state, seed, cap).map(|a| Some((idx, a)))
        };
        let results: Vec<Result<Option<(usize, Alternation)>>> = match &self.pool {
            Some(pool) => pool.install(|| self.seeds.par_iter().enumerate().map(evaluate).collect()),
            None => self.seeds.iter().enumerate().map(evaluate).collect(),
        };
        let mut best: Option<(usize, Alternation)> = None;
        for r in results {
            if let Some((idx, alt)) = r? {
                // results are in seed order, so strict comparison keeps the smallest index
                if best.as_ref().is_none_or(|(_, b)| alt.gain > b.gain) {
                    best = Some((idx, alt));
                }
            }
        }
        let Some((seed_index, alternation)) = best.filter(|(_, a)| a.gain > 0) else {
            self.finished = true;
            return Ok(None);
        };
        let factor = Factor { rows: alternation.rows.clone(), cols: alternation.cols.clone() };
        self.state.accept(self.d, factor)?;
        Ok(Some(Round { seed_index, alternation, error_after: self.state.current_error }))
    }

    pub fn finish(self) -> Result<Factorization> {
        let variant = self.state.variant;
        let row_order = self.state.row_tree.frontier();
        let col_order =
            if variant.is_symmetric() { row_order.clone() } else { self.state.col_tree.frontier() };
        let mut f = Factorization {
            variant,
            factors: self.state.accepted,
            row_order,
            col_order,
            error: 0,
            relative_error: None,
            rank_requested: self.k,
        };
        let z = bitmat::reconstruct(&f);
        f.error = bitmat::hamming_error(self.d, &z)?;
        debug_assert_eq!(f.error, self.state.current_error);
        f.relative_error = bitmat::relative_error(self.d, &z).ok();
        Ok(f)
    }
}

/// Runs up to `k` greedy rounds and returns the accepted factors with their orders.
pub fn factorize(d: &BinaryMatrix, opts: &FactorizeOptions) -> Result<Factorization> {
    let mut fz = Factorizer::new(d, opts)?;
    while fz.round()?.is_some() {}
    fz.finish()
}

/// Distinct cells of a symmetric tile, used by tests and diagnostics.
pub fn symmetric_tile_cells(rows: &IndexSet, cols: &IndexSet) -> HashSet<(usize, usize)> {
    let mut cells = HashSet::new();
    for i in rows.iter() {
        for j in cols.iter() {
            cells.insert((i, j));
            cells.insert((j, i));
        }
    }
    cells
}
