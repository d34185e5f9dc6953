//! Oracle equivalence batches behind `obmf check`.
//!
//! Each batch draws small random instances from one seeded generator and
//! compares the fast engine against the exhaustive reference in
//! [`crate::oracle`]. Mismatches carry a dump that reproduces the instance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitmat::{self, BinaryMatrix, IndexSet};
use crate::error::{input_err, Result};
use crate::factorizer::{obmf_step, Factor, Side, StepState, Variant};
use crate::optset::{best_compatible_set, best_cyclic_set, WeightVector};
use crate::oracle::{brute_best_row, brute_orders};
use crate::pqtree::PqTree;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Batch {
    PqTree,
    OptSet,
    Step,
}

impl Batch {
    pub const ALL: [Batch; 3] = [Batch::PqTree, Batch::OptSet, Batch::Step];

    pub fn name(self) -> &'static str {
        match self {
            Batch::PqTree => "pqtree",
            Batch::OptSet => "optset",
            Batch::Step => "step",
        }
    }
}

/// Deliberate corruption of the engine's answer, to prove the harness notices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    DropOrder,
    GainOffByOne,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub batch: Batch,
    pub case: usize,
    pub dump: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CheckReport {
    pub cases: usize,
    pub mismatches: Vec<Mismatch>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn random_set(rng: &mut ChaCha8Rng, n: usize, p: f64) -> IndexSet {
    IndexSet::new(n, (0..n).filter(|_| rng.random_bool(p))).expect("in range")
}

fn sets_text(sets: &[IndexSet]) -> String {
    sets.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
}

/// Runs `cases` instances of every batch.
pub fn run_checks(cases: usize, rng_seed: u64, fault: Option<Fault>) -> Result<CheckReport> {
    if cases == 0 {
        return input_err("need at least one case");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut report = CheckReport::default();
    for batch in Batch::ALL {
        for case in 0..cases {
            let found = match batch {
                Batch::PqTree => pqtree_case(&mut rng, fault)?,
                Batch::OptSet => optset_case(&mut rng, fault)?,
                Batch::Step => step_case(&mut rng, fault)?,
            };
            report.cases += 1;
            if let Some(dump) = found {
                report.mismatches.push(Mismatch { batch, case, dump });
            }
        }
    }
    Ok(report)
}

fn pqtree_case(rng: &mut ChaCha8Rng, fault: Option<Fault>) -> Result<Option<String>> {
    let n = rng.random_range(3..=6);
    let count = rng.random_range(1..=5);
    let sets: Vec<IndexSet> = (0..count).map(|_| random_set(rng, n, 0.5)).collect();
    let mut tree = PqTree::universal(n)?;
    let mut feasible = true;
    for s in &sets {
        if tree.reduce(s).is_err() {
            feasible = false;
            break;
        }
    }
    let expected = brute_orders(&sets, n, false)?;
    let mut got = if feasible { tree.enumerate_orders()? } else { Default::default() };
    if fault == Some(Fault::DropOrder) {
        got.pop_first();
    }
    if got == expected {
        return Ok(None);
    }
    Ok(Some(format!(
        "n={n} sets=[{}] tree={tree} engine={} orders brute={} orders",
        sets_text(&sets),
        got.len(),
        expected.len()
    )))
}

fn random_tree(rng: &mut ChaCha8Rng, n: usize) -> Result<(PqTree, Vec<IndexSet>)> {
    let mut tree = PqTree::universal(n)?;
    let mut used = Vec::new();
    for _ in 0..rng.random_range(0..=4) {
        let s = random_set(rng, n, 0.5);
        if tree.admits(&s)? {
            tree.reduce(&s)?;
            used.push(s);
        }
    }
    Ok((tree, used))
}

fn optset_case(rng: &mut ChaCha8Rng, fault: Option<Fault>) -> Result<Option<String>> {
    let n = rng.random_range(1..=8);
    let (tree, used) = random_tree(rng, n)?;
    let w = WeightVector((0..n).map(|_| rng.random_range(-5..=5)).collect());
    let cyclic = rng.random_bool(0.3);
    let (set, mut gain) = if cyclic { best_cyclic_set(&tree, &w)? } else { best_compatible_set(&tree, &w)? };
    if fault == Some(Fault::GainOffByOne) {
        gain += 1;
    }
    let mut best = 0;
    for mask in 1u32..(1 << n) {
        let s = IndexSet::new(n, (0..n).filter(|&u| mask >> u & 1 == 1))?;
        let ok = tree.admits(&s)? || (cyclic && tree.admits(&s.complement())?);
        if ok {
            best = best.max(w.sum_over(&s));
        }
    }
    let attained = w.sum_over(&set) == gain;
    let set_ok = set.is_empty() || tree.admits(&set)? || (cyclic && tree.admits(&set.complement())?);
    if gain == best && attained && set_ok {
        return Ok(None);
    }
    Ok(Some(format!(
        "cyclic={cyclic} sets=[{}] tree={tree} weights={:?} engine={set}:{gain} brute={best}",
        sets_text(&used),
        w.0
    )))
}

/// Random state with up to three accepted tiles; used by the step batch and tests.
pub fn random_state(rng: &mut ChaCha8Rng, d: &BinaryMatrix, variant: Variant) -> Result<StepState> {
    let mut state = StepState::new(d, variant)?;
    for _ in 0..rng.random_range(0..=3) {
        let rows = random_set(rng, d.n_rows(), 0.4);
        let cols = random_set(rng, d.n_cols(), 0.4);
        if rows.is_empty() || cols.is_empty() {
            continue;
        }
        let mut trial = state.clone();
        if trial.accept(d, Factor { rows, cols }).is_ok() {
            state = trial;
        }
    }
    Ok(state)
}

fn step_case(rng: &mut ChaCha8Rng, fault: Option<Fault>) -> Result<Option<String>> {
    let variant = Variant::ALL[rng.random_range(0..4)];
    let n = rng.random_range(1..=8);
    let m = if variant.is_symmetric() { n } else { rng.random_range(1..=8) };
    let density = rng.random_range(0.2..0.8);
    let cells: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..m).map(move |j| (i, j))).filter(|_| rng.random_bool(density)).collect();
    let d = BinaryMatrix::from_cells(n, m, cells)?;
    let state = random_state(rng, &d, variant)?;
    let side = if rng.random_bool(0.5) { Side::Rows } else { Side::Cols };
    let len = if side == Side::Rows { n } else { m };
    let mut fixed = random_set(rng, len, 0.5);
    if fixed.is_empty() || !state.admits(side, &fixed)? {
        fixed = IndexSet::full(len);
    }
    let (set, mut gain) = obmf_step(&d, &state, &fixed, side)?;
    if fault == Some(Fault::GainOffByOne) {
        gain -= 1;
    }
    let (_, best) = brute_best_row(&d, &state, &fixed, side)?;
    if gain == best {
        return Ok(None);
    }
    let accepted: Vec<String> = state.accepted().iter().map(|f| format!("{}x{}", f.rows, f.cols)).collect();
    Ok(Some(format!(
        "variant={variant} side={side:?} fixed={fixed} accepted=[{}] engine={set}:{gain} brute={best}\n{}",
        accepted.join(" "),
        bitmat::to_dense_string(&d)
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_run_passes() {
        let report = run_checks(40, 1, None).unwrap();
        assert_eq!(report.cases, 120);
        assert!(report.passed(), "{:?}", report.mismatches);
    }

    #[test]
    fn faults_are_caught() {
        let report = run_checks(10, 1, Some(Fault::GainOffByOne)).unwrap();
        assert!(report.mismatches.iter().any(|m| m.batch == Batch::Step));
        let report = run_checks(10, 1, Some(Fault::DropOrder)).unwrap();
        assert!(report.mismatches.iter().any(|m| m.batch == Batch::PqTree));
        assert!(run_checks(0, 1, None).is_err());
    }
}
