use std::str::FromStr;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bitmat::IndexSet;
use crate::error::{input_err, Error, Result};

/// How the seed column sets of each round are chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeedMode {
    All,
    /// Uniform sample of this fraction of the singleton columns.
    Sample(f64),
}

impl SeedMode {
    pub fn seeds(self, n_cols: usize, rng_seed: u64) -> Result<Vec<IndexSet>> {
        match self {
            SeedMode::All => Ok(seeds_all(n_cols)),
            SeedMode::Sample(fraction) => seeds_sample(n_cols, fraction, rng_seed),
        }
    }
}

impl FromStr for SeedMode {
    type Err = Error;

    /// `all` or `sample:<fraction>`.
    fn from_str(s: &str) -> Result<Self> {
        if s == "all" {
            return Ok(SeedMode::All);
        }
        let Some(rest) = s.strip_prefix("sample:") else {
            return input_err(format!("seed mode must be 'all' or 'sample:<fraction>', got {s:?}"));
        };
        let fraction: f64 = rest.parse().map_err(|_| Error::Input(format!("bad fraction {rest:?}")))?;
        check_fraction(fraction)?;
        Ok(SeedMode::Sample(fraction))
    }
}

fn check_fraction(fraction: f64) -> Result<()> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return input_err(format!("fraction must lie in (0, 1], got {fraction}"));
    }
    Ok(())
}

pub fn seeds_all(n_cols: usize) -> Vec<IndexSet> {
    (0..n_cols).map(|j| IndexSet::from_sorted_unchecked(n_cols, vec![j])).collect()
}

/// `floor(fraction * n_cols)` singleton seeds (at least one), sorted by column.
pub fn seeds_sample(n_cols: usize, fraction: f64, rng_seed: u64) -> Result<Vec<IndexSet>> {
    check_fraction(fraction)?;
    if n_cols == 0 {
        return input_err("no columns to sample seeds from");
    }
    // the epsilon keeps e.g. 0.3 * 10 from truncating to 2
    let count = ((fraction * n_cols as f64 + 1e-9).floor() as usize).clamp(1, n_cols);
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut picked = index::sample(&mut rng, n_cols, count).into_vec();
    picked.sort_unstable();
    Ok(picked.into_iter().map(|j| IndexSet::from_sorted_unchecked(n_cols, vec![j])).collect())
}
