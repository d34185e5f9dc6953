//! Synthetic inputs: overlapping diagonal blocks, exact-count noise and
//! uniform random matrices. All randomness comes from a seeded ChaCha8.

use std::collections::BTreeSet;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitmat::BinaryMatrix;
use crate::error::{input_err, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockSpec {
    pub n_blocks: usize,
    pub block_size: usize,
    /// Indices shared by consecutive blocks.
    pub overlap: usize,
}

impl BlockSpec {
    pub fn new(n_blocks: usize, block_size: usize, overlap: usize) -> Result<Self> {
        if n_blocks == 0 || block_size == 0 {
            return input_err("need at least one block of positive size");
        }
        if overlap >= block_size {
            return input_err(format!("overlap {overlap} must be smaller than block size {block_size}"));
        }
        Ok(Self { n_blocks, block_size, overlap })
    }

    pub fn side(&self) -> usize {
        self.n_blocks * self.block_size - (self.n_blocks - 1) * self.overlap
    }

    /// Index range of block `b`.
    pub fn block(&self, b: usize) -> std::ops::Range<usize> {
        let start = b * (self.block_size - self.overlap);
        start..start + self.block_size
    }
}

pub fn gen_blocks(spec: &BlockSpec) -> Result<BinaryMatrix> {
    let spec = BlockSpec::new(spec.n_blocks, spec.block_size, spec.overlap)?;
    let n = spec.side();
    let mut cells = Vec::new();
    for b in 0..spec.n_blocks {
        for i in spec.block(b) {
            cells.extend(spec.block(b).map(|j| (i, j)));
        }
    }
    BinaryMatrix::from_cells(n, n, cells)
}

/// Cells (row-major, sorted) that [`flip_noise`] flips.
pub fn noise_cells(n_rows: usize, n_cols: usize, rate: f64, rng_seed: u64) -> Result<Vec<(usize, usize)>> {
    if !(0.0..=0.5).contains(&rate) {
        return input_err(format!("noise rate must lie in [0, 0.5], got {rate}"));
    }
    let total = n_rows * n_cols;
    let count = (rate * total as f64).round() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut picked = index::sample(&mut rng, total, count).into_vec();
    picked.sort_unstable();
    Ok(picked.into_iter().map(|c| (c / n_cols, c % n_cols)).collect())
}

/// Toggles every listed cell.
pub fn flip_cells(m: &BinaryMatrix, cells: &[(usize, usize)]) -> Result<BinaryMatrix> {
    let mut state: BTreeSet<(usize, usize)> = m.cells().collect();
    for &(i, j) in cells {
        if i >= m.n_rows() || j >= m.n_cols() {
            return input_err(format!("cell ({i}, {j}) outside {}x{}", m.n_rows(), m.n_cols()));
        }
        if !state.remove(&(i, j)) {
            state.insert((i, j));
        }
    }
    BinaryMatrix::from_cells(m.n_rows(), m.n_cols(), state)
}

/// Flips exactly `round(rate * n * m)` distinct cells chosen uniformly.
pub fn flip_noise(m: &BinaryMatrix, rate: f64, rng_seed: u64) -> Result<BinaryMatrix> {
    let cells = noise_cells(m.n_rows(), m.n_cols(), rate, rng_seed)?;
    flip_cells(m, &cells)
}

/// `n × n` matrix with independent cells set with probability `density`.
pub fn gen_random(n: usize, density: f64, rng_seed: u64) -> Result<BinaryMatrix> {
    if !(density > 0.0 && density < 1.0) {
        return input_err(format!("density must lie in (0, 1), got {density}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut cells = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if rng.random_bool(density) {
                cells.push((i, j));
            }
        }
    }
    BinaryMatrix::from_cells(n, n, cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitmat::hamming_error;

    #[test]
    fn default_blocks_side() {
        let spec = BlockSpec::new(6, 20, 5).unwrap();
        assert_eq!(spec.side(), 95);
        let d = gen_blocks(&spec).unwrap();
        assert_eq!(d.shape(), (95, 95));
        assert!(d.is_symmetric());
    }

    #[test]
    fn small_blocks() {
        let d = gen_blocks(&BlockSpec::new(1, 4, 0).unwrap()).unwrap();
        assert_eq!(d, BinaryMatrix::ones(4, 4));
        let d = gen_blocks(&BlockSpec::new(2, 2, 1).unwrap()).unwrap();
        assert_eq!(d.nnz(), 7);
        assert!(!d.get(0, 2) && !d.get(2, 0));
        assert!(BlockSpec::new(2, 3, 3).is_err());
    }

    #[test]
    fn exact_noise_counts() {
        let m = BinaryMatrix::zeros(10, 10);
        assert_eq!(flip_noise(&m, 0.0, 1).unwrap(), m);
        assert_eq!(flip_noise(&m, 0.5, 1).unwrap().nnz(), 50);
        let d = gen_blocks(&BlockSpec::new(6, 20, 5).unwrap()).unwrap();
        let noisy = flip_noise(&d, 0.1, 3).unwrap();
        assert_eq!(hamming_error(&d, &noisy).unwrap(), 903);
        assert!(flip_noise(&m, 0.6, 1).is_err());
    }

    #[test]
    fn flipping_twice_restores() {
        let d = gen_blocks(&BlockSpec::new(3, 4, 1).unwrap()).unwrap();
        let cells = noise_cells(d.n_rows(), d.n_cols(), 0.3, 11).unwrap();
        let noisy = flip_cells(&d, &cells).unwrap();
        assert_ne!(noisy, d);
        assert_eq!(flip_cells(&noisy, &cells).unwrap(), d);
    }

    #[test]
    fn random_density() {
        let d = gen_random(200, 0.24, 5).unwrap();
        let p: f64 = 0.24;
        let n2 = 40_000.0;
        let sigma = (n2 * p * (1.0 - p)).sqrt();
        assert!((d.nnz() as f64 - n2 * p).abs() < 3.0 * sigma);
        assert_eq!(gen_random(30, 0.5, 9).unwrap(), gen_random(30, 0.5, 9).unwrap());
        assert!(gen_random(3, 1.0, 0).is_err());
        assert_eq!(gen_random(1, 0.999_999, 2).unwrap().nnz(), 1);
    }
}
