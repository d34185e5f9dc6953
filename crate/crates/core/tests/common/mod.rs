#![allow(dead_code)]

use std::collections::BTreeSet;

use obmf::bitmat::{BinaryMatrix, IndexSet};
use obmf::factorizer::{factorize, Factor, FactorizeOptions, Factorization, Variant};
use obmf::render::{render_circular, render_heatmap, render_linear, Layout, RenderSpec};
use obmf::synth::{flip_noise, gen_blocks, BlockSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn set(n: usize, items: &[usize]) -> IndexSet {
    IndexSet::new(n, items.iter().copied()).unwrap()
}

pub fn random_set(rng: &mut ChaCha8Rng, n: usize) -> IndexSet {
    let p = rng.random_range(0.2..0.8);
    IndexSet::new(n, (0..n).filter(|_| rng.random_bool(p))).unwrap()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize, m: usize, density: f64) -> BinaryMatrix {
    let cells: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..m).map(move |j| (i, j))).filter(|_| rng.random_bool(density)).collect();
    BinaryMatrix::from_cells(n, m, cells).unwrap()
}

pub fn random_symmetric(rng: &mut ChaCha8Rng, n: usize, density: f64) -> BinaryMatrix {
    let mut cells = Vec::new();
    for i in 0..n {
        for j in i..n {
            if rng.random_bool(density) {
                cells.push((i, j));
                cells.push((j, i));
            }
        }
    }
    BinaryMatrix::from_cells(n, n, cells).unwrap()
}

/// Best non-empty prefix/suffix weight and best (possibly empty) contiguous
/// weight over an explicit set of orders.
pub fn brute_border_inner(orders: &BTreeSet<Vec<usize>>, w: &[i64]) -> (i64, i64) {
    let mut border = i64::MIN;
    let mut inner = 0;
    for order in orders {
        let n = order.len();
        for len in 1..=n {
            let prefix: i64 = order[..len].iter().map(|&e| w[e]).sum();
            let suffix: i64 = order[n - len..].iter().map(|&e| w[e]).sum();
            border = border.max(prefix).max(suffix);
        }
        for a in 0..n {
            let mut run = 0;
            for &e in &order[a..] {
                run += w[e];
                inner = inner.max(run);
            }
        }
    }
    (border, inner)
}

fn manual(variant: Variant, n: usize, factors: &[(&[usize], &[usize])], order: Vec<usize>) -> Factorization {
    Factorization {
        variant,
        factors: factors.iter().map(|(r, c)| Factor { rows: set(n, r), cols: set(n, c) }).collect(),
        row_order: order.clone(),
        col_order: order,
        error: 0,
        relative_error: None,
        rank_requested: factors.len(),
    }
}

/// The three pinned render scenes: name, SVG text and the rank drawn.
pub fn scenes() -> Vec<(&'static str, String, usize)> {
    let blocks = gen_blocks(&BlockSpec::new(4, 5, 1).unwrap()).unwrap();
    let sym = factorize(&blocks, &FactorizeOptions::new(4, Variant::Sym)).unwrap();
    let mut spec = RenderSpec::new(Layout::Circular);
    spec.labels = Some((0..blocks.n_rows()).map(|i| format!("n{i}")).collect());
    let circular = render_circular(&sym, &spec).unwrap();

    // hand-pinned cyclic factorization with one factor across the seam
    let wrap = manual(
        Variant::CyclicSym,
        10,
        &[(&[8, 9, 0, 1], &[8, 9, 0, 1]), (&[2, 3, 4], &[4, 5, 6, 7]), (&[5], &[1, 2])],
        (0..10).collect(),
    );
    let linear = render_linear(&wrap, &RenderSpec::new(Layout::Linear)).unwrap();

    let noisy = flip_noise(&gen_blocks(&BlockSpec::new(3, 6, 2).unwrap()).unwrap(), 0.05, 4).unwrap();
    let plain = factorize(&noisy, &FactorizeOptions::new(3, Variant::Plain)).unwrap();
    let heatmap = render_heatmap(&noisy, &plain, &RenderSpec::new(Layout::Heatmap)).unwrap();

    vec![
        ("circular_blocks", circular, sym.rank_used()),
        ("linear_wrap", linear, wrap.rank_used()),
        ("heatmap_noisy", heatmap, plain.rank_used()),
    ]
}
