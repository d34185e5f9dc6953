//! Ordered Boolean matrix factorization.
//!
//! A binary matrix is approximated as the Boolean sum of rank-1 tiles whose
//! row sets (and column sets) stay contiguous, or cyclically contiguous,
//! under one common order. The orders are maintained with PQ-trees and every
//! greedy step is solved exactly by a dynamic program over the tree.

pub mod bitmat;
pub mod check;
pub mod error;
pub mod factorizer;
pub mod optset;
pub mod oracle;
pub mod pqtree;
pub mod render;
pub mod synth;

pub use bitmat::{BinaryMatrix, IndexSet};
pub use error::{Error, Result};
pub use factorizer::{factorize, Factor, FactorizeOptions, Factorization, SeedMode, Variant};
pub use pqtree::PqTree;
