//! PQ-trees over a universe `0..n`.
//!
//! A tree encodes the set of permutations of its universe obtained by freely
//! permuting the children of P-nodes and reversing the children of Q-nodes.
//! [`PqTree::reduce`] restricts that set to the permutations in which a given
//! subset is contiguous, using the Booth–Lueker templates.
//!
//! Trees are kept canonical after every reduction: P-nodes have at least two
//! children, Q-nodes at least three, P-node children are sorted by their
//! smallest leaf and every Q-node is oriented so that its first child holds a
//! smaller leaf than its last child. The frontier is therefore a deterministic
//! function of the order set.

mod format;
mod reduce;

use std::collections::BTreeSet;

use crate::bitmat::IndexSet;
use crate::error::{input_err, Error, Result};

pub(crate) type NodeId = usize;

/// Default universe bound for [`PqTree::enumerate_orders`].
pub const ENUMERATION_BOUND: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Leaf(usize),
    P,
    Q,
}

#[derive(Debug, Clone)]
pub(crate) struct Node {
    pub(crate) kind: NodeKind,
    pub(crate) children: Vec<NodeId>,
}

#[derive(Debug, Clone)]
pub struct PqTree {
    universe: usize,
    nodes: Vec<Node>,
    root: NodeId,
}

impl PqTree {
    /// The tree admitting every permutation of `0..n`.
    pub fn universal(n: usize) -> Result<Self> {
        if n == 0 {
            return input_err("universe must be non-empty");
        }
        let mut nodes: Vec<Node> =
            (0..n).map(|e| Node { kind: NodeKind::Leaf(e), children: Vec::new() }).collect();
        let root = if n == 1 {
            0
        } else {
            nodes.push(Node { kind: NodeKind::P, children: (0..n).collect() });
            n
        };
        Ok(Self { universe: n, nodes, root })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub(crate) fn root(&self) -> NodeId {
        self.root
    }

    pub(crate) fn kind(&self, v: NodeId) -> NodeKind {
        self.nodes[v].kind
    }

    pub(crate) fn children(&self, v: NodeId) -> &[NodeId] {
        &self.nodes[v].children
    }

    /// Number of nodes reachable from the root.
    pub fn node_count(&self) -> usize {
        self.post_order().len()
    }

    /// Reachable nodes, children before parents, left to right.
    pub(crate) fn post_order(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.root, false)];
        while let Some((v, expanded)) = stack.pop() {
            if expanded {
                out.push(v);
                continue;
            }
            stack.push((v, true));
            for &c in self.nodes[v].children.iter().rev() {
                stack.push((c, false));
            }
        }
        out
    }

    /// Left-to-right leaf order as stored.
    pub fn frontier(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.universe);
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            match self.nodes[v].kind {
                NodeKind::Leaf(e) => out.push(e),
                _ => stack.extend(self.nodes[v].children.iter().rev()),
            }
        }
        out
    }

    fn check_set(&self, set: &IndexSet) -> Result<()> {
        if set.universe() != self.universe {
            return input_err(format!(
                "set over universe {} used with tree over {}",
                set.universe(),
                self.universe
            ));
        }
        Ok(())
    }

    /// Restricts the tree to orders in which `set` is contiguous.
    ///
    /// Empty sets and singletons are accepted without change. On
    /// [`Error::Incompatible`] the tree is left untouched.
    pub fn reduce(&mut self, set: &IndexSet) -> Result<()> {
        self.check_set(set)?;
        if set.len() <= 1 || set.len() == self.universe {
            return Ok(());
        }
        let mut work = self.clone();
        reduce::reduce(&mut work, &set.mask(), set.len())?;
        work.canonicalize();
        *self = work;
        Ok(())
    }

    /// Whether some admitted order makes `set` contiguous.
    pub fn admits(&self, set: &IndexSet) -> Result<bool> {
        self.check_set(set)?;
        if set.len() <= 1 || set.len() == self.universe {
            return Ok(true);
        }
        let mut work = self.clone();
        match reduce::reduce(&mut work, &set.mask(), set.len()) {
            Ok(()) => Ok(true),
            Err(Error::Incompatible) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// Every admitted order, for universes up to [`ENUMERATION_BOUND`].
    pub fn enumerate_orders(&self) -> Result<BTreeSet<Vec<usize>>> {
        self.enumerate_orders_bounded(ENUMERATION_BOUND)
    }

    pub fn enumerate_orders_bounded(&self, bound: usize) -> Result<BTreeSet<Vec<usize>>> {
        if self.universe > bound {
            return Err(Error::Bound { size: self.universe, bound });
        }
        let mut orders: Vec<Vec<Vec<usize>>> = vec![Vec::new(); self.nodes.len()];
        for v in self.post_order() {
            let node = &self.nodes[v];
            orders[v] = match node.kind {
                NodeKind::Leaf(e) => vec![vec![e]],
                NodeKind::Q => {
                    let fwd: Vec<&[Vec<usize>]> =
                        node.children.iter().map(|&c| orders[c].as_slice()).collect();
                    let mut out = concat_product(&fwd);
                    let rev: Vec<&[Vec<usize>]> = fwd.iter().rev().copied().collect();
                    out.extend(concat_product(&rev));
                    out
                }
                NodeKind::P => {
                    let mut out = Vec::new();
                    for perm in permutations(node.children.len()) {
                        let parts: Vec<&[Vec<usize>]> =
                            perm.iter().map(|&k| orders[node.children[k]].as_slice()).collect();
                        out.extend(concat_product(&parts));
                    }
                    out
                }
            };
        }
        Ok(std::mem::take(&mut orders[self.root]).into_iter().collect())
    }

    /// Verifies the structural invariants; returns a description of the first violation.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let mut seen = vec![false; self.universe];
        for v in self.post_order() {
            let node = &self.nodes[v];
            match node.kind {
                NodeKind::Leaf(e) => {
                    if e >= self.universe || seen[e] {
                        return Err(format!("leaf {e} repeated or out of range"));
                    }
                    seen[e] = true;
                }
                NodeKind::P if node.children.len() < 2 => {
                    return Err(format!("P-node with {} children", node.children.len()))
                }
                NodeKind::Q if node.children.len() < 3 => {
                    return Err(format!("Q-node with {} children", node.children.len()))
                }
                _ => {}
            }
        }
        if seen.iter().any(|s| !s) {
            return Err("missing leaves".into());
        }
        Ok(())
    }

    /// Restores canonical form and compacts the node arena.
    fn canonicalize(&mut self) {
        let order = self.post_order();
        let mut new_nodes: Vec<Node> = Vec::with_capacity(order.len());
        let mut min_leaf: Vec<usize> = Vec::with_capacity(order.len());
        let mut new_id = vec![usize::MAX; self.nodes.len()];
        for v in order {
            let kind = self.nodes[v].kind;
            if let NodeKind::Leaf(e) = kind {
                new_id[v] = new_nodes.len();
                new_nodes.push(Node { kind, children: Vec::new() });
                min_leaf.push(e);
                continue;
            }
            let mut children: Vec<NodeId> = self.nodes[v].children.iter().map(|&c| new_id[c]).collect();
            if children.len() == 1 {
                new_id[v] = children[0];
                continue;
            }
            let kind = if kind == NodeKind::Q && children.len() == 2 { NodeKind::P } else { kind };
            match kind {
                NodeKind::P => children.sort_by_key(|&c| min_leaf[c]),
                _ => {
                    if min_leaf[children[0]] > min_leaf[*children.last().unwrap()] {
                        children.reverse();
                    }
                }
            }
            let low = children.iter().map(|&c| min_leaf[c]).min().unwrap();
            new_id[v] = new_nodes.len();
            new_nodes.push(Node { kind, children });
            min_leaf.push(low);
        }
        self.root = new_id[self.root];
        self.nodes = new_nodes;
    }
}

fn concat_product(parts: &[&[Vec<usize>]]) -> Vec<Vec<usize>> {
    let mut acc: Vec<Vec<usize>> = vec![Vec::new()];
    for part in parts {
        let mut next = Vec::with_capacity(acc.len() * part.len());
        for prefix in &acc {
            for seq in part.iter() {
                let mut s = prefix.clone();
                s.extend_from_slice(seq);
                next.push(s);
            }
        }
        acc = next;
    }
    acc
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    heap_permute(n, &mut current, &mut out);
    out
}

fn heap_permute(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(a.clone());
        return;
    }
    for i in 0..k - 1 {
        heap_permute(k - 1, a, out);
        if k.is_multiple_of(2) {
            a.swap(i, k - 1);
        } else {
            a.swap(0, k - 1);
        }
    }
    heap_permute(k - 1, a, out);
}
