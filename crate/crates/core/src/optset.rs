//! Maximum-weight compatible set on a PQ-tree.
//!
//! Every node carries three counters computed children first:
//!
//! * `total`: weight of all leaves below the node;
//! * `border`: best non-empty set that can sit at either end of some
//!   admitted order of the subtree;
//! * `inner`: best set (possibly empty) contiguous in some admitted order.
//!
//! Candidates are compared by gain and then by size, fewer elements winning,
//! so zero-weight leaves are only taken when they are needed to bridge better
//! leaves. Remaining ties go to the earliest child in stored order.

use std::ops::{Add, Neg, Sub};

use crate::bitmat::IndexSet;
use crate::error::{input_err, Result};
use crate::pqtree::{NodeKind, PqTree};

/// Per-element integer weights over a tree's universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector(pub Vec<i64>);

impl WeightVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum_over(&self, set: &IndexSet) -> i64 {
        set.iter().map(|u| self.0[u]).sum()
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }
}

impl Neg for &WeightVector {
    type Output = WeightVector;

    fn neg(self) -> WeightVector {
        WeightVector(self.0.iter().map(|w| -w).collect())
    }
}

/// Gain first, then fewer elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default)]
struct Score {
    gain: i64,
    neg_size: i64,
}

impl Score {
    const ZERO: Score = Score { gain: 0, neg_size: 0 };

    fn leaf(w: i64) -> Self {
        Score { gain: w, neg_size: -1 }
    }

    fn positive_part(self) -> Self {
        self.max(Self::ZERO)
    }
}

impl Add for Score {
    type Output = Score;
    fn add(self, o: Score) -> Score {
        Score { gain: self.gain + o.gain, neg_size: self.neg_size + o.neg_size }
    }
}

impl Sub for Score {
    type Output = Score;
    fn sub(self, o: Score) -> Score {
        Score { gain: self.gain - o.gain, neg_size: self.neg_size - o.neg_size }
    }
}

#[derive(Debug, Clone, Copy)]
enum BorderChoice {
    Leaf,
    /// Border part of child `index`, completed by every child on one side.
    Q { index: usize, from_left: bool },
    /// Border part of child `partial`, plus every positive child.
    P { partial: usize },
}

#[derive(Debug, Clone, Copy)]
enum InnerChoice {
    Leaf { take: bool },
    Child(usize),
    /// Border parts of children `left` and `right` and everything between.
    QSpan { left: usize, right: usize },
    /// Positive children plus the border parts of up to two children.
    PCombo { partial: [Option<usize>; 2] },
}

/// Counter values of one node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeCounters {
    pub kind: NodeKind,
    pub total: i64,
    pub border: i64,
    pub inner: i64,
}

/// Counters for every node of a tree, with the choices that produced them.
#[derive(Debug, Clone)]
pub struct Counters {
    root: usize,
    visited: Vec<usize>,
    kind: Vec<NodeKind>,
    total: Vec<Score>,
    border: Vec<Score>,
    inner: Vec<Score>,
    border_choice: Vec<BorderChoice>,
    inner_choice: Vec<InnerChoice>,
    children: Vec<Vec<usize>>,
    work: usize,
}

impl Counters {
    pub fn root(&self) -> NodeCounters {
        self.node(self.root)
    }

    /// Counters of every reachable node, children before parents.
    pub fn nodes(&self) -> impl Iterator<Item = NodeCounters> + '_ {
        self.visited.iter().map(|&v| self.node(v))
    }

    /// Child visits performed while computing the counters.
    pub fn work(&self) -> usize {
        self.work
    }

    fn node(&self, v: usize) -> NodeCounters {
        NodeCounters {
            kind: self.kind[v],
            total: self.total[v].gain,
            border: self.border[v].gain,
            inner: self.inner[v].gain,
        }
    }
}

pub fn compute_counters(tree: &PqTree, w: &WeightVector) -> Result<Counters> {
    if w.len() != tree.universe() {
        return input_err(format!(
            "{} weights for a universe of {}",
            w.len(),
            tree.universe()
        ));
    }
    let order = tree.post_order();
    let slots = order.iter().copied().max().unwrap_or(0) + 1;
    let mut c = Counters {
        root: tree.root(),
        visited: order.clone(),
        kind: vec![NodeKind::P; slots],
        total: vec![Score::ZERO; slots],
        border: vec![Score::ZERO; slots],
        inner: vec![Score::ZERO; slots],
        border_choice: vec![BorderChoice::Leaf; slots],
        inner_choice: vec![InnerChoice::Leaf { take: false }; slots],
        children: vec![Vec::new(); slots],
        work: 0,
    };
    for v in order {
        let kind = tree.kind(v);
        c.kind[v] = kind;
        match kind {
            NodeKind::Leaf(e) => {
                let s = Score::leaf(w.0[e]);
                c.total[v] = s;
                c.border[v] = s;
                let take = s > Score::ZERO;
                c.inner[v] = if take { s } else { Score::ZERO };
                c.inner_choice[v] = InnerChoice::Leaf { take };
            }
            NodeKind::Q => {
                c.children[v] = tree.children(v).to_vec();
                q_node(&mut c, v);
            }
            NodeKind::P => {
                c.children[v] = tree.children(v).to_vec();
                p_node(&mut c, v);
            }
        }
    }
    Ok(c)
}

fn q_node(c: &mut Counters, v: usize) {
    let ch = std::mem::take(&mut c.children[v]);
    c.work += ch.len();
    let total = ch.iter().fold(Score::ZERO, |acc, &x| acc + c.total[x]);

    // border: partial child completed by everything to its left, or to its right
    let mut best = None::<(Score, BorderChoice)>;
    let mut prefix = Score::ZERO;
    for (i, &x) in ch.iter().enumerate() {
        let cand = c.border[x] + prefix;
        if best.is_none_or(|(b, _)| cand > b) {
            best = Some((cand, BorderChoice::Q { index: i, from_left: true }));
        }
        prefix = prefix + c.total[x];
    }
    let mut suffix = Score::ZERO;
    for (i, &x) in ch.iter().enumerate().rev() {
        let cand = c.border[x] + suffix;
        if best.is_none_or(|(b, _)| cand > b) {
            best = Some((cand, BorderChoice::Q { index: i, from_left: false }));
        }
        suffix = suffix + c.total[x];
    }
    let (border, border_choice) = best.expect("Q-node has children");

    // inner: one child's inner set, or a span between two children's border sets
    let mut inner = Score::ZERO;
    let mut inner_choice = InnerChoice::Child(0);
    for (i, &x) in ch.iter().enumerate() {
        if i == 0 || c.inner[x] > inner {
            inner = c.inner[x];
            inner_choice = InnerChoice::Child(i);
        }
    }
    // value(i, j) = border(i) + border(j) + prefix(j) - prefix(i + 1)
    let mut prefix = c.total[ch[0]];
    let mut best_left = (c.border[ch[0]] - prefix, 0usize);
    for (j, &x) in ch.iter().enumerate().skip(1) {
        let cand = c.border[x] + prefix + best_left.0;
        if cand > inner {
            inner = cand;
            inner_choice = InnerChoice::QSpan { left: best_left.1, right: j };
        }
        prefix = prefix + c.total[x];
        let t = c.border[x] - prefix;
        if t > best_left.0 {
            best_left = (t, j);
        }
    }

    c.total[v] = total;
    c.border[v] = border;
    c.border_choice[v] = border_choice;
    c.inner[v] = inner;
    c.inner_choice[v] = inner_choice;
    c.children[v] = ch;
}

fn p_node(c: &mut Counters, v: usize) {
    let ch = std::mem::take(&mut c.children[v]);
    c.work += ch.len();
    let mut total = Score::ZERO;
    let mut positive = Score::ZERO;
    let mut top: [Option<(Score, usize)>; 2] = [None, None];
    let mut inner = Score::ZERO;
    let mut inner_child = None;
    for (i, &x) in ch.iter().enumerate() {
        total = total + c.total[x];
        positive = positive + c.total[x].positive_part();
        let g = c.border[x] - c.total[x].positive_part();
        if top[0].is_none_or(|(b, _)| g > b) {
            top[1] = top[0];
            top[0] = Some((g, i));
        } else if top[1].is_none_or(|(b, _)| g > b) {
            top[1] = Some((g, i));
        }
        if inner_child.is_none() || c.inner[x] > inner {
            inner = c.inner[x];
            inner_child = Some(i);
        }
    }
    let (b1, i1) = top[0].expect("P-node has children");
    c.border[v] = b1 + positive;
    c.border_choice[v] = BorderChoice::P { partial: i1 };

    let keep = |t: Option<(Score, usize)>| t.filter(|&(g, _)| g > Score::ZERO);
    let partial = [keep(top[0]), keep(top[1])];
    let combo = partial.iter().flatten().fold(positive, |acc, &(g, _)| acc + g);
    if combo > inner {
        c.inner[v] = combo;
        c.inner_choice[v] = InnerChoice::PCombo { partial: partial.map(|p| p.map(|(_, i)| i)) };
    } else {
        c.inner[v] = inner;
        c.inner_choice[v] = InnerChoice::Child(inner_child.expect("P-node has children"));
    }
    c.total[v] = total;
    c.children[v] = ch;
}

#[derive(Clone, Copy)]
enum Mode {
    Full,
    Border,
    Inner,
}

fn extract(c: &Counters, universe: usize) -> IndexSet {
    let mut out = Vec::new();
    let mut stack = vec![(c.root, Mode::Inner)];
    while let Some((v, mode)) = stack.pop() {
        if let NodeKind::Leaf(e) = c.kind[v] {
            let take = match mode {
                Mode::Inner => matches!(c.inner_choice[v], InnerChoice::Leaf { take: true }),
                _ => true,
            };
            if take {
                out.push(e);
            }
            continue;
        }
        let ch = &c.children[v];
        match mode {
            Mode::Full => stack.extend(ch.iter().map(|&x| (x, Mode::Full))),
            Mode::Border => match c.border_choice[v] {
                BorderChoice::Q { index, from_left } => {
                    stack.push((ch[index], Mode::Border));
                    let side = if from_left { &ch[..index] } else { &ch[index + 1..] };
                    stack.extend(side.iter().map(|&x| (x, Mode::Full)));
                }
                BorderChoice::P { partial } => {
                    for (i, &x) in ch.iter().enumerate() {
                        if i == partial {
                            stack.push((x, Mode::Border));
                        } else if c.total[x] > Score::ZERO {
                            stack.push((x, Mode::Full));
                        }
                    }
                }
                BorderChoice::Leaf => unreachable!("internal node with leaf choice"),
            },
            Mode::Inner => match c.inner_choice[v] {
                InnerChoice::Child(i) => stack.push((ch[i], Mode::Inner)),
                InnerChoice::QSpan { left, right } => {
                    stack.push((ch[left], Mode::Border));
                    stack.push((ch[right], Mode::Border));
                    stack.extend(ch[left + 1..right].iter().map(|&x| (x, Mode::Full)));
                }
                InnerChoice::PCombo { partial } => {
                    for (i, &x) in ch.iter().enumerate() {
                        if partial.contains(&Some(i)) {
                            stack.push((x, Mode::Border));
                        } else if c.total[x] > Score::ZERO {
                            stack.push((x, Mode::Full));
                        }
                    }
                }
                InnerChoice::Leaf { .. } => unreachable!("internal node with leaf choice"),
            },
        }
    }
    out.sort_unstable();
    IndexSet::from_sorted_unchecked(universe, out)
}

/// Best set contiguous in some order admitted by `tree`; may be empty.
pub fn best_compatible_set(tree: &PqTree, w: &WeightVector) -> Result<(IndexSet, i64)> {
    let counters = compute_counters(tree, w)?;
    let set = extract(&counters, tree.universe());
    let gain = counters.root().inner;
    debug_assert_eq!(w.sum_over(&set), gain);
    Ok((set, gain))
}

/// Best set that is contiguous or co-contiguous in some admitted order.
///
/// Solves once with `w` and once with `-w`; the complement of the second
/// solution is used only when it is strictly better.
pub fn best_cyclic_set(tree: &PqTree, w: &WeightVector) -> Result<(IndexSet, i64)> {
    let (direct, gain) = best_compatible_set(tree, w)?;
    let (hole, hole_gain) = best_compatible_set(tree, &-w)?;
    let wrapped_gain = w.total() + hole_gain;
    if wrapped_gain > gain {
        Ok((hole.complement(), wrapped_gain))
    } else {
        Ok((direct, gain))
    }
}
