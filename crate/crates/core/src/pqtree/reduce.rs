//! Booth–Lueker reduction.
//!
//! A bottom-up pass counts the pertinent leaves under every node, which fixes
//! the pertinent root and the full/empty/partial label of each node. Partial
//! nodes are then rewritten children-first with the templates P2–P6 and
//! Q2–Q3 (P1/Q1 need no rewrite). Every partial node below the pertinent root
//! is turned into a Q-node ordered empty side first, full side last, which is
//! the orientation the parent templates rely on when splicing.

use super::{Node, NodeId, NodeKind, PqTree};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Label {
    Empty,
    Full,
    Partial,
}

struct Reducer<'a> {
    tree: &'a mut PqTree,
    label: Vec<Label>,
}

pub(super) fn reduce(tree: &mut PqTree, in_set: &[bool], set_len: usize) -> Result<()> {
    let order = tree.post_order();
    let mut leaves = vec![0usize; tree.nodes.len()];
    let mut pertinent = vec![0usize; tree.nodes.len()];
    for &v in &order {
        match tree.nodes[v].kind {
            NodeKind::Leaf(e) => {
                leaves[v] = 1;
                pertinent[v] = usize::from(in_set[e]);
            }
            _ => {
                for &c in &tree.nodes[v].children {
                    leaves[v] += leaves[c];
                    pertinent[v] += pertinent[c];
                }
            }
        }
    }

    let mut root = tree.root;
    'descend: loop {
        for &c in &tree.nodes[root].children {
            if pertinent[c] == set_len {
                root = c;
                continue 'descend;
            }
        }
        break;
    }

    let label: Vec<Label> = (0..tree.nodes.len())
        .map(|v| match pertinent[v] {
            0 => Label::Empty,
            p if p == leaves[v] => Label::Full,
            _ => Label::Partial,
        })
        .collect();
    if label[root] == Label::Full {
        return Ok(());
    }

    // partial nodes strictly below the pertinent root, children first
    let mut below = Vec::new();
    let mut stack: Vec<(NodeId, bool)> = tree.nodes[root]
        .children
        .iter()
        .filter(|&&c| label[c] == Label::Partial)
        .map(|&c| (c, false))
        .collect();
    while let Some((v, expanded)) = stack.pop() {
        if expanded {
            below.push(v);
            continue;
        }
        stack.push((v, true));
        for &c in &tree.nodes[v].children {
            if label[c] == Label::Partial {
                stack.push((c, false));
            }
        }
    }

    let mut r = Reducer { tree, label };
    for v in below {
        match r.tree.nodes[v].kind {
            NodeKind::P => r.p_partial(v)?,
            NodeKind::Q => r.q_partial(v)?,
            NodeKind::Leaf(_) => unreachable!("leaves are never partial"),
        }
    }
    match r.tree.nodes[root].kind {
        NodeKind::P => r.p_root(root),
        NodeKind::Q => r.q_root(root),
        NodeKind::Leaf(_) => Ok(()),
    }
}

impl Reducer<'_> {
    fn new_node(&mut self, kind: NodeKind, children: Vec<NodeId>, label: Label) -> NodeId {
        self.tree.nodes.push(Node { kind, children });
        self.label.push(label);
        self.tree.nodes.len() - 1
    }

    /// Groups siblings sharing a label under a fresh P-node when there are several.
    fn group(&mut self, members: Vec<NodeId>, label: Label) -> Option<NodeId> {
        match members.len() {
            0 => None,
            1 => Some(members[0]),
            _ => Some(self.new_node(NodeKind::P, members, label)),
        }
    }

    fn split(&self, v: NodeId) -> (Vec<NodeId>, Vec<NodeId>, Vec<NodeId>) {
        let (mut full, mut empty, mut partial) = (Vec::new(), Vec::new(), Vec::new());
        for &c in &self.tree.nodes[v].children {
            match self.label[c] {
                Label::Full => full.push(c),
                Label::Empty => empty.push(c),
                Label::Partial => partial.push(c),
            }
        }
        (full, empty, partial)
    }

    fn take_children(&mut self, v: NodeId) -> Vec<NodeId> {
        std::mem::take(&mut self.tree.nodes[v].children)
    }

    fn set_q(&mut self, v: NodeId, children: Vec<NodeId>) {
        self.tree.nodes[v] = Node { kind: NodeKind::Q, children };
    }

    /// P3 and P5: a partial P-node below the pertinent root.
    fn p_partial(&mut self, v: NodeId) -> Result<()> {
        let (full, empty, partial) = self.split(v);
        let mut children = Vec::new();
        if let Some(e) = self.group(empty, Label::Empty) {
            children.push(e);
        }
        match partial.as_slice() {
            [] => {}
            [q] => {
                let inner = self.take_children(*q);
                children.extend(inner);
            }
            _ => return Err(Error::Incompatible),
        }
        if let Some(f) = self.group(full, Label::Full) {
            children.push(f);
        }
        self.set_q(v, children);
        Ok(())
    }

    /// Q2: a partial Q-node below the pertinent root.
    fn q_partial(&mut self, v: NodeId) -> Result<()> {
        let labels: Vec<Label> = self.tree.nodes[v].children.iter().map(|&c| self.label[c]).collect();
        if !singly_partial(labels.iter().copied()) {
            if !singly_partial(labels.iter().rev().copied()) {
                return Err(Error::Incompatible);
            }
            self.tree.nodes[v].children.reverse();
        }
        let old = self.take_children(v);
        let mut children = Vec::with_capacity(old.len() + 2);
        for c in old {
            if self.label[c] == Label::Partial {
                let inner = self.take_children(c);
                children.extend(inner);
            } else {
                children.push(c);
            }
        }
        self.set_q(v, children);
        Ok(())
    }

    /// P2, P4 and P6: the pertinent root is a P-node.
    fn p_root(&mut self, v: NodeId) -> Result<()> {
        let (full, empty, partial) = self.split(v);
        match partial.as_slice() {
            [] => {
                let f = self.group(full, Label::Full).expect("pertinent root has full children");
                let mut children = empty;
                children.push(f);
                self.tree.nodes[v].children = children;
            }
            [q] => {
                let q = *q;
                if let Some(f) = self.group(full, Label::Full) {
                    self.tree.nodes[q].children.push(f);
                }
                if empty.is_empty() {
                    let inner = self.take_children(q);
                    self.set_q(v, inner);
                } else {
                    let mut children = empty;
                    children.push(q);
                    self.tree.nodes[v].children = children;
                }
            }
            [q1, q2] => {
                let (q1, q2) = (*q1, *q2);
                let mut merged = self.take_children(q1);
                if let Some(f) = self.group(full, Label::Full) {
                    merged.push(f);
                }
                let mut tail = self.take_children(q2);
                tail.reverse();
                merged.extend(tail);
                if empty.is_empty() {
                    self.set_q(v, merged);
                } else {
                    self.set_q(q1, merged);
                    let mut children = empty;
                    children.push(q1);
                    self.tree.nodes[v].children = children;
                }
            }
            _ => return Err(Error::Incompatible),
        }
        Ok(())
    }

    /// Q2 and Q3 at the pertinent root.
    fn q_root(&mut self, v: NodeId) -> Result<()> {
        // 0: leading empties, 1: inside the pertinent run, 2: trailing empties
        let mut phase = 0;
        let mut right_partial = None;
        for &c in &self.tree.nodes[v].children {
            match (self.label[c], phase) {
                (Label::Empty, 1) => phase = 2,
                (Label::Empty, _) => {}
                (Label::Full, 0) => phase = 1,
                (Label::Full, 1) => {}
                (Label::Partial, 0) => phase = 1,
                (Label::Partial, 1) => {
                    right_partial = Some(c);
                    phase = 2;
                }
                _ => return Err(Error::Incompatible),
            }
        }
        let old = self.take_children(v);
        let mut children = Vec::with_capacity(old.len() + 4);
        for c in old {
            if self.label[c] != Label::Partial {
                children.push(c);
                continue;
            }
            let mut inner = self.take_children(c);
            if Some(c) == right_partial {
                inner.reverse();
            }
            children.extend(inner);
        }
        self.set_q(v, children);
        Ok(())
    }
}

/// Matches `E* P? F*`: empties, then at most one partial child, then fulls.
fn singly_partial(labels: impl Iterator<Item = Label>) -> bool {
    let mut started = false;
    for l in labels {
        match l {
            Label::Empty if started => return false,
            Label::Empty => {}
            Label::Partial if started => return false,
            Label::Partial | Label::Full => started = true,
        }
    }
    true
}
