//! Parenthesized term syntax, e.g. `P(0, Q(1, 2, 3))`.

use std::fmt;
use std::str::FromStr;

use super::{Node, NodeId, NodeKind, PqTree};
use crate::error::{input_err, Error, Result};

impl fmt::Display for PqTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(self, self.root, f)
    }
}

fn write_node(t: &PqTree, v: NodeId, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let node = &t.nodes[v];
    match node.kind {
        NodeKind::Leaf(e) => write!(f, "{e}"),
        kind => {
            f.write_str(if kind == NodeKind::P { "P(" } else { "Q(" })?;
            for (k, &c) in node.children.iter().enumerate() {
                if k > 0 {
                    f.write_str(", ")?;
                }
                write_node(t, c, f)?;
            }
            f.write_str(")")
        }
    }
}

impl FromStr for PqTree {
    type Err = Error;

    /// Parses a tree exactly as written; child order is kept.
    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s.as_bytes(), pos: 0, nodes: Vec::new() };
        let root = p.term()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return input_err(format!("trailing input at byte {}", p.pos));
        }
        let universe = p.nodes.iter().filter(|n| matches!(n.kind, NodeKind::Leaf(_))).count();
        let tree = PqTree { universe, nodes: p.nodes, root };
        tree.check_invariants().map_err(Error::Input)?;
        Ok(tree)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nodes: Vec<Node>,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        self.skip_ws();
        if self.src.get(self.pos) != Some(&b) {
            return input_err(format!("expected '{}' at byte {}", b as char, self.pos));
        }
        self.pos += 1;
        Ok(())
    }

    fn term(&mut self) -> Result<NodeId> {
        self.skip_ws();
        let kind = match self.src.get(self.pos) {
            Some(b'P') => NodeKind::P,
            Some(b'Q') => NodeKind::Q,
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
                let e = text.parse().map_err(|_| Error::Input(format!("bad leaf {text}")))?;
                self.nodes.push(Node { kind: NodeKind::Leaf(e), children: Vec::new() });
                return Ok(self.nodes.len() - 1);
            }
            _ => return input_err(format!("expected term at byte {}", self.pos)),
        };
        self.pos += 1;
        self.expect(b'(')?;
        let mut children = vec![self.term()?];
        loop {
            self.skip_ws();
            match self.src.get(self.pos) {
                Some(b',') => {
                    self.pos += 1;
                    children.push(self.term()?);
                }
                Some(b')') => {
                    self.pos += 1;
                    break;
                }
                _ => return input_err(format!("expected ',' or ')' at byte {}", self.pos)),
            }
        }
        self.nodes.push(Node { kind, children });
        Ok(self.nodes.len() - 1)
    }
}
