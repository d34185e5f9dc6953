//! Plain-text factorization report.
//!
//! ```text
//! VARIANT plain
//! RANK 2/3
//! ERROR 4 RELERR 0.1250
//! ROW-ORDER 0 2 1
//! COL-ORDER 1 0 2 3
//! FACTOR 0 ROWS 0 2 COLS 1 0
//! ```
//!
//! Symmetric variants write a single `NODE-ORDER` line. A relative error
//! that is undefined (empty data matrix) is written as `NA`.

use std::fmt::Write;

use super::{Factor, Factorization, Variant};
use crate::bitmat::IndexSet;
use crate::error::{Error, Result};

fn join(items: impl IntoIterator<Item = usize>) -> String {
    items.into_iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn to_report(f: &Factorization) -> String {
    let mut s = String::new();
    let relerr = f.relative_error.map_or_else(|| "NA".to_string(), |r| format!("{r:.4}"));
    writeln!(s, "VARIANT {}", f.variant).unwrap();
    writeln!(s, "RANK {}/{}", f.rank_used(), f.rank_requested).unwrap();
    writeln!(s, "ERROR {} RELERR {relerr}", f.error).unwrap();
    if f.variant.is_symmetric() {
        writeln!(s, "NODE-ORDER {}", join(f.row_order.iter().copied())).unwrap();
    } else {
        writeln!(s, "ROW-ORDER {}", join(f.row_order.iter().copied())).unwrap();
        writeln!(s, "COL-ORDER {}", join(f.col_order.iter().copied())).unwrap();
    }
    for (t, factor) in f.factors.iter().enumerate() {
        writeln!(s, "FACTOR {t} ROWS {} COLS {}", join(factor.rows.iter()), join(factor.cols.iter())).unwrap();
    }
    s
}

fn bad(line: usize, msg: impl Into<String>) -> Error {
    Error::Format { line, msg: msg.into() }
}

fn numbers(line: usize, words: &[&str]) -> Result<Vec<usize>> {
    words.iter().map(|w| w.parse().map_err(|_| bad(line, format!("bad index {w:?}")))).collect()
}

fn check_order(line: usize, order: &[usize]) -> Result<()> {
    let mut seen = vec![false; order.len()];
    for &i in order {
        if i >= order.len() || std::mem::replace(&mut seen[i], true) {
            return Err(bad(line, "order is not a permutation"));
        }
    }
    Ok(())
}

/// Parses a report back into a factorization. Error fields are taken as written.
pub fn parse_report(text: &str) -> Result<Factorization> {
    let mut variant = None;
    let mut rank = None;
    let mut error = None;
    let mut relative_error = None;
    let mut row_order = None;
    let mut col_order = None;
    let mut raw_factors = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let words: Vec<&str> = raw.split_whitespace().collect();
        let Some((&head, rest)) = words.split_first() else { continue };
        match head {
            "VARIANT" => {
                let [name] = rest else { return Err(bad(line, "expected one variant name")) };
                variant = Some(name.parse::<Variant>().map_err(|e| bad(line, e.to_string()))?);
            }
            "RANK" => {
                let parsed = rest.first().and_then(|r| r.split_once('/')).and_then(|(u, k)| {
                    Some((u.parse::<usize>().ok()?, k.parse::<usize>().ok()?))
                });
                rank = Some(parsed.ok_or_else(|| bad(line, "expected RANK <used>/<requested>"))?);
            }
            "ERROR" => {
                let [e, "RELERR", r] = rest else { return Err(bad(line, "expected ERROR <int> RELERR <x>")) };
                error = Some(e.parse::<u64>().map_err(|_| bad(line, "bad error count"))?);
                relative_error = match *r {
                    "NA" => None,
                    r => Some(r.parse::<f64>().map_err(|_| bad(line, "bad relative error"))?),
                };
            }
            "ROW-ORDER" | "NODE-ORDER" => {
                let order = numbers(line, rest)?;
                check_order(line, &order)?;
                if head == "NODE-ORDER" {
                    col_order = Some(order.clone());
                }
                row_order = Some(order);
            }
            "COL-ORDER" => {
                let order = numbers(line, rest)?;
                check_order(line, &order)?;
                col_order = Some(order);
            }
            "FACTOR" => {
                let cols_at = rest.iter().position(|&w| w == "COLS");
                let (Some(t), Some(&"ROWS"), Some(c)) = (rest.first(), rest.get(1), cols_at) else {
                    return Err(bad(line, "expected FACTOR <t> ROWS ... COLS ..."));
                };
                if t.parse::<usize>().ok() != Some(raw_factors.len()) {
                    return Err(bad(line, "factors must be numbered from 0 in order"));
                }
                raw_factors.push((line, numbers(line, &rest[2..c])?, numbers(line, &rest[c + 1..])?));
            }
            other => return Err(bad(line, format!("unknown record {other:?}"))),
        }
    }
    let end = text.lines().count().max(1);
    let variant = variant.ok_or_else(|| bad(end, "missing VARIANT"))?;
    let (used, rank_requested) = rank.ok_or_else(|| bad(end, "missing RANK"))?;
    let error = error.ok_or_else(|| bad(end, "missing ERROR"))?;
    let row_order = row_order.ok_or_else(|| bad(end, "missing row order"))?;
    let col_order = col_order.ok_or_else(|| bad(end, "missing COL-ORDER"))?;
    if variant.is_symmetric() && row_order != col_order {
        return Err(bad(end, "symmetric report needs one NODE-ORDER"));
    }
    if used != raw_factors.len() {
        return Err(bad(end, format!("RANK says {used} factors, found {}", raw_factors.len())));
    }
    let mut factors = Vec::with_capacity(raw_factors.len());
    for (line, rows, cols) in raw_factors {
        let rows = IndexSet::new(row_order.len(), rows).map_err(|e| bad(line, e.to_string()))?;
        let cols = IndexSet::new(col_order.len(), cols).map_err(|e| bad(line, e.to_string()))?;
        factors.push(Factor { rows, cols });
    }
    Ok(Factorization { variant, factors, row_order, col_order, error, relative_error, rank_requested })
}
