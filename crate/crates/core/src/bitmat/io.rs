use std::fmt::Write as _;

use super::BinaryMatrix;
use crate::error::{Error, Result};

fn format_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Format { line, msg: msg.into() })
}

/// Parses lines of `0`/`1` characters; all lines must have equal length.
pub fn load_dense(text: &str) -> Result<BinaryMatrix> {
    let mut cells = Vec::new();
    let mut n_cols = None;
    let mut n_rows = 0;
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        let width = line.chars().count();
        match n_cols {
            None => n_cols = Some(width),
            Some(w) if w != width => {
                return format_err(k + 1, format!("expected {w} characters, found {width}"))
            }
            _ => {}
        }
        for (j, c) in line.chars().enumerate() {
            match c {
                '1' => cells.push((n_rows, j)),
                '0' => {}
                other => return format_err(k + 1, format!("unexpected character {other:?}")),
            }
        }
        n_rows += 1;
    }
    Ok(BinaryMatrix::from_sorted_cells(n_rows, n_cols.unwrap_or(0), cells))
}

/// Parses a `n m` header followed by `i j` lines of 0-based one positions.
pub fn load_sparse(text: &str) -> Result<BinaryMatrix> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let Some((k, header)) = lines.next() else {
        return format_err(1, "missing header");
    };
    let (n, m) = parse_pair(header, k + 1)?;
    let mut cells = Vec::new();
    for (k, line) in lines {
        let (i, j) = parse_pair(line, k + 1)?;
        if i >= n || j >= m {
            return format_err(k + 1, format!("index ({i}, {j}) out of range for {n}x{m}"));
        }
        cells.push((i, j));
    }
    cells.sort_unstable();
    cells.dedup();
    Ok(BinaryMatrix::from_sorted_cells(n, m, cells))
}

fn parse_pair(line: &str, line_no: usize) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let mut next = || -> Result<usize> {
        let tok = it.next().ok_or_else(|| Error::Format {
            line: line_no,
            msg: "expected two integers".into(),
        })?;
        tok.parse().map_err(|_| Error::Format {
            line: line_no,
            msg: format!("not a non-negative integer: {tok:?}"),
        })
    };
    let pair = (next()?, next()?);
    if it.next().is_some() {
        return format_err(line_no, "trailing tokens");
    }
    Ok(pair)
}

pub fn to_dense_string(m: &BinaryMatrix) -> String {
    let mut out = String::with_capacity(m.n_rows() * (m.n_cols() + 1));
    for i in 0..m.n_rows() {
        let mut row = vec![b'0'; m.n_cols()];
        for &j in m.row(i) {
            row[j] = b'1';
        }
        out.push_str(std::str::from_utf8(&row).expect("ascii"));
        out.push('\n');
    }
    out
}

pub fn to_sparse_string(m: &BinaryMatrix) -> String {
    let mut out = format!("{} {}\n", m.n_rows(), m.n_cols());
    for (i, j) in m.cells() {
        let _ = writeln!(out, "{i} {j}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_examples() {
        assert_eq!(load_dense("10\n01").unwrap(), BinaryMatrix::identity(2));
        let empty = load_dense("").unwrap();
        assert_eq!((empty.shape(), empty.nnz()), ((0, 0), 0));
        let full = load_dense("111\n111\n").unwrap();
        assert_eq!((full.shape(), full.nnz()), ((2, 3), 6));
    }

    #[test]
    fn dense_errors_carry_line_numbers() {
        assert!(matches!(load_dense("10\n1"), Err(Error::Format { line: 2, .. })));
        assert!(matches!(load_dense("10\n1x"), Err(Error::Format { line: 2, .. })));
    }

    #[test]
    fn sparse_examples() {
        assert_eq!(load_sparse("2 2\n0 0\n1 1").unwrap(), BinaryMatrix::identity(2));
        let dup = load_sparse("3 3\n0 1\n0 1").unwrap();
        assert_eq!(dup.cells().collect::<Vec<_>>(), vec![(0, 1)]);
        assert!(matches!(load_sparse("2 2\n2 0"), Err(Error::Format { line: 2, .. })));
        assert!(matches!(load_sparse("2 2\n0"), Err(Error::Format { line: 2, .. })));
    }

    #[test]
    fn writers_round_trip() {
        let m = load_dense("0110\n1001\n0000").unwrap();
        assert_eq!(load_dense(&to_dense_string(&m)).unwrap(), m);
        assert_eq!(load_sparse(&to_sparse_string(&m)).unwrap(), m);
    }
}
