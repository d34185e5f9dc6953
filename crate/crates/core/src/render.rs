//! SVG output: circular and linear node layouts with one ribbon per factor,
//! and a permuted heatmap with tile outlines.
//!
//! Coordinates are printed with three decimals, so identical inputs give
//! identical bytes.

use std::f64::consts::PI;
use std::fmt::Write;
use std::str::FromStr;

use crate::bitmat::{self, BinaryMatrix, IndexSet};
use crate::error::{input_err, Error, Result};
use crate::factorizer::Factorization;

pub const PALETTE: [&str; 8] =
    ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    Circular,
    Linear,
    Heatmap,
}

impl FromStr for Layout {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "circular" => Ok(Layout::Circular),
            "linear" => Ok(Layout::Linear),
            "heatmap" => Ok(Layout::Heatmap),
            _ => input_err(format!("unknown layout {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderSpec {
    pub layout: Layout,
    /// Circle radius, line length or heatmap width, in pixels.
    pub size: f64,
    /// One name per node (or per row for heatmaps), in index order.
    pub labels: Option<Vec<String>>,
    pub palette: Vec<String>,
    pub opacity: f64,
    /// Labels are dropped when nodes are closer than this, in degrees
    /// (circular) or pixels (linear).
    pub min_label_spacing: f64,
}

impl RenderSpec {
    pub fn new(layout: Layout) -> Self {
        let size = match layout {
            Layout::Circular => 200.0,
            Layout::Linear => 600.0,
            Layout::Heatmap => 400.0,
        };
        Self {
            layout,
            size,
            labels: None,
            palette: PALETTE.iter().map(|c| c.to_string()).collect(),
            opacity: 0.5,
            min_label_spacing: if layout == Layout::Circular { 2.0 } else { 6.0 },
        }
    }

    fn color(&self, t: usize) -> &str {
        &self.palette[t % self.palette.len()]
    }

    fn validate(&self, universe: usize) -> Result<()> {
        if !(self.size.is_finite() && self.size > 0.0) {
            return input_err("size must be positive");
        }
        if self.palette.is_empty() {
            return input_err("palette must not be empty");
        }
        if !(0.0..=1.0).contains(&self.opacity) {
            return input_err("opacity must lie in [0, 1]");
        }
        if let Some(labels) = &self.labels {
            if labels.len() != universe {
                return Err(Error::Shape(format!("{} labels for {universe} nodes", labels.len())));
            }
        }
        Ok(())
    }
}

/// Three-decimal number without a negative zero.
fn num(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn header(out: &mut String, width: f64, height: f64) {
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = num(width),
        h = num(height)
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
}

/// A run of consecutive positions `start, start+1, ..` (mod n) of length `len`.
#[derive(Debug, Clone, Copy)]
struct Run {
    start: usize,
    len: usize,
}

impl Run {
    fn wraps(&self, n: usize) -> bool {
        self.start + self.len > n
    }
}

/// Finds the position run occupied by `set`, or an error when it is not
/// (cyclically, if allowed) contiguous under `pos`.
fn run_of(set: &IndexSet, pos: &[usize], cyclic: bool) -> Result<Option<Run>> {
    let n = pos.len();
    if set.is_empty() {
        return Ok(None);
    }
    let mut occupied = vec![false; n];
    for e in set.iter() {
        occupied[pos[e]] = true;
    }
    if set.len() == n {
        return Ok(Some(Run { start: 0, len: n }));
    }
    // a run starts where an occupied position follows a free one
    let starts: Vec<usize> = (0..n).filter(|&p| occupied[p] && !occupied[(p + n - 1) % n]).collect();
    let start = match (starts.as_slice(), cyclic) {
        ([s], true) => *s,
        ([s], false) if *s + set.len() <= n => *s,
        _ => return input_err(format!("factor set {set} is not contiguous under the stored order")),
    };
    Ok(Some(Run { start, len: set.len() }))
}

fn positions(order: &[usize]) -> Vec<usize> {
    let mut pos = vec![0; order.len()];
    for (p, &e) in order.iter().enumerate() {
        pos[e] = p;
    }
    pos
}

fn check_symmetric(f: &Factorization) -> Result<()> {
    if !f.variant.is_symmetric() || f.row_order != f.col_order {
        return input_err(format!("{} factorization has no single node order; use the heatmap", f.variant));
    }
    if f.row_order.is_empty() {
        return input_err("factorization has no node order");
    }
    Ok(())
}

/// Runs of every factor's row and column sets under the node order.
fn factor_runs(f: &Factorization) -> Result<Vec<(Option<Run>, Option<Run>)>> {
    let pos = positions(&f.row_order);
    let cyclic = f.variant.is_cyclic();
    f.factors
        .iter()
        .map(|fac| Ok((run_of(&fac.rows, &pos, cyclic)?, run_of(&fac.cols, &pos, cyclic)?)))
        .collect()
}

pub fn render_circular(f: &Factorization, spec: &RenderSpec) -> Result<String> {
    check_symmetric(f)?;
    let n = f.row_order.len();
    spec.validate(n)?;
    let runs = factor_runs(f)?;
    let r = spec.size;
    let margin = if spec.labels.is_some() { 90.0 } else { 20.0 };
    let c = r + margin;
    let step = 2.0 * PI / n as f64;
    // slot p is centred on angle p*step, starting at twelve o'clock
    let angle = |slot: f64| slot * step - PI / 2.0;
    let at = |a: f64, radius: f64| (c + radius * a.cos(), c + radius * a.sin());
    let gap = step * 0.08;

    let mut out = String::new();
    header(&mut out, 2.0 * c, 2.0 * c);
    writeln!(out, r#"<g class="ribbons" stroke-width="0.8">"#).unwrap();
    for (t, runs) in runs.iter().enumerate() {
        let color = spec.color(t);
        writeln!(out, r#"<g class="ribbon" id="factor-{t}">"#).unwrap();
        if let (Some(a), Some(b)) = runs {
            let span = |run: &Run| (angle(run.start as f64 - 0.5) + gap, angle((run.start + run.len) as f64 - 0.5) - gap);
            let (a0, a1) = span(a);
            let (b0, b1) = span(b);
            let r_in = r - 4.0;
            let arc = |from: f64, to: f64| {
                let (x, y) = at(to, r_in);
                let large = u8::from(to - from > PI);
                format!("A {rr} {rr} 0 {large} 1 {} {}", num(x), num(y), rr = num(r_in))
            };
            // in/out curves bend towards the centre, as chord diagrams do
            let curve = |from: f64, to: f64| {
                let (c1x, c1y) = at(from, r_in * 0.25);
                let (c2x, c2y) = at(to, r_in * 0.25);
                let (x, y) = at(to, r_in);
                format!("C {} {} {} {} {} {}", num(c1x), num(c1y), num(c2x), num(c2y), num(x), num(y))
            };
            let (sx, sy) = at(a0, r_in);
            writeln!(
                out,
                r#"<path d="M {} {} {} {} {} {} Z" fill="{color}" fill-opacity="{}" stroke="{color}"/>"#,
                num(sx),
                num(sy),
                arc(a0, a1),
                curve(a1, b0),
                arc(b0, b1),
                curve(b1, a0),
                num(spec.opacity)
            )
            .unwrap();
        }
        writeln!(out, "</g>").unwrap();
    }
    writeln!(out, "</g>").unwrap();

    writeln!(out, r##"<g class="nodes" fill="#333333">"##).unwrap();
    for p in 0..n {
        let (x, y) = at(angle(p as f64), r + 2.0);
        writeln!(out, r#"<circle class="node" cx="{}" cy="{}" r="2"/>"#, num(x), num(y)).unwrap();
    }
    writeln!(out, "</g>").unwrap();
    if let Some(labels) = &spec.labels {
        if step.to_degrees() >= spec.min_label_spacing {
            writeln!(out, r#"<g class="labels" font-family="sans-serif" font-size="9">"#).unwrap();
            for (p, &e) in f.row_order.iter().enumerate() {
                let a = angle(p as f64);
                let (x, y) = at(a, r + 8.0);
                // keep text upright on the left half
                let deg = a.to_degrees();
                let (rot, anchor) = if a.cos() < -1e-9 { (deg + 180.0, "end") } else { (deg, "start") };
                writeln!(
                    out,
                    r#"<text x="{x}" y="{y}" text-anchor="{anchor}" dominant-baseline="middle" transform="rotate({} {x} {y})">{}</text>"#,
                    num(rot),
                    escape(&labels[e]),
                    x = num(x),
                    y = num(y)
                )
                .unwrap();
            }
            writeln!(out, "</g>").unwrap();
        }
    }
    writeln!(out, "</svg>").unwrap();
    Ok(out)
}

pub fn render_linear(f: &Factorization, spec: &RenderSpec) -> Result<String> {
    check_symmetric(f)?;
    let n = f.row_order.len();
    spec.validate(n)?;
    let runs = factor_runs(f)?;
    let margin = 20.0;
    let step = spec.size / n as f64;
    let height = spec.size / 2.0 + margin + if spec.labels.is_some() { 80.0 } else { 20.0 };
    let base = spec.size / 2.0 + margin;
    let x_of = |p: f64| margin + (p + 0.5) * step;
    let gap = step * 0.08;
    let left = margin;
    let right = margin + spec.size;

    let mut out = String::new();
    header(&mut out, spec.size + 2.0 * margin, height);
    writeln!(out, r#"<g class="ribbons" stroke-width="0.8">"#).unwrap();
    for (t, runs) in runs.iter().enumerate() {
        let color = spec.color(t);
        writeln!(out, r#"<g class="ribbon" id="factor-{t}">"#).unwrap();
        if let (Some(a), Some(b)) = runs {
            // split wrapping runs into the piece at the end and the piece at the start
            let pieces = |run: &Run| -> Vec<(usize, usize)> {
                if run.wraps(n) {
                    vec![(run.start, n), (0, run.start + run.len - n)]
                } else {
                    vec![(run.start, run.start + run.len)]
                }
            };
            let (pa, pb) = (pieces(a), pieces(b));
            let halves = pa.len().max(pb.len());
            for h in 0..halves {
                let (a_lo, a_hi) = pa[h.min(pa.len() - 1)];
                let (b_lo, b_hi) = pb[h.min(pb.len() - 1)];
                let interval = |lo: usize, hi: usize| (x_of(lo as f64 - 0.5) + gap, x_of(hi as f64 - 0.5) - gap);
                let (mut i0, mut i1) = interval(a_lo, a_hi);
                let (mut j0, mut j1) = interval(b_lo, b_hi);
                if j0 < i0 {
                    std::mem::swap(&mut i0, &mut j0);
                    std::mem::swap(&mut i1, &mut j1);
                }
                let outer = (j1 - i0).max(0.0) / 2.0;
                // overlapping intervals fill the whole dome
                let inner = ((j0 - i1) / 2.0).max(0.0);
                writeln!(
                    out,
                    r#"<path d="M {i0} {y} C {i0} {yo} {j1} {yo} {j1} {y} L {j0} {y} C {j0} {yi} {i1} {yi} {i1} {y} Z" fill="{color}" fill-opacity="{}" stroke="{color}"/>"#,
                    num(spec.opacity),
                    i0 = num(i0),
                    i1 = num(i1),
                    j0 = num(j0),
                    j1 = num(j1),
                    y = num(base),
                    yo = num(base - outer * 1.3),
                    yi = num(base - inner * 1.3),
                )
                .unwrap();
            }
            if halves > 1 {
                for (x0, x1) in [(right - step, right + margin * 0.8), (left - margin * 0.8, left + step)] {
                    writeln!(
                        out,
                        r#"<line class="wrap" x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="{color}" stroke-width="2" stroke-dasharray="4 3"/>"#,
                        num(x0),
                        num(x1),
                        y = num(base + 6.0)
                    )
                    .unwrap();
                }
            }
        }
        writeln!(out, "</g>").unwrap();
    }
    writeln!(out, "</g>").unwrap();

    writeln!(
        out,
        r##"<line class="axis" x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="#999999"/>"##,
        num(left),
        num(right),
        y = num(base)
    )
    .unwrap();
    writeln!(out, r##"<g class="nodes" fill="#333333">"##).unwrap();
    for p in 0..n {
        writeln!(out, r#"<circle class="node" cx="{}" cy="{}" r="2"/>"#, num(x_of(p as f64)), num(base)).unwrap();
    }
    writeln!(out, "</g>").unwrap();
    if let Some(labels) = &spec.labels {
        if step >= spec.min_label_spacing {
            writeln!(out, r#"<g class="labels" font-family="sans-serif" font-size="9">"#).unwrap();
            for (p, &e) in f.row_order.iter().enumerate() {
                let (x, y) = (x_of(p as f64), base + 10.0);
                writeln!(
                    out,
                    r#"<text x="{x}" y="{y}" text-anchor="start" dominant-baseline="middle" transform="rotate(90 {x} {y})">{}</text>"#,
                    escape(&labels[e]),
                    x = num(x),
                    y = num(y)
                )
                .unwrap();
            }
            writeln!(out, "</g>").unwrap();
        }
    }
    writeln!(out, "</svg>").unwrap();
    Ok(out)
}

/// `d` permuted by the factorization's orders, mismatching cells tinted and
/// the bounding box of every tile outlined.
pub fn render_heatmap(d: &BinaryMatrix, f: &Factorization, spec: &RenderSpec) -> Result<String> {
    let (n, m) = d.shape();
    if (f.n_rows(), f.n_cols()) != (n, m) {
        return Err(Error::Shape(format!("factorization is {}x{}, matrix is {n}x{m}", f.n_rows(), f.n_cols())));
    }
    if n == 0 || m == 0 {
        return input_err("empty matrix");
    }
    spec.validate(n)?;
    let cell = spec.size / n.max(m) as f64;
    let margin = 10.0;
    let z = bitmat::reconstruct(f);
    let rpos = positions(&f.row_order);
    let cpos = positions(&f.col_order);

    let mut out = String::new();
    header(&mut out, m as f64 * cell + 2.0 * margin, n as f64 * cell + 2.0 * margin);
    let rect = |out: &mut String, class: &str, i: usize, j: usize, fill: &str| {
        writeln!(
            out,
            r#"<rect class="{class}" x="{}" y="{}" width="{w}" height="{w}" fill="{fill}"/>"#,
            num(margin + cpos[j] as f64 * cell),
            num(margin + rpos[i] as f64 * cell),
            w = num(cell)
        )
        .unwrap();
    };
    writeln!(out, r#"<g class="cells">"#).unwrap();
    for (i, j) in d.cells() {
        rect(&mut out, "one", i, j, "#222222");
    }
    writeln!(out, "</g>").unwrap();
    writeln!(out, r#"<g class="errors" fill-opacity="0.7">"#).unwrap();
    for i in 0..n {
        for j in 0..m {
            if d.get(i, j) != z.get(i, j) {
                rect(&mut out, "error", i, j, "#e41a1c");
            }
        }
    }
    writeln!(out, "</g>").unwrap();
    writeln!(out, r#"<g class="tiles" fill="none" stroke-width="1.5">"#).unwrap();
    let boxes = |out: &mut String, class: &str, t: usize, rows: &IndexSet, cols: &IndexSet, rp: &[usize], cp: &[usize]| {
        if rows.is_empty() || cols.is_empty() {
            return;
        }
        let (r0, r1) = rows.iter().map(|i| rp[i]).fold((usize::MAX, 0), |(lo, hi), p| (lo.min(p), hi.max(p)));
        let (c0, c1) = cols.iter().map(|j| cp[j]).fold((usize::MAX, 0), |(lo, hi), p| (lo.min(p), hi.max(p)));
        writeln!(
            out,
            r#"<rect class="{class}" x="{}" y="{}" width="{}" height="{}" stroke="{}"/>"#,
            num(margin + c0 as f64 * cell),
            num(margin + r0 as f64 * cell),
            num((c1 - c0 + 1) as f64 * cell),
            num((r1 - r0 + 1) as f64 * cell),
            spec.color(t)
        )
        .unwrap();
    };
    for (t, fac) in f.factors.iter().enumerate() {
        boxes(&mut out, "tile", t, &fac.rows, &fac.cols, &rpos, &cpos);
        if f.variant.is_symmetric() && fac.rows != fac.cols {
            boxes(&mut out, "tile-mirror", t, &fac.cols, &fac.rows, &rpos, &cpos);
        }
    }
    writeln!(out, "</g>").unwrap();
    writeln!(out, "</svg>").unwrap();
    Ok(out)
}

/// Dispatches on `spec.layout`; the heatmap needs the data matrix.
pub fn render(d: Option<&BinaryMatrix>, f: &Factorization, spec: &RenderSpec) -> Result<String> {
    match spec.layout {
        Layout::Circular => render_circular(f, spec),
        Layout::Linear => render_linear(f, spec),
        Layout::Heatmap => match d {
            Some(d) => render_heatmap(d, f, spec),
            None => input_err("heatmap needs the data matrix"),
        },
    }
}
