//! Partial matrices, the matrix text format, the bipartite support graph and
//! the combinatorial necessary conditions for low-rank completability.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{subsets, Matrix};
use crate::rational::{parse_err, parse_rational, Rational};

/// Observed positions, 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pattern {
    rows: usize,
    cols: usize,
    observed: BTreeSet<(usize, usize)>,
}

impl Pattern {
    pub fn new(
        rows: usize,
        cols: usize,
        observed: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Pattern> {
        let observed: BTreeSet<_> = observed.into_iter().collect();
        if let Some(&(i, j)) = observed
            .iter()
            .find(|&&(i, j)| i == 0 || j == 0 || i > rows || j > cols)
        {
            return Err(Error::Index(format!("({i},{j}) outside {rows}x{cols}")));
        }
        Ok(Pattern {
            rows,
            cols,
            observed,
        })
    }

    /// Everything observed except `missing`.
    pub fn complement_of(rows: usize, cols: usize, missing: &[(usize, usize)]) -> Result<Pattern> {
        let all = (1..=rows).flat_map(|i| (1..=cols).map(move |j| (i, j)));
        Pattern::new(rows, cols, all.filter(|e| !missing.contains(e)))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn observed(&self) -> &BTreeSet<(usize, usize)> {
        &self.observed
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.observed.contains(&(i, j))
    }

    pub fn missing(&self) -> Vec<(usize, usize)> {
        (1..=self.rows)
            .flat_map(|i| (1..=self.cols).map(move |j| (i, j)))
            .filter(|e| !self.observed.contains(e))
            .collect()
    }
}

/// A matrix with some entries unobserved (`None`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PartialMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Option<Rational>>,
}

impl fmt::Debug for PartialMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PartialMatrix[{}]",
            self.to_text().trim_end().replace('\n', "; ")
        )
    }
}

impl fmt::Display for PartialMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl PartialMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Option<Rational>>) -> Result<PartialMatrix> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} partial matrix",
                entries.len()
            )));
        }
        Ok(PartialMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_matrix(m: &Matrix) -> PartialMatrix {
        PartialMatrix {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.entries().iter().cloned().map(Some).collect(),
        }
    }

    /// Restriction of a full matrix to a pattern.
    pub fn restrict(m: &Matrix, pattern: &Pattern) -> Result<PartialMatrix> {
        if (m.rows(), m.cols()) != (pattern.rows, pattern.cols) {
            return Err(Error::Dimension("pattern shape differs from matrix".into()));
        }
        let mut out = PartialMatrix::from_matrix(m);
        for (i, j) in pattern.missing() {
            out.entries[(i - 1) * out.cols + (j - 1)] = None;
        }
        Ok(out)
    }

    /// `m` with the listed positions hidden.
    pub fn hide(m: &Matrix, missing: &[(usize, usize)]) -> Result<PartialMatrix> {
        PartialMatrix::restrict(m, &Pattern::complement_of(m.rows(), m.cols(), missing)?)
    }

    /// Integer data with `None` for `?`; panics on ragged input.
    pub fn from_i64_opt<R: AsRef<[Option<i64>]>>(rows: &[R]) -> PartialMatrix {
        let c = rows[0].as_ref().len();
        let entries: Vec<_> = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.as_ref().len(), c);
                r.as_ref().iter().map(|x| x.map(crate::rational::int))
            })
            .collect();
        PartialMatrix::new(rows.len(), c, entries).expect("well-formed")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Entry `(i,j)`, 1-based; `None` if unobserved.
    pub fn get(&self, i: usize, j: usize) -> Option<&Rational> {
        assert!((1..=self.rows).contains(&i) && (1..=self.cols).contains(&j));
        self.entries[(i - 1) * self.cols + (j - 1)].as_ref()
    }

    pub fn set(&mut self, i: usize, j: usize, v: Option<Rational>) {
        assert!((1..=self.rows).contains(&i) && (1..=self.cols).contains(&j));
        self.entries[(i - 1) * self.cols + (j - 1)] = v;
    }

    pub fn is_observed(&self, i: usize, j: usize) -> bool {
        self.get(i, j).is_some()
    }

    pub fn pattern(&self) -> Pattern {
        let obs = (1..=self.rows)
            .flat_map(|i| (1..=self.cols).map(move |j| (i, j)))
            .filter(|&(i, j)| self.is_observed(i, j));
        Pattern::new(self.rows, self.cols, obs).expect("in range")
    }

    pub fn missing(&self) -> Vec<(usize, usize)> {
        self.pattern().missing()
    }

    /// Observed `(i, j, value)` triples in row-major order.
    pub fn observed_entries(&self) -> Vec<(usize, usize, &Rational)> {
        let mut out = Vec::new();
        for i in 1..=self.rows {
            for j in 1..=self.cols {
                if let Some(v) = self.get(i, j) {
                    out.push((i, j, v));
                }
            }
        }
        out
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().flatten().all(|x| !x.is_negative())
    }

    pub fn first_negative(&self) -> Option<(usize, usize)> {
        self.observed_entries()
            .into_iter()
            .find(|(_, _, v)| v.is_negative())
            .map(|(i, j, _)| (i, j))
    }

    pub fn is_complete(&self) -> bool {
        self.entries.iter().all(|x| x.is_some())
    }

    /// The full matrix if every entry is observed.
    pub fn to_matrix(&self) -> Option<Matrix> {
        let data: Option<Vec<_>> = self.entries.iter().cloned().collect();
        data.map(|d| Matrix::new(self.rows, self.cols, d).expect("shape"))
    }

    /// Fills every missing entry with `fill`.
    pub fn fill_missing(&self, fill: &Rational) -> Matrix {
        let data = self
            .entries
            .iter()
            .map(|x| x.clone().unwrap_or_else(|| fill.clone()))
            .collect();
        Matrix::new(self.rows, self.cols, data).expect("shape")
    }

    /// True if `full` agrees with every observed entry.
    pub fn agrees_with(&self, full: &Matrix) -> bool {
        full.shape() == self.shape()
            && self
                .observed_entries()
                .into_iter()
                .all(|(i, j, v)| full.get(i, j) == v)
    }

    pub fn transpose(&self) -> PartialMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 1..=self.cols {
            for i in 1..=self.rows {
                entries.push(self.get(i, j).cloned());
            }
        }
        PartialMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// Row/column selection with 1-based lists; result `(a,b)` is `self(rp[a], cp[b])`.
    pub fn select(&self, rp: &[usize], cp: &[usize]) -> Result<PartialMatrix> {
        if rp.iter().any(|&i| i == 0 || i > self.rows)
            || cp.iter().any(|&j| j == 0 || j > self.cols)
        {
            return Err(Error::Index("selection out of range".into()));
        }
        let mut entries = Vec::with_capacity(rp.len() * cp.len());
        for &i in rp {
            for &j in cp {
                entries.push(self.get(i, j).cloned());
            }
        }
        PartialMatrix::new(rp.len(), cp.len(), entries)
    }

    /// Parses the whitespace/line matrix format (`?` marks a missing entry).
    pub fn parse(text: &str) -> Result<PartialMatrix> {
        parse_partial(text)
    }

    /// Canonical text: one row per line, rationals as `p/q`, missing as `?`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for i in 1..=self.rows {
            let row: Vec<String> = (1..=self.cols)
                .map(|j| {
                    self.get(i, j)
                        .map_or_else(|| "?".to_string(), |v| v.to_string())
                })
                .collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }
}

pub fn parse_partial(text: &str) -> Result<PartialMatrix> {
    let mut entries = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for (ln, line) in text.lines().enumerate() {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        match cols {
            None => cols = Some(toks.len()),
            Some(c) if c != toks.len() => {
                return Err(Error::Ragged {
                    line: ln + 1,
                    found: toks.len(),
                    expected: c,
                })
            }
            _ => {}
        }
        for t in toks {
            if t == "?" {
                entries.push(None);
            } else {
                entries.push(Some(parse_rational(t).map_err(|e| parse_err(ln + 1, e))?));
            }
        }
        rows += 1;
    }
    let Some(cols) = cols else {
        return Err(parse_err(0, "empty matrix".into()));
    };
    PartialMatrix::new(rows, cols, entries)
}

pub fn serialize_partial(m: &PartialMatrix) -> String {
    m.to_text()
}

/// Bipartite graph rows-vs-columns; `nonzero_edges` is the filtered variant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportGraph {
    pub rows: usize,
    pub cols: usize,
    pub edges: Vec<(usize, usize)>,
    pub nonzero_edges: Vec<(usize, usize)>,
}

impl SupportGraph {
    /// Component label per vertex: rows are `0..p`, columns are `p..p+q`.
    pub fn components(&self, nonzero_only: bool) -> Vec<usize> {
        let edges = if nonzero_only {
            &self.nonzero_edges
        } else {
            &self.edges
        };
        let n = self.rows + self.cols;
        let mut adj = vec![Vec::new(); n];
        for &(i, j) in edges {
            adj[i - 1].push(self.rows + j - 1);
            adj[self.rows + j - 1].push(i - 1);
        }
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if label[w] == usize::MAX {
                        label[w] = next;
                        queue.push_back(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    /// True if the filtered graph is connected on all vertices.
    pub fn filtered_connected(&self) -> bool {
        self.components(true).iter().all(|&c| c == 0)
    }
}

pub fn support_graph(m: &PartialMatrix) -> SupportGraph {
    let obs = m.observed_entries();
    SupportGraph {
        rows: m.rows(),
        cols: m.cols(),
        edges: obs.iter().map(|&(i, j, _)| (i, j)).collect(),
        nonzero_edges: obs
            .iter()
            .filter(|(_, _, v)| !v.is_zero())
            .map(|&(i, j, _)| (i, j))
            .collect(),
    }
}

/// Zero-line flags of a partial matrix.
///
/// `row`: every observed zero has an all-zero observed row. `column`: same
/// for columns. `per_entry`: every observed zero has its row or its column
/// all-zero (the form that characterizes rank-one completability).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZeroLine {
    pub row: bool,
    pub column: bool,
    pub per_entry: bool,
}

pub fn zero_line_property(m: &PartialMatrix) -> ZeroLine {
    let row_zero: Vec<bool> = (1..=m.rows())
        .map(|i| (1..=m.cols()).all(|j| m.get(i, j).map_or(true, |v| v.is_zero())))
        .collect();
    let col_zero: Vec<bool> = (1..=m.cols())
        .map(|j| (1..=m.rows()).all(|i| m.get(i, j).map_or(true, |v| v.is_zero())))
        .collect();
    let zeros: Vec<(usize, usize)> = m
        .observed_entries()
        .into_iter()
        .filter(|(_, _, v)| v.is_zero())
        .map(|(i, j, _)| (i, j))
        .collect();
    ZeroLine {
        row: zeros.iter().all(|&(i, _)| row_zero[i - 1]),
        column: zeros.iter().all(|&(_, j)| col_zero[j - 1]),
        per_entry: zeros
            .iter()
            .all(|&(i, j)| row_zero[i - 1] || col_zero[j - 1]),
    }
}

/// Row and column multipliers with `m_ij = u_i v_j` on every nonzero observed
/// entry, one root scaled to 1 per component of the filtered graph. `None` if
/// the nonzero entries are inconsistent.
pub(crate) fn potentials(
    m: &PartialMatrix,
) -> Option<(Vec<Option<Rational>>, Vec<Option<Rational>>)> {
    let (p, q) = m.shape();
    let g = support_graph(m);
    let mut adj: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); p + q];
    for &(i, j) in &g.nonzero_edges {
        let v = m.get(i, j).expect("observed").clone();
        adj[i - 1].push((p + j - 1, v.clone()));
        adj[p + j - 1].push((i - 1, v));
    }
    let mut pot: Vec<Option<Rational>> = vec![None; p + q];
    for s in 0..p + q {
        if pot[s].is_some() || adj[s].is_empty() {
            continue;
        }
        pot[s] = Some(Rational::from_integer(1.into()));
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            let pv = pot[v].clone().expect("assigned");
            for (w, val) in &adj[v] {
                let want = val / &pv;
                match &pot[*w] {
                    None => {
                        pot[*w] = Some(want);
                        queue.push_back(*w);
                    }
                    Some(x) if *x != want => return None,
                    _ => {}
                }
            }
        }
    }
    let u = pot[..p].to_vec();
    let v = pot[p..].to_vec();
    Some((u, v))
}

/// Multiplicative cycle equation on every cycle of the support graph.
///
/// Nonzero entries must admit consistent potentials. A zero entry `(i,j)`
/// breaks a cycle equation exactly when column `j` can reach row `i` through
/// nonzero entries traversed column-to-row and arbitrary entries traversed
/// row-to-column.
pub fn cycle_property(m: &PartialMatrix) -> bool {
    if potentials(m).is_none() {
        return false;
    }
    let (p, q) = m.shape();
    let zl = zero_line_property(m);
    let obs = m.observed_entries();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); p + q];
    for &(i, j, v) in &obs {
        out[i - 1].push(p + j - 1);
        if !v.is_zero() {
            out[p + j - 1].push(i - 1);
        }
    }
    let row_zero = |i: usize| (1..=q).all(|j| m.get(i, j).map_or(true, |v| v.is_zero()));
    let col_zero = |j: usize| (1..=p).all(|i| m.get(i, j).map_or(true, |v| v.is_zero()));
    for &(i, j, v) in &obs {
        if !v.is_zero() || (zl.per_entry && (row_zero(i) || col_zero(j))) {
            continue;
        }
        let mut seen = vec![false; p + q];
        let mut queue = VecDeque::from([p + j - 1]);
        seen[p + j - 1] = true;
        while let Some(x) = queue.pop_front() {
            if x == i - 1 {
                return false;
            }
            for &y in &out[x] {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    true
}

/// Rank of the largest fully observed column block over `rows`.
fn full_block_rank(m: &PartialMatrix, rows: &[usize]) -> usize {
    let cols: Vec<usize> = (1..=m.cols())
        .filter(|&j| rows.iter().all(|&i| m.is_observed(i, j)))
        .collect();
    if cols.is_empty() {
        return 0;
    }
    m.select(rows, &cols)
        .ok()
        .and_then(|s| s.to_matrix())
        .map_or(0, |s| s.rank())
}

/// r×r minors zero-consistency, read on fully observed submatrices.
pub fn minors_zero_consistent(m: &PartialMatrix, r: usize) -> bool {
    assert!(r >= 1, "rank bound must be positive");
    let t = m.transpose();
    for rows in subsets(m.rows(), r) {
        for cols in subsets(m.cols(), r) {
            let Some(block) = m.select(&rows, &cols).ok().and_then(|s| s.to_matrix()) else {
                continue;
            };
            if block.rank() >= r {
                continue;
            }
            if full_block_rank(m, &rows) > r - 1 && full_block_rank(&t, &cols) > r - 1 {
                return false;
            }
        }
    }
    true
}
