use std::collections::VecDeque;
use std::fmt;

use num::{Signed, Zero};
use serde_json::{json, Value};

use super::family::{
    family_11_21, family_11_22, hull_with, slice_numerators, split_point, End, FamilyMember,
    Interval, NestedFamily, TwoMissing,
};
use crate::error::{Error, Result};
use crate::geometry::{nested_triangle, HalfPlane, NestedPair, Point, Polygon2, Triangle};
use crate::linalg::{subsets, Matrix};
use crate::nnrank3::{low_rank_witness, nn_rank_at_most_3};
use crate::partial::PartialMatrix;
use crate::rational::{sign, Rational};

/// Block-padded completion: `W = diag(W_I, Id)`, `H = [H_I; rest]`.
#[derive(Clone, Debug)]
pub struct Padded {
    pub completion: Matrix,
    pub w: Matrix,
    pub h: Matrix,
    /// Fully observed rows (or columns, when `by_columns`) carrying the low-rank block.
    pub block: Vec<usize>,
    pub by_columns: bool,
    /// Nonnegative rank bound of the block.
    pub k: usize,
}

fn pad_rows(m: &PartialMatrix, r: usize) -> Result<Option<Padded>> {
    let (p, q) = m.shape();
    let full_rows: Vec<usize> = (1..=p)
        .filter(|&i| (1..=q).all(|j| m.is_observed(i, j)))
        .collect();
    let filled = m.fill_missing(&Rational::zero());
    for size in (0..=full_rows.len()).rev() {
        if p - size > r {
            break;
        }
        for pick in subsets(full_rows.len(), size) {
            let rows: Vec<usize> = pick.iter().map(|&k| full_rows[k - 1]).collect();
            let rest: Vec<usize> = (1..=p).filter(|i| !rows.contains(i)).collect();
            let (k, block_w, block_h) = if rows.is_empty() {
                (0, None, None)
            } else {
                let block = filled.submatrix(&rows, &(1..=q).collect::<Vec<_>>())?;
                let rk = block.rank();
                if p - rows.len() + rk > r {
                    continue;
                }
                if rk == 0 {
                    (0, None, None)
                } else if rk <= 2 {
                    let (w, h) = low_rank_witness(&block, rk);
                    (rk, Some(w), Some(h))
                } else if rk == 3 {
                    match nn_rank_at_most_3(&block)?.witness {
                        Some((w, h)) => (3, Some(w), Some(h)),
                        None => continue,
                    }
                } else {
                    continue;
                }
            };
            if p - rows.len() + k > r {
                continue;
            }
            let size_w = (k + rest.len()).max(1);
            let mut w = Matrix::zeros(p, size_w);
            let mut h = Matrix::zeros(size_w, q);
            if let (Some(bw), Some(bh)) = (&block_w, &block_h) {
                for (a, &i) in rows.iter().enumerate() {
                    for c in 1..=k {
                        w.set(i, c, bw.get(a + 1, c).clone());
                    }
                }
                for c in 1..=k {
                    for j in 1..=q {
                        h.set(c, j, bh.get(c, j).clone());
                    }
                }
            }
            for (a, &i) in rest.iter().enumerate() {
                w.set(i, k + a + 1, Rational::from_integer(1.into()));
                for j in 1..=q {
                    h.set(k + a + 1, j, filled.get(i, j).clone());
                }
            }
            if w.mul(&h)? != filled {
                return Err(Error::Precondition(
                    "padded factorization failed re-verification".into(),
                ));
            }
            return Ok(Some(Padded {
                completion: filled,
                w,
                h,
                block: rows,
                by_columns: false,
                k,
            }));
        }
    }
    Ok(None)
}

/// Completion with nonnegative rank `≤ r` from a fully observed row (or column)
/// block of nonnegative rank `k` with at most `r - k` rows (columns) left over.
/// Missing entries outside the block are set to zero.
pub fn special_case_low_rank(m: &PartialMatrix, r: usize) -> Result<Option<Padded>> {
    if let Some((i, j)) = m.first_negative() {
        return Err(Error::Negative(i, j));
    }
    if let Some(p) = pad_rows(m, r)? {
        return Ok(Some(p));
    }
    Ok(pad_rows(&m.transpose(), r)?.map(|p| Padded {
        completion: p.completion.transpose(),
        w: p.h.transpose(),
        h: p.w.transpose(),
        block: p.block,
        by_columns: true,
        k: p.k,
    }))
}

/// Points where `line` meets the boundary of `poly`.
fn line_hits(line: &HalfPlane, poly: &Polygon2) -> Vec<Point> {
    let v = poly.vertices();
    let n = v.len();
    let mut out = Vec::new();
    for i in 0..n {
        let (a, b) = (&v[i], &v[(i + 1) % n]);
        let (ha, hb) = (line.eval(a), line.eval(b));
        if ha.is_zero() {
            out.push(a.clone());
        }
        if (ha.is_positive() && hb.is_negative()) || (ha.is_negative() && hb.is_positive()) {
            let s = &ha / (&ha - &hb);
            out.push(a.add(&b.sub(a).scale(&s)));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// A feasible `t*` whose moving vertex lies in the fixed triangle or on one of
/// its edge lines inside `Q`, making `P_t*` itself a triangle.
pub fn sufficient_11_21(fam: &NestedFamily) -> Result<Option<Rational>> {
    if fam.kind != TwoMissing::SameColumn {
        return Err(Error::Precondition(
            "sufficient_11_21 needs the (1,1),(2,1) family".into(),
        ));
    }
    let Some(line) = &fam.trajectory else {
        return Ok(None);
    };
    let fixed = Polygon2::hull(&fam.fixed_points)?;
    let q = Polygon2::from_halfplanes(&fam.fixed_facets)?;
    let mut cands = line_hits(line, &fixed);
    if cands.len() >= 2 {
        let (a, b) = (cands[0].clone(), cands[cands.len() - 1].clone());
        cands.push(a.add(&b).scale(&Rational::new(1.into(), 2.into())));
    }
    let v = fixed.vertices();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if let Some(x) = line.meet(&HalfPlane::left_of(&v[i], &v[j])) {
                if q.contains_point(&x) {
                    cands.push(x);
                }
            }
        }
    }
    for x in cands {
        let Some(t) = fam.t_for_point(&x) else {
            continue;
        };
        if !fam.is_feasible(&t) {
            continue;
        }
        if fam.member(&t)?.pair.inner.len() <= 3 {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// Sign profile of the first row of `A(t)` in one of the three simplicial cases.
pub fn simplicial_sign_check(fam: &NestedFamily, t: &Rational) -> Result<bool> {
    if fam.kind != TwoMissing::Diagonal {
        return Err(Error::Precondition(
            "simplicial_sign_check needs the (1,1),(2,2) family".into(),
        ));
    }
    if !fam.is_feasible(t) {
        return Err(Error::Infeasible(format!(
            "t = {t} is a pole or gives a negative completion"
        )));
    }
    let s = fam.first_row_signs(t)?;
    let neg = s.iter().filter(|&&x| x < 0).count();
    let zero = s.iter().filter(|&&x| x == 0).count();
    let pos = s.iter().filter(|&&x| x > 0).count();
    Ok(neg == 0 || (neg == 2 && pos == 1) || (neg == 1 && zero == 1 && pos == 1))
}

/// Row/column placement of the canonical position: canonical `(a,b)` is
/// source `(rows[a], cols[b])`, the source being the input or its transpose.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalization {
    pub transposed: bool,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl Normalization {
    fn source(&self, m: &PartialMatrix) -> PartialMatrix {
        if self.transposed {
            m.transpose()
        } else {
            m.clone()
        }
    }

    pub fn apply(&self, m: &PartialMatrix) -> Result<PartialMatrix> {
        self.source(m).select(&self.rows, &self.cols)
    }

    pub fn restore(&self, c: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(c.rows(), c.cols());
        for (a, &i) in self.rows.iter().enumerate() {
            for (b, &j) in self.cols.iter().enumerate() {
                out.set(i, j, c.get(a + 1, b + 1).clone());
            }
        }
        if self.transposed {
            out.transpose()
        } else {
            out
        }
    }

    pub fn restore_factors(&self, w: &Matrix, h: &Matrix) -> (Matrix, Matrix) {
        let k = w.cols();
        let mut w2 = Matrix::zeros(w.rows(), k);
        for (a, &i) in self.rows.iter().enumerate() {
            for c in 1..=k {
                w2.set(i, c, w.get(a + 1, c).clone());
            }
        }
        let mut h2 = Matrix::zeros(k, h.cols());
        for (b, &j) in self.cols.iter().enumerate() {
            for c in 1..=k {
                h2.set(c, j, h.get(c, b + 1).clone());
            }
        }
        if self.transposed {
            (h2.transpose(), w2.transpose())
        } else {
            (w2, h2)
        }
    }
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

fn others(n: usize, skip: &[usize]) -> Vec<usize> {
    (1..=n).filter(|i| !skip.contains(i)).collect()
}

/// Every placement of the holes in canonical position, with the canonical text.
fn placements(m: &PartialMatrix) -> Result<(TwoMissing, Vec<(Normalization, PartialMatrix)>)> {
    let holes = m.missing();
    let ((i1, j1), (i2, j2)) = (holes[0], holes[1]);
    let mut out = Vec::new();
    let kind;
    if j1 == j2 || i1 == i2 {
        kind = TwoMissing::SameColumn;
        let transposed = i1 == i2;
        let (ra, rb, col) = if transposed {
            (j1, j2, i1)
        } else {
            (i1, i2, j1)
        };
        for (ha, hb) in [(ra, rb), (rb, ra)] {
            for rp in permutations(&others(4, &[ha, hb])) {
                for cp in permutations(&others(4, &[col])) {
                    let n = Normalization {
                        transposed,
                        rows: [vec![ha, hb], rp.clone()].concat(),
                        cols: [vec![col], cp].concat(),
                    };
                    let c = n.apply(m)?;
                    out.push((n, c));
                }
            }
        }
    } else {
        kind = TwoMissing::Diagonal;
        for transposed in [false, true] {
            let hs = if transposed {
                [(j1, i1), (j2, i2)]
            } else {
                [(i1, j1), (i2, j2)]
            };
            for (a, b) in [(hs[0], hs[1]), (hs[1], hs[0])] {
                for rp in permutations(&others(4, &[a.0, b.0])) {
                    for cp in permutations(&others(4, &[a.1, b.1])) {
                        let n = Normalization {
                            transposed,
                            rows: [vec![a.0, b.0], rp.clone()].concat(),
                            cols: [vec![a.1, b.1], cp].concat(),
                        };
                        let c = n.apply(m)?;
                        out.push((n, c));
                    }
                }
            }
        }
    }
    // order by content so the choice does not depend on the input's ordering
    out.sort_by_key(|(n, c)| (c.to_text(), n.transposed));
    Ok((kind, out))
}

fn rank_of(m: &Matrix, r: &[usize], c: &[usize]) -> usize {
    m.submatrix(r, c).expect("in range").rank()
}

fn family_ready(kind: TwoMissing, c: &PartialMatrix) -> bool {
    let m = c.fill_missing(&Rational::zero());
    match kind {
        TwoMissing::SameColumn => {
            rank_of(&m, &[1, 2, 3, 4], &[2, 3, 4]) == 3
                && rank_of(&m, &[3, 4], &[2, 3, 4]) == 2
                && rank_of(&m, &[2, 3, 4], &[2, 3, 4]) == 3
        }
        TwoMissing::Diagonal => {
            rank_of(&m, &[1, 3, 4], &[2, 3, 4]) == 3
                && rank_of(&m, &[2, 3, 4], &[1, 3, 4]) == 3
                && rank_of(&m, &[2, 3, 4], &[3, 4]) == 2
                && rank_of(&m, &[3, 4], &[2, 3, 4]) == 2
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Completable,
    NotCompletable,
    Unknown,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Completable => "Completable",
            Verdict::NotCompletable => "NotCompletable",
            Verdict::Unknown => "Unknown",
        }
    }
}

/// One parameter value tried directly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    pub t: Rational,
    pub triangle: bool,
}

/// Envelope over `[lo, hi]`: every `P_t` contains `inner` and every `Q_t`
/// lies in `outer` (`None` when all `Q_t` are empty).
#[derive(Clone, Debug)]
pub struct EnvelopePiece {
    pub lo: End,
    pub hi: End,
    pub inner: Polygon2,
    pub outer: Option<Polygon2>,
    /// No triangle between `inner` and `outer`.
    pub refuted: bool,
    /// `P` at one end contains `P` at the other.
    pub inner_monotone: bool,
    pub outer_monotone: bool,
}

#[derive(Clone, Debug)]
pub struct Nn3Certificate {
    pub verdict: Verdict,
    pub pattern: TwoMissing,
    /// Which step decided: `padding`, `zero-column`, `rank-obstruction`,
    /// `no-nonnegative-completion`, `sufficient-line`, `simplicial-sign`,
    /// `sampled`, `envelope`, or `undecided`.
    pub route: &'static str,
    pub normalization: Normalization,
    pub feasible: Vec<Interval>,
    pub t_star: Option<Rational>,
    /// Completion in the input's coordinates.
    pub completion: Option<Matrix>,
    /// Nonnegative factors of `completion`, input coordinates.
    pub witness: Option<(Matrix, Matrix)>,
    /// Triangle in the canonical family's slice coordinates.
    pub triangle: Option<Triangle>,
    /// `(P_t*, Q_t*)` in canonical slice coordinates.
    pub pair: Option<NestedPair>,
    pub envelope: Vec<EnvelopePiece>,
    pub samples: Vec<Sample>,
}

impl Nn3Certificate {
    fn new(pattern: TwoMissing, normalization: Normalization) -> Nn3Certificate {
        Nn3Certificate {
            verdict: Verdict::Unknown,
            pattern,
            route: "undecided",
            normalization,
            feasible: Vec::new(),
            t_star: None,
            completion: None,
            witness: None,
            triangle: None,
            pair: None,
            envelope: Vec::new(),
            samples: Vec::new(),
        }
    }

    /// Exact re-verification of the payload against the source.
    pub fn verify(&self, m: &PartialMatrix) -> bool {
        match self.verdict {
            Verdict::Completable => {
                let (Some(c), Some((w, h))) = (&self.completion, &self.witness) else {
                    return false;
                };
                let tri_ok = match (&self.triangle, &self.pair) {
                    (Some(t), Some(p)) => t.is_nested(&p.inner, &p.outer),
                    (None, None) => true,
                    _ => false,
                };
                m.agrees_with(c)
                    && c.is_nonnegative()
                    && c.rank() <= 3
                    && w.cols() <= 3
                    && w.is_nonnegative()
                    && h.is_nonnegative()
                    && w.mul(h).is_ok_and(|x| &x == c)
                    && tri_ok
            }
            Verdict::NotCompletable => self.envelope.iter().all(|p| p.refuted),
            Verdict::Unknown => self.samples.iter().all(|s| !s.triangle),
        }
    }

    pub fn to_json(&self) -> Value {
        let q = |x: &Rational| Value::String(x.to_string());
        let mat = |m: &Matrix| {
            Value::Array(
                m.to_rows()
                    .iter()
                    .map(|r| Value::Array(r.iter().map(q).collect()))
                    .collect(),
            )
        };
        let pts =
            |ps: &[Point]| Value::Array(ps.iter().map(|p| json!([q(&p.x), q(&p.y)])).collect());
        json!({
            "verdict": self.verdict.name(),
            "pattern": self.pattern.tag(),
            "route": self.route,
            "normalization": {
                "transposed": self.normalization.transposed,
                "rows": self.normalization.rows,
                "cols": self.normalization.cols,
            },
            "feasible": self.feasible.iter().map(|iv| json!({
                "lo": iv.lo.render(),
                "hi": iv.hi.render(),
                "lo_open": iv.lo_open,
                "hi_open": iv.hi_open,
            })).collect::<Vec<_>>(),
            "t_star": self.t_star.as_ref().map(q),
            "completion": self.completion.as_ref().map(mat),
            "witness": self.witness.as_ref().map(|(w, h)| json!({"w": mat(w), "h": mat(h)})),
            "triangle": self.triangle.as_ref().map(|t| pts(t.vertices())),
            "envelope": self.envelope.iter().map(|p| json!({
                "t_lo": p.lo.render(),
                "t_hi": p.hi.render(),
                "inner": pts(p.inner.vertices()),
                "outer": p.outer.as_ref().map(|o| pts(o.vertices())),
                "refuted": p.refuted,
                "inner_monotone": p.inner_monotone,
                "outer_monotone": p.outer_monotone,
            })).collect::<Vec<_>>(),
            "samples": self.samples.iter().map(|s| json!({"t": q(&s.t), "triangle": s.triangle})).collect::<Vec<_>>(),
        })
    }
}

fn fmt_interval(iv: &Interval) -> String {
    format!(
        "{}{}, {}{}",
        if iv.lo_open { "(" } else { "[" },
        iv.lo.render(),
        iv.hi.render(),
        if iv.hi_open { ")" } else { "]" }
    )
}

impl fmt::Display for Nn3Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verdict: {}", self.verdict.name())?;
        writeln!(f, "pattern: {}", self.pattern.tag())?;
        writeln!(f, "route: {}", self.route)?;
        let iv: Vec<String> = self.feasible.iter().map(fmt_interval).collect();
        writeln!(
            f,
            "feasible t: {}",
            if iv.is_empty() {
                "empty".into()
            } else {
                iv.join(" u ")
            }
        )?;
        if let Some(t) = &self.t_star {
            writeln!(f, "t*: {t}")?;
        }
        if let Some(c) = &self.completion {
            writeln!(f, "completion:\n{c}")?;
        }
        if let Some((w, h)) = &self.witness {
            writeln!(f, "W:\n{w}")?;
            writeln!(f, "H:\n{h}")?;
        }
        if let Some(t) = &self.triangle {
            let v = t.vertices();
            writeln!(f, "triangle: {} {} {}", v[0], v[1], v[2])?;
        }
        if !self.envelope.is_empty() {
            let refuted = self.envelope.iter().filter(|p| p.refuted).count();
            writeln!(
                f,
                "envelope pieces: {} ({} refuted)",
                self.envelope.len(),
                refuted
            )?;
            for p in &self.envelope {
                writeln!(
                    f,
                    "  [{}, {}] {}",
                    p.lo.render(),
                    p.hi.render(),
                    if p.refuted { "no triangle" } else { "open" }
                )?;
            }
        }
        let tried: Vec<String> = self.samples.iter().map(|s| s.t.to_string()).collect();
        write!(f, "samples: {}", tried.join(" "))
    }
}

/// Moving vertex at an endpoint (limit at infinity); `None` if it escapes.
fn vertex_at(fam: &NestedFamily, e: &End) -> Option<Point> {
    match e {
        End::At(t) => fam.moving_point(t),
        _ => {
            let (s, x, y) = slice_numerators(fam.slice, &fam.moving_vertex);
            let d = [&s, &x, &y].iter().filter_map(|p| p.degree()).max()?;
            let sd = s.coeff(d);
            (!sd.is_zero()).then(|| Point::new(x.coeff(d) / &sd, y.coeff(d) / &sd))
        }
    }
}

/// `Q` at an endpoint, oriented by the denominator sign `sigma` on the piece;
/// outer `None` if it cannot be formed, inner `None` if empty.
fn outer_at(fam: &NestedFamily, e: &End, sigma: i8) -> Option<Option<Polygon2>> {
    let mut hs = fam.fixed_facets.clone();
    if let Some(n) = &fam.moving_facet {
        let pick = |k: usize| -> [Rational; 3] { [n[0].coeff(k), n[1].coeff(k), n[2].coeff(k)] };
        let (c, dir) = match e {
            End::At(t) => ([n[0].eval(t), n[1].eval(t), n[2].eval(t)], 1),
            End::PosInf | End::NegInf => {
                let lin = pick(1);
                let dir = if *e == End::PosInf { 1 } else { -1 };
                if lin.iter().all(|x| x.is_zero()) {
                    (pick(0), 1)
                } else {
                    (lin, dir)
                }
            }
        };
        let s = Rational::from_integer((sigma * dir).into());
        hs.push(HalfPlane {
            c0: &c[0] * &s,
            cx: &c[1] * &s,
            cy: &c[2] * &s,
        });
    }
    match Polygon2::from_halfplanes(&hs) {
        Ok(p) => Some(Some(p)),
        Err(Error::Unbounded(_)) => None,
        Err(_) => Some(None),
    }
}

fn piece_envelope(
    fam: &NestedFamily,
    lo: &End,
    hi: &End,
    mid: &Rational,
) -> Result<Option<EnvelopePiece>> {
    let sigma = sign(&fam.facet_den.eval(mid));
    let (Some(plo), Some(phi)) = (vertex_at(fam, lo), vertex_at(fam, hi)) else {
        return Ok(None);
    };
    let (Some(qlo), Some(qhi)) = (outer_at(fam, lo, sigma), outer_at(fam, hi, sigma)) else {
        return Ok(None);
    };
    let p_lo = hull_with(&fam.fixed_points, Some(&plo))?;
    let p_hi = hull_with(&fam.fixed_points, Some(&phi))?;
    let Ok(inner) = p_lo.intersect(&p_hi) else {
        return Ok(None);
    };
    let inner_monotone = p_lo.contains_polygon(&p_hi) || p_hi.contains_polygon(&p_lo);
    let outer_monotone = match (&qlo, &qhi) {
        (Some(a), Some(b)) => a.contains_polygon(b) || b.contains_polygon(a),
        _ => true,
    };
    let verts: Vec<Point> = qlo
        .iter()
        .chain(qhi.iter())
        .flat_map(|q| q.vertices().to_vec())
        .collect();
    let outer = if verts.is_empty() {
        None
    } else {
        Some(Polygon2::hull(&verts)?)
    };
    let refuted = match &outer {
        None => true,
        Some(o) if !o.contains_polygon(&inner) => true,
        Some(o) => nested_triangle(&NestedPair::from_polygons(inner.clone(), o.clone()))?.is_none(),
    };
    Ok(Some(EnvelopePiece {
        lo: lo.clone(),
        hi: hi.clone(),
        inner,
        outer,
        refuted,
        inner_monotone,
        outer_monotone,
    }))
}

/// Interior point of `[lo, hi]` used to split it.
fn split(lo: &End, hi: &End) -> Rational {
    Interval {
        lo: lo.clone(),
        hi: hi.clone(),
        lo_open: false,
        hi_open: false,
    }
    .interior_point()
}

fn sample_points(fam: &NestedFamily, crit: &[Rational]) -> Vec<Rational> {
    let mut pts: Vec<Rational> = Vec::new();
    for iv in &fam.feasible {
        let mut local: Vec<Rational> = crit.iter().filter(|t| iv.contains(t)).cloned().collect();
        for (e, open) in [(&iv.lo, iv.lo_open), (&iv.hi, iv.hi_open)] {
            if let (End::At(t), false) = (e, open) {
                local.push(t.clone());
            }
        }
        local.sort();
        local.dedup();
        let mut extra = Vec::new();
        for w in local.windows(2) {
            extra.push(split_point(&w[0], &w[1]));
        }
        let step = |x: &Rational, k: i64| {
            x.abs().max(Rational::from_integer(1.into())) * Rational::from_integer(k.into())
        };
        if iv.hi == End::PosInf {
            let base = local.last().cloned().unwrap_or_else(|| iv.interior_point());
            extra.extend([1, 10, 100].map(|k| &base + step(&base, k)));
        }
        if iv.lo == End::NegInf {
            let base = local
                .first()
                .cloned()
                .unwrap_or_else(|| iv.interior_point());
            extra.extend([1, 10, 100].map(|k| &base - step(&base, k)));
        }
        if local.is_empty() && extra.is_empty() {
            extra.push(iv.interior_point());
        }
        pts.extend(local);
        pts.extend(extra.into_iter().filter(|t| iv.contains(t)));
    }
    pts.sort();
    pts.dedup();
    pts
}

/// Upper bound on envelope pieces examined before giving up.
pub const ENVELOPE_BUDGET: usize = 4096;

/// Nesting depth of splits below one critical piece. Near a configuration
/// that is only barely without a triangle the envelope never refutes, so
/// splitting there must stop.
pub const SPLIT_DEPTH: usize = 24;

/// Decides whether a nonnegative 4×4 partial matrix with two missing entries
/// has a completion of nonnegative rank at most three.
pub fn decide_nn3_two_missing(m: &PartialMatrix) -> Result<Nn3Certificate> {
    if m.shape() != (4, 4) {
        return Err(Error::Unsupported(format!(
            "need a 4x4 partial matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if m.missing().len() != 2 {
        return Err(Error::Unsupported(format!(
            "need exactly two missing entries, got {}",
            m.missing().len()
        )));
    }
    if let Some((i, j)) = m.first_negative() {
        return Err(Error::Negative(i, j));
    }
    let (kind, cands) = placements(m)?;
    let ready = cands.iter().find(|(_, c)| family_ready(kind, c)).cloned();
    let (norm, canon) = ready.clone().unwrap_or_else(|| cands[0].clone());
    let mut cert = Nn3Certificate::new(kind, norm.clone());

    if let Some(p) = special_case_low_rank(m, 3)? {
        cert.verdict = Verdict::Completable;
        cert.route = "padding";
        cert.completion = Some(p.completion);
        cert.witness = Some((p.w, p.h));
        return Ok(cert);
    }
    let obs = canon.fill_missing(&Rational::zero());
    if kind == TwoMissing::SameColumn {
        if obs.get(3, 1).is_zero() && obs.get(4, 1).is_zero() {
            // zero column: the other three columns factor through themselves
            let w = obs.submatrix(&[1, 2, 3, 4], &[2, 3, 4])?;
            let mut h = Matrix::zeros(3, 4);
            for k in 1..=3 {
                h.set(k, k + 1, Rational::from_integer(1.into()));
            }
            cert.verdict = Verdict::Completable;
            cert.route = "zero-column";
            cert.completion = Some(norm.restore(&obs));
            cert.witness = Some(norm.restore_factors(&w, &h));
            return Ok(cert);
        }
        if rank_of(&obs, &[3, 4], &[2, 3, 4]) <= 1
            && rank_of(&obs, &[3, 4], &[1, 2, 3, 4]) == 2
            && rank_of(&obs, &[1, 2, 3, 4], &[2, 3, 4]) == 3
        {
            cert.verdict = Verdict::NotCompletable;
            cert.route = "rank-obstruction";
            return Ok(cert);
        }
    }
    if ready.is_none() {
        return Err(Error::Unsupported(format!(
            "{} pattern is rank-degenerate outside the supported family construction",
            kind.tag()
        )));
    }
    let fam = match kind {
        TwoMissing::SameColumn => family_11_21(&canon)?,
        TwoMissing::Diagonal => family_11_22(&canon)?,
    };
    cert.feasible = fam.feasible.clone();
    if fam.feasible.is_empty() {
        cert.verdict = Verdict::NotCompletable;
        cert.route = "no-nonnegative-completion";
        return Ok(cert);
    }
    let crit = fam.critical_values();
    let samples = sample_points(&fam, &crit);

    let found = |cert: &mut Nn3Certificate, t: &Rational, route: &'static str| -> Result<bool> {
        let Some((mem, tri, w, h)) = fam.triangle_at(t)? else {
            return Ok(false);
        };
        finish(cert, &norm, mem, tri, w, h, route);
        Ok(true)
    };

    match kind {
        TwoMissing::SameColumn => {
            if let Some(t) = sufficient_11_21(&fam)? {
                if found(&mut cert, &t, "sufficient-line")? {
                    return Ok(cert);
                }
            }
        }
        TwoMissing::Diagonal => {
            for t in &samples {
                if simplicial_sign_check(&fam, t)? && found(&mut cert, t, "simplicial-sign")? {
                    return Ok(cert);
                }
            }
        }
    }
    for t in &samples {
        let hit = found(&mut cert, t, "sampled")?;
        cert.samples.push(Sample {
            t: t.clone(),
            triangle: hit,
        });
        if hit {
            return Ok(cert);
        }
    }

    // piecewise envelope, split at critical values and bisected on demand
    let mut queue: VecDeque<(End, End, usize)> = VecDeque::new();
    for iv in &fam.feasible {
        let mut cuts: Vec<End> = vec![iv.lo.clone()];
        cuts.extend(
            crit.iter()
                .filter(|t| iv.contains(t))
                .map(|t| End::At(t.clone())),
        );
        cuts.push(iv.hi.clone());
        cuts.dedup();
        if cuts.len() == 1 {
            cuts.push(cuts[0].clone());
        }
        for w in cuts.windows(2) {
            queue.push_back((w[0].clone(), w[1].clone(), 0));
        }
    }
    let mut done: Vec<EnvelopePiece> = Vec::new();
    let mut open = false;
    let mut budget = ENVELOPE_BUDGET;
    while let Some((lo, hi, depth)) = queue.pop_front() {
        let mid = split(&lo, &hi);
        let piece = piece_envelope(&fam, &lo, &hi, &mid)?;
        if let Some(p) = &piece {
            if p.refuted {
                done.push(p.clone());
                continue;
            }
        }
        if lo == hi || budget == 0 || depth >= SPLIT_DEPTH {
            open = true;
            done.extend(piece);
            continue;
        }
        budget -= 1;
        if fam.is_feasible(&mid) {
            let hit = found(&mut cert, &mid, "sampled")?;
            cert.samples.push(Sample {
                t: mid.clone(),
                triangle: hit,
            });
            if hit {
                return Ok(cert);
            }
        }
        queue.push_back((lo, End::At(mid.clone()), depth + 1));
        queue.push_back((End::At(mid), hi, depth + 1));
    }
    done.sort_by(|a, b| (&a.lo, &a.hi).cmp(&(&b.lo, &b.hi)));
    cert.envelope = done;
    cert.samples.sort_by(|a, b| a.t.cmp(&b.t));
    cert.samples.dedup();
    if open {
        cert.verdict = Verdict::Unknown;
        cert.route = "undecided";
    } else {
        cert.verdict = Verdict::NotCompletable;
        cert.route = "envelope";
    }
    Ok(cert)
}

fn finish(
    cert: &mut Nn3Certificate,
    norm: &Normalization,
    mem: FamilyMember,
    tri: Triangle,
    w: Matrix,
    h: Matrix,
    route: &'static str,
) {
    cert.verdict = Verdict::Completable;
    cert.route = route;
    cert.t_star = Some(mem.t.clone());
    cert.completion = Some(norm.restore(&mem.completion));
    cert.witness = Some(norm.restore_factors(&w, &h));
    cert.triangle = Some(tri);
    cert.pair = Some(mem.pair);
}
