use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::{
    nested_triangle, normalize_column_sums, polytopes_from_factorization, HalfPlane, NestedPair,
    Point, Polygon2, Slice, Triangle,
};
use crate::linalg::Matrix;
use crate::nnrank3::triangle_factorization;
use crate::partial::PartialMatrix;
use crate::poly::{rat_det, Poly, RatFn, RatMatrix, Root};
use crate::rational::{int, sign, Rational};

/// The two supported hole shapes, in canonical position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TwoMissing {
    /// Holes `(1,1)` and `(2,1)`; `t` is the value at `(2,1)`.
    SameColumn,
    /// Holes `(1,1)` and `(2,2)`; `t` is the value at `(2,2)`.
    Diagonal,
}

impl TwoMissing {
    pub fn tag(&self) -> &'static str {
        match self {
            TwoMissing::SameColumn => "11_21",
            TwoMissing::Diagonal => "11_22",
        }
    }

    pub fn holes(&self) -> [(usize, usize); 2] {
        match self {
            TwoMissing::SameColumn => [(1, 1), (2, 1)],
            TwoMissing::Diagonal => [(1, 1), (2, 2)],
        }
    }
}

/// Endpoint of a parameter interval.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum End {
    NegInf,
    At(Rational),
    PosInf,
}

impl End {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            End::At(t) => Some(t),
            _ => None,
        }
    }

    pub fn render(&self) -> String {
        match self {
            End::NegInf => "-inf".into(),
            End::At(t) => t.to_string(),
            End::PosInf => "inf".into(),
        }
    }
}

/// Interval of `t` with possibly open or infinite ends.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: End,
    pub hi: End,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl Interval {
    pub fn contains(&self, t: &Rational) -> bool {
        let above = match &self.lo {
            End::NegInf => true,
            End::At(a) => t > a || (t == a && !self.lo_open),
            End::PosInf => false,
        };
        let below = match &self.hi {
            End::PosInf => true,
            End::At(b) => t < b || (t == b && !self.hi_open),
            End::NegInf => false,
        };
        above && below
    }

    /// Simple rational near the middle, strictly inside when the interval has length.
    pub fn interior_point(&self) -> Rational {
        match (&self.lo, &self.hi) {
            (End::At(a), End::At(b)) => {
                if a == b {
                    a.clone()
                } else {
                    split_point(a, b)
                }
            }
            (End::At(a), _) => a + a.abs().max(Rational::one()),
            (_, End::At(b)) => b - b.abs().max(Rational::one()),
            _ => Rational::zero(),
        }
    }
}

/// A rational with small denominator in the middle half of `(a, b)`.
pub(crate) fn split_point(a: &Rational, b: &Rational) -> Rational {
    let w = (b - a) / int(4);
    simplest_between(&(a + &w), &(b - &w))
}

/// Simplest rational in the closed interval `[lo, hi]`, by continued fractions.
pub(crate) fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    if lo > hi {
        return simplest_between(hi, lo);
    }
    if !lo.is_positive() && !hi.is_negative() {
        return Rational::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi, &-lo);
    }
    let fl = lo.floor();
    if fl == *lo {
        return fl;
    }
    if &fl + Rational::one() <= *hi {
        return fl + Rational::one();
    }
    // same integer part: recurse on reciprocals of the fractional parts
    let inner = simplest_between(&(hi - &fl).recip(), &(lo - &fl).recip());
    fl + inner.recip()
}

/// Numerators over the monic common denominator.
pub(crate) fn clear_denominators(fs: &[RatFn]) -> (Vec<Poly>, Poly) {
    let mut l = Poly::constant(Rational::one());
    for f in fs {
        let g = l.gcd(f.den());
        l = l.mul(f.den()).div_rem(&g).0.monic();
    }
    let nums = fs
        .iter()
        .map(|f| f.num().mul(&l.div_rem(f.den()).0))
        .collect();
    (nums, l)
}

/// One-parameter family `M_t = A(t) B(t)` of rank-3 completions in canonical position.
#[derive(Clone, Debug)]
pub struct NestedFamily {
    pub kind: TwoMissing,
    /// Source partial matrix, already in canonical position.
    pub source: PartialMatrix,
    pub a: RatMatrix,
    pub b: RatMatrix,
    /// Factors after the slice normalization; `a_hat · b_hat = a · b`.
    pub a_hat: RatMatrix,
    pub b_hat: RatMatrix,
    pub slice: Slice,
    pub completion: RatMatrix,
    /// 1-based column of `b_hat` that moves with `t`.
    pub moving_column: usize,
    /// Lift of the moving vertex with denominators cleared.
    pub moving_vertex: [Poly; 3],
    /// Moving facet of `Q_t` as `(c0, cx, cy)` numerators over `facet_den`.
    pub moving_facet: Option<[Poly; 3]>,
    pub facet_den: Poly,
    pub fixed_points: Vec<Point>,
    pub fixed_facets: Vec<HalfPlane>,
    pub feasible: Vec<Interval>,
    /// Line through every position of the moving vertex, if it is not constant.
    pub trajectory: Option<HalfPlane>,
}

fn as_polys3(v: Vec<Poly>) -> [Poly; 3] {
    let mut it = v.into_iter();
    [it.next().unwrap(), it.next().unwrap(), it.next().unwrap()]
}

fn det2(m: &Matrix, r: [usize; 2], c: [usize; 2]) -> Rational {
    m.get(r[0], c[0]) * m.get(r[1], c[1]) - m.get(r[0], c[1]) * m.get(r[1], c[0])
}

fn sub_rank(m: &Matrix, r: &[usize], c: &[usize]) -> usize {
    m.submatrix(r, c).expect("in range").rank()
}

fn check_canonical(m: &PartialMatrix, kind: TwoMissing) -> Result<Matrix> {
    if m.shape() != (4, 4) {
        return Err(Error::Unsupported(format!(
            "need a 4x4 partial matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if m.missing() != kind.holes().to_vec() {
        return Err(Error::Unsupported(format!(
            "holes must be exactly {:?} in canonical position",
            kind.holes()
        )));
    }
    Ok(m.fill_missing(&Rational::zero()))
}

/// Family for holes `(1,1), (2,1)`: `A = M[:,234]`, `B_t = [b1(t) | I]` with
/// `t = M_t(2,1)`, normalized by the column sums of `A` and sliced by `x1 = 1`.
pub fn family_11_21(m: &PartialMatrix) -> Result<NestedFamily> {
    let obs = check_canonical(m, TwoMissing::SameColumn)?;
    let all = [1, 2, 3, 4];
    if sub_rank(&obs, &all, &[2, 3, 4]) != 3 {
        return Err(Error::Precondition(
            "rank(M[:,234]) < 3; use special_case_low_rank".into(),
        ));
    }
    if sub_rank(&obs, &[3, 4], &[2, 3, 4]) != 2 {
        return Err(Error::Precondition(
            "rank(M[34,234]) < 2; use special_case_low_rank".into(),
        ));
    }
    let g = obs.submatrix(&[2, 3, 4], &[2, 3, 4])?;
    let g_inv = g.inverse().map_err(|_| {
        Error::Precondition("M[234,234] is singular; exchange the first two rows".into())
    })?;
    // b1(t) = G⁻¹ (t, m31, m41)
    let b1: Vec<Poly> = (1..=3)
        .map(|i| {
            let c0 = g_inv.get(i, 2) * obs.get(3, 1) + g_inv.get(i, 3) * obs.get(4, 1);
            Poly::linear(c0, g_inv.get(i, 1).clone())
        })
        .collect();
    let a = obs.submatrix(&all, &[2, 3, 4])?;
    let mut b_rows = vec![vec![RatFn::constant(Rational::zero()); 4]; 3];
    for i in 0..3 {
        b_rows[i][0] = RatFn::poly(b1[i].clone());
        b_rows[i][i + 1] = RatFn::constant(Rational::one());
    }
    let b = RatMatrix { rows: b_rows };
    let a_r = RatMatrix::from_matrix(&a);
    let (a_hat, _, c) = normalize_column_sums(&a, &Matrix::identity(3))?;
    let c_r = RatMatrix::from_matrix(&c);
    let b_hat = c_r.mul(&b);
    let completion = a_r.mul(&b);
    let slice = Slice::FirstCoordinate;
    let fixed_points: Vec<Point> = (1..=3).map(|k| slice.project(&c.col_vec(k))).collect();
    let fixed_facets: Vec<HalfPlane> = (1..=4).map(|i| slice.restrict(&a_hat.row_vec(i))).collect();
    let moving: Vec<RatFn> = (1..=3).map(|i| b_hat.get(i, 1).clone()).collect();
    let (v, _) = clear_denominators(&moving);
    let moving_vertex = as_polys3(v);
    let feasible = feasible_set(
        &[completion.get(1, 1).clone(), completion.get(2, 1).clone()],
        &Poly::constant(Rational::one()),
    )?;
    let trajectory = trajectory_line(slice, &moving_vertex);
    Ok(NestedFamily {
        kind: TwoMissing::SameColumn,
        source: m.clone(),
        a: a_r,
        b,
        a_hat: RatMatrix::from_matrix(&a_hat),
        b_hat,
        slice,
        completion,
        moving_column: 1,
        moving_vertex,
        moving_facet: None,
        facet_den: Poly::constant(Rational::one()),
        fixed_points,
        fixed_facets,
        feasible,
        trajectory,
    })
}

/// Family for holes `(1,1), (2,2)`: `A(t) = [a1(t); I]`, `B(t)` = rows 2-4 of
/// `M_t` with `b(t) = t` at `(1,2)`, sliced by `x1 + x2 + x3 = 1`.
pub fn family_11_22(m: &PartialMatrix) -> Result<NestedFamily> {
    let obs = check_canonical(m, TwoMissing::Diagonal)?;
    for (r, c, k, name) in [
        (&[1, 3, 4][..], &[2, 3, 4][..], 3, "rank(M[134,234]) < 3"),
        (&[2, 3, 4][..], &[1, 3, 4][..], 3, "rank(M[234,134]) < 3"),
        (&[2, 3, 4][..], &[3, 4][..], 2, "rank(M[234,34]) < 2"),
        (&[3, 4][..], &[2, 3, 4][..], 2, "rank(M[34,234]) < 2"),
    ] {
        if sub_rank(&obs, r, c) != k {
            return Err(Error::Precondition(name.into()));
        }
    }
    let mut b_rows: Vec<Vec<RatFn>> = (2..=4)
        .map(|i| {
            (1..=4)
                .map(|j| RatFn::constant(obs.get(i, j).clone()))
                .collect()
        })
        .collect();
    b_rows[0][1] = RatFn::t();
    let b = RatMatrix { rows: b_rows };
    // a1 · B[:,234] = (m12, m13, m14), by Cramer's rule
    let k: Vec<Vec<RatFn>> = b.rows.iter().map(|r| r[1..].to_vec()).collect();
    let d = rat_det(&k);
    if d.is_zero() {
        return Err(Error::Precondition(
            "B[:,234](t) is singular for every t".into(),
        ));
    }
    let rhs: Vec<RatFn> = (2..=4)
        .map(|j| RatFn::constant(obs.get(1, j).clone()))
        .collect();
    let a1: Vec<RatFn> = (0..3)
        .map(|j| {
            let mut kj = k.clone();
            kj[j] = rhs.clone();
            rat_det(&kj).div(&d)
        })
        .collect();
    let mut a_rows = vec![a1.clone()];
    for i in 0..3 {
        let mut r = vec![RatFn::constant(Rational::zero()); 3];
        r[i] = RatFn::constant(Rational::one());
        a_rows.push(r);
    }
    let a = RatMatrix { rows: a_rows };
    let completion = a.mul(&b);
    let slice = Slice::CoordinateSum;
    let fixed_points: Vec<Point> = [1, 3, 4]
        .iter()
        .map(|&j| slice.project(&(2..=4).map(|i| obs.get(i, j).clone()).collect::<Vec<_>>()))
        .collect();
    let fixed_facets: Vec<HalfPlane> = (0..3)
        .map(|i| {
            let mut e = vec![Rational::zero(); 3];
            e[i] = Rational::one();
            slice.restrict(&e)
        })
        .collect();
    let moving_vertex = [
        Poly::t(),
        Poly::constant(obs.get(3, 2).clone()),
        Poly::constant(obs.get(4, 2).clone()),
    ];
    let restricted = [a1[2].clone(), a1[0].sub(&a1[2]), a1[1].sub(&a1[2])];
    let (n, den) = clear_denominators(&restricted);
    let degree_ok = n.iter().chain([&den]).all(|p| p.degree().unwrap_or(0) <= 1);
    if !degree_ok {
        return Err(Error::Precondition(
            "moving facet is not affine in t".into(),
        ));
    }
    let feasible = feasible_set(
        &[completion.get(1, 1).clone(), completion.get(2, 2).clone()],
        &den,
    )?;
    let trajectory = trajectory_line(slice, &moving_vertex);
    Ok(NestedFamily {
        kind: TwoMissing::Diagonal,
        source: m.clone(),
        a_hat: a.clone(),
        b_hat: b.clone(),
        a,
        b,
        slice,
        completion,
        moving_column: 2,
        moving_vertex,
        moving_facet: Some(as_polys3(n)),
        facet_den: den,
        fixed_points,
        fixed_facets,
        feasible,
        trajectory,
    })
}

/// Slice coordinates `(s, x, y)` of a lifted vector, point `(x/s, y/s)`.
pub(crate) fn slice_numerators(slice: Slice, v: &[Poly; 3]) -> (Poly, Poly, Poly) {
    match slice {
        Slice::FirstCoordinate => (v[0].clone(), v[1].clone(), v[2].clone()),
        Slice::CoordinateSum => (v[0].add(&v[1]).add(&v[2]), v[0].clone(), v[1].clone()),
    }
}

fn trajectory_line(slice: Slice, v: &[Poly; 3]) -> Option<HalfPlane> {
    // normal of the plane spanned by the constant and linear parts
    let u: Vec<Rational> = v.iter().map(|p| p.coeff(0)).collect();
    let w: Vec<Rational> = v.iter().map(|p| p.coeff(1)).collect();
    let n = [
        &u[1] * &w[2] - &u[2] * &w[1],
        &u[2] * &w[0] - &u[0] * &w[2],
        &u[0] * &w[1] - &u[1] * &w[0],
    ];
    Some(slice.restrict(&n)).filter(|h| h.has_normal())
}

/// Closed-where-possible intervals of `t` where every condition is `≥ 0` and `poles ≠ 0`.
fn feasible_set(conds: &[RatFn], poles: &Poly) -> Result<Vec<Interval>> {
    let mut pts: Vec<Rational> = Vec::new();
    let mut all_polys: Vec<&Poly> = vec![poles];
    for f in conds {
        all_polys.push(f.num());
        all_polys.push(f.den());
    }
    for p in all_polys {
        for r in p.real_roots() {
            match r {
                Root::Exact(x) => pts.push(x),
                Root::Bracket(..) => {
                    return Err(Error::Unsupported("irrational feasibility boundary".into()));
                }
            }
        }
    }
    pts.sort();
    pts.dedup();
    let ok = |t: &Rational| -> bool {
        !poles.eval(t).is_zero()
            && conds
                .iter()
                .all(|f| f.eval(t).is_some_and(|v| !v.is_negative()))
    };
    // alternate gaps and points: gap0, p1, gap1, ..., pk, gapk
    let mut cells: Vec<(End, End, bool)> = Vec::new();
    let gap_sample = |i: usize| -> Rational {
        match (i.checked_sub(1).map(|k| &pts[k]), pts.get(i)) {
            (None, None) => Rational::zero(),
            (None, Some(b)) => b - Rational::one(),
            (Some(a), None) => a + Rational::one(),
            (Some(a), Some(b)) => (a + b) / int(2),
        }
    };
    for i in 0..=pts.len() {
        let lo = if i == 0 {
            End::NegInf
        } else {
            End::At(pts[i - 1].clone())
        };
        let hi = pts.get(i).map_or(End::PosInf, |b| End::At(b.clone()));
        cells.push((lo, hi, ok(&gap_sample(i))));
        if let Some(p) = pts.get(i) {
            cells.push((End::At(p.clone()), End::At(p.clone()), ok(p)));
        }
    }
    let mut out: Vec<Interval> = Vec::new();
    let mut cur: Option<Interval> = None;
    for (k, (lo, hi, good)) in cells.into_iter().enumerate() {
        let is_point = k % 2 == 1;
        if good {
            match cur.as_mut() {
                Some(iv) => {
                    iv.hi = hi;
                    iv.hi_open = !is_point;
                }
                None => {
                    cur = Some(Interval {
                        lo,
                        hi,
                        lo_open: !is_point,
                        hi_open: !is_point,
                    })
                }
            }
        } else if let Some(iv) = cur.take() {
            out.push(iv);
        }
    }
    out.extend(cur);
    for iv in &mut out {
        if iv.lo == End::NegInf {
            iv.lo_open = true;
        }
        if iv.hi == End::PosInf {
            iv.hi_open = true;
        }
    }
    Ok(out)
}

/// Verified exact data at one feasible parameter value.
#[derive(Clone, Debug)]
pub struct FamilyMember {
    pub t: Rational,
    pub completion: Matrix,
    pub pair: NestedPair,
    /// Columns of `b_hat` kept (nonzero), 1-based.
    pub kept_columns: Vec<usize>,
    pub a_hat: Matrix,
    pub b_hat: Matrix,
}

impl NestedFamily {
    pub fn is_feasible(&self, t: &Rational) -> bool {
        self.feasible.iter().any(|iv| iv.contains(t))
    }

    pub fn completion_at(&self, t: &Rational) -> Result<Matrix> {
        self.completion
            .eval(t)
            .ok_or_else(|| Error::Infeasible(format!("t = {t} is a pole")))
    }

    /// Moving vertex of `P_t`; `None` where its slice functional vanishes.
    pub fn moving_point(&self, t: &Rational) -> Option<Point> {
        let (s, x, y) = slice_numerators(self.slice, &self.moving_vertex);
        let s = s.eval(t);
        (!s.is_zero()).then(|| Point::new(x.eval(t) / &s, y.eval(t) / &s))
    }

    /// Moving facet of `Q_t` at `t` (not at a pole).
    pub fn moving_halfplane(&self, t: &Rational) -> Option<HalfPlane> {
        let n = self.moving_facet.as_ref()?;
        let d = self.facet_den.eval(t);
        if d.is_zero() {
            return None;
        }
        Some(HalfPlane {
            c0: n[0].eval(t) / &d,
            cx: n[1].eval(t) / &d,
            cy: n[2].eval(t) / &d,
        })
    }

    /// Nested pair at a feasible `t`, zero columns dropped.
    pub fn member(&self, t: &Rational) -> Result<FamilyMember> {
        if !self.is_feasible(t) {
            return Err(Error::Infeasible(format!(
                "t = {t} is outside the feasible set"
            )));
        }
        let completion = self.completion_at(t)?;
        let a_hat = self
            .a_hat
            .eval(t)
            .ok_or_else(|| Error::Infeasible(format!("t = {t} is a pole")))?;
        let b_hat = self
            .b_hat
            .eval(t)
            .ok_or_else(|| Error::Infeasible(format!("t = {t} is a pole")))?;
        let kept_columns: Vec<usize> = (1..=b_hat.cols())
            .filter(|&j| b_hat.col_vec(j).iter().any(|x| !x.is_zero()))
            .collect();
        let b_red = b_hat.submatrix(&[1, 2, 3], &kept_columns)?;
        let pair = polytopes_from_factorization(&a_hat, &b_red, self.slice)?;
        Ok(FamilyMember {
            t: t.clone(),
            completion,
            pair,
            kept_columns,
            a_hat,
            b_hat,
        })
    }

    /// Triangle and exact factorization at `t`, if one exists there.
    pub fn triangle_at(
        &self,
        t: &Rational,
    ) -> Result<Option<(FamilyMember, Triangle, Matrix, Matrix)>> {
        let mem = self.member(t)?;
        let Some(tri) = nested_triangle(&mem.pair)? else {
            return Ok(None);
        };
        let (w, h) = self.witness(&mem, &tri)?;
        Ok(Some((mem, tri, w, h)))
    }

    /// `W = Â C`, `H = C⁻¹ B̂` with `C` lifting the triangle's vertices.
    pub fn witness(&self, mem: &FamilyMember, tri: &Triangle) -> Result<(Matrix, Matrix)> {
        let b_red = mem.b_hat.submatrix(&[1, 2, 3], &mem.kept_columns)?;
        let (w, h_red) = triangle_factorization(&mem.a_hat, &b_red, self.slice, tri)?;
        let mut h = Matrix::zeros(3, mem.b_hat.cols());
        for (k, &j) in mem.kept_columns.iter().enumerate() {
            for i in 1..=3 {
                h.set(i, j, h_red.get(i, k + 1).clone());
            }
        }
        if !(w.is_nonnegative() && h.is_nonnegative() && w.mul(&h)? == mem.completion) {
            return Err(Error::Precondition(
                "triangle witness failed exact re-verification".into(),
            ));
        }
        Ok((w, h))
    }

    /// The printed line through the moving vertex for the `(1,1),(2,1)` shape:
    /// `-det M[34,12] + c_x x + c_y y`.
    pub fn printed_line_p1(&self) -> Option<HalfPlane> {
        if self.kind != TwoMissing::SameColumn {
            return None;
        }
        let m = self.source.fill_missing(&Rational::zero());
        let d = |r: [usize; 2], c: [usize; 2]| det2(&m, r, c);
        let (m31, m41) = (m.get(3, 1).clone(), m.get(4, 1).clone());
        let cx = &m41 * (d([1, 3], [2, 3]) + d([2, 3], [2, 3]) - d([3, 4], [2, 3]))
            - &m31 * (d([1, 4], [2, 3]) + d([2, 4], [2, 3]) + d([3, 4], [2, 3]));
        let cy = &m41 * (d([1, 3], [2, 4]) + d([2, 3], [2, 4]) - d([3, 4], [2, 4]))
            - &m31 * (d([1, 4], [2, 4]) + d([2, 4], [2, 4]) + d([3, 4], [2, 4]));
        Some(HalfPlane {
            c0: -d([3, 4], [1, 2]),
            cx,
            cy,
        })
    }

    /// Intersection of the third and fourth facet lines of `Q`.
    pub fn facet_vertex_34(&self) -> Option<Point> {
        self.fixed_facets.get(2)?.meet(self.fixed_facets.get(3)?)
    }

    /// Parameter values where the moving vertex passes through `x`.
    pub fn t_for_point(&self, x: &Point) -> Option<Rational> {
        let l = self.slice.lift(x);
        let v = &self.moving_vertex;
        // (v0 + t v1) × l = 0
        let cr = |a: usize, b: usize| {
            let p = v[a].scale(&l[b]).sub(&v[b].scale(&l[a]));
            (p.coeff(0), p.coeff(1))
        };
        let comps = [cr(1, 2), cr(2, 0), cr(0, 1)];
        let (c0, c1) = comps.iter().find(|(_, c1)| !c1.is_zero())?;
        let t = -c0 / c1;
        comps
            .iter()
            .all(|(a, b)| (a + b * &t).is_zero())
            .then_some(t)
            .filter(|t| self.moving_point(t).is_some_and(|p| &p == x))
    }

    /// Critical parameter values: feasibility breakpoints, zeros of the moving
    /// vertex's slice functional, and incidences of moving and fixed elements.
    pub fn critical_values(&self) -> Vec<Rational> {
        let mut polys: Vec<Poly> = Vec::new();
        let (s, x, y) = slice_numerators(self.slice, &self.moving_vertex);
        polys.push(s.clone());
        polys.push(self.facet_den.clone());
        for (i, j) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
            let f = self.completion.get(i, j);
            polys.push(f.num().clone());
            polys.push(f.den().clone());
        }
        let at = |h: &HalfPlane| s.scale(&h.c0).add(&x.scale(&h.cx)).add(&y.scale(&h.cy));
        for h in &self.fixed_facets {
            polys.push(at(h));
        }
        let pts = &self.fixed_points;
        for a in 0..pts.len() {
            for b in a + 1..pts.len() {
                let d = pts[b].sub(&pts[a]);
                // cross(d, p - a) scaled by s
                let px = x.sub(&s.scale(&pts[a].x));
                let py = y.sub(&s.scale(&pts[a].y));
                polys.push(py.scale(&d.x).sub(&px.scale(&d.y)));
            }
        }
        if let Some(n) = &self.moving_facet {
            let mut fixed_q: Vec<Point> = pts.clone();
            for a in 0..self.fixed_facets.len() {
                for b in a + 1..self.fixed_facets.len() {
                    fixed_q.extend(self.fixed_facets[a].meet(&self.fixed_facets[b]));
                }
            }
            for p in &fixed_q {
                polys.push(n[0].add(&n[1].scale(&p.x)).add(&n[2].scale(&p.y)));
            }
            polys.push(n[0].mul(&s).add(&n[1].mul(&x)).add(&n[2].mul(&y)));
        }
        let mut out = Vec::new();
        for p in polys {
            if p.degree().unwrap_or(0) == 0 {
                continue;
            }
            for r in p.real_roots() {
                match r {
                    Root::Exact(t) => out.push(t),
                    Root::Bracket(a, b) => {
                        out.push(a);
                        out.push(b);
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Sign profile of the moving facet's normal, pole-safe.
    pub fn first_row_signs(&self, t: &Rational) -> Result<[i8; 3]> {
        let row = self
            .a
            .eval(t)
            .ok_or_else(|| Error::Infeasible(format!("t = {t} is a pole")))?;
        Ok([
            sign(row.get(1, 1)),
            sign(row.get(1, 2)),
            sign(row.get(1, 3)),
        ])
    }
}

/// Polygon of the fixed generators together with an extra point.
pub(crate) fn hull_with(fixed: &[Point], extra: Option<&Point>) -> Result<Polygon2> {
    let mut pts = fixed.to_vec();
    pts.extend(extra.cloned());
    Polygon2::hull(&pts)
}
