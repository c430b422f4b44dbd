//! Triangles nested between two convex polygons, by anchored chord chains.
//!
//! A chain starts from a directed line supporting `P` (with `P` on its left),
//! runs to the forward end of its chord in `Q`, turns along the forward
//! tangent to `P`, and repeats. The anchors are the edge lines of `P` and
//! both tangents to `P` from every vertex of `Q`. Every candidate triangle is
//! re-verified with exact predicates before it is returned.

use num::{Signed, Zero};

use super::{cross, orient, NestedPair, Point, Polygon2};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Directed line `origin + s·dir`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub origin: Point,
    pub dir: Point,
}

impl Line {
    pub fn through(a: &Point, b: &Point) -> Line {
        Line {
            origin: a.clone(),
            dir: b.sub(a),
        }
    }

    pub fn at(&self, s: &Rational) -> Point {
        self.origin.add(&self.dir.scale(s))
    }

    pub fn meet(&self, o: &Line) -> Option<Point> {
        let den = cross(&self.dir, &o.dir);
        if den.is_zero() {
            return None;
        }
        let s = cross(&o.origin.sub(&self.origin), &o.dir) / den;
        Some(self.at(&s))
    }

    fn is_degenerate(&self) -> bool {
        self.dir.x.is_zero() && self.dir.y.is_zero()
    }
}

/// Non-degenerate triangle with counterclockwise vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Triangle {
    vertices: [Point; 3],
}

impl Triangle {
    pub fn new(a: Point, b: Point, c: Point) -> Result<Triangle> {
        let o = orient(&a, &b, &c);
        if o.is_zero() {
            return Err(Error::Precondition("degenerate triangle".into()));
        }
        Ok(if o.is_positive() {
            Triangle {
                vertices: [a, b, c],
            }
        } else {
            Triangle {
                vertices: [a, c, b],
            }
        })
    }

    pub fn vertices(&self) -> &[Point; 3] {
        &self.vertices
    }

    pub fn polygon(&self) -> Polygon2 {
        Polygon2::hull(&self.vertices).expect("three points")
    }

    /// `inner ⊆ self ⊆ outer`, exactly.
    pub fn is_nested(&self, inner: &Polygon2, outer: &Polygon2) -> bool {
        let me = self.polygon();
        me.contains_polygon(inner) && outer.contains_polygon(&me)
    }
}

/// Parameter range `[s_min, s_max]` of `line` inside `q`.
pub fn chord(q: &Polygon2, line: &Line) -> Option<(Rational, Rational)> {
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    for h in q.facets() {
        let base = h.eval(&line.origin);
        let k = &h.cx * &line.dir.x + &h.cy * &line.dir.y;
        if k.is_zero() {
            if base.is_negative() {
                return None;
            }
            continue;
        }
        let s = -base / &k;
        if k.is_positive() {
            if lo.as_ref().map_or(true, |l| s > *l) {
                lo = Some(s);
            }
        } else if hi.as_ref().map_or(true, |u| s < *u) {
            hi = Some(s);
        }
    }
    let (lo, hi) = (lo?, hi?);
    (lo <= hi).then_some((lo, hi))
}

/// Vertex `v ≠ x` of `p` with all of `p` weakly left of `x → v`.
fn forward_tangent(p: &Polygon2, x: &Point) -> Option<Point> {
    p.vertices()
        .iter()
        .filter(|v| *v != x)
        .find(|v| p.vertices().iter().all(|w| !orient(x, v, w).is_negative()))
        .cloned()
}

/// Vertex `v ≠ x` of `p` with all of `p` weakly left of `v → x`.
fn backward_tangent(p: &Polygon2, x: &Point) -> Option<Point> {
    p.vertices()
        .iter()
        .filter(|v| *v != x)
        .find(|v| p.vertices().iter().all(|w| !orient(v, x, w).is_negative()))
        .cloned()
}

/// Directed supporting lines that start a chain.
fn anchors(p: &Polygon2, q: &Polygon2) -> Vec<Line> {
    let v = p.vertices();
    let mut out = Vec::new();
    match v.len() {
        1 => {}
        2 => {
            out.push(Line::through(&v[0], &v[1]));
            out.push(Line::through(&v[1], &v[0]));
        }
        n => {
            for i in 0..n {
                out.push(Line::through(&v[i], &v[(i + 1) % n]));
            }
        }
    }
    for qv in q.vertices() {
        if let Some(t) = forward_tangent(p, qv) {
            out.push(Line::through(qv, &t));
        }
        if let Some(t) = backward_tangent(p, qv) {
            out.push(Line::through(&t, qv));
        }
    }
    out
}

/// One anchored chain and the triangles it proposes.
#[derive(Clone, Debug)]
pub struct ChainRun {
    pub anchor: Line,
    /// Backward and forward chord ends of the anchor.
    pub x0: Point,
    pub x1: Point,
    /// Forward chord end of the second line.
    pub x2: Option<Point>,
    pub candidates: Vec<[Point; 3]>,
    pub triangle: Option<Triangle>,
}

fn run_chain(p: &Polygon2, q: &Polygon2, anchor: Line) -> Option<ChainRun> {
    let (s0, s1) = chord(q, &anchor)?;
    let x0 = anchor.at(&s0);
    let x1 = anchor.at(&s1);
    let mut run = ChainRun {
        anchor: anchor.clone(),
        x0: x0.clone(),
        x1: x1.clone(),
        x2: None,
        candidates: Vec::new(),
        triangle: None,
    };
    let Some(t2) = forward_tangent(p, &x1) else {
        return Some(run);
    };
    let l2 = Line::through(&x1, &t2);
    let Some((_, e2)) = chord(q, &l2) else {
        return Some(run);
    };
    let x2 = l2.at(&e2);
    run.x2 = Some(x2.clone());
    if let Some(t3) = forward_tangent(p, &x2) {
        let l3 = Line::through(&x2, &t3);
        if let Some(y) = l3.meet(&anchor) {
            run.candidates.push([y, x1.clone(), x2.clone()]);
        }
    }
    if let Some(b) = backward_tangent(p, &x0) {
        let l3 = Line::through(&b, &x0);
        if !l3.is_degenerate() {
            if let Some(z) = l2.meet(&l3) {
                run.candidates.push([x0.clone(), x1.clone(), z]);
            }
        }
    }
    run.candidates.push([x0, x1, x2]);
    run.triangle = run.candidates.iter().find_map(|c| {
        let t = Triangle::new(c[0].clone(), c[1].clone(), c[2].clone()).ok()?;
        t.is_nested(p, q).then_some(t)
    });
    Some(run)
}

/// All anchored chains for `P ⊆ Q`, in anchor order.
pub fn anchored_chains(p: &Polygon2, q: &Polygon2) -> Vec<ChainRun> {
    anchors(p, q)
        .into_iter()
        .filter_map(|a| run_chain(p, q, a))
        .collect()
}

/// A triangle `Δ` with `P ⊆ Δ ⊆ Q`, if one exists.
pub fn nested_triangle(pair: &NestedPair) -> Result<Option<Triangle>> {
    let (p, q) = (&pair.inner, &pair.outer);
    if !q.contains_polygon(p) {
        return Err(Error::Precondition(
            "inner polygon is not contained in the outer one".into(),
        ));
    }
    if !q.is_full_dimensional() {
        return Ok(None);
    }
    if q.len() == 3 {
        let v = q.vertices();
        return Ok(Some(Triangle::new(
            v[0].clone(),
            v[1].clone(),
            v[2].clone(),
        )?));
    }
    if p.len() == 3 {
        let v = p.vertices();
        return Ok(Some(Triangle::new(
            v[0].clone(),
            v[1].clone(),
            v[2].clone(),
        )?));
    }
    if p.len() == 1 {
        let w = q.vertices();
        for k in 1..w.len() - 1 {
            let t = Triangle::new(w[0].clone(), w[k].clone(), w[k + 1].clone())?;
            if t.polygon().contains_polygon(p) {
                return Ok(Some(t));
            }
        }
        unreachable!("a fan triangulation covers every point of Q");
    }
    for a in anchors(p, q) {
        if let Some(t) = run_chain(p, q, a).and_then(|r| r.triangle) {
            debug_assert!(t.is_nested(p, q));
            return Ok(Some(t));
        }
    }
    Ok(None)
}
