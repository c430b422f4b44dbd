//! Exact planar geometry: points, half-planes and convex polygons.

mod nested;
pub mod svg;
mod triangle;

pub use nested::{
    contains, normalize_column_sums, polytopes_from_factorization, slack_matrix, NestedPair,
    Provenance, Slice,
};
pub use triangle::{anchored_chains, chord, nested_triangle, ChainRun, Line, Triangle};

use std::fmt;

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{to_f64, Rational};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Point {
        Point { x, y }
    }

    pub fn sub(&self, o: &Point) -> Point {
        Point::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn add(&self, o: &Point) -> Point {
        Point::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn scale(&self, s: &Rational) -> Point {
        Point::new(&self.x * s, &self.y * s)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.x), to_f64(&self.y))
    }
}

pub fn pt(x: Rational, y: Rational) -> Point {
    Point::new(x, y)
}

/// Twice the signed area of `abc`; positive for a left turn.
pub fn orient(a: &Point, b: &Point, c: &Point) -> Rational {
    (&b.x - &a.x) * (&c.y - &a.y) - (&b.y - &a.y) * (&c.x - &a.x)
}

pub fn cross(u: &Point, v: &Point) -> Rational {
    &u.x * &v.y - &u.y * &v.x
}

pub fn dot(u: &Point, v: &Point) -> Rational {
    &u.x * &v.x + &u.y * &v.y
}

/// `c0 + cx·x + cy·y ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HalfPlane {
    pub c0: Rational,
    pub cx: Rational,
    pub cy: Rational,
}

impl HalfPlane {
    pub fn new(c0: Rational, cx: Rational, cy: Rational) -> Result<HalfPlane> {
        if cx.is_zero() && cy.is_zero() {
            return Err(Error::Precondition("half-plane with zero normal".into()));
        }
        Ok(HalfPlane { c0, cx, cy })
    }

    /// Left side of the directed line `a → b`.
    pub fn left_of(a: &Point, b: &Point) -> HalfPlane {
        let cx = -(&b.y - &a.y);
        let cy = &b.x - &a.x;
        let c0 = -(&cx * &a.x + &cy * &a.y);
        HalfPlane { c0, cx, cy }
    }

    pub fn eval(&self, p: &Point) -> Rational {
        &self.c0 + &self.cx * &p.x + &self.cy * &p.y
    }

    pub fn satisfied(&self, p: &Point) -> bool {
        !self.eval(p).is_negative()
    }

    pub fn has_normal(&self) -> bool {
        !(self.cx.is_zero() && self.cy.is_zero())
    }

    /// Intersection point of the two boundary lines, if they are not parallel.
    pub fn meet(&self, o: &HalfPlane) -> Option<Point> {
        let det = &self.cx * &o.cy - &self.cy * &o.cx;
        if det.is_zero() {
            return None;
        }
        let x = (&self.cy * &o.c0 - &o.cy * &self.c0) / &det;
        let y = (&o.cx * &self.c0 - &self.cx * &o.c0) / &det;
        Some(Point::new(x, y))
    }
}

/// Convex polygon with counterclockwise vertices in strictly convex position.
/// One vertex is a point, two a segment.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polygon2 {
    vertices: Vec<Point>,
}

impl Polygon2 {
    /// Convex hull (Andrew's monotone chain), collinear points dropped.
    pub fn hull(points: &[Point]) -> Result<Polygon2> {
        let mut pts = points.to_vec();
        pts.sort();
        pts.dedup();
        if pts.is_empty() {
            return Err(Error::Precondition("hull of no points".into()));
        }
        if pts.len() <= 2 {
            return Ok(Polygon2 { vertices: pts });
        }
        let mut lower: Vec<Point> = Vec::new();
        for p in &pts {
            while lower.len() >= 2
                && !orient(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive()
            {
                lower.pop();
            }
            lower.push(p.clone());
        }
        let mut upper: Vec<Point> = Vec::new();
        for p in pts.iter().rev() {
            while upper.len() >= 2
                && !orient(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive()
            {
                upper.pop();
            }
            upper.push(p.clone());
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        Ok(Polygon2 { vertices: lower })
    }

    /// The bounded region cut out by half-planes. Rows with zero normal must
    /// have a nonnegative constant.
    pub fn from_halfplanes(hs: &[HalfPlane]) -> Result<Polygon2> {
        if hs.iter().any(|h| !h.has_normal() && h.c0.is_negative()) {
            return Err(Error::Precondition(
                "empty region (violated constant row)".into(),
            ));
        }
        let hs: Vec<&HalfPlane> = hs.iter().filter(|h| h.has_normal()).collect();
        // recession directions lie on the boundary of the recession cone, so
        // they are perpendicular to some normal
        for h in &hs {
            for d in [
                Point::new(-h.cy.clone(), h.cx.clone()),
                Point::new(h.cy.clone(), -h.cx.clone()),
            ] {
                if hs
                    .iter()
                    .all(|g| !(&g.cx * &d.x + &g.cy * &d.y).is_negative())
                {
                    return Err(Error::Unbounded(
                        "half-planes admit a recession direction".into(),
                    ));
                }
            }
        }
        if hs.is_empty() {
            return Err(Error::Unbounded("no constraints".into()));
        }
        let mut pts = Vec::new();
        for a in 0..hs.len() {
            for b in a + 1..hs.len() {
                if let Some(p) = hs[a].meet(hs[b]) {
                    if hs.iter().all(|h| h.satisfied(&p)) {
                        pts.push(p);
                    }
                }
            }
        }
        if pts.is_empty() {
            return Err(Error::Precondition("empty region".into()));
        }
        Polygon2::hull(&pts)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.vertices.len() >= 3
    }

    /// Inequalities describing exactly this set.
    pub fn facets(&self) -> Vec<HalfPlane> {
        let v = &self.vertices;
        match v.len() {
            1 => {
                let (x, y) = (v[0].x.clone(), v[0].y.clone());
                let o = Rational::from_integer(1.into());
                vec![
                    HalfPlane {
                        c0: -x.clone(),
                        cx: o.clone(),
                        cy: Rational::zero(),
                    },
                    HalfPlane {
                        c0: x,
                        cx: -o.clone(),
                        cy: Rational::zero(),
                    },
                    HalfPlane {
                        c0: -y.clone(),
                        cx: Rational::zero(),
                        cy: o.clone(),
                    },
                    HalfPlane {
                        c0: y,
                        cx: Rational::zero(),
                        cy: -o,
                    },
                ]
            }
            2 => {
                let d = v[1].sub(&v[0]);
                let cap = |a: &Point, dir: &Point| HalfPlane {
                    c0: -(&dir.x * &a.x + &dir.y * &a.y),
                    cx: dir.x.clone(),
                    cy: dir.y.clone(),
                };
                vec![
                    HalfPlane::left_of(&v[0], &v[1]),
                    HalfPlane::left_of(&v[1], &v[0]),
                    cap(&v[0], &d),
                    cap(&v[1], &d.scale(&Rational::from_integer((-1).into()))),
                ]
            }
            n => (0..n)
                .map(|i| HalfPlane::left_of(&v[i], &v[(i + 1) % n]))
                .collect(),
        }
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        self.facets().iter().all(|h| h.satisfied(p))
    }

    pub fn contains_polygon(&self, inner: &Polygon2) -> bool {
        let fs = self.facets();
        inner
            .vertices
            .iter()
            .all(|p| fs.iter().all(|h| h.satisfied(p)))
    }

    /// Twice the area.
    pub fn area2(&self) -> Rational {
        let v = &self.vertices;
        let n = v.len();
        (0..n).map(|i| cross(&v[i], &v[(i + 1) % n])).sum()
    }

    /// `((xmin, ymin), (xmax, ymax))`.
    pub fn bbox(&self) -> (Point, Point) {
        let xs = self.vertices.iter().map(|p| &p.x);
        let ys = self.vertices.iter().map(|p| &p.y);
        let lo = Point::new(
            xs.clone().min().unwrap().clone(),
            ys.clone().min().unwrap().clone(),
        );
        let hi = Point::new(xs.max().unwrap().clone(), ys.max().unwrap().clone());
        (lo, hi)
    }

    /// Intersection with another polygon (may fail if empty).
    pub fn intersect(&self, o: &Polygon2) -> Result<Polygon2> {
        if !self.is_full_dimensional() || !o.is_full_dimensional() {
            let keep: Vec<Point> = self
                .vertices
                .iter()
                .chain(o.vertices.iter())
                .filter(|p| self.contains_point(p) && o.contains_point(p))
                .cloned()
                .collect();
            let mut pts = keep;
            for (a, b) in self
                .edges()
                .iter()
                .flat_map(|e| o.edges().into_iter().map(move |f| (e.clone(), f)))
            {
                if let Some(p) = segment_meet(&a.0, &a.1, &b.0, &b.1) {
                    pts.push(p);
                }
            }
            return Polygon2::hull(&pts);
        }
        let mut hs = self.facets();
        hs.extend(o.facets());
        Polygon2::from_halfplanes(&hs)
    }

    fn edges(&self) -> Vec<(Point, Point)> {
        let n = self.vertices.len();
        match n {
            1 => vec![],
            2 => vec![(self.vertices[0].clone(), self.vertices[1].clone())],
            _ => (0..n)
                .map(|i| (self.vertices[i].clone(), self.vertices[(i + 1) % n].clone()))
                .collect(),
        }
    }
}

/// Intersection point of two closed segments when it is unique.
fn segment_meet(a: &Point, b: &Point, c: &Point, d: &Point) -> Option<Point> {
    let r = b.sub(a);
    let s = d.sub(c);
    let den = cross(&r, &s);
    if den.is_zero() {
        return None;
    }
    let t = cross(&c.sub(a), &s) / &den;
    let u = cross(&c.sub(a), &r) / &den;
    let in01 = |x: &Rational| !x.is_negative() && *x <= Rational::from_integer(1.into());
    if in01(&t) && in01(&u) {
        Some(a.add(&r.scale(&t)))
    } else {
        None
    }
}
