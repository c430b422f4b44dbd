use num::{Signed, Zero};

use super::{HalfPlane, Point, Polygon2};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{one, Rational};

/// Affine slice of R³ used to turn cones into planar polygons.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Slice {
    /// `x1 = 1`; point `(x2, x3)`.
    FirstCoordinate,
    /// `x1 + x2 + x3 = 1`; point `(x1, x2)`.
    CoordinateSum,
}

impl Slice {
    pub fn functional(&self, v: &[Rational]) -> Rational {
        match self {
            Slice::FirstCoordinate => v[0].clone(),
            Slice::CoordinateSum => &v[0] + &v[1] + &v[2],
        }
    }

    /// Point of the slice on the ray through `v` (functional must be positive).
    pub fn project(&self, v: &[Rational]) -> Point {
        let s = self.functional(v);
        match self {
            Slice::FirstCoordinate => Point::new(&v[1] / &s, &v[2] / &s),
            Slice::CoordinateSum => Point::new(&v[0] / &s, &v[1] / &s),
        }
    }

    pub fn lift(&self, p: &Point) -> [Rational; 3] {
        match self {
            Slice::FirstCoordinate => [one(), p.x.clone(), p.y.clone()],
            Slice::CoordinateSum => [p.x.clone(), p.y.clone(), one() - &p.x - &p.y],
        }
    }

    /// The row `a` restricted to the slice, as an affine function of the point.
    pub fn restrict(&self, a: &[Rational]) -> HalfPlane {
        match self {
            Slice::FirstCoordinate => HalfPlane {
                c0: a[0].clone(),
                cx: a[1].clone(),
                cy: a[2].clone(),
            },
            Slice::CoordinateSum => HalfPlane {
                c0: a[2].clone(),
                cx: &a[0] - &a[2],
                cy: &a[1] - &a[2],
            },
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Slice::FirstCoordinate => "first-coordinate",
            Slice::CoordinateSum => "coordinate-sum",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub a: Matrix,
    pub b: Matrix,
    pub slice: Slice,
    /// Slice functional of each column of `b`; slack `(i,j)` is `(AB)_ij / column_scale[j]`.
    pub column_scale: Vec<Rational>,
}

/// Inner polygon `P = conv(points)` inside outer polygon `Q = ∩ facets`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NestedPair {
    pub inner: Polygon2,
    pub outer: Polygon2,
    /// Generators of `P` (every column of `B`, including non-vertices).
    pub points: Vec<Point>,
    /// Inequalities of `Q` (every row of `A`, including redundant ones).
    pub facets: Vec<HalfPlane>,
    pub provenance: Option<Provenance>,
}

impl NestedPair {
    pub fn from_polygons(inner: Polygon2, outer: Polygon2) -> NestedPair {
        NestedPair {
            points: inner.vertices().to_vec(),
            facets: outer.facets(),
            inner,
            outer,
            provenance: None,
        }
    }

    pub fn is_nested(&self) -> bool {
        contains(&self.outer, &self.inner)
    }
}

/// `Â = A C⁻¹`, `B̂ = C B` with the first row of `C` equal to `1ᵀA`, so the
/// first row of `B̂` holds the column sums of `AB`.
pub fn normalize_column_sums(a: &Matrix, b: &Matrix) -> Result<(Matrix, Matrix, Matrix)> {
    let r = a.cols();
    if b.rows() != r {
        return Err(Error::Dimension("inner dimensions differ".into()));
    }
    let sums: Vec<Rational> = (1..=r).map(|k| a.col_vec(k).into_iter().sum()).collect();
    let Some(k) = sums.iter().position(|s| !s.is_zero()) else {
        return Err(Error::Precondition(
            "left factor has zero column sums".into(),
        ));
    };
    let mut rows = vec![sums];
    for u in (0..r).filter(|&u| u != k).take(r - 1) {
        let mut e = vec![Rational::zero(); r];
        e[u] = one();
        rows.push(e);
    }
    let c = Matrix::from_rows(rows)?;
    let a_hat = a.mul(&c.inverse()?)?;
    let b_hat = c.mul(b)?;
    Ok((a_hat, b_hat, c))
}

/// Planar slices `P` (columns of `b`) and `Q` (rows of `a`) of the cones.
pub fn polytopes_from_factorization(a: &Matrix, b: &Matrix, slice: Slice) -> Result<NestedPair> {
    if a.cols() != 3 || b.rows() != 3 {
        return Err(Error::Dimension(format!(
            "need p x 3 and 3 x q factors, got {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let mut points = Vec::new();
    let mut scale = Vec::new();
    for j in 1..=b.cols() {
        let col = b.col_vec(j);
        let s = slice.functional(&col);
        if !s.is_positive() {
            return Err(Error::Precondition(format!(
                "slice functional is not positive on column {j}"
            )));
        }
        points.push(slice.project(&col));
        scale.push(s);
    }
    let facets: Vec<HalfPlane> = (1..=a.rows())
        .map(|i| slice.restrict(&a.row_vec(i)))
        .collect();
    let outer = Polygon2::from_halfplanes(&facets)?;
    let inner = Polygon2::hull(&points)?;
    Ok(NestedPair {
        inner,
        outer,
        points,
        facets,
        provenance: Some(Provenance {
            a: a.clone(),
            b: b.clone(),
            slice,
            column_scale: scale,
        }),
    })
}

pub fn contains(outer: &Polygon2, inner: &Polygon2) -> bool {
    outer.contains_polygon(inner)
}

/// Facet `i` of `Q` evaluated at generator `j` of `P`.
pub fn slack_matrix(pair: &NestedPair) -> Matrix {
    let rows = pair
        .facets
        .iter()
        .map(|h| pair.points.iter().map(|p| h.eval(p)).collect())
        .collect();
    Matrix::from_rows(rows).expect("nonempty facets and points")
}
