//! Deciding nonnegative rank ≤ 3 of a full nonnegative matrix.

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::{
    cross, nested_triangle, normalize_column_sums, polytopes_from_factorization, NestedPair, Point,
    Slice, Triangle,
};
use crate::linalg::{solve_linear, Matrix, Solution};
use crate::rational::Rational;

/// Verdict with an exact witness `M = W·H`, `W, H ≥ 0`, when it holds.
#[derive(Clone, Debug)]
pub struct NnRank3 {
    pub holds: bool,
    pub rank: usize,
    pub witness: Option<(Matrix, Matrix)>,
    /// Pair and triangle used for rank exactly 3.
    pub pair: Option<NestedPair>,
    pub triangle: Option<Triangle>,
}

fn insert_zero_lines(
    w: &Matrix,
    h: &Matrix,
    rows: &[usize],
    cols: &[usize],
    p: usize,
    q: usize,
) -> (Matrix, Matrix) {
    let k = w.cols();
    let mut wf = Matrix::zeros(p, k);
    for (a, &i) in rows.iter().enumerate() {
        for c in 1..=k {
            wf.set(i, c, w.get(a + 1, c).clone());
        }
    }
    let mut hf = Matrix::zeros(k, q);
    for (b, &j) in cols.iter().enumerate() {
        for c in 1..=k {
            hf.set(c, j, h.get(c, b + 1).clone());
        }
    }
    (wf, hf)
}

/// Independent columns picked greedily, 1-based.
pub(crate) fn basis_columns(m: &Matrix) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for j in 1..=m.cols() {
        let mut trial = chosen.clone();
        trial.push(j);
        if m.submatrix(&(1..=m.rows()).collect::<Vec<_>>(), &trial)
            .unwrap()
            .rank()
            == trial.len()
        {
            chosen = trial;
        }
    }
    chosen
}

fn solve_exact(a: &Matrix, m: &Matrix) -> Matrix {
    match solve_linear(a, m).expect("shapes agree") {
        Solution::Consistent { particular, .. } => particular,
        Solution::Inconsistent => unreachable!("columns span the column space"),
    }
}

/// Size-`rank` nonnegative factorization when rank ≤ 2 (nonnegative rank equals rank there).
pub(crate) fn low_rank_witness(m: &Matrix, rank: usize) -> (Matrix, Matrix) {
    let (p, q) = m.shape();
    match rank {
        0 => (Matrix::zeros(p, 1), Matrix::zeros(1, q)),
        1 => {
            let j = (1..=q)
                .find(|&j| !m.col_vec(j).iter().all(|x| x.is_zero()))
                .unwrap();
            let i = (1..=p).find(|&i| !m.get(i, j).is_zero()).unwrap();
            let w = Matrix::from_cols(vec![m.col_vec(j)]).unwrap();
            let h = Matrix::from_rows(vec![m.row_vec(i).iter().map(|x| x / m.get(i, j)).collect()])
                .unwrap();
            (w, h)
        }
        _ => {
            // extreme rays of the planar cone spanned by the columns
            let basis = basis_columns(m);
            let a = m.submatrix(&(1..=p).collect::<Vec<_>>(), &basis).unwrap();
            let coords = solve_exact(&a, m);
            let pts: Vec<Point> = (1..=q)
                .map(|j| Point::new(coords.get(1, j).clone(), coords.get(2, j).clone()))
                .collect();
            let nonzero: Vec<usize> = (0..q)
                .filter(|&j| !(pts[j].x.is_zero() && pts[j].y.is_zero()))
                .collect();
            let lo = *nonzero
                .iter()
                .find(|&&j| {
                    nonzero
                        .iter()
                        .all(|&k| !cross(&pts[j], &pts[k]).is_negative())
                })
                .expect("pointed cone");
            let hi = *nonzero
                .iter()
                .find(|&&j| {
                    nonzero
                        .iter()
                        .all(|&k| !cross(&pts[k], &pts[j]).is_negative())
                })
                .expect("pointed cone");
            let w = Matrix::from_cols(vec![m.col_vec(lo + 1), m.col_vec(hi + 1)]).unwrap();
            let h = solve_exact(&w, m);
            (w, h)
        }
    }
}

/// Nested-triangle decision with an exact factorization when the answer is yes.
pub fn nn_rank_at_most_3(m: &Matrix) -> Result<NnRank3> {
    if let Some(i) = (1..=m.rows()).find(|&i| m.row_vec(i).iter().any(|x| x.is_negative())) {
        let j = (1..=m.cols()).find(|&j| m.get(i, j).is_negative()).unwrap();
        return Err(Error::Negative(i, j));
    }
    let (p, q) = m.shape();
    let rows: Vec<usize> = (1..=p)
        .filter(|&i| m.row_vec(i).iter().any(|x| !x.is_zero()))
        .collect();
    let cols: Vec<usize> = (1..=q)
        .filter(|&j| m.col_vec(j).iter().any(|x| !x.is_zero()))
        .collect();
    if rows.is_empty() {
        let (w, h) = low_rank_witness(m, 0);
        return Ok(NnRank3 {
            holds: true,
            rank: 0,
            witness: Some((w, h)),
            pair: None,
            triangle: None,
        });
    }
    let core = m.submatrix(&rows, &cols)?;
    let rank = core.rank();
    if rank < 3 {
        let (w, h) = low_rank_witness(&core, rank);
        let (w, h) = insert_zero_lines(&w, &h, &rows, &cols, p, q);
        debug_assert_eq!(&w.mul(&h)?, m);
        return Ok(NnRank3 {
            holds: true,
            rank,
            witness: Some((w, h)),
            pair: None,
            triangle: None,
        });
    }
    if rank > 3 {
        return Ok(NnRank3 {
            holds: false,
            rank,
            witness: None,
            pair: None,
            triangle: None,
        });
    }
    let basis = basis_columns(&core);
    let a = core.submatrix(&(1..=core.rows()).collect::<Vec<_>>(), &basis)?;
    let b = solve_exact(&a, &core);
    let (a_hat, b_hat, _) = normalize_column_sums(&a, &b)?;
    let pair = polytopes_from_factorization(&a_hat, &b_hat, Slice::FirstCoordinate)?;
    let triangle = nested_triangle(&pair)?;
    let witness = match &triangle {
        Some(t) => {
            let (w, h) = triangle_factorization(&a_hat, &b_hat, Slice::FirstCoordinate, t)?;
            Some(insert_zero_lines(&w, &h, &rows, &cols, p, q))
        }
        None => None,
    };
    if let Some((w, h)) = &witness {
        if !(w.is_nonnegative() && h.is_nonnegative() && &w.mul(h)? == m) {
            return Err(Error::Precondition(
                "witness failed exact re-verification".into(),
            ));
        }
    }
    Ok(NnRank3 {
        holds: triangle.is_some(),
        rank,
        witness,
        pair: Some(pair),
        triangle,
    })
}

/// `W = Â C`, `H = C⁻¹ B̂` where the columns of `C` lift the triangle's vertices.
pub fn triangle_factorization(
    a_hat: &Matrix,
    b_hat: &Matrix,
    slice: Slice,
    t: &Triangle,
) -> Result<(Matrix, Matrix)> {
    let c = Matrix::from_cols(
        t.vertices()
            .iter()
            .map(|v| slice.lift(v).to_vec())
            .collect::<Vec<Vec<Rational>>>(),
    )?;
    let w = a_hat.mul(&c)?;
    let h = c.inverse()?.mul(b_hat)?;
    Ok((w, h))
}
