//! Dense exact linear algebra over the rationals.
//!
//! Public indexing is 1-based; `(1,1)` is the top-left entry.

use std::fmt;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, Rational};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row_slice(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row_slice(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Result of `solve_linear`: `x = particular + kernel · c` for any `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Inconsistent,
    Consistent {
        particular: Matrix,
        /// Basis of the null space of the coefficient matrix, one vector per entry.
        kernel: Vec<Vec<Rational>>,
    },
}

impl Solution {
    pub fn particular(&self) -> Option<&Matrix> {
        match self {
            Solution::Consistent { particular, .. } => Some(particular),
            Solution::Inconsistent => None,
        }
    }

    pub fn kernel_dim(&self) -> Option<usize> {
        match self {
            Solution::Consistent { kernel, .. } => Some(kernel.len()),
            Solution::Inconsistent => None,
        }
    }
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Matrix> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension("matrix must be at least 1x1".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        assert!(rows > 0 && cols > 0);
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Dimension("rows of unequal length".into()));
        }
        Matrix::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Integer matrix; panics on ragged input.
    pub fn from_i64<R: AsRef<[i64]>>(rows: &[R]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&x| int(x)).collect())
                .collect(),
        )
        .expect("well-formed integer matrix")
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

    /// Entry `(i,j)`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        assert!(
            (1..=self.rows).contains(&i) && (1..=self.cols).contains(&j),
            "index ({i},{j}) out of range for {}x{}",
            self.rows,
            self.cols
        );
        &self.data[(i - 1) * self.cols + (j - 1)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        assert!((1..=self.rows).contains(&i) && (1..=self.cols).contains(&j));
        self.data[(i - 1) * self.cols + (j - 1)] = v;
    }

    pub(crate) fn e(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub(crate) fn e_mut(&mut self, i: usize, j: usize) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }

    pub(crate) fn row_slice(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn row_vec(&self, i: usize) -> Vec<Rational> {
        self.row_slice(i - 1).to_vec()
    }

    pub fn col_vec(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.e(i, j - 1).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row_slice(i).to_vec()).collect()
    }

    pub fn from_cols(cols: Vec<Vec<Rational>>) -> Result<Matrix> {
        Ok(Matrix::from_rows(cols)?.transpose())
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.e(i, j).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    fn check_indices(&self, rows: &[usize], cols: &[usize]) -> Result<()> {
        if let Some(i) = rows.iter().find(|&&i| i == 0 || i > self.rows) {
            return Err(Error::Index(format!("row {i} of {}", self.rows)));
        }
        if let Some(j) = cols.iter().find(|&&j| j == 0 || j > self.cols) {
            return Err(Error::Index(format!("column {j} of {}", self.cols)));
        }
        Ok(())
    }

    /// `M_{I,K}` with 1-based index lists (order preserved).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Matrix> {
        self.check_indices(rows, cols)?;
        if rows.is_empty() || cols.is_empty() {
            return Err(Error::Dimension("empty index set".into()));
        }
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                data.push(self.e(i - 1, j - 1).clone());
            }
        }
        Ok(Matrix {
            rows: rows.len(),
            cols: cols.len(),
            data,
        })
    }

    /// Matrix with row `i` and column `j` removed (either may be 0 for "none").
    pub fn delete(&self, i: usize, j: usize) -> Result<Matrix> {
        let rows: Vec<usize> = (1..=self.rows).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (1..=self.cols).filter(|&c| c != j).collect();
        self.submatrix(&rows, &cols)
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }

    pub fn det(&self) -> Result<Rational> {
        det(self)
    }

    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<Rational> {
        minor(self, rows, cols)
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        matmul(self, other)
    }

    pub fn scale(&self, s: &Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        if self.shape() != other.shape() {
            return Err(Error::Dimension("subtraction of different shapes".into()));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|x| !x.is_negative())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols {
            return Err(Error::Dimension("vstack column mismatch".into()));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix::new(self.rows + other.rows, self.cols, data)
    }

    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        Ok(self.transpose().vstack(&other.transpose())?.transpose())
    }

    /// Permutes rows and columns: result `(a,b)` is `self(rp[a], cp[b])`, 1-based lists.
    pub fn permute(&self, rp: &[usize], cp: &[usize]) -> Result<Matrix> {
        self.submatrix(rp, cp)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        match solve_linear(self, &Matrix::identity(self.rows))? {
            Solution::Consistent { particular, kernel } if kernel.is_empty() => Ok(particular),
            _ => Err(Error::Precondition("matrix is singular".into())),
        }
    }
}

/// Reduced row echelon form in place; returns pivot columns (0-based).
pub(crate) fn rref(m: &mut Matrix) -> Vec<usize> {
    let (p, q) = m.shape();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..q {
        if r == p {
            break;
        }
        let Some(piv) = (r..p).find(|&i| !m.e(i, c).is_zero()) else {
            continue;
        };
        if piv != r {
            for j in 0..q {
                m.data.swap(piv * q + j, r * q + j);
            }
        }
        let inv = m.e(r, c).recip();
        for j in c..q {
            let v = m.e(r, j) * &inv;
            *m.e_mut(r, j) = v;
        }
        for i in 0..p {
            if i == r || m.e(i, c).is_zero() {
                continue;
            }
            let f = m.e(i, c).clone();
            for j in c..q {
                let v = m.e(i, j) - &f * m.e(r, j);
                *m.e_mut(i, j) = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Exact rank by Gaussian elimination.
pub fn rank(m: &Matrix) -> usize {
    let mut w = m.clone();
    let (p, q) = w.shape();
    let mut r = 0;
    for c in 0..q {
        if r == p {
            break;
        }
        let Some(piv) = (r..p).find(|&i| !w.e(i, c).is_zero()) else {
            continue;
        };
        if piv != r {
            for j in 0..q {
                w.data.swap(piv * q + j, r * q + j);
            }
        }
        for i in r + 1..p {
            if w.e(i, c).is_zero() {
                continue;
            }
            let f = w.e(i, c) / w.e(r, c);
            for j in c..q {
                let v = w.e(i, j) - &f * w.e(r, j);
                *w.e_mut(i, j) = v;
            }
        }
        r += 1;
    }
    r
}

pub fn det(m: &Matrix) -> Result<Rational> {
    if m.rows != m.cols {
        return Err(Error::Dimension(format!(
            "determinant of a {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let n = m.rows;
    let mut w = m.clone();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&i| !w.e(i, c).is_zero()) else {
            return Ok(Rational::zero());
        };
        if piv != c {
            for j in 0..n {
                w.data.swap(piv * n + j, c * n + j);
            }
            d = -d;
        }
        d *= w.e(c, c);
        for i in c + 1..n {
            if w.e(i, c).is_zero() {
                continue;
            }
            let f = w.e(i, c) / w.e(c, c);
            for j in c..n {
                let v = w.e(i, j) - &f * w.e(c, j);
                *w.e_mut(i, j) = v;
            }
        }
    }
    Ok(d)
}

/// `det(M_{I,K})`, 1-based index sets.
pub fn minor(m: &Matrix, rows: &[usize], cols: &[usize]) -> Result<Rational> {
    if rows.len() != cols.len() {
        return Err(Error::Dimension(format!(
            "minor with {} rows and {} columns",
            rows.len(),
            cols.len()
        )));
    }
    if rows.is_empty() {
        return Ok(Rational::one());
    }
    det(&m.submatrix(rows, cols)?)
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.cols != b.rows {
        return Err(Error::Dimension(format!(
            "{}x{} times {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut out = Matrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let x = a.e(i, k);
            if x.is_zero() {
                continue;
            }
            for j in 0..b.cols {
                let y = b.e(k, j);
                if !y.is_zero() {
                    *out.e_mut(i, j) += x * y;
                }
            }
        }
    }
    Ok(out)
}

/// Solves `a x = rhs` for every column of `rhs` at once.
pub fn solve_linear(a: &Matrix, rhs: &Matrix) -> Result<Solution> {
    if a.rows != rhs.rows {
        return Err(Error::Dimension("right-hand side row count".into()));
    }
    let n = a.cols;
    let k = rhs.cols;
    let mut aug = a.hstack(rhs)?;
    let pivots = rref(&mut aug);
    if pivots.iter().any(|&c| c >= n) {
        return Ok(Solution::Inconsistent);
    }
    let mut particular = Matrix::zeros(n, k);
    for (r, &c) in pivots.iter().enumerate() {
        for j in 0..k {
            *particular.e_mut(c, j) = aug.e(r, n + j).clone();
        }
    }
    let mut kernel = Vec::new();
    for f in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); n];
        v[f] = Rational::one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = -aug.e(r, f).clone();
        }
        kernel.push(v);
    }
    Ok(Solution::Consistent { particular, kernel })
}

/// All `k`-subsets of `1..=n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            if n - i + 1 < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(1, n, k, &mut Vec::new(), &mut out);
    }
    out
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
