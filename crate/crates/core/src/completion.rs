//! Constructive completion: rank one, 3×3 nonnegative rank two, one missing
//! entry, the 4×4 boundary sextic, and the zero-to-negative perturbation.

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{subsets, Matrix};
use crate::partial::{cycle_property, potentials, zero_line_property, PartialMatrix, Pattern};
use crate::rational::{int, one, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompletionOutcome {
    /// No completion of the requested kind.
    None,
    Unique(Matrix),
    /// Canonical member of an infinite family; `free` lists the entries that
    /// take more than one value across the family.
    Infinite {
        canonical: Matrix,
        free: Vec<(usize, usize)>,
    },
    /// A valid completion, uniqueness not examined.
    Witness(Matrix),
}

impl CompletionOutcome {
    pub fn matrix(&self) -> Option<&Matrix> {
        match self {
            CompletionOutcome::None => None,
            CompletionOutcome::Unique(m) | CompletionOutcome::Witness(m) => Some(m),
            CompletionOutcome::Infinite { canonical, .. } => Some(canonical),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CompletionOutcome::None => "NONE",
            CompletionOutcome::Unique(_) => "UNIQUE",
            CompletionOutcome::Infinite { .. } => "INFINITE",
            CompletionOutcome::Witness(_) => "WITNESS",
        }
    }
}

fn require_nonneg(m: &PartialMatrix) -> Result<()> {
    match m.first_negative() {
        Some((i, j)) => Err(Error::Negative(i, j)),
        None => Ok(()),
    }
}

/// Rank-one completion.
///
/// `Unique` when every missing entry is pinned down, otherwise `Infinite`
/// with the canonical member (unit scale between components, zero on rows
/// and columns without observed nonzeros).
pub fn rank1_complete(m: &PartialMatrix, require_nonnegative: bool) -> Result<CompletionOutcome> {
    if require_nonnegative {
        require_nonneg(m)?;
    }
    if !zero_line_property(m).per_entry || !cycle_property(m) {
        return Ok(CompletionOutcome::None);
    }
    let (u, v) = potentials(m).expect("cycle property implies consistent potentials");
    let (p, q) = m.shape();
    let mut canonical = Matrix::zeros(p, q);
    for i in 1..=p {
        for j in 1..=q {
            let val = match m.get(i, j) {
                Some(x) => x.clone(),
                None => match (&u[i - 1], &v[j - 1]) {
                    (Some(a), Some(b)) => a * b,
                    _ => Rational::zero(),
                },
            };
            canonical.set(i, j, if require_nonnegative { val.abs() } else { val });
        }
    }

    let g = crate::partial::support_graph(m);
    let comp = g.components(true);
    let zero_in_row_nz_col =
        |i: usize| (1..=q).any(|k| m.get(i, k).is_some_and(|x| x.is_zero()) && v[k - 1].is_some());
    let zero_in_col_nz_row =
        |j: usize| (1..=p).any(|l| m.get(l, j).is_some_and(|x| x.is_zero()) && u[l - 1].is_some());
    let mut free = Vec::new();
    for (i, j) in m.missing() {
        let determined = u[i - 1].is_some() && v[j - 1].is_some() && comp[i - 1] == comp[p + j - 1];
        if !determined && !zero_in_row_nz_col(i) && !zero_in_col_nz_row(j) {
            free.push((i, j));
        }
    }
    debug_assert!(canonical.rank() <= 1 && m.agrees_with(&canonical));
    Ok(if free.is_empty() {
        CompletionOutcome::Unique(canonical)
    } else {
        CompletionOutcome::Infinite { canonical, free }
    })
}

/// Re-attaches row `i` (≤ 1 observed entry) to a completion of the other rows.
pub fn extend_by_sparse_row(
    m: &PartialMatrix,
    completed_rest: &Matrix,
    i: usize,
) -> Result<Matrix> {
    let (p, q) = m.shape();
    if i == 0 || i > p {
        return Err(Error::Index(format!("row {i} of {p}")));
    }
    if completed_rest.shape() != (p - 1, q) {
        return Err(Error::Dimension(
            "completed rest must omit exactly row i".into(),
        ));
    }
    let others: Vec<usize> = (1..=p).filter(|&k| k != i).collect();
    if !m
        .select(&others, &(1..=q).collect::<Vec<_>>())?
        .agrees_with(completed_rest)
    {
        return Err(Error::Precondition(
            "completed rest disagrees with observed entries".into(),
        ));
    }
    let obs: Vec<usize> = (1..=q).filter(|&j| m.is_observed(i, j)).collect();
    if obs.len() > 1 {
        return Err(Error::Precondition(format!(
            "row {i} has {} observed entries",
            obs.len()
        )));
    }
    let new_row = match obs.first() {
        Some(&j) if !m.get(i, j).expect("observed").is_zero() => {
            let mij = m.get(i, j).expect("observed");
            let k = others
                .iter()
                .position(|&k| m.get(k, j).is_some_and(|x| !x.is_zero()))
                .ok_or_else(|| {
                    Error::Precondition(format!("no other observed nonzero in column {j}"))
                })?;
            let scale = mij / completed_rest.get(k + 1, j);
            completed_rest
                .row_vec(k + 1)
                .iter()
                .map(|x| x * &scale)
                .collect()
        }
        _ => vec![Rational::zero(); q],
    };
    let mut rows = completed_rest.to_rows();
    rows.insert(i - 1, new_row);
    Matrix::from_rows(rows)
}

/// For 3×3 patterns: whether rank-two completability implies nonnegative
/// rank-two completability. False exactly when the missing entries are
/// nonempty and sit in pairwise distinct rows and columns.
pub fn nn_rank2_pattern_equivalence(pattern: &Pattern) -> Result<bool> {
    if (pattern.rows(), pattern.cols()) != (3, 3) {
        return Err(Error::Dimension("pattern must be 3x3".into()));
    }
    let miss = pattern.missing();
    if miss.is_empty() {
        return Ok(true);
    }
    let rows: std::collections::BTreeSet<_> = miss.iter().map(|e| e.0).collect();
    let cols: std::collections::BTreeSet<_> = miss.iter().map(|e| e.1).collect();
    Ok(!(rows.len() == miss.len() && cols.len() == miss.len()))
}

fn sparse_lines(m: &PartialMatrix) -> Vec<usize> {
    (1..=m.rows())
        .filter(|&i| (1..=m.cols()).filter(|&j| m.is_observed(i, j)).count() <= 1)
        .collect()
}

/// Cases that re-extend a sparse row: entry absent/zero, or nonzero with
/// another observed nonzero below/above it. Missing entries of the remaining
/// rows are filled with zero.
fn try_sparse_row(m: &PartialMatrix, i: usize) -> Result<Option<Matrix>> {
    let q = m.cols();
    let obs: Vec<usize> = (1..=q).filter(|&j| m.is_observed(i, j)).collect();
    let others: Vec<usize> = (1..=m.rows()).filter(|&k| k != i).collect();
    let extendable = match obs.first() {
        None => true,
        Some(&j) => {
            m.get(i, j).expect("observed").is_zero()
                || others
                    .iter()
                    .any(|&k| m.get(k, j).is_some_and(|x| !x.is_zero()))
        }
    };
    if !extendable {
        return Ok(None);
    }
    let rest = m
        .select(&others, &(1..=q).collect::<Vec<_>>())?
        .fill_missing(&Rational::zero());
    extend_by_sparse_row(m, &rest, i).map(Some)
}

/// Sparse row whose lone nonzero `m_ij` has no other observed nonzero in column j.
fn isolated_row_case(m: &PartialMatrix, i: usize) -> Result<CompletionOutcome> {
    let (p, q) = m.shape();
    let j = (1..=q)
        .find(|&j| m.is_observed(i, j))
        .expect("nonzero entry");
    let others: Vec<usize> = (1..=p).filter(|&k| k != i).collect();
    if let Some(&k) = others.iter().find(|&&k| !m.is_observed(k, j)) {
        // an unobserved slot in column j can carry a positive value
        let mut filled = m.clone();
        filled.set(k, j, Some(one()));
        let done = try_sparse_row(&filled, i)?.expect("column now has another nonzero");
        return Ok(CompletionOutcome::Witness(done));
    }
    // column j is zero off row i, so the rank is 1 + rank of the rest
    let cols: Vec<usize> = (1..=q).filter(|&c| c != j).collect();
    let block = m.select(&others, &cols)?;
    let Some(r1) = rank1_complete(&block, true)?.matrix().cloned() else {
        return Ok(CompletionOutcome::None);
    };
    let mut out = Matrix::zeros(p, q);
    out.set(i, j, m.get(i, j).expect("observed").clone());
    for (a, &k) in others.iter().enumerate() {
        for (b, &c) in cols.iter().enumerate() {
            out.set(k, c, r1.get(a + 1, b + 1).clone());
        }
    }
    Ok(CompletionOutcome::Witness(out))
}

/// Nonnegative rank ≤ 2 completion of a 3×3 nonnegative partial matrix.
///
/// Sparse rows are tried before sparse columns; the isolated-entry case is
/// used only when no row or column extends directly.
pub fn nn_rank2_complete_3x3(m: &PartialMatrix) -> Result<CompletionOutcome> {
    if m.shape() != (3, 3) {
        return Err(Error::Dimension("expected a 3x3 partial matrix".into()));
    }
    require_nonneg(m)?;
    if !nn_rank2_pattern_equivalence(&m.pattern())? {
        return Err(Error::Unsupported(
            "missing entries in pairwise distinct rows and columns".into(),
        ));
    }
    if let Some(full) = m.to_matrix() {
        return Ok(if full.rank() <= 2 {
            CompletionOutcome::Unique(full)
        } else {
            CompletionOutcome::None
        });
    }
    let t = m.transpose();
    let mut found = None;
    for i in sparse_lines(m) {
        if let Some(x) = try_sparse_row(m, i)? {
            found = Some(x);
            break;
        }
    }
    if found.is_none() {
        for j in sparse_lines(&t) {
            if let Some(x) = try_sparse_row(&t, j)? {
                found = Some(x.transpose());
                break;
            }
        }
    }
    let outcome = match found {
        Some(x) => CompletionOutcome::Witness(x),
        None => match sparse_lines(m).first() {
            Some(&i) => isolated_row_case(m, i)?,
            None => match isolated_row_case(&t, sparse_lines(&t)[0])? {
                CompletionOutcome::Witness(x) => CompletionOutcome::Witness(x.transpose()),
                other => other,
            },
        },
    };
    if let Some(x) = outcome.matrix() {
        if !(x.rank() <= 2 && x.is_nonnegative() && m.agrees_with(x)) {
            return Err(Error::Unsupported("construction did not verify".into()));
        }
    }
    Ok(outcome)
}

fn check_one_missing(m: &PartialMatrix, hole: (usize, usize), r: usize) -> Result<()> {
    let (p, q) = m.shape();
    if r == 0 || r > p.min(q) {
        return Err(Error::Precondition(format!(
            "rank bound {r} outside 1..={}",
            p.min(q)
        )));
    }
    if m.missing() != vec![hole] {
        return Err(Error::Precondition(format!(
            "exactly the entry ({},{}) must be missing",
            hole.0, hole.1
        )));
    }
    Ok(())
}

fn deleted_ranks(m: &PartialMatrix, hole: (usize, usize)) -> (usize, usize, usize) {
    let full = m.fill_missing(&Rational::zero());
    let (i, j) = hole;
    let row_del = full.delete(i, 0).map_or(0, |x| x.rank());
    let col_del = full.delete(0, j).map_or(0, |x| x.rank());
    let both = full.delete(i, j).map_or(0, |x| x.rank());
    (row_del, col_del, both)
}

/// Whether the data lies in the image of the singular locus: deleting the
/// hole's row or column already drops the rank below `r`.
pub fn in_singular_image(m: &PartialMatrix, hole: (usize, usize), r: usize) -> Result<bool> {
    check_one_missing(m, hole, r)?;
    let (a, b, _) = deleted_ranks(m, hole);
    Ok(a + 1 <= r || b + 1 <= r)
}

/// Value of the hole from the `(r+1)`-minor on rows `K ∪ {i}`, columns
/// `L ∪ {j}`, which is affine in the hole value with slope `±det M_{K,L}`.
pub fn hole_value_via_minor(
    m: &PartialMatrix,
    hole: (usize, usize),
    k: &[usize],
    l: &[usize],
) -> Result<Rational> {
    let (i, j) = hole;
    if k.contains(&i) || l.contains(&j) || k.len() != l.len() {
        return Err(Error::Precondition(
            "K, L must avoid the hole and have equal size".into(),
        ));
    }
    let mut rows = k.to_vec();
    rows.push(i);
    rows.sort_unstable();
    let mut cols = l.to_vec();
    cols.push(j);
    cols.sort_unstable();
    let at = |x: Rational| -> Result<Rational> {
        let mut f = m.fill_missing(&Rational::zero());
        f.set(i, j, x);
        f.minor(&rows, &cols)
    };
    let g0 = at(Rational::zero())?;
    let slope = at(one())? - &g0;
    if slope.is_zero() {
        return Err(Error::Precondition(
            "chosen minor M_{K,L} is singular".into(),
        ));
    }
    Ok(-g0 / slope)
}

/// One-missing-entry trichotomy for rank `r`.
pub fn classify_one_missing(
    m: &PartialMatrix,
    hole: (usize, usize),
    r: usize,
) -> Result<CompletionOutcome> {
    check_one_missing(m, hole, r)?;
    let (a, b, c) = deleted_ranks(m, hole);
    if a < r || b < r {
        let canonical = m.fill_missing(&Rational::zero());
        return Ok(CompletionOutcome::Infinite {
            canonical,
            free: vec![hole],
        });
    }
    if !(a == r && b == r && c == r) {
        return Ok(CompletionOutcome::None);
    }
    let (p, q) = m.shape();
    let (i, j) = hole;
    let rows: Vec<usize> = (1..=p).filter(|&x| x != i).collect();
    let cols: Vec<usize> = (1..=q).filter(|&x| x != j).collect();
    let full = m.fill_missing(&Rational::zero());
    for ks in subsets(rows.len(), r) {
        let kk: Vec<usize> = ks.iter().map(|&x| rows[x - 1]).collect();
        for ls in subsets(cols.len(), r) {
            let ll: Vec<usize> = ls.iter().map(|&x| cols[x - 1]).collect();
            if full.minor(&kk, &ll)?.is_zero() {
                continue;
            }
            let value = hole_value_via_minor(m, hole, &kk, &ll)?;
            let mut done = full.clone();
            done.set(i, j, value);
            debug_assert_eq!(done.rank(), r);
            return Ok(CompletionOutcome::Unique(done));
        }
    }
    unreachable!("rank r block has a nonzero r-minor")
}

/// The 24-term degree-6 polynomial in the entries of a 4×4 matrix that
/// avoids `m11`, as printed.
pub const BOUNDARY_SEXTIC: &str = "+m14m23m32m33m41m42-m14m22m33^2m41m42+m12m24m33^2m41m42-m13m23m32m34m41m42+m13m22m33m34m41m42-m12m23m33m34m41m42-m14m23m31m33m42^2+m13m23m31m34m42^2-m14m23m32^2m41m43+m14m22m32m33m41m43-m12m24m32m33m41m43+m12m23m32m34m41m43+m14m23m31m32m42m43+m14m22m31m33m42m43-m12m24m31m33m42m43-m13m22m31m34m42m43-m14m22m31m32m43^2+m12m24m31m32m43^2+m13m23m32^2m41m44-m13m22m32m33m41m44-m13m23m31m32m42m44+m12m23m31m33m42m44+m13m22m31m32m43m44-m12m23m31m32m43m44";

/// A monomial as a sign and a list of `(row, col, power)` factors.
pub type Monomial = (i8, Vec<(usize, usize, u32)>);

/// Parses a polynomial written like `BOUNDARY_SEXTIC`.
pub fn parse_monomials(src: &str) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = Vec::new();
    let b = src.as_bytes();
    let mut k = 0;
    while k < b.len() {
        let sign = match b[k] {
            b'+' => 1,
            b'-' => -1,
            c => panic!("unexpected `{}` in polynomial", c as char),
        };
        k += 1;
        let mut factors = Vec::new();
        while k < b.len() && b[k] == b'm' {
            let (i, j) = ((b[k + 1] - b'0') as usize, (b[k + 2] - b'0') as usize);
            k += 3;
            let mut pow = 1;
            if k < b.len() && b[k] == b'^' {
                pow = (b[k + 1] - b'0') as u32;
                k += 2;
            }
            factors.push((i, j, pow));
        }
        out.push((sign, factors));
    }
    out
}

pub fn eval_monomials(monos: &[Monomial], entry: impl Fn(usize, usize) -> Rational) -> Rational {
    let mut total = Rational::zero();
    for (sign, factors) in monos {
        let mut t = int(*sign as i64);
        for &(i, j, pow) in factors {
            t *= num::pow(entry(i, j), pow as usize);
        }
        total += t;
    }
    total
}

pub fn eval_boundary_sextic(m: &Matrix) -> Result<Rational> {
    if m.shape() != (4, 4) {
        return Err(Error::Dimension(
            "boundary sextic needs a 4x4 matrix".into(),
        ));
    }
    Ok(eval_monomials(&parse_monomials(BOUNDARY_SEXTIC), |i, j| {
        m.get(i, j).clone()
    }))
}

/// Same polynomial on a partial matrix whose only possibly-missing entry is `(1,1)`.
pub fn eval_boundary_sextic_partial(m: &PartialMatrix) -> Result<Rational> {
    if m.shape() != (4, 4) {
        return Err(Error::Dimension(
            "boundary sextic needs a 4x4 matrix".into(),
        ));
    }
    if m.missing().iter().any(|&e| e != (1, 1)) {
        return Err(Error::Precondition(
            "only entry (1,1) may be missing".into(),
        ));
    }
    eval_boundary_sextic(&m.fill_missing(&Rational::zero()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorSide {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbationSpec {
    pub side: FactorSide,
    /// 1-based position inside the chosen factor.
    pub position: (usize, usize),
    pub epsilon: Rational,
}

/// Product after replacing one zero entry of a factor by `epsilon < 0`.
pub fn perturb_unique_nmf(a: &Matrix, b: &Matrix, spec: &PerturbationSpec) -> Result<Matrix> {
    if !spec.epsilon.is_negative() {
        return Err(Error::Precondition("epsilon must be negative".into()));
    }
    if !a.mul(b)?.is_nonnegative() {
        return Err(Error::Precondition(
            "product of the factors is not nonnegative".into(),
        ));
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    let target = match spec.side {
        FactorSide::Left => &mut a,
        FactorSide::Right => &mut b,
    };
    let (i, j) = spec.position;
    if i == 0 || j == 0 || i > target.rows() || j > target.cols() {
        return Err(Error::Index(format!("({i},{j}) outside the factor")));
    }
    if !target.get(i, j).is_zero() {
        return Err(Error::Precondition(format!(
            "factor entry ({i},{j}) is not zero"
        )));
    }
    target.set(i, j, spec.epsilon.clone());
    a.mul(&b)
}
