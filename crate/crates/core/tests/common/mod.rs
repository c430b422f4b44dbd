//! Independent oracles and fixtures shared by the integration suites.
#![allow(dead_code)]

use std::collections::BTreeMap;

use nncomplete::{int, rat, Matrix, PartialMatrix, Point, Polygon2, Rational, Triangle};
use num::{Signed, Zero};
use rand::Rng;

pub mod suites;

pub fn m_unique() -> Matrix {
    Matrix::from_i64(&[[12, 2, 1, 9], [8, 6, 3, 10], [4, 16, 13, 9], [12, 4, 6, 5]])
}

pub fn a_unique() -> Matrix {
    Matrix::from_i64(&[[0, 1, 2], [1, 0, 2], [4, 1, 0], [1, 3, 0]])
}

pub fn b_unique() -> Matrix {
    Matrix::from_i64(&[[0, 4, 3, 2], [4, 0, 1, 1], [4, 1, 0, 4]])
}

pub fn m_perturbed() -> Matrix {
    Matrix::from_i64(&[[12, 2, 1, 9], [8, 6, 3, 10], [4, 16, 13, 9], [8, 3, 6, 1]])
}

pub fn perturbed_partial() -> PartialMatrix {
    PartialMatrix::parse("? 2 1 9\n8 6 3 10\n4 16 13 9\n8 3 6 1\n").unwrap()
}

pub fn family_a() -> PartialMatrix {
    PartialMatrix::parse("? 5 1 9\n? 1 7 7\n1 5 9 1\n0 9 3 3\n").unwrap()
}

pub fn family_b() -> PartialMatrix {
    PartialMatrix::parse("? 1 112/425 1\n1/10 ? 1/100 7/20\n1/10 10 9/10 3/5\n4/5 9 9/100 1/20\n")
        .unwrap()
}

pub fn unique_hidden() -> PartialMatrix {
    PartialMatrix::hide(&m_unique(), &[(1, 1), (2, 2)]).unwrap()
}

pub fn pt(x: Rational, y: Rational) -> Point {
    Point::new(x, y)
}

pub fn pq(a: i64, b: i64, c: i64, d: i64) -> Point {
    Point::new(rat(a, b), rat(c, d))
}

// ---- linear algebra ----

/// Laplace expansion along the first row.
pub fn cofactor_det(m: &Matrix) -> Rational {
    let n = m.rows();
    assert_eq!(n, m.cols());
    if n == 0 {
        return Rational::from_integer(1.into());
    }
    if n == 1 {
        return m.get(1, 1).clone();
    }
    let mut acc = Rational::zero();
    for j in 1..=n {
        let a = m.get(1, j);
        if a.is_zero() {
            continue;
        }
        let rows: Vec<usize> = (2..=n).collect();
        let cols: Vec<usize> = (1..=n).filter(|&c| c != j).collect();
        let d = cofactor_det(&m.submatrix(&rows, &cols).unwrap());
        if j % 2 == 1 {
            acc += a * d;
        } else {
            acc -= a * d;
        }
    }
    acc
}

pub fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, k, &mut Vec::new(), &mut out);
    out
}

/// Largest `k` with a nonzero `k×k` minor.
pub fn minor_rank(m: &Matrix) -> usize {
    let top = m.rows().min(m.cols());
    for k in (1..=top).rev() {
        for r in combos(m.rows(), k) {
            for c in combos(m.cols(), k) {
                if !cofactor_det(&m.submatrix(&r, &c).unwrap()).is_zero() {
                    return k;
                }
            }
        }
    }
    0
}

pub fn naive_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let mut out = Matrix::zeros(a.rows(), b.cols());
    for i in 1..=a.rows() {
        for j in 1..=b.cols() {
            let mut s = Rational::zero();
            for k in 1..=a.cols() {
                s += a.get(i, k) * b.get(k, j);
            }
            out.set(i, j, s);
        }
    }
    out
}

// ---- random instances ----

pub fn rand_small<R: Rng>(rng: &mut R, lo: i64, hi: i64) -> Rational {
    let d = rng.gen_range(1..=4);
    rat(rng.gen_range(lo * d..=hi * d), d)
}

pub fn rand_matrix<R: Rng>(rng: &mut R, p: usize, q: usize, lo: i64, hi: i64) -> Matrix {
    let rows: Vec<Vec<Rational>> = (0..p)
        .map(|_| (0..q).map(|_| rand_small(rng, lo, hi)).collect())
        .collect();
    Matrix::from_rows(rows).unwrap()
}

/// Nonnegative integer matrix with roughly `zero_pct` percent zeros.
pub fn rand_nonneg_int<R: Rng>(rng: &mut R, p: usize, q: usize, hi: i64, zero_pct: u32) -> Matrix {
    let rows: Vec<Vec<Rational>> = (0..p)
        .map(|_| {
            (0..q)
                .map(|_| {
                    if rng.gen_ratio(zero_pct, 100) {
                        int(0)
                    } else {
                        int(rng.gen_range(1..=hi))
                    }
                })
                .collect()
        })
        .collect();
    Matrix::from_rows(rows).unwrap()
}

// ---- rank one ----

/// Every simple cycle of the bipartite graph on `edges`, as alternating
/// row/column sequences `r1 c1 r2 c2 ... rk ck` closing back to `r1`.
pub fn bipartite_cycles(p: usize, q: usize, edges: &[(usize, usize)]) -> Vec<Vec<(usize, usize)>> {
    let has = |i: usize, j: usize| edges.contains(&(i, j));
    let mut out = Vec::new();
    for k in 2..=p.min(q) {
        for rs in combos(p, k) {
            for cs in combos(q, k) {
                // fix r1 = smallest row to cut rotations
                for rperm in perms(&rs[1..]) {
                    let mut rows = vec![rs[0]];
                    rows.extend(rperm);
                    for cperm in perms(&cs) {
                        let ok = (0..k)
                            .all(|a| has(rows[a], cperm[a]) && has(rows[(a + 1) % k], cperm[a]));
                        if ok {
                            let mut cyc = Vec::new();
                            for a in 0..k {
                                cyc.push((rows[a], cperm[a]));
                                cyc.push((rows[(a + 1) % k], cperm[a]));
                            }
                            out.push(cyc);
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn perms(xs: &[usize]) -> Vec<Vec<usize>> {
    if xs.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..xs.len() {
        let mut rest = xs.to_vec();
        let x = rest.remove(i);
        for mut p in perms(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Alternating products agree on every cycle of nonzero observed entries.
pub fn cycles_consistent(m: &PartialMatrix) -> bool {
    let nz: Vec<(usize, usize)> = m
        .observed_entries()
        .into_iter()
        .filter(|(_, _, v)| !v.is_zero())
        .map(|(i, j, _)| (i, j))
        .collect();
    bipartite_cycles(m.rows(), m.cols(), &nz).iter().all(|cyc| {
        let mut odd = Rational::from_integer(1.into());
        let mut even = Rational::from_integer(1.into());
        for (k, &(i, j)) in cyc.iter().enumerate() {
            let v = m.get(i, j).unwrap();
            if k % 2 == 0 {
                odd *= v;
            } else {
                even *= v;
            }
        }
        odd == even
    })
}

/// Rank-1 oracle by brute force over the zero supports of `u` and `v`.
///
/// Returns `None` if no rank-1 completion exists, otherwise the list of
/// missing-entry values per admissible support (`None` = free value).
pub fn rank1_oracle(m: &PartialMatrix) -> Option<Vec<BTreeMap<(usize, usize), Option<Rational>>>> {
    if !cycles_consistent(m) {
        return None;
    }
    let (p, q) = m.shape();
    let obs = m.observed_entries();
    let nz: Vec<(usize, usize, Rational)> = obs
        .iter()
        .filter(|(_, _, v)| !v.is_zero())
        .map(|(i, j, v)| (*i, *j, (*v).clone()))
        .collect();
    let mut found = Vec::new();
    for mask in 0u32..(1 << (p + q)) {
        let zr = |i: usize| mask & (1 << (i - 1)) != 0;
        let zc = |j: usize| mask & (1 << (p + j - 1)) != 0;
        let ok = obs
            .iter()
            .all(|(i, j, v)| (zr(*i) || zc(*j)) == v.is_zero());
        if !ok {
            continue;
        }
        // path products over nonzero entries between live rows and columns
        let mut vals = BTreeMap::new();
        for (i, j) in m.missing() {
            let v = if zr(i) || zc(j) {
                Some(Rational::zero())
            } else {
                path_value(p, &nz, i, j)
            };
            vals.insert((i, j), v);
        }
        found.push(vals);
    }
    if found.is_empty() {
        None
    } else {
        Some(found)
    }
}

/// `u_i v_j` along any alternating path of nonzero entries from row `i` to column `j`.
fn path_value(p: usize, nz: &[(usize, usize, Rational)], i: usize, j: usize) -> Option<Rational> {
    // DFS over vertices, carrying u_x / u_i for rows and v_y * u_i for columns
    let mut seen: BTreeMap<usize, Rational> = BTreeMap::new();
    let mut stack = vec![(i - 1, Rational::from_integer(1.into()))];
    while let Some((x, val)) = stack.pop() {
        if seen.contains_key(&x) {
            continue;
        }
        seen.insert(x, val.clone());
        for (r, c, w) in nz {
            let (rv, cv) = (r - 1, p + c - 1);
            if x == rv && !seen.contains_key(&cv) {
                stack.push((cv, w / &val));
            } else if x == cv && !seen.contains_key(&rv) {
                stack.push((rv, w / &val));
            }
        }
    }
    seen.get(&(p + j - 1)).cloned()
}

/// Unique iff every support gives every missing entry the same determined value.
pub fn rank1_oracle_unique(found: &[BTreeMap<(usize, usize), Option<Rational>>]) -> bool {
    found.iter().all(|f| f.values().all(|v| v.is_some())) && found.windows(2).all(|w| w[0] == w[1])
}

// ---- one missing entry ----

#[derive(Debug, PartialEq, Eq)]
pub enum OneMissing {
    None,
    Unique(Rational),
    Infinite,
}

/// Every `(r+1)`-minor is affine in the hole value `x`; solve them jointly.
pub fn one_missing_oracle(m: &PartialMatrix, hole: (usize, usize), r: usize) -> OneMissing {
    let (p, q) = m.shape();
    let at = |x: i64| {
        let mut f = m.fill_missing(&int(0));
        f.set(hole.0, hole.1, int(x));
        f
    };
    let (m0, m1) = (at(0), at(1));
    let mut affine = Vec::new();
    if r + 1 <= p.min(q) {
        for rs in combos(p, r + 1) {
            for cs in combos(q, r + 1) {
                let g0 = cofactor_det(&m0.submatrix(&rs, &cs).unwrap());
                let g1 = cofactor_det(&m1.submatrix(&rs, &cs).unwrap());
                affine.push((g0.clone(), g1 - g0));
            }
        }
    }
    let forced = affine
        .iter()
        .find(|(_, s)| !s.is_zero())
        .map(|(g0, s)| -g0 / s);
    match forced {
        None => {
            if affine.iter().all(|(g0, _)| g0.is_zero()) {
                OneMissing::Infinite
            } else {
                OneMissing::None
            }
        }
        Some(x) => {
            if affine.iter().all(|(g0, s)| (g0 + s * &x).is_zero()) {
                OneMissing::Unique(x)
            } else {
                OneMissing::None
            }
        }
    }
}

// ---- boundary sextic, retyped as index tuples ----

const SEXTIC_TERMS: [(i64, [u8; 6]); 24] = [
    (1, [14, 23, 32, 33, 41, 42]),
    (-1, [14, 22, 33, 33, 41, 42]),
    (1, [12, 24, 33, 33, 41, 42]),
    (-1, [13, 23, 32, 34, 41, 42]),
    (1, [13, 22, 33, 34, 41, 42]),
    (-1, [12, 23, 33, 34, 41, 42]),
    (-1, [14, 23, 31, 33, 42, 42]),
    (1, [13, 23, 31, 34, 42, 42]),
    (-1, [14, 23, 32, 32, 41, 43]),
    (1, [14, 22, 32, 33, 41, 43]),
    (-1, [12, 24, 32, 33, 41, 43]),
    (1, [12, 23, 32, 34, 41, 43]),
    (1, [14, 23, 31, 32, 42, 43]),
    (1, [14, 22, 31, 33, 42, 43]),
    (-1, [12, 24, 31, 33, 42, 43]),
    (-1, [13, 22, 31, 34, 42, 43]),
    (-1, [14, 22, 31, 32, 43, 43]),
    (1, [12, 24, 31, 32, 43, 43]),
    (1, [13, 23, 32, 32, 41, 44]),
    (-1, [13, 22, 32, 33, 41, 44]),
    (-1, [13, 23, 31, 32, 42, 44]),
    (1, [12, 23, 31, 33, 42, 44]),
    (1, [13, 22, 31, 32, 43, 44]),
    (-1, [12, 23, 31, 32, 43, 44]),
];

pub fn sextic_oracle(m: &Matrix) -> Rational {
    let mut acc = Rational::zero();
    for (c, idx) in SEXTIC_TERMS {
        let mut t = int(c);
        for e in idx {
            t *= m.get((e / 10) as usize, (e % 10) as usize);
        }
        acc += t;
    }
    acc
}

pub fn sextic_term_count() -> usize {
    SEXTIC_TERMS.len()
}

// ---- geometry ----

fn orient(a: &Point, b: &Point, c: &Point) -> Rational {
    (&b.x - &a.x) * (&c.y - &a.y) - (&b.y - &a.y) * (&c.x - &a.x)
}

/// Point in a counterclockwise convex polygon by orientation of every edge.
pub fn inside_ccw(poly: &[Point], x: &Point) -> bool {
    let n = poly.len();
    match n {
        0 => false,
        1 => &poly[0] == x,
        2 => {
            orient(&poly[0], &poly[1], x).is_zero()
                && (&x.x - &poly[0].x) * (&x.x - &poly[1].x) <= Rational::zero()
                && (&x.y - &poly[0].y) * (&x.y - &poly[1].y) <= Rational::zero()
        }
        _ => (0..n).all(|k| !orient(&poly[k], &poly[(k + 1) % n], x).is_negative()),
    }
}

pub fn polygon_inside(outer: &Polygon2, inner: &Polygon2) -> bool {
    inner
        .vertices()
        .iter()
        .all(|v| inside_ccw(outer.vertices(), v))
}

/// `P ⊆ Δ ⊆ Q` by orientation tests only.
pub fn triangle_nested_oracle(t: &Triangle, inner: &Polygon2, outer: &Polygon2) -> bool {
    let mut v = t.vertices().to_vec();
    if orient(&v[0], &v[1], &v[2]).is_negative() {
        v.swap(1, 2);
    }
    inner.vertices().iter().all(|p| inside_ccw(&v, p))
        && v.iter().all(|p| inside_ccw(outer.vertices(), p))
}

/// Random convex polygon: hull of points on a circle-ish cloud.
pub fn rand_polygon<R: Rng>(
    rng: &mut R,
    n: usize,
    cx: Rational,
    cy: Rational,
    radius: i64,
) -> Polygon2 {
    loop {
        let pts: Vec<Point> = (0..n)
            .map(|_| {
                let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                let r: f64 = rng.gen_range(0.6..1.0) * radius as f64;
                let x = Rational::from_integer(
                    ((r * th.cos()) * 64.0)
                        .round()
                        .to_string()
                        .parse::<num::BigInt>()
                        .unwrap(),
                ) / int(64);
                let y = Rational::from_integer(
                    ((r * th.sin()) * 64.0)
                        .round()
                        .to_string()
                        .parse::<num::BigInt>()
                        .unwrap(),
                ) / int(64);
                pt(&cx + x, &cy + y)
            })
            .collect();
        if let Ok(p) = Polygon2::hull(&pts) {
            if p.len() >= 3 {
                return p;
            }
        }
    }
}

/// Rational direction close to angle `2πk/n`.
fn grid_direction(k: usize, n: usize) -> (f64, f64, Point) {
    let th = std::f64::consts::TAU * k as f64 / n as f64;
    let (c, s) = (th.cos(), th.sin());
    let q = |v: f64| rat((v * 1_000_000.0).round() as i64, 1_000_000);
    (c, s, pt(q(c), q(s)))
}

/// Rotation-grid oracle: triangles whose sides support `P` with outward
/// normals on a fixed angular grid. Candidates are screened in floating point
/// and certified exactly.
pub fn rotation_grid_triangle(inner: &Polygon2, outer: &Polygon2, n: usize) -> Option<Triangle> {
    let pv = inner.vertices();
    let qf: Vec<(f64, f64)> = outer.vertices().iter().map(|p| p.to_f64()).collect();
    let dirs: Vec<(f64, f64, Point)> = (0..n).map(|k| grid_direction(k, n)).collect();
    // support value per direction, exact and float
    let supp: Vec<Rational> = dirs
        .iter()
        .map(|(_, _, d)| pv.iter().map(|p| &d.x * &p.x + &d.y * &p.y).max().unwrap())
        .collect();
    let suppf: Vec<f64> = supp.iter().map(nncomplete::rational::to_f64).collect();
    let meet_f = |a: usize, b: usize| -> Option<(f64, f64)> {
        let (a1, b1, c1) = (dirs[a].0, dirs[a].1, suppf[a]);
        let (a2, b2, c2) = (dirs[b].0, dirs[b].1, suppf[b]);
        let det = a1 * b2 - a2 * b1;
        if det.abs() < 1e-12 {
            return None;
        }
        Some(((c1 * b2 - c2 * b1) / det, (a1 * c2 - a2 * c1) / det))
    };
    let in_q = |x: (f64, f64)| {
        let m = qf.len();
        (0..m).all(|k| {
            let (a, b) = (qf[k], qf[(k + 1) % m]);
            (b.0 - a.0) * (x.1 - a.1) - (b.1 - a.1) * (x.0 - a.0) >= -1e-9
        })
    };
    let words = n.div_ceil(64);
    let mut ok = vec![vec![0u64; words]; n];
    for a in 0..n {
        for b in a + 1..n {
            if meet_f(a, b).is_some_and(in_q) {
                ok[a][b / 64] |= 1 << (b % 64);
            }
        }
    }
    let meet_exact = |a: usize, b: usize| -> Option<Point> {
        let (d1, d2) = (&dirs[a].2, &dirs[b].2);
        let det = &d1.x * &d2.y - &d2.x * &d1.y;
        if det.is_zero() {
            return None;
        }
        Some(pt(
            (&supp[a] * &d2.y - &supp[b] * &d1.y) / &det,
            (&d1.x * &supp[b] - &d2.x * &supp[a]) / &det,
        ))
    };
    let half = n / 2;
    for a in 0..n {
        for b in a + 1..(a + half).min(n) {
            if ok[a][b / 64] & (1 << (b % 64)) == 0 {
                continue;
            }
            // c - b and n - (c - a) both below a half-turn
            let (lo, hi) = ((a + half + 1).max(b + 1), (b + half).min(n));
            let mut c = lo;
            while c < hi {
                let w = c / 64;
                let bits = (ok[a][w] & ok[b][w]) >> (c % 64);
                if bits == 0 {
                    c = (w + 1) * 64;
                    continue;
                }
                c += bits.trailing_zeros() as usize;
                if c >= hi {
                    break;
                }
                if let (Some(x), Some(y), Some(z)) =
                    (meet_exact(a, b), meet_exact(b, c), meet_exact(a, c))
                {
                    if let Ok(t) = Triangle::new(x, y, z) {
                        if triangle_nested_oracle(&t, inner, outer) {
                            return Some(t);
                        }
                    }
                }
                c += 1;
            }
        }
    }
    None
}

// ---- floating-point NMF ----

/// Multiplicative-update NMF of rank `k`; smallest relative residual over restarts.
pub fn mu_nmf_residual<R: Rng>(
    rng: &mut R,
    m: &Matrix,
    k: usize,
    restarts: usize,
    iters: usize,
) -> f64 {
    let (p, q) = m.shape();
    let v: Vec<Vec<f64>> = m
        .to_rows()
        .iter()
        .map(|r| r.iter().map(nncomplete::rational::to_f64).collect())
        .collect();
    let norm: f64 = v
        .iter()
        .flatten()
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt()
        .max(1e-300);
    let mut best = f64::INFINITY;
    for _ in 0..restarts {
        let mut w: Vec<Vec<f64>> = (0..p)
            .map(|_| (0..k).map(|_| rng.gen_range(0.01..1.0)).collect())
            .collect();
        let mut h: Vec<Vec<f64>> = (0..k)
            .map(|_| (0..q).map(|_| rng.gen_range(0.01..1.0)).collect())
            .collect();
        for _ in 0..iters {
            // H <- H * (W^T V) / (W^T W H)
            for a in 0..k {
                for j in 0..q {
                    let num: f64 = (0..p).map(|i| w[i][a] * v[i][j]).sum();
                    let den: f64 = (0..p)
                        .map(|i| w[i][a] * (0..k).map(|b| w[i][b] * h[b][j]).sum::<f64>())
                        .sum();
                    h[a][j] *= num / (den + 1e-300);
                }
            }
            for i in 0..p {
                for a in 0..k {
                    let num: f64 = (0..q).map(|j| v[i][j] * h[a][j]).sum();
                    let den: f64 = (0..q)
                        .map(|j| (0..k).map(|b| w[i][b] * h[b][j]).sum::<f64>() * h[a][j])
                        .sum();
                    w[i][a] *= num / (den + 1e-300);
                }
            }
        }
        let mut err = 0.0;
        for i in 0..p {
            for j in 0..q {
                let x: f64 = (0..k).map(|a| w[i][a] * h[a][j]).sum();
                err += (x - v[i][j]).powi(2);
            }
        }
        best = best.min(err.sqrt() / norm);
    }
    best
}
