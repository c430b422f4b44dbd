//! Univariate polynomials and rational functions over Q, with real-root
//! isolation by Sturm sequences.

use std::fmt;

use num::{One, Signed, Zero};

use crate::rational::{int, Rational};

/// Coefficients from degree 0 upward, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("({c})t"),
                _ => format!("({c})t^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: vec![] }
    }

    pub fn constant(c: Rational) -> Poly {
        Poly::new(vec![c])
    }

    /// The polynomial `t`.
    pub fn t() -> Poly {
        Poly::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn linear(c0: Rational, c1: Rational) -> Poly {
        Poly::new(vec![c0, c1])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, s: &Rational) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * int(k as i64))
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let mut r = self.coeffs.clone();
        let mut q = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd)];
        let lead = d.lead();
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let c = r.last().unwrap() / &lead;
            for (i, dc) in d.coeffs.iter().enumerate() {
                r[k + i] -= &c * dc;
            }
            q[k] = c;
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        (Poly::new(q), Poly::new(r))
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.lead().recip())
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn sign_at(&self, t: &Rational) -> i8 {
        crate::rational::sign(&self.eval(t))
    }

    /// Sign as `t → +∞` (or `-∞` when `positive` is false).
    pub fn sign_at_infinity(&self, positive: bool) -> i8 {
        let Some(d) = self.degree() else { return 0 };
        let s = crate::rational::sign(&self.lead());
        if positive || d % 2 == 0 {
            s
        } else {
            -s
        }
    }

    fn sturm(&self) -> Vec<Poly> {
        let mut seq = vec![self.clone(), self.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let r = seq[n - 2].div_rem(&seq[n - 1]).1.neg();
            if r.is_zero() {
                break;
            }
            seq.push(r);
        }
        seq.retain(|p| !p.is_zero());
        seq
    }

    /// Cauchy bound on the absolute value of real roots.
    pub fn root_bound(&self) -> Rational {
        let lead = self.lead().abs();
        let m = self
            .coeffs
            .iter()
            .map(|c| c.abs() / &lead)
            .max()
            .unwrap_or_else(Rational::zero);
        m + Rational::one()
    }

    /// Real roots as exact values when rational, else isolating brackets.
    pub fn real_roots(&self) -> Vec<Root> {
        let Some(d) = self.degree() else {
            return vec![];
        };
        if d == 0 {
            return vec![];
        }
        if d == 1 {
            return vec![Root::Exact(-self.coeff(0) / self.coeff(1))];
        }
        let sf = self.div_rem(&self.gcd(&self.derivative())).0;
        if sf.degree() == Some(2) {
            let (a, b, c) = (sf.coeff(2), sf.coeff(1), sf.coeff(0));
            let disc = &b * &b - int(4) * &a * &c;
            if disc.is_negative() {
                return vec![];
            }
            if let Some(r) = rational_sqrt(&disc) {
                let two_a = int(2) * &a;
                let mut v = vec![(-&b - &r) / &two_a, (-&b + &r) / &two_a];
                v.sort();
                v.dedup();
                return v.into_iter().map(Root::Exact).collect();
            }
        }
        if sf.degree() == Some(1) {
            return vec![Root::Exact(-sf.coeff(0) / sf.coeff(1))];
        }
        sf.isolate()
    }

    fn variations(seq: &[Poly], t: &Rational) -> usize {
        let signs: Vec<i8> = seq
            .iter()
            .map(|p| p.sign_at(t))
            .filter(|&s| s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Isolation for a square-free polynomial.
    fn isolate(&self) -> Vec<Root> {
        let seq = self.sturm();
        let b = self.root_bound();
        let mut out = Vec::new();
        let mut stack = vec![(-b.clone(), b)];
        while let Some((lo, hi)) = stack.pop() {
            // roots in (lo, hi]
            let n = Poly::variations(&seq, &lo) - Poly::variations(&seq, &hi);
            if n == 0 {
                continue;
            }
            if self.eval(&hi).is_zero() {
                out.push(Root::Exact(hi.clone()));
                if n > 1 {
                    let mid = (&lo + &hi) / int(2);
                    stack.push((lo.clone(), mid.clone()));
                    stack.push((mid, hi.clone() - (&hi - &lo) / int(1 << 20)));
                }
                continue;
            }
            if n == 1 {
                out.push(Root::Bracket(lo, hi));
                continue;
            }
            let mid = (&lo + &hi) / int(2);
            stack.push((mid.clone(), hi));
            stack.push((lo, mid));
        }
        out.sort_by(|a, b| a.approx().cmp(&b.approx()));
        out
    }
}

fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| Rational::new(n, d))
}

/// A real root: exact when rational, else an open-closed bracket `(lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Root {
    Exact(Rational),
    Bracket(Rational, Rational),
}

impl Root {
    /// A representative inside the bracket, for ordering.
    pub fn approx(&self) -> Rational {
        match self {
            Root::Exact(x) => x.clone(),
            Root::Bracket(a, b) => (a + b) / int(2),
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Root::Exact(x) => Some(x),
            Root::Bracket(..) => None,
        }
    }
}

/// `num / den` with `gcd(num, den) = 1` and monic `den`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{:?}", self.num)
        } else {
            write!(f, "({:?}) / ({:?})", self.num, self.den)
        }
    }
}

impl RatFn {
    pub fn new(num: Poly, den: Poly) -> RatFn {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFn {
                num,
                den: Poly::constant(Rational::one()),
            };
        }
        let g = num.gcd(&den);
        let (n, _) = num.div_rem(&g);
        let (d, _) = den.div_rem(&g);
        let lead = d.lead();
        RatFn {
            num: n.scale(&lead.recip()),
            den: d.scale(&lead.recip()),
        }
    }

    pub fn constant(c: Rational) -> RatFn {
        RatFn::new(Poly::constant(c), Poly::constant(Rational::one()))
    }

    pub fn poly(p: Poly) -> RatFn {
        RatFn::new(p, Poly::constant(Rational::one()))
    }

    pub fn t() -> RatFn {
        RatFn::poly(Poly::t())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.degree().unwrap_or(0) == 0 && self.den.degree() == Some(0)
    }

    /// `None` at a pole.
    pub fn eval(&self, t: &Rational) -> Option<Rational> {
        let d = self.den.eval(t);
        (!d.is_zero()).then(|| self.num.eval(t) / d)
    }

    pub fn add(&self, o: &RatFn) -> RatFn {
        RatFn::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn sub(&self, o: &RatFn) -> RatFn {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFn {
        RatFn {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &RatFn) -> RatFn {
        RatFn::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn div(&self, o: &RatFn) -> RatFn {
        assert!(!o.is_zero(), "division by the zero rational function");
        RatFn::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    pub fn scale(&self, s: &Rational) -> RatFn {
        RatFn::new(self.num.scale(s), self.den.clone())
    }
}

/// Matrix of rational functions, row-major, 0-based internally.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    pub rows: Vec<Vec<RatFn>>,
}

impl RatMatrix {
    pub fn from_matrix(m: &crate::linalg::Matrix) -> RatMatrix {
        RatMatrix {
            rows: m
                .to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(RatFn::constant).collect())
                .collect(),
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows.len(), self.rows.first().map_or(0, |r| r.len()))
    }

    /// `None` if `t` is a pole of some entry.
    pub fn eval(&self, t: &Rational) -> Option<crate::linalg::Matrix> {
        let rows: Option<Vec<Vec<Rational>>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|f| f.eval(t)).collect())
            .collect();
        rows.map(|r| crate::linalg::Matrix::from_rows(r).expect("rectangular"))
    }

    pub fn mul(&self, o: &RatMatrix) -> RatMatrix {
        let (p, k) = self.shape();
        let (_, q) = o.shape();
        let rows = (0..p)
            .map(|i| {
                (0..q)
                    .map(|j| {
                        (0..k).fold(RatFn::constant(Rational::zero()), |acc, l| {
                            acc.add(&self.rows[i][l].mul(&o.rows[l][j]))
                        })
                    })
                    .collect()
            })
            .collect();
        RatMatrix { rows }
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFn {
        &self.rows[i - 1][j - 1]
    }

    /// Polynomial common denominator of all entries (monic lcm).
    pub fn common_denominator(&self) -> Poly {
        let mut l = Poly::constant(Rational::one());
        for f in self.rows.iter().flatten() {
            let g = l.gcd(f.den());
            l = l.mul(f.den()).div_rem(&g).0.monic();
        }
        l
    }
}

/// Determinant of a small matrix of rational functions by cofactor expansion.
pub fn rat_det(m: &[Vec<RatFn>]) -> RatFn {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = RatFn::constant(Rational::zero());
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let sub: Vec<Vec<RatFn>> = m[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = m[0][j].mul(&rat_det(&sub));
        acc = if j % 2 == 0 {
            acc.add(&term)
        } else {
            acc.sub(&term)
        };
    }
    acc
}
