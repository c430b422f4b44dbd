//! Exact rational scalars.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d`, normalized. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // numerator and denominator too large for f64 individually
        let shift = x.numer().bits().max(x.denom().bits()) as i64 - 1000;
        let s = shift.max(0) as usize;
        let n = (x.numer() >> s).to_f64().unwrap_or(0.0);
        let d = (x.denom() >> s).to_f64().unwrap_or(1.0);
        n / d
    })
}

/// Nearest rational with denominator `den`.
pub fn from_f64_grid(x: f64, den: i64) -> Rational {
    rat((x * den as f64).round() as i64, den)
}

/// Parses an integer, `p/q`, or a finite decimal (`-0.35`, `1e-3` is not accepted).
pub fn parse_rational(tok: &str) -> std::result::Result<Rational, String> {
    let bad = || format!("malformed number `{tok}`");
    if let Some((p, q)) = tok.split_once('/') {
        let p: BigInt = p.parse().map_err(|_| bad())?;
        let q: BigInt = q.parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(format!("zero denominator in `{tok}`"));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((ip, fp)) = tok.split_once('.') {
        let (neg, ip) = match ip.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, ip.strip_prefix('+').unwrap_or(ip)),
        };
        if (ip.is_empty() && fp.is_empty())
            || !ip.chars().all(|c| c.is_ascii_digit())
            || !fp.chars().all(|c| c.is_ascii_digit())
        {
            return Err(bad());
        }
        let digits = format!("{ip}{fp}");
        let n: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| bad())?
        };
        let d = num::pow(BigInt::from(10), fp.len());
        let v = Rational::new(n, d);
        return Ok(if neg { -v } else { v });
    }
    let n: BigInt = tok.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

pub(crate) fn parse_err(line: usize, msg: String) -> Error {
    Error::Parse { line, msg }
}

pub fn is_nonneg(x: &Rational) -> bool {
    !x.is_negative()
}

/// Sign as -1, 0, 1.
pub fn sign(x: &Rational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}
