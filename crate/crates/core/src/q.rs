//! Exact rationals. Every distance, weight and Lipschitz constant in the
//! crate is a `Q`; no floating point enters a verdict.

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = Ratio<i128>;

pub fn int(n: i64) -> Q {
    Q::from_integer(n as i128)
}

pub fn frac(p: i64, q: i64) -> Q {
    Q::new(p as i128, q as i128)
}

/// Canonical `p/q` rendering, lowest terms with positive denominator.
pub fn fmt(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Document(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i128 = p.trim().parse().map_err(|_| bad())?;
            let q: i128 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Q::new(p, q))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Largest integer `n` with `n < x` for positive `x`; the radius of an open
/// ball `{h : d(g,h) < x}` under an integer-valued metric.
pub fn open_radius(x: &Q) -> i64 {
    let c = x.ceil().to_integer();
    (c - 1) as i64
}

/// `ceil(x)` as an integer.
pub fn ceil_int(x: &Q) -> i64 {
    x.ceil().to_integer() as i64
}

pub fn l1_norm<'a>(it: impl IntoIterator<Item = &'a Q>) -> Q {
    it.into_iter().fold(Q::zero(), |acc, v| acc + v.abs())
}

pub fn one() -> Q {
    Q::one()
}

pub fn zero() -> Q {
    Q::zero()
}
