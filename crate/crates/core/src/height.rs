//! Exact rational heights.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A reduced rational number with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Height(BigRational);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational `{0}`")]
pub struct ParseHeightError(pub String);

impl Height {
    pub fn new(numer: i64, denom: i64) -> Height {
        assert!(denom != 0, "zero denominator");
        Height(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn int(n: i64) -> Height {
        Height(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Height {
        Height(BigRational::zero())
    }

    pub fn one() -> Height {
        Height(BigRational::one())
    }

    pub fn from_big(numer: BigInt, denom: BigInt) -> Height {
        assert!(!denom.is_zero(), "zero denominator");
        Height(BigRational::new(numer, denom))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Height {
        Height(self.0.abs())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn floor(&self) -> Height {
        Height(self.0.floor())
    }

    pub fn checked_div(&self, rhs: &Height) -> Option<Height> {
        if rhs.is_zero() {
            None
        } else {
            Some(Height(&self.0 / &rhs.0))
        }
    }

    pub fn min_of<'a>(&'a self, other: &'a Height) -> &'a Height {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max_of<'a>(&'a self, other: &'a Height) -> &'a Height {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Midpoint of two heights.
    pub fn midpoint(a: &Height, b: &Height) -> Height {
        Height((&a.0 + &b.0) / BigRational::from_integer(BigInt::from(2)))
    }

    /// The rational with the smallest denominator in the closed interval `[lo, hi]`.
    pub fn simplest_between(lo: &Height, hi: &Height) -> Height {
        assert!(lo <= hi);
        if lo.is_negative() && hi.is_positive() || lo.is_zero() || hi.is_zero() {
            return Height::zero();
        }
        if hi.is_negative() {
            return -Height::simplest_between(&-hi.clone(), &-lo.clone());
        }
        let (n, d) = simplest_positive(
            (lo.numer().clone(), lo.denom().clone()),
            (hi.numer().clone(), hi.denom().clone()),
        );
        Height::from_big(n, d)
    }
}

// Stern-Brocot descent on the continued fraction expansions of both ends.
fn simplest_positive(lo: (BigInt, BigInt), hi: (BigInt, BigInt)) -> (BigInt, BigInt) {
    let (ln, ld) = lo;
    let (hn, hd) = hi;
    let (lq, lr) = ln.div_rem(&ld);
    if lr.is_zero() {
        return (lq, BigInt::one());
    }
    let (hq, hr) = hn.div_rem(&hd);
    if lq < hq {
        return (lq + BigInt::one(), BigInt::one());
    }
    if hr.is_zero() {
        // hi is an integer equal to lq, and lo < hi
        return (hq, BigInt::one());
    }
    // same integer part: recurse on reciprocals of the fractional parts
    let (n, d) = simplest_positive((hd, hr), (ld, lr));
    (lq * &n + &d, n)
}

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Height {
    type Err = ParseHeightError;

    fn from_str(s: &str) -> Result<Height, ParseHeightError> {
        let err = || ParseHeightError(s.to_string());
        let s = s.trim();
        let valid = |t: &str| {
            let t = t.strip_prefix('-').unwrap_or(t);
            !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit())
        };
        match s.split_once('/') {
            None => {
                if !valid(s) {
                    return Err(err());
                }
                let n: BigInt = s.parse().map_err(|_| err())?;
                Ok(Height(BigRational::from_integer(n)))
            }
            Some((a, b)) => {
                if !valid(a) || !valid(b) || b.starts_with('-') {
                    return Err(err());
                }
                let n: BigInt = a.parse().map_err(|_| err())?;
                let d: BigInt = b.parse().map_err(|_| err())?;
                if d.is_zero() {
                    return Err(err());
                }
                Ok(Height(BigRational::new(n, d)))
            }
        }
    }
}

impl Serialize for Height {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Height {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Height, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Height {
    fn from(n: i64) -> Height {
        Height::int(n)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Height> for &Height {
            type Output = Height;
            fn $m(self, rhs: &Height) -> Height {
                Height($tr::$m(&self.0, &rhs.0))
            }
        }
        impl $tr<Height> for Height {
            type Output = Height;
            fn $m(self, rhs: Height) -> Height {
                Height($tr::$m(self.0, rhs.0))
            }
        }
        impl $tr<&Height> for Height {
            type Output = Height;
            fn $m(self, rhs: &Height) -> Height {
                Height($tr::$m(self.0, &rhs.0))
            }
        }
        impl $tr<Height> for &Height {
            type Output = Height;
            fn $m(self, rhs: Height) -> Height {
                Height($tr::$m(&self.0, rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Height {
    type Output = Height;
    fn neg(self) -> Height {
        Height(-self.0)
    }
}

impl Neg for &Height {
    type Output = Height;
    fn neg(self) -> Height {
        Height(-&self.0)
    }
}

/// Heights extended with `+∞`, used for saturating maxima such as "tailed for every t".
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Bound {
    Finite(Height),
    Infinite,
}

impl Bound {
    pub fn finite(&self) -> Option<&Height> {
        match self {
            Bound::Finite(h) => Some(h),
            Bound::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Bound::Infinite)
    }

    pub fn min(self, other: Bound) -> Bound {
        if self <= other {
            self
        } else {
            other
        }
    }
}

impl PartialOrd for Bound {
    fn partial_cmp(&self, other: &Bound) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Bound {
    fn cmp(&self, other: &Bound) -> Ordering {
        match (self, other) {
            (Bound::Infinite, Bound::Infinite) => Ordering::Equal,
            (Bound::Infinite, _) => Ordering::Greater,
            (_, Bound::Infinite) => Ordering::Less,
            (Bound::Finite(a), Bound::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(h) => write!(f, "{h}"),
            Bound::Infinite => write!(f, "inf"),
        }
    }
}

/// Shorthand for `Height::new`.
pub fn h(numer: i64, denom: i64) -> Height {
    Height::new(numer, denom)
}
