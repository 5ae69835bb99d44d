//! Exact dyadic rationals `num / 2^exp`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

/// Reduced: `num` is odd or `exp == 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Dyadic {
    num: BigInt,
    exp: u32,
}

impl Dyadic {
    pub fn new(num: impl Into<BigInt>, exp: u32) -> Self {
        let mut num = num.into();
        let mut exp = exp;
        if num.is_zero() {
            return Dyadic { num, exp: 0 };
        }
        let tz = num.trailing_zeros().unwrap_or(0).min(exp as u64) as u32;
        num >>= tz;
        exp -= tz;
        Dyadic { num, exp }
    }

    pub fn int(n: i64) -> Self {
        Dyadic { num: BigInt::from(n), exp: 0 }
    }

    pub fn zero() -> Self {
        Dyadic::int(0)
    }

    pub fn one() -> Self {
        Dyadic::int(1)
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    /// `self · 2^k`.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if k >= 0 {
            let shift = (k as u64).min(self.exp as u64) as u32;
            let rest = k as u64 - shift as u64;
            Dyadic::new(&self.num << rest, self.exp - shift)
        } else {
            Dyadic::new(self.num.clone(), self.exp + (-k) as u32)
        }
    }

    pub fn floor(&self) -> BigInt {
        self.num.div_floor(&(BigInt::one() << self.exp))
    }

    /// `self - floor(self)`, in `[0, 1)`.
    pub fn frac(&self) -> Self {
        self - &Dyadic::new(self.floor(), 0)
    }

    pub fn is_unit_interval(&self) -> bool {
        !self.is_negative() && self.floor().is_zero()
    }

    /// `k` with `self / other = 2^k`, if the ratio is a power of two.
    pub fn ratio_log2(&self, other: &Dyadic) -> Option<i64> {
        if !self.num.is_positive() || !other.num.is_positive() {
            return None;
        }
        let ta = self.num.trailing_zeros().unwrap_or(0);
        let tb = other.num.trailing_zeros().unwrap_or(0);
        if (&self.num >> ta) != (&other.num >> tb) {
            return None;
        }
        Some(ta as i64 - tb as i64 + other.exp as i64 - self.exp as i64)
    }

    pub fn to_f64(&self) -> f64 {
        let n: f64 = self.num.to_string().parse().unwrap_or(f64::NAN);
        n / 2f64.powi(self.exp as i32)
    }

    fn aligned(&self, other: &Dyadic) -> (BigInt, BigInt, u32) {
        let e = self.exp.max(other.exp);
        (&self.num << (e - self.exp), &other.num << (e - other.exp), e)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(rhs);
        Dyadic::new(a + b, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(rhs);
        Dyadic::new(a - b, e)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.num * &rhs.num, self.exp + rhs.exp)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        &self - &rhs
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { num: -&self.num, exp: self.exp }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, BigInt::one() << self.exp)
        }
    }
}

impl FromStr for Dyadic {
    type Err = String;

    /// Accepts `a`, `a/b` with `b` a power of two, and `a/2^k`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || format!("not a dyadic literal: {s:?}");
        let Some((n, d)) = s.split_once('/') else {
            return Ok(Dyadic::new(BigInt::from_str(s).map_err(|_| bad())?, 0));
        };
        let num = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = d.trim();
        let exp = if let Some(k) = d.strip_prefix("2^") {
            k.parse::<u32>().map_err(|_| bad())?
        } else {
            let den = BigInt::from_str(d).map_err(|_| bad())?;
            let tz = den.trailing_zeros().ok_or_else(bad)?;
            if den != BigInt::one() << tz {
                return Err(bad());
            }
            tz as u32
        };
        Ok(Dyadic::new(num, exp))
    }
}

impl TryFrom<String> for Dyadic {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<Dyadic> for String {
    fn from(d: Dyadic) -> String {
        d.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    #[test]
    fn reduced_and_parsed() {
        assert_eq!(Dyadic::new(6, 3), d("3/4"));
        assert_eq!(d("3/2^3").to_string(), "3/8");
        assert_eq!(Dyadic::new(0, 7), Dyadic::zero());
        assert!("1/3".parse::<Dyadic>().is_err());
        assert_eq!(d("-5/4").floor(), BigInt::from(-2));
        assert_eq!(d("-5/4").frac(), d("3/4"));
    }

    #[test]
    fn arithmetic() {
        assert_eq!(&d("3/8") + &d("5/8"), Dyadic::one());
        assert_eq!(&d("1/2") - &d("3/4"), d("-1/4"));
        assert_eq!(d("3/8").mul_pow2(2), d("3/2"));
        assert_eq!(d("3").mul_pow2(-3), d("3/8"));
        assert_eq!(d("3/8").ratio_log2(&d("3/2")), Some(-2));
        assert_eq!(d("1/2").ratio_log2(&d("3/8")), None);
    }
}
