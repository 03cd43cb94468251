//! Exact half-integers.

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_rational::Rational64;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A number in ½ℤ, stored as twice its value.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInt(i64);

#[derive(Debug, Error, PartialEq, Eq)]
#[error("not a half-integer: {0:?}")]
pub struct ParseHalfIntError(pub String);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);
    pub const ONE: HalfInt = HalfInt(2);

    pub const fn from_twice(t: i64) -> Self {
        HalfInt(t)
    }

    pub const fn from_int(n: i64) -> Self {
        HalfInt(2 * n)
    }

    pub const fn twice(self) -> i64 {
        self.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// Integer value, if any.
    pub fn to_int(self) -> Option<i64> {
        self.is_integer().then_some(self.0 / 2)
    }

    /// Largest integer not exceeding the value.
    pub fn floor(self) -> i64 {
        self.0.div_euclid(2)
    }

    pub fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }

    /// `self - other` is an integer.
    pub fn congruent(self, other: HalfInt) -> bool {
        (self.0 - other.0) % 2 == 0
    }

    /// `self - other` as an integer; panics when the difference is not integral.
    pub fn int_diff(self, other: HalfInt) -> i64 {
        let d = self.0 - other.0;
        assert!(d % 2 == 0, "non-integral difference {self} - {other}");
        d / 2
    }

    pub fn to_ratio(self) -> Rational64 {
        Rational64::new(self.0, 2)
    }

    /// Exact conversion from a rational with denominator dividing 2.
    pub fn from_ratio(r: Rational64) -> Option<Self> {
        let t = r * 2;
        t.is_integer().then(|| HalfInt(t.to_integer()))
    }

    /// Iterate `self, self-1, ..., down` (inclusive); empty when `down > self`.
    pub fn down_to(self, down: HalfInt) -> impl Iterator<Item = HalfInt> {
        let top = self.0;
        let n = if down.0 > top { 0 } else { (top - down.0) / 2 + 1 };
        (0..n).map(move |i| HalfInt(top - 2 * i))
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, o: HalfInt) -> HalfInt {
        HalfInt(self.0 + o.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, o: HalfInt) -> HalfInt {
        HalfInt(self.0 - o.0)
    }
}

impl Add<i64> for HalfInt {
    type Output = HalfInt;
    fn add(self, o: i64) -> HalfInt {
        HalfInt(self.0 + 2 * o)
    }
}

impl Sub<i64> for HalfInt {
    type Output = HalfInt;
    fn sub(self, o: i64) -> HalfInt {
        HalfInt(self.0 - 2 * o)
    }
}

impl AddAssign<i64> for HalfInt {
    fn add_assign(&mut self, o: i64) {
        self.0 += 2 * o;
    }
}

impl SubAssign<i64> for HalfInt {
    fn sub_assign(&mut self, o: i64) {
        self.0 -= 2 * o;
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl fmt::Debug for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for HalfInt {
    type Err = ParseHalfIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseHalfIntError(s.to_string());
        let t = s.trim();
        match t.split_once('/') {
            None => t.parse::<i64>().map(HalfInt::from_int).map_err(|_| err()),
            Some((p, q)) => {
                let p: i64 = p.trim().parse().map_err(|_| err())?;
                let q: i64 = q.trim().parse().map_err(|_| err())?;
                match q {
                    1 => Ok(HalfInt::from_int(p)),
                    2 => Ok(HalfInt(p)),
                    _ => Err(err()),
                }
            }
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.to_int() {
            Some(n) => s.serialize_i64(n),
            None => s.serialize_str(&self.to_string()),
        }
    }
}

struct HalfIntVisitor;

impl<'de> Visitor<'de> for HalfIntVisitor {
    type Value = HalfInt;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a string \"p/2\"")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<HalfInt, E> {
        Ok(HalfInt::from_int(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<HalfInt, E> {
        i64::try_from(v)
            .map(HalfInt::from_int)
            .map_err(|_| E::custom("integer out of range"))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<HalfInt, E> {
        v.parse().map_err(E::custom)
    }
}

impl<'de> Deserialize<'de> for HalfInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(HalfIntVisitor)
    }
}

/// Shorthand for tests and fixtures: `h(3, 2)` is 3/2, `h(2, 1)` is 2.
pub fn h(p: i64, q: i64) -> HalfInt {
    match q {
        1 => HalfInt::from_int(p),
        2 => HalfInt::from_twice(p),
        _ => panic!("denominator must be 1 or 2"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_print() {
        assert_eq!("3/2".parse::<HalfInt>().unwrap(), HalfInt::from_twice(3));
        assert_eq!("-1/2".parse::<HalfInt>().unwrap(), HalfInt::from_twice(-1));
        assert_eq!("4".parse::<HalfInt>().unwrap(), HalfInt::from_int(4));
        assert_eq!("4/1".parse::<HalfInt>().unwrap(), HalfInt::from_int(4));
        assert!("1/3".parse::<HalfInt>().is_err());
        assert_eq!(HalfInt::from_twice(-5).to_string(), "-5/2");
        assert_eq!(HalfInt::from_int(-2).to_string(), "-2");
    }

    #[test]
    fn floor_is_euclidean() {
        assert_eq!(HalfInt::from_twice(-1).floor(), -1);
        assert_eq!(HalfInt::from_twice(5).floor(), 2);
        assert_eq!(HalfInt::from_int(-3).floor(), -3);
    }

    #[test]
    fn json_forms() {
        let v: Vec<HalfInt> = serde_json::from_str(r#"[1, "-3/2", "2"]"#).unwrap();
        assert_eq!(v, vec![h(1, 1), h(-3, 2), h(2, 1)]);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"[1,"-3/2",2]"#);
    }

    #[test]
    fn down_to_ranges() {
        let v: Vec<_> = h(3, 2).down_to(h(-1, 2)).collect();
        assert_eq!(v, vec![h(3, 2), h(1, 2), h(-1, 2)]);
        assert_eq!(h(0, 1).down_to(h(1, 1)).count(), 0);
    }

    proptest! {
        #[test]
        fn arithmetic_is_exact(a in -1000i64..1000, b in -1000i64..1000) {
            let x = HalfInt::from_twice(a);
            let y = HalfInt::from_twice(b);
            prop_assert_eq!((x + y) - y, x);
            prop_assert_eq!(-(-x), x);
            prop_assert_eq!(x.to_ratio() + y.to_ratio(), (x + y).to_ratio());
            prop_assert_eq!(HalfInt::from_ratio(x.to_ratio()), Some(x));
            prop_assert_eq!(x < y, a < b);
            prop_assert_eq!(x.to_string().parse::<HalfInt>().unwrap(), x);
        }
    }
}
