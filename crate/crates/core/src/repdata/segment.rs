use std::fmt;

use num_rational::Rational64;

use super::{RepError, Rho};
use crate::halfint::HalfInt;

/// `[x, y]_ρ`: the string ρ|·|^x, ρ|·|^{x-1}, …, ρ|·|^y.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Segment {
    pub rho: Rho,
    pub x: HalfInt,
    pub y: HalfInt,
}

impl Segment {
    pub fn new(rho: Rho, x: HalfInt, y: HalfInt) -> Result<Self, RepError> {
        if !x.congruent(y) || x < y {
            return Err(RepError::Segment(format!("[{x},{y}]_{rho}")));
        }
        Ok(Segment { rho, x, y })
    }

    /// Number of cuspidal entries.
    pub fn len(&self) -> u64 {
        self.x.int_diff(self.y) as u64 + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// GL rank.
    pub fn size(&self) -> u64 {
        self.len() * self.rho.dim() as u64
    }

    /// `x + y`, twice the center.
    pub fn center2(&self) -> HalfInt {
        self.x + self.y
    }

    pub fn dual(&self) -> Segment {
        Segment { rho: self.rho.dual(), x: -self.y, y: -self.x }
    }

    pub fn exponents(&self) -> impl Iterator<Item = HalfInt> {
        self.x.down_to(self.y)
    }

    pub fn shift(&self, t: i64) -> Segment {
        Segment { rho: self.rho.clone(), x: self.x + t, y: self.y + t }
    }
}

impl fmt::Debug for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]_{}", self.x, self.y, self.rho)
    }
}

/// A multiset of segments kept in canonical order.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Multisegment(Vec<Segment>);

impl Multisegment {
    pub fn new(mut items: Vec<Segment>) -> Self {
        items.sort();
        Multisegment(items)
    }

    pub fn items(&self) -> &[Segment] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn push(&mut self, s: Segment) {
        let pos = self.0.binary_search(&s).unwrap_or_else(|p| p);
        self.0.insert(pos, s);
    }

    /// Remove one copy; false when absent.
    pub fn remove(&mut self, s: &Segment) -> bool {
        match self.0.binary_search(s) {
            Ok(p) => {
                self.0.remove(p);
                true
            }
            Err(_) => false,
        }
    }

    pub fn on_line<'a>(&'a self, rho: &'a Rho) -> impl Iterator<Item = &'a Segment> + 'a {
        self.0.iter().filter(move |s| &s.rho == rho)
    }

    pub fn extend(&mut self, other: impl IntoIterator<Item = Segment>) {
        self.0.extend(other);
        self.0.sort();
    }
}

impl fmt::Debug for Multisegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl FromIterator<Segment> for Multisegment {
    fn from_iter<I: IntoIterator<Item = Segment>>(iter: I) -> Self {
        Multisegment::new(iter.into_iter().collect())
    }
}

/// `Sp(ρ, a, b)^k`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpehShape {
    pub rho: Rho,
    pub a: u32,
    pub b: u32,
    pub k: u32,
}

impl SpehShape {
    pub fn new(rho: Rho, a: u32, b: u32) -> Result<Self, RepError> {
        Self::with_copies(rho, a, b, 1)
    }

    pub fn with_copies(rho: Rho, a: u32, b: u32, k: u32) -> Result<Self, RepError> {
        if a == 0 || b == 0 || k == 0 {
            return Err(RepError::Shape { a, b, k });
        }
        Ok(SpehShape { rho, a, b, k })
    }

    /// `A = (a+b)/2 - 1`.
    pub fn big_a(&self) -> HalfInt {
        HalfInt::from_twice(self.a as i64 + self.b as i64 - 2)
    }

    /// `B = (a-b)/2`.
    pub fn big_b(&self) -> HalfInt {
        HalfInt::from_twice(self.a as i64 - self.b as i64)
    }

    pub fn entry(&self, r: u32, c: u32) -> HalfInt {
        self.big_b() + c as i64 - r as i64
    }
}

/// Grid entries `B + c - r`, columns left to right, each column top to bottom.
pub fn speh_grid(shape: &SpehShape) -> Vec<HalfInt> {
    let mut out = Vec::with_capacity((shape.a * shape.b) as usize);
    for c in 0..shape.b {
        for r in 0..shape.a {
            out.push(shape.entry(r, c));
        }
    }
    out
}

/// A segment with arbitrary rational exponents (bad-parity data).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatSegment {
    pub rho: Rho,
    pub x: Rational64,
    pub y: Rational64,
}

impl RatSegment {
    pub fn new(rho: Rho, x: Rational64, y: Rational64) -> Result<Self, RepError> {
        let d = x - y;
        if !d.is_integer() || d < Rational64::from_integer(0) {
            return Err(RepError::Segment(format!("[{x},{y}]_{rho}")));
        }
        Ok(RatSegment { rho, x, y })
    }

    pub fn len(&self) -> u64 {
        (self.x - self.y).to_integer() as u64 + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn center2(&self) -> Rational64 {
        self.x + self.y
    }
}
