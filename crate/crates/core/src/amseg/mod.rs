//! Extended multi-segments and the representations they define.

mod eval;
mod packet;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::halfint::HalfInt;
use crate::repdata::{AParameter, GroupType, RepError, Rho, Segment};

pub use eval::{choose_shifts, eval, eval_ddr, eval_line, is_ddr, shift, Evaluation};
pub(crate) use packet::sign_combinations;
pub use packet::{enumerate_line, enumerate_packet, LineEnumeration, LineOutcome, Packet, PacketEntry, PacketLimits};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AmsegError {
    #[error("invalid extended segment: {0}")]
    Segment(String),
    #[error("extended multi-segment is not DDR")]
    NotDdr,
    #[error("invalid extended multi-segment: {0:?}")]
    Invalid(Vec<ExtViolation>),
    #[error("parameter dimension {dim} exceeds the bound {bound}")]
    DimensionBound { dim: u64, bound: u64 },
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// `([A, B]_ρ, l, η)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtSegment {
    pub rho: Rho,
    pub big_a: HalfInt,
    pub big_b: HalfInt,
    pub l: u32,
    pub eta: i8,
}

impl ExtSegment {
    pub fn new(rho: Rho, big_a: HalfInt, big_b: HalfInt, l: u32, eta: i8) -> Result<Self, AmsegError> {
        if !big_a.congruent(big_b) || big_a < big_b {
            return Err(AmsegError::Segment(format!("[{big_a},{big_b}] is not a segment")));
        }
        if eta != 1 && eta != -1 {
            return Err(AmsegError::Segment(format!("η = {eta}")));
        }
        let s = ExtSegment { rho, big_a, big_b, l, eta };
        if 2 * l > s.b() {
            return Err(AmsegError::Segment(format!("l = {l} exceeds b/2 for [{big_a},{big_b}]")));
        }
        Ok(s)
    }

    /// `b = A - B + 1`.
    pub fn b(&self) -> u32 {
        self.big_a.int_diff(self.big_b) as u32 + 1
    }

    /// `a = A + B + 1`; zero or negative when `A + B < 0`.
    pub fn a(&self) -> i64 {
        (self.big_a + self.big_b).to_int().unwrap_or(i64::MIN) + 1
    }

    /// `(-1)^{[b/2] + l} η^b`.
    pub fn sign(&self) -> i8 {
        let b = self.b();
        let mut s = if (b / 2 + self.l) % 2 == 0 { 1 } else { -1 };
        if b % 2 == 1 {
            s *= self.eta;
        }
        s
    }

    /// No tempered contribution: `2l = b`.
    pub fn is_full(&self) -> bool {
        2 * self.l == self.b()
    }

    /// Equal segments and `l`, and `η` when it matters.
    pub fn equivalent(&self, o: &ExtSegment) -> bool {
        self.rho == o.rho
            && self.big_a == o.big_a
            && self.big_b == o.big_b
            && self.l == o.l
            && (self.is_full() || self.eta == o.eta)
    }

    /// Representative of the equivalence class (η = +1 when it is irrelevant).
    pub fn normalized(mut self) -> Self {
        if self.is_full() {
            self.eta = 1;
        }
        self
    }

    pub fn shifted(&self, t: i64) -> Self {
        ExtSegment { big_a: self.big_a + t, big_b: self.big_b + t, ..self.clone() }
    }

    /// Segments `[B+j, -A+j]` for `j < l` and tempered `(B+l+j, (-1)^j η)`.
    pub(crate) fn content(&self) -> (Vec<Segment>, Vec<(HalfInt, i8)>) {
        let segs = (0..self.l as i64)
            .map(|j| Segment { rho: self.rho.clone(), x: self.big_b + j, y: -self.big_a + j })
            .collect();
        let n = self.b() as i64 - 2 * self.l as i64;
        let temp = (0..n)
            .map(|j| (self.big_b + self.l as i64 + j, if j % 2 == 0 { self.eta } else { -self.eta }))
            .collect();
        (segs, temp)
    }
}

impl fmt::Debug for ExtSegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.eta > 0 { '+' } else { '-' };
        write!(f, "([{},{}]_{}, {}, {s})", self.big_a, self.big_b, self.rho, self.l)
    }
}

/// An ordered list of extended segments for a group.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtMultiSegment {
    pub blocks: Vec<ExtSegment>,
    pub group: GroupType,
}

impl fmt::Debug for ExtMultiSegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.blocks).finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtViolation {
    /// Blocks `i` and `j` (0-based, `i < j`) are in the wrong relative order.
    Order { i: usize, j: usize },
    Sign,
    NegativeSum { index: usize },
    NotSelfDual { index: usize },
    Lattice { index: usize },
    NotGoodParity { index: usize },
    DimensionParity { dim: u64 },
}

impl fmt::Display for ExtViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtViolation::Order { i, j } => write!(f, "blocks {i} and {j} violate the admissible order"),
            ExtViolation::Sign => f.write_str("sign condition fails"),
            ExtViolation::NegativeSum { index } => write!(f, "block {index} has A + B < 0"),
            ExtViolation::NotSelfDual { index } => write!(f, "block {index} is on a non-self-dual cuspidal"),
            ExtViolation::Lattice { index } => write!(f, "block {index} is off the b_ρ lattice"),
            ExtViolation::NotGoodParity { index } => write!(f, "block {index} is not of good parity"),
            ExtViolation::DimensionParity { dim } => write!(f, "ψ has dimension {dim} of the wrong parity"),
        }
    }
}

/// `j` must come before `i` on a common line.
pub(crate) fn must_precede(j: &ExtSegment, i: &ExtSegment) -> bool {
    j.rho == i.rho
        && ((j.big_a < i.big_a && j.big_b < i.big_b) || (j.big_b < i.big_b && i.big_b < HalfInt::ZERO))
}

pub fn order_violations(blocks: &[ExtSegment]) -> Vec<ExtViolation> {
    let mut out = vec![];
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            if must_precede(&blocks[j], &blocks[i]) {
                out.push(ExtViolation::Order { i, j });
            }
        }
    }
    out
}

pub fn sign_product(blocks: &[ExtSegment]) -> i8 {
    blocks.iter().map(ExtSegment::sign).product()
}

impl ExtMultiSegment {
    pub fn new(blocks: Vec<ExtSegment>, group: GroupType) -> Self {
        ExtMultiSegment { blocks, group }
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Block indices per line, in order.
    pub fn lines(&self) -> BTreeMap<Rho, Vec<usize>> {
        let mut out: BTreeMap<Rho, Vec<usize>> = BTreeMap::new();
        for (i, b) in self.blocks.iter().enumerate() {
            out.entry(b.rho.clone()).or_default().push(i);
        }
        out
    }

    pub fn dim(&self) -> u64 {
        self.blocks.iter().map(|b| b.a().max(0) as u64 * b.b() as u64 * b.rho.dim() as u64).sum()
    }

    pub fn violations(&self) -> Vec<ExtViolation> {
        let mut out = vec![];
        for (index, b) in self.blocks.iter().enumerate() {
            if b.big_a + b.big_b < HalfInt::ZERO {
                out.push(ExtViolation::NegativeSum { index });
                continue;
            }
            if !b.rho.is_selfdual() {
                out.push(ExtViolation::NotSelfDual { index });
            } else if !b.big_b.congruent(b.rho.b_rho(self.group)) {
                out.push(ExtViolation::Lattice { index });
            } else if !b.rho.good_triple(self.group, b.a() as u64, b.b() as u64) {
                out.push(ExtViolation::NotGoodParity { index });
            }
        }
        out.extend(order_violations(&self.blocks));
        if sign_product(&self.blocks) != 1 {
            out.push(ExtViolation::Sign);
        }
        let dim = self.dim();
        if !self.group.dim_ok(dim) {
            out.push(ExtViolation::DimensionParity { dim });
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }
}

pub fn validate(e: &ExtMultiSegment) -> Result<(), Vec<ExtViolation>> {
    let v = e.violations();
    if v.is_empty() {
        Ok(())
    } else {
        Err(v)
    }
}

/// `ψ_ℰ = ⊕ ρ_i ⊠ S_{a_i} ⊠ S_{b_i}`.
pub fn psi_of(e: &ExtMultiSegment) -> Result<AParameter, AmsegError> {
    let v = e.violations();
    if !v.is_empty() {
        return Err(AmsegError::Invalid(v));
    }
    let triples = e.blocks.iter().map(|b| (b.rho.clone(), b.a() as u32, b.b())).collect();
    Ok(AParameter::new(triples, e.group)?)
}

/// Blockwise equivalence.
pub fn equivalent(e1: &ExtMultiSegment, e2: &ExtMultiSegment) -> bool {
    e1.group == e2.group
        && e1.blocks.len() == e2.blocks.len()
        && e1.blocks.iter().zip(&e2.blocks).all(|(x, y)| x.equivalent(y))
}

/// `[A, B]` of the block attached to `(a, b)`.
pub fn ends_of(a: u32, b: u32) -> (HalfInt, HalfInt) {
    (HalfInt::from_twice(a as i64 + b as i64 - 2), HalfInt::from_twice(a as i64 - b as i64))
}
