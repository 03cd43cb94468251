use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::Factor;
use crate::repdata::{LanglandsDatum, Rho};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Answer {
    Irreducible,
    Reducible,
    Unknown,
}

/// Is `Sp(ρ, c, d) ⋊ π_0` irreducible?
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InductionQuery {
    pub rho: Rho,
    pub c: u32,
    pub d: u32,
    pub pi0: LanglandsDatum,
}

pub trait IrreducibilityOracle {
    fn induction(&self, q: &InductionQuery) -> Answer;

    /// First reducibility point of `Sp(ρ,c,d)|·|^s ⋊ π_0`; irreducible at `s = 0` iff it is positive.
    fn frp(&self, _q: &InductionQuery) -> Option<Rational64> {
        None
    }

    /// Irreducibility of the whole induction.
    fn full_induction(&self, _factors: &[Factor], _pi0: &LanglandsDatum) -> Answer {
        Answer::Unknown
    }
}

/// The same answer to every question.
#[derive(Clone, Copy, Debug)]
pub struct StubOracle(pub Answer);

impl IrreducibilityOracle for StubOracle {
    fn induction(&self, _q: &InductionQuery) -> Answer {
        self.0
    }

    fn full_induction(&self, _factors: &[Factor], _pi0: &LanglandsDatum) -> Answer {
        self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureEntry {
    pub rho: Rho,
    pub c: u32,
    pub d: u32,
    pub pi0: LanglandsDatum,
    pub answer: Answer,
    pub frp: Option<Rational64>,
}

/// A table of known answers; anything else is `Unknown`.
#[derive(Clone, Debug, Default)]
pub struct FixtureOracle {
    entries: Vec<FixtureEntry>,
}

impl FixtureOracle {
    pub fn new(entries: Vec<FixtureEntry>) -> Self {
        FixtureOracle { entries }
    }

    fn find(&self, q: &InductionQuery) -> Option<&FixtureEntry> {
        self.entries.iter().find(|e| e.rho == q.rho && e.c == q.c && e.d == q.d && e.pi0 == q.pi0)
    }
}

impl IrreducibilityOracle for FixtureOracle {
    fn induction(&self, q: &InductionQuery) -> Answer {
        self.find(q).map_or(Answer::Unknown, |e| e.answer)
    }

    fn frp(&self, q: &InductionQuery) -> Option<Rational64> {
        self.find(q).and_then(|e| e.frp)
    }
}
