//! Unitarity verdicts: the good-parity equivalence with Arthur type, the necessary condition on
//! the good part, and the criterion for inductions `Sp(ρ,c,d)|·|^x ⋊ π_0` with `0 ≤ x < ½`.

mod oracle;

use std::collections::BTreeMap;

use num_rational::Rational64;
use serde::Serialize;
use thiserror::Error;

use crate::amseg::{eval, Evaluation, ExtMultiSegment};
use crate::decide::{is_arthur, ArthurVerdict, DecideError, SearchLimits};
use crate::reason::Reason;
use crate::repdata::{GeneralDatum, LanglandsDatum, Rho};

pub use oracle::{Answer, FixtureEntry, FixtureOracle, InductionQuery, IrreducibilityOracle, StubOracle};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UnitaryError {
    #[error(transparent)]
    Decide(#[from] DecideError),
    #[error("factor {index}: x = {x} is outside [0, 1/2)")]
    XRange { index: usize, x: Rational64 },
    #[error("factor {index}: x = 0 with {rho} ⊠ S_{c} ⊠ S_{d} self-dual of the type of ψ")]
    SelfDualAtZero { index: usize, rho: Rho, c: u32, d: u32 },
    #[error("factor {index}: c and d must be positive")]
    EmptyFactor { index: usize },
    #[error("π_0 is not of Arthur type")]
    NotArthur,
    #[error("π_0 does not evaluate to a representation: {0}")]
    Pi0(String),
    #[error("the input has a bad-parity part; take the good part first")]
    BadParity,
    #[error("the oracle reports that the full induction is reducible")]
    Reducible,
    #[error("oracle answer {answer:?} contradicts FRP {frp} for {rho} ⊠ S_{c} ⊠ S_{d}")]
    OracleInconsistent { rho: Rho, c: u32, d: u32, answer: Answer, frp: Rational64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnitaryVerdict {
    /// With the extended multi-segment certifying Arthur type.
    Unitary(ExtMultiSegment),
    NotUnitary,
    Unknown(Reason),
}

impl UnitaryVerdict {
    pub fn status(&self) -> &'static str {
        match self {
            UnitaryVerdict::Unitary(_) => "Unitary",
            UnitaryVerdict::NotUnitary => "NotUnitary",
            UnitaryVerdict::Unknown(_) => "Unknown",
        }
    }
}

/// Outcome of the necessary condition on a general datum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NecessaryVerdict {
    /// No bad part, so the condition is also sufficient.
    Unitary(ExtMultiSegment),
    PossiblyUnitary(ExtMultiSegment),
    NotUnitary,
    Unknown(Reason),
}

impl NecessaryVerdict {
    pub fn status(&self) -> &'static str {
        match self {
            NecessaryVerdict::Unitary(_) => "Unitary",
            NecessaryVerdict::PossiblyUnitary(_) => "PossiblyUnitary",
            NecessaryVerdict::NotUnitary => "NotUnitary",
            NecessaryVerdict::Unknown(_) => "Unknown",
        }
    }
}

/// Drop the bad-parity segments and summands.
pub fn good_part(g: &GeneralDatum) -> LanglandsDatum {
    g.good.clone()
}

/// A good-parity representation is unitary exactly when it is of Arthur type.
pub fn is_unitary_good_parity(d: &LanglandsDatum, limits: &SearchLimits) -> Result<UnitaryVerdict, UnitaryError> {
    Ok(match is_arthur(d, limits)? {
        ArthurVerdict::Yes(e) => UnitaryVerdict::Unitary(e),
        ArthurVerdict::No => UnitaryVerdict::NotUnitary,
        ArthurVerdict::Unknown(r) => UnitaryVerdict::Unknown(r),
    })
}

/// [`is_unitary_good_parity`] on a general datum that must have no bad part.
pub fn is_unitary_general(g: &GeneralDatum, limits: &SearchLimits) -> Result<UnitaryVerdict, UnitaryError> {
    if !g.bad_segments.is_empty() || !g.bad_tempered.is_empty() {
        return Err(UnitaryError::BadParity);
    }
    is_unitary_good_parity(&g.good, limits)
}

/// A unitary representation has a good part of Arthur type.
pub fn unitary_necessary(g: &GeneralDatum, limits: &SearchLimits) -> Result<NecessaryVerdict, UnitaryError> {
    let pure = g.bad_segments.is_empty() && g.bad_tempered.is_empty();
    Ok(match is_unitary_good_parity(&good_part(g), limits)? {
        UnitaryVerdict::Unitary(e) if pure => NecessaryVerdict::Unitary(e),
        UnitaryVerdict::Unitary(e) => NecessaryVerdict::PossiblyUnitary(e),
        UnitaryVerdict::NotUnitary => NecessaryVerdict::NotUnitary,
        UnitaryVerdict::Unknown(r) => NecessaryVerdict::Unknown(r),
    })
}

/// `Sp(ρ, c, d)|·|^x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub rho: Rho,
    pub c: u32,
    pub d: u32,
    pub x: Rational64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pi0 {
    Datum(LanglandsDatum),
    Ext(ExtMultiSegment),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IrreducibleInput {
    Asserted,
    OracleChecked,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BeyondDatum {
    pub pi0: Pi0,
    pub factors: Vec<Factor>,
    pub irreducible_input: IrreducibleInput,
}

impl BeyondDatum {
    /// Range and shape conditions on the factors.
    pub fn check(&self, group: crate::repdata::GroupType) -> Result<(), UnitaryError> {
        let half = Rational64::new(1, 2);
        for (i, f) in self.factors.iter().enumerate() {
            let index = i + 1;
            if f.c == 0 || f.d == 0 {
                return Err(UnitaryError::EmptyFactor { index });
            }
            if f.x < Rational64::from_integer(0) || f.x >= half {
                return Err(UnitaryError::XRange { index, x: f.x });
            }
            if f.x == Rational64::from_integer(0) && f.rho.good_triple(group, f.c as u64, f.d as u64) {
                return Err(UnitaryError::SelfDualAtZero { index, rho: f.rho.clone(), c: f.c, d: f.d });
            }
        }
        Ok(())
    }
}

/// One `I(ρ, c, d)` and how it fared.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupCheck {
    /// Non-self-dual ρ: the nonzero `x` of `I(ρ,c,d)` and `I(ρ^∨,c,d)`.
    Multiset { dual: Rho, dual_members: Vec<usize>, lhs: Vec<Rational64>, rhs: Vec<Rational64>, holds: bool },
    /// Self-dual ρ with `|I|` odd: the oracle on `Sp(ρ,c,d) ⋊ π_0`.
    Induction { answer: Answer, frp: Option<Rational64> },
    /// Self-dual ρ with `|I|` even.
    Even,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupReport {
    pub rho: Rho,
    pub c: u32,
    pub d: u32,
    /// 1-based factor indices.
    pub members: Vec<usize>,
    pub check: GroupCheck,
}

impl GroupReport {
    /// `Some(false)` on a failed condition, `None` while the oracle is undecided.
    pub fn holds(&self) -> Option<bool> {
        match &self.check {
            GroupCheck::Multiset { holds, .. } => Some(*holds),
            GroupCheck::Induction { answer, .. } => match answer {
                Answer::Irreducible => Some(true),
                Answer::Reducible => Some(false),
                Answer::Unknown => None,
            },
            GroupCheck::Even => Some(true),
        }
    }

    pub fn condition(&self) -> &'static str {
        match self.check {
            GroupCheck::Multiset { .. } => "i",
            GroupCheck::Induction { .. } | GroupCheck::Even => "ii",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakReport {
    pub verdict: UnitaryVerdict,
    pub pi0: LanglandsDatum,
    pub groups: Vec<GroupReport>,
}

fn pi0_datum(p: &Pi0, limits: &SearchLimits) -> Result<(LanglandsDatum, Option<ExtMultiSegment>), UnitaryError> {
    match p {
        Pi0::Ext(e) => {
            let v = e.violations();
            if !v.is_empty() {
                return Err(UnitaryError::Pi0(format!("{v:?}")));
            }
            match eval(e) {
                Evaluation::Datum(d) => Ok((d, Some(e.clone()))),
                Evaluation::Vanishes => Err(UnitaryError::Pi0("π(ℰ) = 0".into())),
                Evaluation::NeedsOracle(r) => Err(UnitaryError::Pi0(r.to_string())),
            }
        }
        Pi0::Datum(d) => match is_arthur(d, limits)? {
            ArthurVerdict::Yes(e) => Ok((d.clone(), Some(e))),
            ArthurVerdict::No => Err(UnitaryError::NotArthur),
            ArthurVerdict::Unknown(_) => Ok((d.clone(), None)),
        },
    }
}

fn ask(
    oracle: &dyn IrreducibilityOracle,
    rho: &Rho,
    c: u32,
    d: u32,
    pi0: &LanglandsDatum,
) -> Result<(Answer, Option<Rational64>), UnitaryError> {
    let q = InductionQuery { rho: rho.clone(), c, d, pi0: pi0.clone() };
    let answer = oracle.induction(&q);
    let frp = oracle.frp(&q);
    let positive = frp.map(|f| f > Rational64::from_integer(0));
    match (answer, positive) {
        (Answer::Unknown, Some(p)) => Ok((if p { Answer::Irreducible } else { Answer::Reducible }, frp)),
        (Answer::Irreducible, Some(false)) | (Answer::Reducible, Some(true)) => Err(UnitaryError::OracleInconsistent {
            rho: rho.clone(),
            c,
            d,
            answer,
            frp: frp.expect("checked"),
        }),
        _ => Ok((answer, frp)),
    }
}

/// Unitarity of `Sp(ρ_1,c_1,d_1)|·|^{x_1} × … ⋊ π_0` for `π_0` of Arthur type and good parity.
pub fn weak_check(
    b: &BeyondDatum,
    oracle: &dyn IrreducibilityOracle,
    limits: &SearchLimits,
) -> Result<WeakReport, UnitaryError> {
    let (pi0, witness) = pi0_datum(&b.pi0, limits)?;
    b.check(pi0.group)?;

    let mut groups: BTreeMap<(Rho, u32, u32), Vec<usize>> = BTreeMap::new();
    for (i, f) in b.factors.iter().enumerate() {
        groups.entry((f.rho.clone(), f.c, f.d)).or_default().push(i + 1);
    }
    let nonzero = |ix: &[usize]| {
        let mut v: Vec<Rational64> = ix
            .iter()
            .map(|&i| b.factors[i - 1].x)
            .filter(|x| *x != Rational64::from_integer(0))
            .collect();
        v.sort();
        v
    };

    let mut reports = vec![];
    for ((rho, c, d), members) in &groups {
        let check = if rho.is_selfdual() {
            if members.len() % 2 == 1 {
                let (answer, frp) = ask(oracle, rho, *c, *d, &pi0)?;
                GroupCheck::Induction { answer, frp }
            } else {
                GroupCheck::Even
            }
        } else {
            let dual = rho.dual();
            // each pair is reported once, from the side with the smaller label
            if groups.contains_key(&(dual.clone(), *c, *d)) && dual < *rho {
                continue;
            }
            let dual_members = groups.get(&(dual.clone(), *c, *d)).cloned().unwrap_or_default();
            let lhs = nonzero(members);
            let rhs = nonzero(&dual_members);
            let holds = lhs == rhs;
            GroupCheck::Multiset { dual, dual_members, lhs, rhs, holds }
        };
        reports.push(GroupReport { rho: rho.clone(), c: *c, d: *d, members: members.clone(), check });
    }

    let mut unknown = None;
    if b.irreducible_input == IrreducibleInput::OracleChecked {
        match oracle.full_induction(&b.factors, &pi0) {
            Answer::Irreducible => {}
            Answer::Reducible => return Err(UnitaryError::Reducible),
            Answer::Unknown => unknown = Some(Reason::IrreducibilityOracle),
        }
    }
    let verdict = if reports.iter().any(|r| r.holds() == Some(false)) {
        UnitaryVerdict::NotUnitary
    } else if reports.iter().any(|r| r.holds().is_none()) {
        UnitaryVerdict::Unknown(Reason::IrreducibilityOracle)
    } else if let Some(r) = unknown {
        UnitaryVerdict::Unknown(r)
    } else {
        match witness {
            Some(e) => UnitaryVerdict::Unitary(e),
            None => UnitaryVerdict::Unknown(Reason::PacketNeedsOracle),
        }
    };
    Ok(WeakReport { verdict, pi0, groups: reports })
}
