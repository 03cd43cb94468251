use std::collections::BTreeMap;

use super::arthur::SearchLimits;
use super::aubert::{aubert_dual, AubertOutcome};
use super::DecideError;
use crate::halfint::HalfInt;
use crate::jacquet::{vanishing_test_sharp, Vanishing};
use crate::reason::Reason;
use crate::repdata::{BadTempered, GeneralDatum, LanglandsDatum, Multisegment, RatSegment, Rho, Segment};

/// The general linear factor carrying `φ_bad^-`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TauBad {
    pub segments: Vec<RatSegment>,
    pub tempered: Vec<BadTempered>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Block {
    /// `Δ_ρ[x, y]^k`.
    Delta { seg: Segment, k: u32 },
    /// `Z_ρ[from, to]^k`, the exponents `from, from+1, …, to`.
    Zel { rho: Rho, from: HalfInt, to: HalfInt, k: u32 },
}

/// `π_j = soc(block ⋊ π_{j-1})`; the datum is absent when no certificate for it was found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainStep {
    pub block: Block,
    pub datum: Option<LanglandsDatum>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SZDecomposition {
    pub tau_bad_minus: TauBad,
    /// `(Δ[x_i, y_i], k_i)` with `x_i < 0`.
    pub tau_minus: Vec<(Segment, u32)>,
    /// `(Δ[x'_i, y'_i], k'_i)` read off the dual, `x'_i ≤ -1`; the block is `Z[-x'_i, -y'_i]^{k'_i}`.
    pub tau_plus: Vec<(Segment, u32)>,
    pub pi0: LanglandsDatum,
    pub pi_prime: LanglandsDatum,
    pub hat_pi_prime: LanglandsDatum,
    pub hat_pi0: LanglandsDatum,
    /// `π_1, …, π_{r+s}`.
    pub chain: Vec<ChainStep>,
    /// Equal `x` on different lines, ordered by a canonical choice.
    pub tie_broken: bool,
    /// Points `x ∉ {0, ½}` where `D_x(π_0) = 0` is not certified.
    pub pi0_uncertified: Vec<(Rho, HalfInt)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SzOutcome {
    Done(Box<SZDecomposition>),
    /// A dual was needed but not certified; the prefix computed so far is kept.
    NeedsOracle { reason: Reason, tau_bad_minus: TauBad, tau_minus: Vec<(Segment, u32)> },
}

fn group(segs: impl IntoIterator<Item = Segment>) -> Vec<(Segment, u32)> {
    let mut m: BTreeMap<(HalfInt, HalfInt, Rho), u32> = BTreeMap::new();
    for s in segs {
        *m.entry((s.x, s.y, s.rho)).or_default() += 1;
    }
    m.into_iter().map(|((x, y, rho), k)| (Segment { rho, x, y }, k)).collect()
}

fn with_segments(d: &LanglandsDatum, extra: &[(Segment, u32)]) -> LanglandsDatum {
    let mut m = d.m.clone();
    for (s, k) in extra {
        m.extend(std::iter::repeat_n(s.clone(), *k as usize));
    }
    LanglandsDatum::new(m, d.tempered.clone(), d.group)
}

fn tau_bad(g: &GeneralDatum) -> TauBad {
    let mut tempered = vec![];
    for t in &g.bad_tempered {
        if t.rho.is_selfdual() {
            if t.mult >= 2 {
                tempered.push(BadTempered { mult: t.mult / 2, ..t.clone() });
            }
        } else if t.rho.id() < t.rho.dual().id() {
            tempered.push(t.clone());
        }
    }
    TauBad { segments: g.bad_segments.clone(), tempered }
}

fn dual(d: &LanglandsDatum, limits: &SearchLimits) -> Result<LanglandsDatum, Reason> {
    if d.m.is_empty() && d.tempered.is_empty() {
        return Ok(d.clone());
    }
    match aubert_dual(d, None, limits) {
        AubertOutcome::Dual { datum, .. } => Ok(datum),
        AubertOutcome::NeedsOracle(r) => Err(r),
    }
}

/// SZ-decomposition: negative `Δ`-blocks, then `Z`-blocks read off the Aubert dual of the rest.
pub fn sz_decompose(g: &GeneralDatum, limits: &SearchLimits) -> Result<SzOutcome, DecideError> {
    let v = g.good.violations();
    if !v.is_empty() {
        return Err(DecideError::Invalid(v));
    }
    let d = &g.good;
    let bad = tau_bad(g);
    let (neg, rest): (Vec<Segment>, Vec<Segment>) = d.m.items().iter().cloned().partition(|s| s.x < HalfInt::ZERO);
    let tau_minus = group(neg);
    let tie_broken = tau_minus
        .windows(2)
        .any(|w| w[0].0.x == w[1].0.x && w[0].0.rho != w[1].0.rho);
    let pi_prime = LanglandsDatum::new(Multisegment::new(rest), d.tempered.clone(), d.group);

    let oracle = |reason| SzOutcome::NeedsOracle { reason, tau_bad_minus: bad.clone(), tau_minus: tau_minus.clone() };
    let hat_pi_prime = match dual(&pi_prime, limits) {
        Ok(x) => x,
        Err(r) => return Ok(oracle(r)),
    };
    let (low, keep): (Vec<Segment>, Vec<Segment>) =
        hat_pi_prime.m.items().iter().cloned().partition(|s| s.x <= HalfInt::from_int(-1));
    let tau_plus = group(low);
    let hat_pi0 = LanglandsDatum::new(Multisegment::new(keep), hat_pi_prime.tempered.clone(), d.group);
    let pi0 = if tau_plus.is_empty() {
        pi_prime.clone()
    } else {
        match dual(&hat_pi0, limits) {
            Ok(x) => x,
            Err(r) => return Ok(oracle(r)),
        }
    };

    let mut chain = vec![];
    let r = tau_plus.len();
    for i in 1..=r {
        let (seg, k) = &tau_plus[r - i];
        let block = Block::Zel { rho: seg.rho.clone(), from: -seg.x, to: -seg.y, k: *k };
        let datum = if i == r {
            Some(pi_prime.clone())
        } else {
            dual(&with_segments(&hat_pi0, &tau_plus[r - i..]), limits).ok()
        };
        chain.push(ChainStep { block, datum });
    }
    let s = tau_minus.len();
    for i in 1..=s {
        let (seg, k) = &tau_minus[s - i];
        let datum = with_segments(&pi_prime, &tau_minus[s - i..]);
        chain.push(ChainStep { block: Block::Delta { seg: seg.clone(), k: *k }, datum: Some(datum) });
    }

    let mut pi0_uncertified = vec![];
    for rho in pi0.rhos() {
        let top = pi0
            .m
            .on_line(&rho)
            .flat_map(|s| [s.x.abs(), s.y.abs()])
            .chain(pi0.tempered.on_line(&rho).map(|(z, _)| z))
            .max()
            .unwrap_or(HalfInt::ZERO);
        for x in top.down_to(-top) {
            if x != HalfInt::ZERO && x != HalfInt::HALF && vanishing_test_sharp(&pi0, &rho, x) != Vanishing::Zero {
                pi0_uncertified.push((rho.clone(), x));
            }
        }
    }

    Ok(SzOutcome::Done(Box::new(SZDecomposition {
        tau_bad_minus: bad,
        tau_minus,
        tau_plus,
        pi0,
        pi_prime,
        hat_pi_prime,
        hat_pi0,
        chain,
        tie_broken,
        pi0_uncertified,
    })))
}
