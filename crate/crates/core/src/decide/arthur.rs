use std::collections::BTreeMap;

use rayon::prelude::*;

use super::DecideError;
use crate::amseg::{ends_of, enumerate_line, sign_combinations, ExtMultiSegment, ExtSegment, PacketLimits};
use crate::halfint::HalfInt;
use crate::reason::Reason;
use crate::repdata::{GroupType, LanglandsDatum, Rho};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_dim: u64,
    pub packet: PacketLimits,
    /// Candidate parameters per line before the search gives up.
    pub max_candidates: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_dim: 40, packet: PacketLimits::default(), max_candidates: 4096 }
    }
}

impl SearchLimits {
    pub fn with_dim(max_dim: u64) -> Self {
        SearchLimits { max_dim, packet: PacketLimits { max_dim, ..PacketLimits::default() }, ..Self::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArthurVerdict {
    Yes(ExtMultiSegment),
    No,
    Unknown(Reason),
}

impl ArthurVerdict {
    pub fn status(&self) -> &'static str {
        match self {
            ArthurVerdict::Yes(_) => "yes",
            ArthurVerdict::No => "no",
            ArthurVerdict::Unknown(_) => "unknown",
        }
    }

    pub fn witness(&self) -> Option<&ExtMultiSegment> {
        match self {
            ArthurVerdict::Yes(e) => Some(e),
            _ => None,
        }
    }

    pub fn reason(&self) -> Option<Reason> {
        match self {
            ArthurVerdict::Unknown(r) => Some(*r),
            _ => None,
        }
    }
}

/// Exponents of the infinitesimal character on one line, with multiplicity, both signs.
fn inf_char(d: &LanglandsDatum, rho: &Rho) -> BTreeMap<HalfInt, u32> {
    let mut out: BTreeMap<HalfInt, u32> = BTreeMap::new();
    let mut add = |x: HalfInt, n: u32| *out.entry(x).or_default() += n;
    for s in d.m.on_line(rho) {
        for e in s.exponents() {
            add(e, 1);
            add(-e, 1);
        }
    }
    for (z, e) in d.tempered.on_line(rho) {
        for x in z.down_to(-z) {
            add(x, e.mult);
        }
    }
    out
}

fn grid(a: u32, b: u32) -> impl Iterator<Item = HalfInt> {
    let (big_a, big_b) = ends_of(a, b);
    (0..b as i64).flat_map(move |j| (big_a - j).down_to(-(big_b + j)))
}

/// Every multiset of good triples `(a, b)` on the line of ρ whose exponents fill `ic`, in
/// canonical order; `None` past `cap`.
fn decompose(rho: &Rho, g: GroupType, ic: &BTreeMap<HalfInt, u32>, cap: usize) -> Option<Vec<Vec<(u32, u32)>>> {
    fn rec(
        rho: &Rho,
        g: GroupType,
        rest: &mut BTreeMap<HalfInt, u32>,
        cur: &mut Vec<(u32, u32)>,
        out: &mut Vec<Vec<(u32, u32)>>,
        cap: usize,
    ) -> bool {
        let Some((&top, _)) = rest.iter().next_back() else {
            out.push(cur.clone());
            return out.len() <= cap;
        };
        // the largest exponent is the corner A of some grid, so a + b = 2A + 2
        let s = (top.twice() + 2) as u32;
        for a in (1..s).rev() {
            let b = s - a;
            if let Some(&(pa, pb)) = cur.last() {
                if (pa + pb, pa) < (s, a) {
                    continue;
                }
            }
            if !rho.good_triple(g, a as u64, b as u64) {
                continue;
            }
            let cells: Vec<HalfInt> = grid(a, b).collect();
            let mut ok = true;
            let mut taken = vec![];
            for x in cells {
                match rest.get_mut(&x) {
                    Some(c) if *c > 0 => {
                        *c -= 1;
                        taken.push(x);
                    }
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                rest.retain(|_, c| *c > 0);
                cur.push((a, b));
                let go = rec(rho, g, rest, cur, out, cap);
                cur.pop();
                for x in &taken {
                    *rest.entry(*x).or_default() += 1;
                }
                if !go {
                    return false;
                }
            } else {
                for x in &taken {
                    *rest.entry(*x).or_default() += 1;
                }
            }
        }
        true
    }
    let mut rest = ic.clone();
    let mut out = vec![];
    rec(rho, g, &mut rest, &mut vec![], &mut out, cap).then_some(out)
}

/// Candidate `ψ` restricted to the line of ρ: the good-parity triples whose `φ_ψ` has the
/// infinitesimal character of `d` there.
pub fn candidate_lines(d: &LanglandsDatum, rho: &Rho, cap: usize) -> Option<Vec<Vec<(u32, u32)>>> {
    decompose(rho, d.group, &inf_char(d, rho), cap)
}

struct LineSearch {
    /// Matching blocks with their sign product.
    matches: Vec<(i8, Vec<ExtSegment>)>,
    /// Some candidate still has oracle-dependent members.
    open: bool,
}

fn search_line(d: &LanglandsDatum, rho: &Rho, limits: &SearchLimits) -> LineSearch {
    let target = d.line(rho);
    let Some(cands) = candidate_lines(d, rho, limits.max_candidates) else {
        return LineSearch { matches: vec![], open: true };
    };
    let per: Vec<(Vec<(i8, Vec<ExtSegment>)>, bool)> = cands
        .par_iter()
        .map(|c| {
            let ends: Vec<(HalfInt, HalfInt)> = c.iter().map(|&(a, b)| ends_of(a, b)).collect();
            let en = enumerate_line(rho, &ends, d.group, &limits.packet);
            let found = en
                .certified()
                .into_iter()
                .filter(|o| o.eval.datum() == Some(&target))
                .map(|o| (o.sign, o.blocks.clone()))
                .collect();
            (found, en.complete.is_none())
        })
        .collect();
    let mut matches = vec![];
    let mut open = false;
    for (m, o) in per {
        matches.extend(m);
        open |= o;
    }
    LineSearch { matches, open }
}

fn check(d: &LanglandsDatum, limits: &SearchLimits) -> Result<(), DecideError> {
    let v = d.violations();
    if !v.is_empty() {
        return Err(DecideError::Invalid(v));
    }
    if d.dim() > limits.max_dim {
        return Err(DecideError::DimensionBound { dim: d.dim(), bound: limits.max_dim });
    }
    Ok(())
}

fn searches(d: &LanglandsDatum, limits: &SearchLimits) -> Vec<LineSearch> {
    d.rhos().iter().map(|r| search_line(d, r, limits)).collect()
}

fn assemble(combo: &[&(i8, Vec<ExtSegment>)], g: GroupType) -> ExtMultiSegment {
    ExtMultiSegment::new(combo.iter().flat_map(|m| m.1.iter().cloned()).collect(), g)
}

/// Packet search: every candidate `ψ` with the infinitesimal character of `d` is enumerated and
/// compared line by line.
pub fn is_arthur(d: &LanglandsDatum, limits: &SearchLimits) -> Result<ArthurVerdict, DecideError> {
    check(d, limits)?;
    let lines = searches(d, limits);
    // one witness per line and sign is enough to decide
    let firsts: Vec<Vec<&(i8, Vec<ExtSegment>)>> = lines
        .iter()
        .map(|l| {
            let mut v: Vec<&(i8, Vec<ExtSegment>)> = vec![];
            for m in &l.matches {
                if !v.iter().any(|w| w.0 == m.0) {
                    v.push(m);
                }
            }
            v
        })
        .collect();
    if let Some(combo) = sign_combinations(&firsts, |m| m.0).first() {
        return Ok(ArthurVerdict::Yes(assemble(combo, d.group)));
    }
    // signs an open line might still supply
    let possible: Vec<Vec<i8>> = lines
        .iter()
        .zip(&firsts)
        .map(|(l, f)| if l.open { vec![1, -1] } else { f.iter().map(|m| m.0).collect() })
        .collect();
    let refs: Vec<Vec<&i8>> = possible.iter().map(|v| v.iter().collect()).collect();
    if sign_combinations(&refs, |s| *s).is_empty() {
        Ok(ArthurVerdict::No)
    } else {
        Ok(ArthurVerdict::Unknown(Reason::PacketNeedsOracle))
    }
}

/// Certified `ℰ` with `π(ℰ) = d`, at most `cap` of them.
pub fn witnesses(d: &LanglandsDatum, limits: &SearchLimits, cap: usize) -> Result<Vec<ExtMultiSegment>, DecideError> {
    check(d, limits)?;
    let lines = searches(d, limits);
    let all: Vec<Vec<&(i8, Vec<ExtSegment>)>> = lines.iter().map(|l| l.matches.iter().collect()).collect();
    Ok(sign_combinations(&all, |m| m.0).iter().take(cap).map(|c| assemble(c, d.group)).collect())
}
