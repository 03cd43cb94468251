use std::collections::BTreeSet;

use super::{AmsegError, ExtMultiSegment, ExtSegment};
use crate::halfint::HalfInt;
use crate::jacquet::{vanishing_test_sharp, Vanishing};
use crate::reason::Reason;
use crate::repdata::{GroupType, LanglandsDatum, Multisegment, TemperedParam};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evaluation {
    Datum(LanglandsDatum),
    Vanishes,
    NeedsOracle(Reason),
}

impl Evaluation {
    pub fn datum(&self) -> Option<&LanglandsDatum> {
        match self {
            Evaluation::Datum(d) => Some(d),
            _ => None,
        }
    }

    pub fn is_certified(&self) -> bool {
        !matches!(self, Evaluation::NeedsOracle(_))
    }
}

fn strict_pair(lo: &ExtSegment, hi: &ExtSegment) -> bool {
    lo.big_a < hi.big_b
}

/// Identical single-summand blocks with equal signs may sit side by side.
fn relaxed_pair(lo: &ExtSegment, hi: &ExtSegment) -> bool {
    strict_pair(lo, hi) || (lo.big_a == lo.big_b && lo == hi)
}

fn line_ddr(blocks: &[&ExtSegment], pair: fn(&ExtSegment, &ExtSegment) -> bool) -> bool {
    blocks.first().is_none_or(|b| b.big_b >= HalfInt::ZERO) && blocks.windows(2).all(|w| pair(w[0], w[1]))
}

fn by_line(e: &ExtMultiSegment) -> Vec<Vec<&ExtSegment>> {
    e.lines().values().map(|ix| ix.iter().map(|&i| &e.blocks[i]).collect()).collect()
}

/// `0 ≤ B_1 ≤ A_1 < B_2 ≤ A_2 < …` on every line.
pub fn is_ddr(e: &ExtMultiSegment) -> bool {
    by_line(e).iter().all(|l| line_ddr(l, strict_pair))
}

fn is_relaxed_ddr(e: &ExtMultiSegment) -> bool {
    by_line(e).iter().all(|l| line_ddr(l, relaxed_pair))
}

/// Least shifts, block by block, making every line DDR.
pub fn choose_shifts(e: &ExtMultiSegment) -> Vec<i64> {
    let mut t = vec![0i64; e.blocks.len()];
    for ix in e.lines().values() {
        let mut prev_top: Option<HalfInt> = None;
        for &i in ix {
            let b = &e.blocks[i];
            let need = match prev_top {
                None => (-b.big_b).floor().max(0) + i64::from(!b.big_b.is_integer() && b.big_b < HalfInt::ZERO),
                Some(top) => (top + 1 - b.big_b).floor().max(0),
            };
            // B is on a fixed lattice, so the differences above are integral
            t[i] = need;
            prev_top = Some(b.big_a + need);
        }
    }
    t
}

pub fn shift(e: &ExtMultiSegment, t: &[i64]) -> ExtMultiSegment {
    let blocks = e.blocks.iter().zip(t).map(|(b, &s)| b.shifted(s)).collect();
    ExtMultiSegment::new(blocks, e.group)
}

/// The closed-form datum of blocks at their present positions.
fn assemble<'a>(blocks: impl IntoIterator<Item = &'a ExtSegment>, group: GroupType) -> Option<LanglandsDatum> {
    let mut m = Multisegment::default();
    let mut t = TemperedParam::new();
    for b in blocks {
        let (segs, temp) = b.content();
        m.extend(segs);
        for (z, eps) in temp {
            t.insert(b.rho.clone(), z, 1, eps).ok()?;
        }
    }
    Some(LanglandsDatum::new(m, t, group))
}

/// `π(ℰ)` for DDR `ℰ`.
pub fn eval_ddr(e: &ExtMultiSegment) -> Result<LanglandsDatum, AmsegError> {
    if !is_relaxed_ddr(e) {
        return Err(AmsegError::NotDdr);
    }
    assemble(&e.blocks, e.group).ok_or(AmsegError::NotDdr)
}

fn occupied(b: &ExtSegment) -> BTreeSet<HalfInt> {
    b.big_a.down_to(b.big_b).map(HalfInt::abs).collect()
}

enum Step {
    Lower,
    Vanishes,
    Oracle(Reason),
}

/// Certify lowering `pos[i]` by one.
fn step(pos: &[ExtSegment], i: usize, group: GroupType) -> Step {
    let cur = match assemble(pos, group) {
        Some(d) => d,
        None => return Step::Oracle(Reason::TemperedMerge),
    };
    let b = &pos[i];
    if vanishing_test_sharp(&cur, &b.rho, b.big_b) == Vanishing::Zero {
        return Step::Vanishes;
    }
    let range: BTreeSet<HalfInt> = b.big_a.down_to(b.big_b - 1).map(HalfInt::abs).collect();
    let hits: Vec<usize> = (0..pos.len()).filter(|&k| k != i && !occupied(&pos[k]).is_disjoint(&range)).collect();
    if !hits.is_empty() {
        return merge_step(pos, i, &hits, &cur);
    }
    if !b.is_full() {
        let z0 = b.big_b + b.l as i64;
        if z0 == HalfInt::ZERO {
            return Step::Oracle(Reason::TemperedZeroCrossing);
        }
        if z0 == HalfInt::HALF {
            return Step::Oracle(Reason::TemperedHalfCrossing);
        }
    }
    Step::Lower
}

/// A lone summand `S_{2x+1}` lowered onto a lone `S_{2x-1}` of the same sign.
fn merge_step(pos: &[ExtSegment], i: usize, hits: &[usize], cur: &LanglandsDatum) -> Step {
    let b = &pos[i];
    let x = b.big_a;
    if b.big_a != b.big_b || x < HalfInt::ONE || hits.len() != 1 {
        return Step::Oracle(Reason::LoweringCollision);
    }
    let k = &pos[hits[0]];
    let occ = occupied(k);
    let tempered_at = |z: HalfInt| {
        !k.is_full() && k.big_b >= HalfInt::ZERO && k.big_b + k.l as i64 <= z && z <= k.big_a - k.l as i64
    };
    if occ.contains(&x) || !tempered_at(x - 1) {
        return Step::Oracle(Reason::LoweringCollision);
    }
    if cur.tempered.mult(&b.rho, x - 1) != 1 {
        return Step::Oracle(Reason::TemperedMerge);
    }
    let j = (x - 1).int_diff(k.big_b + k.l as i64);
    let eps = if j % 2 == 0 { k.eta } else { -k.eta };
    if eps == b.eta {
        Step::Lower
    } else {
        Step::Oracle(Reason::TemperedMerge)
    }
}

/// Evaluate one line, blocks in order.
pub fn eval_line(blocks: &[ExtSegment], group: GroupType) -> Evaluation {
    let refs: Vec<&ExtSegment> = blocks.iter().collect();
    if line_ddr(&refs, relaxed_pair) {
        return match assemble(blocks, group) {
            Some(d) => Evaluation::Datum(d),
            None => Evaluation::NeedsOracle(Reason::TemperedMerge),
        };
    }
    let e = ExtMultiSegment::new(blocks.to_vec(), group);
    let t = choose_shifts(&e);
    let mut pos = shift(&e, &t).blocks;
    for i in 0..pos.len() {
        for _ in 0..t[i] {
            match step(&pos, i, group) {
                Step::Lower => pos[i] = pos[i].shifted(-1),
                Step::Vanishes => return Evaluation::Vanishes,
                Step::Oracle(r) => return Evaluation::NeedsOracle(r),
            }
        }
    }
    match assemble(&pos, group) {
        Some(d) => Evaluation::Datum(d),
        None => Evaluation::NeedsOracle(Reason::TemperedMerge),
    }
}

/// `π(ℰ)` through shifting and the certified lowering steps, line by line.
pub fn eval(e: &ExtMultiSegment) -> Evaluation {
    let mut m = Multisegment::default();
    let mut t = TemperedParam::new();
    let mut pending = None;
    for ix in e.lines().values() {
        let blocks: Vec<ExtSegment> = ix.iter().map(|&i| e.blocks[i].clone()).collect();
        match eval_line(&blocks, e.group) {
            Evaluation::Datum(d) => {
                m.extend(d.m.items().iter().cloned());
                for (r, z, en) in d.tempered.iter() {
                    t.insert(r.clone(), z, en.mult, en.eps).expect("lines are disjoint");
                }
            }
            Evaluation::Vanishes => return Evaluation::Vanishes,
            Evaluation::NeedsOracle(r) => pending = pending.or(Some(r)),
        }
    }
    match pending {
        Some(r) => Evaluation::NeedsOracle(r),
        None => Evaluation::Datum(LanglandsDatum::new(m, t, e.group)),
    }
}
