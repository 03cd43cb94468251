use super::arthur::{witnesses, SearchLimits};
use crate::amseg::{eval, Evaluation, ExtMultiSegment, ExtSegment};
use crate::halfint::HalfInt;
use crate::reason::Reason;
use crate::repdata::LanglandsDatum;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AubertOutcome {
    /// The dual datum and the extended multi-segment that certifies it.
    Dual { datum: LanglandsDatum, witness: ExtMultiSegment },
    NeedsOracle(Reason),
}

impl AubertOutcome {
    pub fn datum(&self) -> Option<&LanglandsDatum> {
        match self {
            AubertOutcome::Dual { datum, .. } => Some(datum),
            AubertOutcome::NeedsOracle(_) => None,
        }
    }
}

/// Dual extended multi-segment: each line in reverse order with `[A, B] ↦ [A, -B]`, `l` moved by
/// `B`, and `η` twisted by the `a`'s before and the `b`'s after the block. Needs `B`
/// non-decreasing along each line; `None` otherwise or when some `l` leaves its range.
pub fn dual_ext(e: &ExtMultiSegment) -> Option<ExtMultiSegment> {
    let mut blocks = vec![];
    for ix in e.lines().values() {
        let line: Vec<&ExtSegment> = ix.iter().map(|&i| &e.blocks[i]).collect();
        if line.windows(2).any(|w| w[0].big_b > w[1].big_b) {
            return None;
        }
        let mut out = vec![];
        for (i, s) in line.iter().enumerate() {
            let alpha: i64 = line[..i].iter().map(|t| t.a()).sum();
            let beta: i64 = line[i + 1..].iter().map(|t| t.b() as i64).sum();
            let b = s.big_b;
            let (shift, twist) = if b.is_integer() {
                (b.to_int().expect("integral"), 0)
            } else if b > HalfInt::ZERO {
                ((b + HalfInt::HALF).to_int().expect("integral"), 1)
            } else {
                ((b - HalfInt::HALF).to_int().expect("integral"), 1)
            };
            let l = s.l as i64 + shift;
            let eta = if (alpha + beta + twist) % 2 == 0 { s.eta } else { -s.eta };
            let d = ExtSegment::new(s.rho.clone(), s.big_a, -b, u32::try_from(l).ok()?, eta).ok()?;
            out.push(d.normalized());
        }
        out.reverse();
        blocks.extend(out);
    }
    Some(ExtMultiSegment::new(blocks, e.group))
}

fn exponents(d: &LanglandsDatum) -> Vec<(String, HalfInt)> {
    let mut out = vec![];
    for s in d.m.items() {
        for x in s.exponents() {
            out.push((s.rho.id().to_string(), x));
            out.push((s.rho.id().to_string(), -x));
        }
    }
    for (r, z, e) in d.tempered.iter() {
        for _ in 0..e.mult {
            out.extend(z.down_to(-z).map(|x| (r.id().to_string(), x)));
        }
    }
    out.sort();
    out
}

/// Aubert dual through a certificate: `dual_ext` of a witness of `d`, evaluated. The witness is
/// searched for when none is given.
pub fn aubert_dual(d: &LanglandsDatum, witness: Option<&ExtMultiSegment>, limits: &SearchLimits) -> AubertOutcome {
    let found;
    let cands: Vec<&ExtMultiSegment> = match witness {
        Some(w) if eval(w).datum() == Some(d) => vec![w],
        Some(_) => return AubertOutcome::NeedsOracle(Reason::AubertOutsideImage),
        None => {
            found = witnesses(d, limits, 16).unwrap_or_default();
            found.iter().collect()
        }
    };
    if cands.is_empty() {
        return AubertOutcome::NeedsOracle(Reason::AubertOutsideImage);
    }
    let ic = exponents(d);
    for w in cands {
        let Some(dw) = dual_ext(w) else { continue };
        if !dw.is_valid() {
            continue;
        }
        if let Evaluation::Datum(dd) = eval(&dw) {
            // duality keeps the cuspidal support
            if dd.dim() == d.dim() && exponents(&dd) == ic {
                return AubertOutcome::Dual { datum: dd, witness: dw };
            }
        }
    }
    AubertOutcome::NeedsOracle(Reason::AubertUncertified)
}
