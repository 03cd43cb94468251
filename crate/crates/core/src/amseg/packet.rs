use std::collections::BTreeMap;

use super::eval::{eval_line, Evaluation};
use super::{ends_of, must_precede, AmsegError, ExtMultiSegment, ExtSegment};
use crate::halfint::HalfInt;
use crate::reason::Reason;
use crate::repdata::{AParameter, GroupType, LanglandsDatum, Multisegment, Rho, TemperedParam};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PacketLimits {
    pub max_dim: u64,
    /// Admissible orders tried per line when the canonical one needs the oracle.
    pub max_orders: usize,
}

impl Default for PacketLimits {
    fn default() -> Self {
        PacketLimits { max_dim: 40, max_orders: 24 }
    }
}

/// One choice of `(l, η)` for every block of a line in a fixed order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineOutcome {
    pub blocks: Vec<ExtSegment>,
    pub sign: i8,
    pub eval: Evaluation,
}

#[derive(Clone, Debug)]
pub struct LineEnumeration {
    pub rho: Rho,
    /// Outcomes per admissible order tried; the canonical order comes first.
    pub orders: Vec<Vec<LineOutcome>>,
    /// An order all of whose outcomes are certified.
    pub complete: Option<usize>,
}

impl LineEnumeration {
    pub fn selected(&self) -> &[LineOutcome] {
        &self.orders[self.complete.unwrap_or(0)]
    }

    /// Certified data from every order tried, deduplicated with their signs.
    pub fn certified(&self) -> Vec<&LineOutcome> {
        let mut seen = BTreeMap::new();
        for o in self.orders.iter().flatten() {
            if let Evaluation::Datum(d) = &o.eval {
                seen.entry((d.clone(), o.sign)).or_insert(o);
            }
        }
        seen.into_values().collect()
    }
}

#[derive(Clone, Debug)]
pub struct PacketEntry {
    pub ext: ExtMultiSegment,
    pub outcome: Evaluation,
}

#[derive(Clone, Debug)]
pub struct Packet {
    pub psi: AParameter,
    /// Every valid inequivalent ℰ in the selected orders.
    pub entries: Vec<PacketEntry>,
    /// Distinct nonzero members with a witness each.
    pub members: Vec<(ExtMultiSegment, LanglandsDatum)>,
    /// Whether `members` is the whole packet.
    pub complete: bool,
}

impl Packet {
    pub fn pending(&self) -> impl Iterator<Item = &PacketEntry> {
        self.entries.iter().filter(|e| !e.outcome.is_certified())
    }
}

/// Admissible orders of blocks on one line, canonical `(B, A)` order first, without repeating
/// orders that only swap equal segments.
fn admissible_orders(ends: &[(HalfInt, HalfInt)], cap: usize) -> Vec<Vec<usize>> {
    let mut idx: Vec<usize> = (0..ends.len()).collect();
    idx.sort_by_key(|&i| (ends[i].1, ends[i].0));
    let seg = |i: usize| ExtSegment { rho: Rho::trivial(), big_a: ends[i].0, big_b: ends[i].1, l: 0, eta: 1 };
    let mut out = vec![];
    fn rec(
        idx: &[usize],
        used: &mut Vec<bool>,
        cur: &mut Vec<usize>,
        seg: &dyn Fn(usize) -> ExtSegment,
        ends: &[(HalfInt, HalfInt)],
        cap: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if out.len() >= cap {
            return;
        }
        if cur.len() == idx.len() {
            out.push(cur.clone());
            return;
        }
        let mut tried: Vec<(HalfInt, HalfInt)> = vec![];
        for (p, &i) in idx.iter().enumerate() {
            if used[p] || tried.contains(&ends[i]) {
                continue;
            }
            let blocked = idx.iter().enumerate().any(|(q, &j)| !used[q] && q != p && must_precede(&seg(j), &seg(i)));
            if blocked {
                continue;
            }
            tried.push(ends[i]);
            used[p] = true;
            cur.push(i);
            rec(idx, used, cur, seg, ends, cap, out);
            cur.pop();
            used[p] = false;
        }
    }
    rec(&idx, &mut vec![false; idx.len()], &mut vec![], &seg, ends, cap.max(1), &mut out);
    out
}

fn choices(a: HalfInt, b: HalfInt) -> Vec<(u32, i8)> {
    let len = a.int_diff(b) as u32 + 1;
    let mut out = vec![];
    for l in 0..=len / 2 {
        out.push((l, 1));
        if 2 * l < len {
            out.push((l, -1));
        }
    }
    out
}

fn outcomes(rho: &Rho, ends: &[(HalfInt, HalfInt)], order: &[usize], group: GroupType) -> Vec<LineOutcome> {
    let opts: Vec<Vec<(u32, i8)>> = order.iter().map(|&i| choices(ends[i].0, ends[i].1)).collect();
    let mut out = vec![];
    let mut pick = vec![0usize; order.len()];
    loop {
        let blocks: Vec<ExtSegment> = order
            .iter()
            .zip(&pick)
            .zip(&opts)
            .map(|((&i, &p), o)| ExtSegment {
                rho: rho.clone(),
                big_a: ends[i].0,
                big_b: ends[i].1,
                l: o[p].0,
                eta: o[p].1,
            })
            .collect();
        let sign = blocks.iter().map(ExtSegment::sign).product();
        let eval = eval_line(&blocks, group);
        out.push(LineOutcome { blocks, sign, eval });
        // odometer
        let mut k = 0;
        loop {
            if k == pick.len() {
                return out;
            }
            pick[k] += 1;
            if pick[k] < opts[k].len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
    }
}

/// All `(l, η)` choices for the blocks `[A, B]` of one line, evaluated, in as many admissible
/// orders as needed to find one without oracle calls.
pub fn enumerate_line(rho: &Rho, ends: &[(HalfInt, HalfInt)], group: GroupType, limits: &PacketLimits) -> LineEnumeration {
    let mut orders = vec![];
    let mut complete = None;
    for order in admissible_orders(ends, limits.max_orders) {
        let o = outcomes(rho, ends, &order, group);
        let done = o.iter().all(|x| x.eval.is_certified());
        orders.push(o);
        if done {
            complete = Some(orders.len() - 1);
            break;
        }
    }
    LineEnumeration { rho: rho.clone(), orders, complete }
}

fn merge(parts: &[&LanglandsDatum], group: GroupType) -> LanglandsDatum {
    let mut m = Multisegment::default();
    let mut t = TemperedParam::new();
    for d in parts {
        m.extend(d.m.items().iter().cloned());
        for (r, z, e) in d.tempered.iter() {
            t.insert(r.clone(), z, e.mult, e.eps).expect("lines are disjoint");
        }
    }
    LanglandsDatum::new(m, t, group)
}

/// Cartesian product over lines of items whose signs multiply to +1.
pub(crate) fn sign_combinations<'a, T>(lines: &[Vec<&'a T>], sign: impl Fn(&T) -> i8) -> Vec<Vec<&'a T>> {
    let mut acc: Vec<(Vec<&T>, i8)> = vec![(vec![], 1)];
    for l in lines {
        let mut next = vec![];
        for (v, s) in &acc {
            for x in l {
                let mut w = v.clone();
                w.push(*x);
                next.push((w, s * sign(x)));
            }
        }
        acc = next;
    }
    acc.into_iter().filter(|(_, s)| *s == 1).map(|(v, _)| v).collect()
}

pub(crate) fn line_ends(psi: &AParameter) -> BTreeMap<Rho, Vec<(HalfInt, HalfInt)>> {
    let mut out: BTreeMap<Rho, Vec<(HalfInt, HalfInt)>> = BTreeMap::new();
    for (r, a, b) in &psi.triples {
        out.entry(r.clone()).or_default().push(ends_of(*a, *b));
    }
    out
}

/// The packet `Π_ψ` through all extended multi-segments with `ψ_ℰ = ψ`.
pub fn enumerate_packet(psi: &AParameter, limits: &PacketLimits) -> Result<Packet, AmsegError> {
    psi.check_full()?;
    if psi.dim() > limits.max_dim {
        return Err(AmsegError::DimensionBound { dim: psi.dim(), bound: limits.max_dim });
    }
    let group = psi.group;
    let lines: Vec<LineEnumeration> =
        line_ends(psi).iter().map(|(r, ends)| enumerate_line(r, ends, group, limits)).collect();

    let selected: Vec<Vec<&LineOutcome>> = lines.iter().map(|l| l.selected().iter().collect()).collect();
    let mut entries = vec![];
    for combo in sign_combinations(&selected, |o| o.sign) {
        let blocks = combo.iter().flat_map(|o| o.blocks.iter().cloned()).collect();
        let ext = ExtMultiSegment::new(blocks, group);
        let outcome = if combo.iter().any(|o| o.eval == Evaluation::Vanishes) {
            Evaluation::Vanishes
        } else if let Some(r) = combo.iter().find_map(|o| match o.eval {
            Evaluation::NeedsOracle(r) => Some(r),
            _ => None,
        }) {
            Evaluation::NeedsOracle(r)
        } else {
            let parts: Vec<&LanglandsDatum> = combo.iter().filter_map(|o| o.eval.datum()).collect();
            Evaluation::Datum(merge(&parts, group))
        };
        entries.push(PacketEntry { ext, outcome });
    }

    let certified: Vec<Vec<&LineOutcome>> = lines.iter().map(|l| l.certified()).collect();
    let mut members: BTreeMap<LanglandsDatum, ExtMultiSegment> = BTreeMap::new();
    for combo in sign_combinations(&certified, |o| o.sign) {
        let parts: Vec<&LanglandsDatum> = combo.iter().filter_map(|o| o.eval.datum()).collect();
        let d = merge(&parts, group);
        let blocks = combo.iter().flat_map(|o| o.blocks.iter().cloned()).collect();
        members.entry(d).or_insert_with(|| ExtMultiSegment::new(blocks, group));
    }
    Ok(Packet {
        psi: psi.clone(),
        entries,
        members: members.into_iter().map(|(d, e)| (e, d)).collect(),
        complete: lines.iter().all(|l| l.complete.is_some()),
    })
}

impl Packet {
    pub fn reason(&self) -> Option<Reason> {
        if self.complete {
            None
        } else {
            Some(Reason::PacketNeedsOracle)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::halfint::h;
    use crate::repdata::OrthType;

    #[test]
    fn s5_s5_packet() {
        let psi = AParameter::new(vec![(Rho::trivial(), 5, 5)], GroupType::Sp).unwrap();
        let p = enumerate_packet(&psi, &PacketLimits::default()).unwrap();
        let le: Vec<(u32, i8)> = p.entries.iter().map(|e| (e.ext.blocks[0].l, e.ext.blocks[0].eta)).collect();
        assert_eq!(le, vec![(0, 1), (1, -1), (2, 1)]);
        assert!(p.complete);
        assert_eq!(p.members.len(), 3);
        let l0 = p.entries[0].outcome.datum().unwrap();
        assert!(l0.m.is_empty());
        assert_eq!(l0.tempered.len(), 5);
    }

    #[test]
    fn two_copies_of_s2() {
        let r = Rho::selfdual("r", OrthType::Orthogonal, 1);
        let psi = AParameter::new(vec![(r.clone(), 2, 1), (r, 2, 1)], GroupType::SOodd).unwrap();
        let p = enumerate_packet(&psi, &PacketLimits::default()).unwrap();
        let etas: Vec<(i8, i8)> = p.entries.iter().map(|e| (e.ext.blocks[0].eta, e.ext.blocks[1].eta)).collect();
        assert_eq!(etas, vec![(1, 1), (-1, -1)]);
        assert_eq!(p.members.len(), 2);
    }

    #[test]
    fn empty_parameter() {
        let psi = AParameter::new(vec![], GroupType::SOodd).unwrap();
        let p = enumerate_packet(&psi, &PacketLimits::default()).unwrap();
        assert_eq!(p.members.len(), 1);
        assert_eq!(p.members[0].1, LanglandsDatum::empty(GroupType::SOodd));
    }

    #[test]
    fn dimension_bound() {
        let psi = AParameter::new(vec![(Rho::trivial(), 7, 7)], GroupType::Sp).unwrap();
        assert!(matches!(
            enumerate_packet(&psi, &PacketLimits::default()),
            Err(AmsegError::DimensionBound { dim: 49, bound: 40 })
        ));
    }

    #[test]
    fn orders_canonical_first() {
        let ends = vec![(h(3, 1), h(1, 1)), (h(2, 1), h(0, 1)), (h(2, 1), h(2, 1))];
        let o = admissible_orders(&ends, 10);
        assert_eq!(o[0], vec![1, 0, 2]);
        // [2,0] must precede [3,1]
        assert!(o.iter().all(|v| v.iter().position(|&i| i == 1) < v.iter().position(|&i| i == 0)));
    }
}
