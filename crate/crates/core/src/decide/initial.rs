use std::collections::BTreeMap;
use std::fmt;

use super::{bookkeeping, Bookkeeping, DecideError, Slot};
use crate::amseg::{eval_line, sign_combinations, Evaluation, ExtMultiSegment, ExtSegment};
use crate::halfint::HalfInt;
use crate::jacquet::{vanishing_test_sharp, Vanishing};
use crate::reason::Reason;
use crate::repdata::{LanglandsDatum, Rho};

/// `b_ρ ≤ a_ρ < b_k ≤ a_k < … < b_1 ≤ a_1` on one line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineWindows {
    pub b_rho: HalfInt,
    pub a_rho: HalfInt,
    /// `(b_i, a_i)`, top window first.
    pub windows: Vec<(HalfInt, HalfInt)>,
    /// Points whose vanishing is taken for granted; empty for a certified check.
    pub assumed: Vec<HalfInt>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InitialWindows {
    pub lines: BTreeMap<Rho, LineWindows>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InitialFailure {
    /// `A_x` is nonempty below `b_ρ`.
    Support { rho: Rho, x: HalfInt },
    /// `|A_x| ≠ 1` above `a_ρ`.
    Singleton { rho: Rho, x: HalfInt },
    /// A window with unequal `L` and `R` counts.
    Balance { rho: Rho, b: HalfInt, a: HalfInt },
    /// A nonzero derivative away from the window bottoms.
    Derivative { rho: Rho, x: HalfInt },
    /// A derivative the vanishing rules cannot decide.
    OracleNeeded { rho: Rho, x: HalfInt },
}

impl InitialFailure {
    pub fn code(&self) -> &'static str {
        match self {
            InitialFailure::Support { .. } => "support",
            InitialFailure::Singleton { .. } => "singleton",
            InitialFailure::Balance { .. } => "balance",
            InitialFailure::Derivative { .. } => "derivative",
            InitialFailure::OracleNeeded { .. } => "oracle-needed",
        }
    }

    pub fn reason(&self) -> Option<Reason> {
        matches!(self, InitialFailure::OracleNeeded { .. }).then_some(Reason::InitialDerivative)
    }
}

impl fmt::Display for InitialFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialFailure::Support { rho, x } => write!(f, "A_{x} on {rho} lies below b_ρ"),
            InitialFailure::Singleton { rho, x } => write!(f, "|A_{x}| ≠ 1 on {rho} inside a window"),
            InitialFailure::Balance { rho, b, a } => write!(f, "window [{b},{a}] on {rho} has unequal L and R counts"),
            InitialFailure::Derivative { rho, x } => write!(f, "D_{x} on {rho} is nonzero away from the window bottoms"),
            InitialFailure::OracleNeeded { rho, x } => write!(f, "D_{x} on {rho} is undetermined"),
        }
    }
}

fn up_to(lo: HalfInt, hi: HalfInt) -> Vec<HalfInt> {
    let mut v: Vec<HalfInt> = hi.down_to(lo).collect();
    v.reverse();
    v
}

fn must_vanish(rho: &Rho, x: HalfInt, v: Vanishing) -> Result<(), InitialFailure> {
    match v {
        Vanishing::Zero => Ok(()),
        Vanishing::NonZero => Err(InitialFailure::Derivative { rho: rho.clone(), x }),
        Vanishing::Unknown => Err(InitialFailure::OracleNeeded { rho: rho.clone(), x }),
    }
}

/// Window assignments for one choice of `a_ρ`. Strictly, an undecided derivative where a
/// vanishing is needed is a failure; leniently it is recorded in `assumed` and every cut choice
/// it leaves open is returned.
fn try_windows(
    rho: &Rho,
    bk: &Bookkeeping,
    verdict: &BTreeMap<HalfInt, Vanishing>,
    b_rho: HalfInt,
    a_rho: HalfInt,
    lenient: bool,
) -> Result<Vec<LineWindows>, InitialFailure> {
    let upper: Vec<HalfInt> = bk.support().into_iter().filter(|x| *x > a_rho).collect();
    if let Some(&x) = upper.iter().find(|x| bk.size(**x) != 1) {
        return Err(InitialFailure::Singleton { rho: rho.clone(), x });
    }
    let mut assumed = vec![];
    for (&x, &v) in verdict {
        if x != b_rho && !upper.contains(&x) {
            match must_vanish(rho, x, v) {
                Err(InitialFailure::OracleNeeded { .. }) if lenient => assumed.push(x),
                r => r?,
            }
        }
    }
    let mut runs: Vec<Vec<HalfInt>> = vec![];
    for &x in &upper {
        match runs.last_mut() {
            Some(r) if *r.last().expect("nonempty run") + 1 == x => r.push(x),
            _ => runs.push(vec![x]),
        }
    }
    // partial assignments: windows so far and the points taken to vanish
    let mut states: Vec<(Vec<(HalfInt, HalfInt)>, Vec<HalfInt>)> = vec![(vec![], assumed)];
    for run in runs {
        let mut next = vec![];
        let mut err = None;
        for (w, a) in &states {
            match cut_run(rho, bk, verdict, &run, lenient) {
                Ok(opts) => {
                    for (rw, ra) in opts {
                        let mut w = w.clone();
                        w.extend(rw);
                        let mut a = a.clone();
                        a.extend(ra);
                        next.push((w, a));
                    }
                }
                Err(f) => err = Some(f),
            }
        }
        if next.is_empty() {
            return Err(err.expect("a run either cuts or fails"));
        }
        states = next;
    }
    Ok(states
        .into_iter()
        .map(|(mut windows, assumed)| {
            windows.reverse();
            LineWindows { b_rho, a_rho, windows, assumed }
        })
        .collect())
}

/// The ways to cut one run of consecutive support points into balanced windows.
#[allow(clippy::type_complexity)]
fn cut_run(
    rho: &Rho,
    bk: &Bookkeeping,
    verdict: &BTreeMap<HalfInt, Vanishing>,
    run: &[HalfInt],
    lenient: bool,
) -> Result<Vec<(Vec<(HalfInt, HalfInt)>, Vec<HalfInt>)>, InitialFailure> {
    struct St {
        start: HalfInt,
        level: i64,
        windows: Vec<(HalfInt, HalfInt)>,
        assumed: Vec<HalfInt>,
    }
    let mut states = vec![St { start: run[0], level: 0, windows: vec![], assumed: vec![] }];
    let mut err = None;
    for &x in run {
        let v = verdict.get(&x).copied().unwrap_or(Vanishing::Zero);
        let step = match bk.single(x) {
            Some(Slot::L) => 1,
            Some(Slot::R) => -1,
            _ => 0,
        };
        let mut next = vec![];
        for st in states {
            if x == st.start || v == Vanishing::Zero {
                next.push(St { level: st.level + step, ..st });
                continue;
            }
            if st.level == 0 {
                let mut windows = st.windows.clone();
                windows.push((st.start, x - 1));
                if lenient && v == Vanishing::Unknown {
                    let mut assumed = st.assumed.clone();
                    assumed.push(x);
                    next.push(St { start: st.start, level: st.level + step, windows: st.windows, assumed });
                }
                next.push(St { start: x, level: step, windows, assumed: st.assumed });
            } else if lenient && v == Vanishing::Unknown {
                let mut assumed = st.assumed;
                assumed.push(x);
                next.push(St { start: st.start, level: st.level + step, windows: st.windows, assumed });
            } else {
                err = Some(match v {
                    Vanishing::Unknown => InitialFailure::OracleNeeded { rho: rho.clone(), x },
                    _ => InitialFailure::Balance { rho: rho.clone(), b: st.start, a: x - 1 },
                });
            }
        }
        states = next;
    }
    let end = *run.last().expect("nonempty run");
    let mut out = vec![];
    for st in states {
        if st.level != 0 {
            err.get_or_insert(InitialFailure::Balance { rho: rho.clone(), b: st.start, a: end });
            continue;
        }
        let mut windows = st.windows;
        windows.push((st.start, end));
        out.push((windows, st.assumed));
    }
    if out.is_empty() {
        return Err(err.expect("every state failed for a reason"));
    }
    Ok(out)
}

fn line_options(d: &LanglandsDatum, rho: &Rho, lenient: bool) -> Result<Vec<LineWindows>, InitialFailure> {
    let b_rho = rho.b_rho(d.group);
    let bk = bookkeeping(d, rho);
    let support = bk.support();
    if let Some(&x) = support.iter().find(|x| **x < b_rho) {
        return Err(InitialFailure::Support { rho: rho.clone(), x });
    }
    let top = support.last().copied().unwrap_or(b_rho);
    let verdict: BTreeMap<HalfInt, Vanishing> =
        top.down_to(-top).map(|x| (x, vanishing_test_sharp(d, rho, x))).collect();
    let mut found = vec![];
    let mut first = None;
    let mut oracle = None;
    for a_rho in up_to(b_rho, top) {
        match try_windows(rho, &bk, &verdict, b_rho, a_rho, lenient) {
            Ok(w) if !lenient => return Ok(w),
            Ok(w) => found.extend(w),
            Err(f) => {
                if matches!(f, InitialFailure::OracleNeeded { .. }) {
                    oracle.get_or_insert(f);
                } else {
                    first.get_or_insert(f);
                }
            }
        }
    }
    if !found.is_empty() {
        // fewest assumptions first
        found.sort_by_key(|w| w.assumed.len());
        return Ok(found);
    }
    Err(oracle.or(first).expect("at least one a_ρ is tried"))
}

/// Find windows satisfying the hypotheses of the initial-shape theorem on every line.
pub fn check_initial_hypotheses(d: &LanglandsDatum) -> Result<InitialWindows, InitialFailure> {
    let mut lines = BTreeMap::new();
    for rho in d.rhos() {
        let w = line_options(d, &rho, false)?.swap_remove(0);
        lines.insert(rho, w);
    }
    Ok(InitialWindows { lines })
}

/// Every window assignment the certified derivatives leave open, with undecided vanishings
/// recorded in `assumed`. At most `cap` assignments.
pub fn initial_window_candidates(d: &LanglandsDatum, cap: usize) -> Result<Vec<InitialWindows>, InitialFailure> {
    let mut out = vec![InitialWindows::default()];
    for rho in d.rhos() {
        let opts = line_options(d, &rho, true)?;
        let mut next = vec![];
        'outer: for w in &out {
            for o in &opts {
                if next.len() == cap {
                    break 'outer;
                }
                let mut w = w.clone();
                w.lines.insert(rho.clone(), o.clone());
                next.push(w);
            }
        }
        out = next;
    }
    Ok(out)
}

/// `construct_initial` over every candidate window assignment. A witness is certified by its
/// evaluation, so the assumed vanishings only matter when nothing is found.
pub fn initial_witness(d: &LanglandsDatum, cap: usize) -> Result<InitialOutcome, DecideError> {
    let cands = match initial_window_candidates(d, cap) {
        Ok(c) => c,
        Err(f) => {
            return Ok(match f.reason() {
                Some(r) => InitialOutcome::NeedsOracle(r),
                None => InitialOutcome::NotArthurWitness,
            })
        }
    };
    let mut open = None;
    for w in &cands {
        match construct_initial(d, w)? {
            InitialOutcome::Witness(e) => return Ok(InitialOutcome::Witness(e)),
            InitialOutcome::NeedsOracle(r) => {
                open.get_or_insert(r);
            }
            InitialOutcome::NotArthurWitness => {
                if w.lines.values().any(|l| !l.assumed.is_empty()) {
                    open.get_or_insert(Reason::InitialDerivative);
                }
            }
        }
    }
    Ok(open.map_or(InitialOutcome::NotArthurWitness, InitialOutcome::NeedsOracle))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InitialOutcome {
    Witness(ExtMultiSegment),
    /// No sign assignment reproduces the datum.
    NotArthurWitness,
    NeedsOracle(Reason),
}

struct Var {
    big_a: HalfInt,
    big_b: HalfInt,
    opts: Vec<(u32, i8)>,
}

fn eta_opts(l: u32, b: u32) -> Vec<(u32, i8)> {
    if 2 * l == b {
        vec![(l, 1)]
    } else {
        vec![(l, 1), (l, -1)]
    }
}

/// Matching block lists with their signs, and whether some choice needed the oracle.
fn line_matches(d: &LanglandsDatum, rho: &Rho, w: &LineWindows) -> Result<(Vec<(i8, Vec<ExtSegment>)>, bool), Reason> {
    let bk = bookkeeping(d, rho);
    let (b_rho, a_rho) = (w.b_rho, w.a_rho);
    let mut count: BTreeMap<HalfInt, usize> = up_to(b_rho, a_rho).into_iter().map(|x| (x, bk.size(x))).collect();
    // each lift removes one from every |A_x| on [b_ρ, a_ρ]; undoing them gives nested blocks
    let mut tops = vec![];
    while let Some(top) = count.iter().rev().find(|(x, c)| **x > b_rho && **c > 0).map(|(x, _)| *x) {
        for y in up_to(b_rho, top) {
            let c = count.get_mut(&y).expect("in range");
            if *c == 0 {
                return Err(Reason::InitialLowering);
            }
            *c -= 1;
        }
        tops.push(top);
    }
    tops.reverse();
    let copies = count[&b_rho];

    let mut vars: Vec<Var> = vec![];
    for &top in &tops {
        let b = top.int_diff(b_rho) as u32 + 1;
        let opts = (0..=b / 2).flat_map(|l| eta_opts(l, b)).collect();
        vars.push(Var { big_a: top, big_b: b_rho, opts });
    }
    for &(b, a) in w.windows.iter().rev() {
        let l = up_to(b, a).into_iter().filter(|x| bk.single(*x) == Some(Slot::L)).count() as u32;
        vars.push(Var { big_a: a, big_b: b, opts: eta_opts(l, a.int_diff(b) as u32 + 1) });
    }
    let singles: Vec<i8> = if copies > 0 { vec![1, -1] } else { vec![1] };

    let target = d.line(rho);
    let mut out = vec![];
    let mut pending = false;
    for &eta0 in &singles {
        let mut pick = vec![0usize; vars.len()];
        loop {
            let mut blocks: Vec<ExtSegment> =
                (0..copies).map(|_| ExtSegment { rho: rho.clone(), big_a: b_rho, big_b: b_rho, l: 0, eta: eta0 }).collect();
            for (v, &p) in vars.iter().zip(&pick) {
                let (l, eta) = v.opts[p];
                blocks.push(ExtSegment { rho: rho.clone(), big_a: v.big_a, big_b: v.big_b, l, eta });
            }
            match eval_line(&blocks, d.group) {
                Evaluation::Datum(e) if e == target => {
                    let sign = blocks.iter().map(ExtSegment::sign).product();
                    out.push((sign, blocks));
                }
                Evaluation::NeedsOracle(_) => pending = true,
                _ => {}
            }
            let mut k = 0;
            loop {
                if k == pick.len() {
                    break;
                }
                pick[k] += 1;
                if pick[k] < vars[k].opts.len() {
                    break;
                }
                pick[k] = 0;
                k += 1;
            }
            if k == pick.len() {
                break;
            }
        }
    }
    Ok((out, pending))
}

/// Build `ℰ` from windows: singleton blocks at `b_ρ`, one block per window, and the nested blocks
/// that undo the lifts of the cluster `[b_ρ, a_ρ]`. `(l, η)` are searched exhaustively.
pub fn construct_initial(d: &LanglandsDatum, w: &InitialWindows) -> Result<InitialOutcome, DecideError> {
    let mut lines = vec![];
    let mut pending = false;
    for rho in d.rhos() {
        let lw = w.lines.get(&rho).ok_or_else(|| DecideError::Windows(rho.to_string()))?;
        match line_matches(d, &rho, lw) {
            Ok((m, p)) => {
                pending |= p;
                lines.push(m);
            }
            Err(r) => return Ok(InitialOutcome::NeedsOracle(r)),
        }
    }
    let refs: Vec<Vec<&(i8, Vec<ExtSegment>)>> = lines.iter().map(|l| l.iter().collect()).collect();
    for combo in sign_combinations(&refs, |m| m.0) {
        let blocks: Vec<ExtSegment> = combo.iter().flat_map(|m| m.1.iter().cloned()).collect();
        let e = ExtMultiSegment::new(blocks, d.group);
        if e.is_valid() {
            return Ok(InitialOutcome::Witness(e));
        }
    }
    Ok(if pending { InitialOutcome::NeedsOracle(Reason::InitialLowering) } else { InitialOutcome::NotArthurWitness })
}
