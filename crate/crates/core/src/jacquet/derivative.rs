use super::vanishing::{line_view, vanishing_test_sharp, Vanishing};
use super::{tadic_jacquet, ClassicalSym, GLSymbol, Groth, JacError, JacTable};
use crate::halfint::HalfInt;
use crate::reason::Reason;
use crate::repdata::{speh_grid, LanglandsDatum, Multisegment, Rho, Segment, SpehShape};

/// What a derivative acts on.
#[derive(Clone, Debug)]
pub enum Target {
    /// An irreducible representation; only the certified rules apply.
    Datum(LanglandsDatum),
    /// A virtual representation together with the Jacquet modules of its bases.
    Groth { elem: Groth<ClassicalSym>, table: JacTable },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Derived {
    Datum(LanglandsDatum),
    Groth(Groth<ClassicalSym>),
    Zero,
    Unknown(Reason),
}

impl Derived {
    pub fn is_zero(&self) -> bool {
        matches!(self, Derived::Zero)
    }

    pub fn datum(&self) -> Option<&LanglandsDatum> {
        match self {
            Derived::Datum(d) => Some(d),
            _ => None,
        }
    }

    fn from_groth(g: Groth<ClassicalSym>) -> Self {
        if g.is_zero() {
            Derived::Zero
        } else {
            Derived::Groth(g)
        }
    }
}

fn groth_derivative(elem: &Groth<ClassicalSym>, table: &JacTable, rho: &Rho, x: HalfInt) -> Result<Groth<ClassicalSym>, JacError> {
    let lead = GLSymbol::cusp(rho, x);
    let mut out = Groth::zero();
    for (sym, c) in elem.iter() {
        let jac = tadic_jacquet(&GLSymbol::one(), sym, table, rho.dim() as u64)?;
        for (t, d) in jac.iter() {
            if t.gl == lead {
                out.add_term(t.cl.clone(), c * d);
            }
        }
    }
    Ok(out)
}

/// `k` copies of `[x, y]` become `[x-1, y]`, or one `S_{2x+1}` becomes `S_{2x-1}`.
fn datum_rule(d: &LanglandsDatum, rho: &Rho, x: HalfInt, k: u32) -> Option<LanglandsDatum> {
    if x < HalfInt::ONE {
        return None;
    }
    let v = line_view(d, rho);
    if v.count_left(x - 1) != 0 || v.count_left(x) != k as usize {
        return None;
    }
    let lead: Vec<Segment> = v.segs.iter().filter(|s| s.x == x).cloned().collect();
    if lead.len() == k as usize {
        let mut m = d.m.clone();
        for s in &lead {
            m.remove(s);
            m.push(Segment { rho: s.rho.clone(), x: s.x - 1, y: s.y });
        }
        return Some(LanglandsDatum::new(m, d.tempered.clone(), d.group));
    }
    if k == 1 && lead.is_empty() && v.mult(x) == 1 {
        let mut t = d.tempered.clone();
        let eps = t.remove_one(rho, x)?;
        t.insert(rho.clone(), x - 1, 1, eps).ok()?;
        return Some(LanglandsDatum::new(d.m.clone(), t, d.group));
    }
    None
}

/// Upper bound on how often `ρ|·|^x` can occur in the cuspidal support.
fn support_count(d: &LanglandsDatum, rho: &Rho, x: HalfInt) -> usize {
    let v = line_view(d, rho);
    let seg = v.segs.iter().chain(&v.dual_segs).flat_map(|s| s.exponents()).filter(|e| e.abs() == x.abs()).count();
    let temp: usize =
        v.temp.iter().filter(|(z, _)| *z >= x.abs() && z.congruent(x)).map(|(_, e)| e.mult as usize).sum();
    seg + temp
}

fn datum_derivative(d: &LanglandsDatum, rho: &Rho, x: HalfInt, k: u32) -> Derived {
    if vanishing_test_sharp(d, rho, x) == Vanishing::Zero || support_count(d, rho, x) < k as usize {
        return Derived::Zero;
    }
    match datum_rule(d, rho, x, k) {
        Some(e) => Derived::Datum(e),
        None => Derived::Unknown(Reason::DerivativeRules),
    }
}

/// `D_{ρ|·|^x}`.
pub fn d_rho(target: &Target, rho: &Rho, x: HalfInt) -> Result<Derived, JacError> {
    d_rho_k(target, rho, x, 1)
}

/// `D^{(k)}_{ρ|·|^x}`: the `k`-fold derivative divided by `k!`.
pub fn d_rho_k(target: &Target, rho: &Rho, x: HalfInt, k: u32) -> Result<Derived, JacError> {
    match target {
        Target::Datum(d) => Ok(datum_derivative(d, rho, x, k.max(1))),
        Target::Groth { elem, table } => {
            let mut g = elem.clone();
            let mut fact = 1i64;
            for i in 1..=k.max(1) {
                g = groth_derivative(&g, table, rho, x)?;
                fact *= i as i64;
            }
            let g = g.div_exact(fact).ok_or_else(|| JacError::Internal(format!("{k}-th derivative not divisible")))?;
            Ok(Derived::from_groth(g))
        }
    }
}

fn next_target(prev: &Target, r: Derived) -> Result<Target, Derived> {
    match r {
        Derived::Datum(d) => Ok(Target::Datum(d)),
        Derived::Groth(elem) => match prev {
            Target::Groth { table, .. } => Ok(Target::Groth { elem, table: table.clone() }),
            Target::Datum(_) => unreachable!("datum derivatives stay data"),
        },
        other => Err(other),
    }
}

fn into_derived(t: Target) -> Derived {
    match t {
        Target::Datum(d) => Derived::Datum(d),
        Target::Groth { elem, .. } => Derived::from_groth(elem),
    }
}

/// Apply `D^{(k)}` along `xs` in order, stopping at the first Zero or Unknown.
fn compose(target: &Target, rho: &Rho, xs: impl IntoIterator<Item = HalfInt>, k: u32) -> Result<Derived, JacError> {
    let mut cur = target.clone();
    for x in xs {
        let r = d_rho_k(&cur, rho, x, k)?;
        cur = match next_target(&cur, r) {
            Ok(t) => t,
            Err(stop) => return Ok(stop),
        };
    }
    Ok(into_derived(cur))
}

/// The chain `D_{B}, …, D_{A}` on the content of one extended block `([A, B], l, η)` that is
/// separated from everything else on its line: the block moves down by one.
fn block_lowering(d: &LanglandsDatum, rho: &Rho, big_b: HalfInt, big_a: HalfInt) -> Option<LanglandsDatum> {
    if !rho.is_selfdual() || big_b < HalfInt::ONE || big_a < big_b {
        return None;
    }
    let v = line_view(d, rho);
    let inside = |x: HalfInt| x >= big_b - 1 && x <= big_a;
    let (mut own, mut rest): (Vec<Segment>, Vec<Segment>) = v.segs.iter().cloned().partition(|s| inside(s.x));
    own.sort_by(|a, b| a.x.cmp(&b.x));
    let l = own.len() as i64;
    if own.iter().enumerate().any(|(j, s)| s.x != big_b + j as i64 || s.y != -big_a + j as i64) {
        return None;
    }
    let below = big_b - 1;
    if rest.iter().any(|s| !(s.x.abs().max(s.y.abs()) < below || (s.x > big_a && s.y < -big_a))) {
        return None;
    }
    let temp: Vec<(HalfInt, i8)> = v.temp.iter().filter(|(z, _)| inside(*z)).map(|(z, e)| (*z, e.eps)).collect();
    if v.temp.iter().any(|(z, e)| inside(*z) && e.mult != 1) {
        return None;
    }
    let n = big_a.int_diff(big_b) + 1 - 2 * l;
    if n < 0 || temp.len() as i64 != n {
        return None;
    }
    for (j, (z, eps)) in temp.iter().enumerate() {
        if *z != big_b + l + j as i64 || (j > 0 && *eps != -temp[j - 1].1) {
            return None;
        }
    }
    let mut m: Vec<Segment> = d.m.items().iter().filter(|s| &s.rho != rho).cloned().collect();
    m.append(&mut rest);
    m.extend(own.iter().map(|s| Segment { rho: rho.clone(), x: s.x - 1, y: s.y + 1 }));
    let mut t = d.tempered.clone();
    for (z, _) in &temp {
        t.remove_one(rho, *z)?;
    }
    for (z, eps) in &temp {
        t.insert(rho.clone(), *z - 1, 1, *eps).ok()?;
    }
    Some(LanglandsDatum::new(Multisegment::new(m), t, d.group))
}

/// `D^{(k)}_{ρ|·|^to} ∘ … ∘ D^{(k)}_{ρ|·|^from}`.
pub fn d_chain(target: &Target, rho: &Rho, from: HalfInt, to: HalfInt, k: u32) -> Result<Derived, JacError> {
    if let Target::Datum(d) = target {
        if k <= 1 {
            if let Some(e) = block_lowering(d, rho, from, to) {
                return Ok(Derived::Datum(e));
            }
        }
    }
    let n = to.int_diff(from);
    let step = n.signum();
    compose(target, rho, (0..=n.abs()).map(|i| from + i * step), k)
}

/// `D_S` for `S = Sp(ρ, a, b)^k`.
pub fn d_s(target: &Target, shape: &SpehShape) -> Result<Derived, JacError> {
    compose(target, &shape.rho, speh_grid(shape), shape.k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::halfint::h;
    use crate::jacquet::ClassicalLabel;
    use crate::repdata::{GroupType, TemperedParam};

    fn one() -> Rho {
        Rho::trivial()
    }

    fn seg(x: i64, y: i64) -> Segment {
        Segment::new(one(), h(x, 1), h(y, 1)).unwrap()
    }

    fn groth(ind: GLSymbol) -> Target {
        Target::Groth { elem: Groth::single(ClassicalSym::induced(ind, ClassicalLabel::Cusp("s".into()))), table: JacTable::new() }
    }

    #[test]
    fn cuspidal_has_no_derivative() {
        let t = groth(GLSymbol::one());
        for x in -3..=3 {
            assert_eq!(d_rho(&t, &one(), h(x, 1)).unwrap(), Derived::Zero);
        }
    }

    #[test]
    fn groth_square_second_derivative() {
        let r = one();
        let c = GLSymbol::cusp(&r, h(1, 1));
        let t = groth(GLSymbol::product(vec![c.clone(), c]));
        let d1 = d_rho(&t, &r, h(1, 1)).unwrap();
        let Derived::Groth(g1) = d1 else { panic!() };
        // ν × ν ⋊ σ has four terms of ν ⊗ −, two of them ν ⋊ σ
        assert_eq!(g1.coeff(&ClassicalSym::induced(GLSymbol::cusp(&r, h(1, 1)), ClassicalLabel::Cusp("s".into()))), 2);
        let d2 = d_rho_k(&t, &r, h(1, 1), 2).unwrap();
        let Derived::Groth(g2) = d2 else { panic!() };
        assert_eq!(g2.coeff(&ClassicalSym::cusp("s")), 1);
        assert_eq!(d_rho_k(&t, &r, h(1, 1), 3).unwrap(), Derived::Zero);
    }

    #[test]
    fn binomial_consistency() {
        let r = one();
        let c = GLSymbol::cusp(&r, h(2, 1));
        let t = groth(GLSymbol::product(vec![c.clone(), c.clone(), c.clone(), GLSymbol::cusp(&r, h(1, 1))]));
        let Derived::Groth(d1) = d_rho_k(&t, &r, h(2, 1), 1).unwrap() else { panic!() };
        let t1 = Target::Groth { elem: d1, table: JacTable::new() };
        let Derived::Groth(d12) = d_rho_k(&t1, &r, h(2, 1), 2).unwrap() else { panic!() };
        let Derived::Groth(d3) = d_rho_k(&t, &r, h(2, 1), 3).unwrap() else { panic!() };
        assert_eq!(d12, d3.scale(3));
    }

    #[test]
    fn segment_rule() {
        let d = LanglandsDatum::new(Multisegment::new(vec![seg(1, -3)]), TemperedParam::new(), GroupType::Sp);
        let t = Target::Datum(d);
        let r = d_rho(&t, &one(), h(1, 1)).unwrap();
        let want = LanglandsDatum::new(Multisegment::new(vec![seg(0, -3)]), TemperedParam::new(), GroupType::Sp);
        assert_eq!(r, Derived::Datum(want));
        assert_eq!(d_rho(&t, &one(), h(2, 1)).unwrap(), Derived::Zero);
        assert_eq!(d_rho(&t, &one(), h(3, 1)).unwrap(), Derived::Unknown(Reason::DerivativeRules));
    }

    #[test]
    fn tempered_rule() {
        let mut tp = TemperedParam::new();
        tp.insert(one(), h(2, 1), 1, -1).unwrap();
        tp.insert(one(), h(0, 1), 1, -1).unwrap();
        let t = Target::Datum(LanglandsDatum::tempered_only(tp, GroupType::SOodd));
        let Derived::Datum(e) = d_rho(&t, &one(), h(2, 1)).unwrap() else { panic!() };
        assert_eq!(e.tempered.get(&one(), h(1, 1)).unwrap().eps, -1);
        assert_eq!(e.tempered.mult(&one(), h(2, 1)), 0);
    }

    #[test]
    fn chain_and_grid() {
        let d = LanglandsDatum::new(Multisegment::new(vec![seg(3, -4)]), TemperedParam::new(), GroupType::Sp);
        let t = Target::Datum(d);
        let r = d_chain(&t, &one(), h(3, 1), h(1, 1), 1).unwrap();
        let want = LanglandsDatum::new(Multisegment::new(vec![seg(0, -4)]), TemperedParam::new(), GroupType::Sp);
        assert_eq!(r, Derived::Datum(want));
        // empty range on the line: zero at the first step
        assert_eq!(d_chain(&t, &one(), h(7, 1), h(6, 1), 1).unwrap(), Derived::Zero);
        let sh = SpehShape::new(one(), 2, 2).unwrap();
        assert_eq!(speh_grid(&sh), vec![h(0, 1), h(-1, 1), h(1, 1), h(0, 1)]);
        let big = SpehShape::new(one(), 4, 4).unwrap();
        assert_eq!(speh_grid(&big).len(), 16);
    }

    #[test]
    fn block_chain() {
        let datum = |low: i64| {
            let mut tp = TemperedParam::new();
            tp.insert(one(), h(4, 1), 1, -1).unwrap();
            tp.insert(one(), h(low, 1), 1, 1).unwrap();
            LanglandsDatum::new(Multisegment::new(vec![seg(3, -5)]), tp, GroupType::Sp)
        };
        let Derived::Datum(e) = d_chain(&Target::Datum(datum(1)), &one(), h(3, 1), h(5, 1), 1).unwrap() else { panic!() };
        assert_eq!(e.m, Multisegment::new(vec![seg(2, -4)]));
        assert_eq!(e.tempered.get(&one(), h(3, 1)).unwrap().eps, -1);
        assert_eq!(e.tempered.get(&one(), h(1, 1)).unwrap().eps, 1);
        // something sits where the block would land
        let r = d_chain(&Target::Datum(datum(2)), &one(), h(3, 1), h(5, 1), 1).unwrap();
        assert_eq!(r, Derived::Unknown(Reason::DerivativeRules));
    }

    #[test]
    fn d_s_single_entry() {
        let r = one();
        let c = GLSymbol::cusp(&r, h(0, 1));
        let t = groth(GLSymbol::product(vec![c.clone(), c]));
        let sh = SpehShape::with_copies(r.clone(), 1, 1, 2).unwrap();
        let a = d_s(&t, &sh).unwrap();
        let b = d_rho_k(&t, &r, h(0, 1), 2).unwrap();
        assert_eq!(a, b);
    }
}
