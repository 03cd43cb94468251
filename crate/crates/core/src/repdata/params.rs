use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Rational64;
use num_traits::Signed;
#[cfg(test)]
use num_traits::Zero;

use super::{GroupType, RatSegment, RepError, Rho, Segment, Multisegment};
use crate::halfint::HalfInt;

/// Multiplicity and sign of one distinct tempered summand `ρ ⊠ S_{2z+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TempEntry {
    pub mult: u32,
    pub eps: i8,
}

/// A tempered good-parity parameter `⊕ ρ ⊠ S_{2z+1}` with a sign per distinct summand.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TemperedParam(BTreeMap<(Rho, HalfInt), TempEntry>);

impl TemperedParam {
    pub fn new() -> Self {
        Self::default()
    }

    /// Add `mult` copies of `ρ ⊠ S_{2z+1}`; the sign must agree with existing copies.
    pub fn insert(&mut self, rho: Rho, z: HalfInt, mult: u32, eps: i8) -> Result<(), RepError> {
        if z < HalfInt::ZERO {
            return Err(RepError::Tempered(format!("negative z = {z} on {rho}")));
        }
        if eps != 1 && eps != -1 {
            return Err(RepError::Tempered(format!("sign {eps} is not ±1")));
        }
        if mult == 0 {
            return Ok(());
        }
        match self.0.get_mut(&(rho.clone(), z)) {
            Some(e) if e.eps != eps => Err(RepError::Tempered(format!(
                "conflicting signs on {rho} ⊠ S_{}",
                (z + z).twice() / 2 + 1
            ))),
            Some(e) => {
                e.mult += mult;
                Ok(())
            }
            None => {
                self.0.insert((rho, z), TempEntry { mult, eps });
                Ok(())
            }
        }
    }

    pub fn get(&self, rho: &Rho, z: HalfInt) -> Option<TempEntry> {
        self.0.get(&(rho.clone(), z)).copied()
    }

    pub fn mult(&self, rho: &Rho, z: HalfInt) -> u32 {
        self.get(rho, z).map_or(0, |e| e.mult)
    }

    /// Remove one copy; the sign is returned.
    pub fn remove_one(&mut self, rho: &Rho, z: HalfInt) -> Option<i8> {
        let key = (rho.clone(), z);
        let e = self.0.get_mut(&key)?;
        let eps = e.eps;
        e.mult -= 1;
        if e.mult == 0 {
            self.0.remove(&key);
        }
        Some(eps)
    }

    pub fn set_eps(&mut self, rho: &Rho, z: HalfInt, eps: i8) {
        if let Some(e) = self.0.get_mut(&(rho.clone(), z)) {
            e.eps = eps;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Rho, HalfInt, TempEntry)> {
        self.0.iter().map(|((r, z), e)| (r, *z, *e))
    }

    pub fn on_line<'a>(&'a self, rho: &'a Rho) -> impl Iterator<Item = (HalfInt, TempEntry)> + 'a {
        self.iter().filter(move |(r, _, _)| *r == rho).map(|(_, z, e)| (z, e))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of distinct summands.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn dim(&self) -> u64 {
        self.iter()
            .map(|(r, z, e)| e.mult as u64 * ((z + z).twice() as u64 / 2 + 1) * r.dim() as u64)
            .sum()
    }

    /// `ε(z_φ) = Π ε(S)^{mult(S)}`.
    pub fn central_sign(&self) -> i8 {
        self.iter()
            .map(|(_, _, e)| if e.mult % 2 == 1 { e.eps } else { 1 })
            .product()
    }
}

impl fmt::Debug for TemperedParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut l = f.debug_list();
        for (r, z, e) in self.iter() {
            let n = (z + z).twice() / 2 + 1;
            let s = if e.eps > 0 { '+' } else { '-' };
            if e.mult == 1 {
                l.entry(&format_args!("{r}⊠S{n}{s}"));
            } else {
                l.entry(&format_args!("({r}⊠S{n}{s})^{}", e.mult));
            }
        }
        l.finish()
    }
}

/// `L(𝔪; π(φ, ε))`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LanglandsDatum {
    pub m: Multisegment,
    pub tempered: TemperedParam,
    pub group: GroupType,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DatumViolation {
    CenterNotNegative(Segment),
    NotSelfDual(Rho),
    WrongLattice { rho: Rho, value: HalfInt },
    DimensionParity { dim: u64 },
    CentralSign,
}

impl fmt::Display for DatumViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DatumViolation::CenterNotNegative(s) => write!(f, "segment {s:?} has non-negative center"),
            DatumViolation::NotSelfDual(r) => write!(f, "{r} is not self-dual"),
            DatumViolation::WrongLattice { rho, value } => {
                write!(f, "exponent {value} on {rho} is off the good-parity lattice")
            }
            DatumViolation::DimensionParity { dim } => write!(f, "parameter dimension {dim} has the wrong parity"),
            DatumViolation::CentralSign => f.write_str("tempered signs are not trivial on the central element"),
        }
    }
}

impl LanglandsDatum {
    pub fn new(m: Multisegment, tempered: TemperedParam, group: GroupType) -> Self {
        LanglandsDatum { m, tempered, group }
    }

    pub fn tempered_only(tempered: TemperedParam, group: GroupType) -> Self {
        Self::new(Multisegment::default(), tempered, group)
    }

    pub fn empty(group: GroupType) -> Self {
        Self::new(Multisegment::default(), TemperedParam::new(), group)
    }

    /// Dimension of the full L-parameter.
    pub fn dim(&self) -> u64 {
        self.m.items().iter().map(|s| 2 * s.size()).sum::<u64>() + self.tempered.dim()
    }

    pub fn is_tempered(&self) -> bool {
        self.m.is_empty()
    }

    pub fn rhos(&self) -> BTreeSet<Rho> {
        let mut out: BTreeSet<Rho> = self.m.items().iter().map(|s| s.rho.clone()).collect();
        out.extend(self.tempered.iter().map(|(r, _, _)| r.clone()));
        out
    }

    /// Segments and tempered part restricted to one ρ.
    pub fn line(&self, rho: &Rho) -> LanglandsDatum {
        let m = self.m.on_line(rho).cloned().collect();
        let mut t = TemperedParam::new();
        for (z, e) in self.tempered.on_line(rho) {
            t.insert(rho.clone(), z, e.mult, e.eps).expect("copied entry");
        }
        LanglandsDatum::new(m, t, self.group)
    }

    /// Every violated invariant, or an empty list.
    pub fn violations(&self) -> Vec<DatumViolation> {
        let mut out = vec![];
        let mut bad_rho = BTreeSet::new();
        for s in self.m.items() {
            if s.center2() >= HalfInt::ZERO {
                out.push(DatumViolation::CenterNotNegative(s.clone()));
            }
            if !s.rho.is_selfdual() {
                bad_rho.insert(s.rho.clone());
            } else if !s.x.congruent(s.rho.b_rho(self.group)) {
                out.push(DatumViolation::WrongLattice { rho: s.rho.clone(), value: s.x });
            }
        }
        for (r, z, _) in self.tempered.iter() {
            if !r.is_selfdual() {
                bad_rho.insert(r.clone());
            } else if !z.congruent(r.b_rho(self.group)) {
                out.push(DatumViolation::WrongLattice { rho: r.clone(), value: z });
            }
        }
        out.extend(bad_rho.into_iter().map(DatumViolation::NotSelfDual));
        let dim = self.dim();
        if !self.group.dim_ok(dim) {
            out.push(DatumViolation::DimensionParity { dim });
        }
        if self.tempered.central_sign() != 1 {
            out.push(DatumViolation::CentralSign);
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }
}

impl fmt::Debug for LanglandsDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({:?}; {:?})", self.m, self.tempered)
    }
}

/// Pass or the list of violated invariants.
pub fn validate_datum(d: &LanglandsDatum) -> Result<(), Vec<DatumViolation>> {
    let v = d.violations();
    if v.is_empty() {
        Ok(())
    } else {
        Err(v)
    }
}

/// `⊕ ρ ⊠ S_a ⊠ S_b`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AParameter {
    pub triples: Vec<(Rho, u32, u32)>,
    pub group: GroupType,
}

impl AParameter {
    pub fn new(mut triples: Vec<(Rho, u32, u32)>, group: GroupType) -> Result<Self, RepError> {
        if let Some(t) = triples.iter().find(|t| t.1 == 0 || t.2 == 0) {
            return Err(RepError::Parameter(format!("zero-dimensional factor on {}", t.0)));
        }
        triples.sort();
        Ok(AParameter { triples, group })
    }

    pub fn dim(&self) -> u64 {
        self.triples.iter().map(|(r, a, b)| (*a as u64) * (*b as u64) * r.dim() as u64).sum()
    }

    pub fn is_good_parity(&self) -> bool {
        self.triples.iter().all(|(r, a, b)| r.good_triple(self.group, *a as u64, *b as u64))
    }

    pub fn check_full(&self) -> Result<(), RepError> {
        if !self.is_good_parity() {
            return Err(RepError::Parameter("not of good parity".into()));
        }
        if !self.group.dim_ok(self.dim()) {
            return Err(RepError::Parameter(format!(
                "dimension {} has the wrong parity for {}",
                self.dim(),
                self.group
            )));
        }
        Ok(())
    }

    pub fn rhos(&self) -> BTreeSet<Rho> {
        self.triples.iter().map(|t| t.0.clone()).collect()
    }
}

impl fmt::Debug for AParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut l = f.debug_list();
        for (r, a, b) in &self.triples {
            l.entry(&format_args!("{r}⊠S{a}⊠S{b}"));
        }
        l.finish()
    }
}

/// `ρ|·|^s ⊠ S_a` for each `(ρ, a, b)`, `s = (b-1)/2, …, -(b-1)/2`.
pub fn phi_of_psi(psi: &AParameter) -> Vec<(Rho, HalfInt, u32)> {
    let mut out = vec![];
    for (r, a, b) in &psi.triples {
        let top = HalfInt::from_twice(*b as i64 - 1);
        for s in top.down_to(-top) {
            out.push((r.clone(), s, *a));
        }
    }
    out
}

/// A summand `ρ|·|^e ⊠ S_a ⊠ S_b` of a general parameter.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParamSummand {
    pub rho: Rho,
    pub e: Rational64,
    pub a: u32,
    pub b: u32,
}

impl ParamSummand {
    pub fn dual(&self) -> ParamSummand {
        ParamSummand { rho: self.rho.dual(), e: -self.e, a: self.a, b: self.b }
    }

    pub fn dim(&self) -> u64 {
        self.a as u64 * self.b as u64 * self.rho.dim() as u64
    }

    pub fn is_good(&self, g: GroupType) -> bool {
        let Some(e) = HalfInt::from_ratio(self.e) else { return false };
        let a = self.a as i64 + (e.abs() + e.abs()).twice() / 2;
        self.rho.good_triple(g, a as u64, self.b as u64)
    }
}

/// Split a parameter into its good-parity part and the rest.
pub fn good_parity_split(
    summands: &[ParamSummand],
    g: GroupType,
) -> Result<(Vec<ParamSummand>, Vec<ParamSummand>), RepError> {
    if let Some(s) = summands.iter().find(|s| s.a == 0 || s.b == 0) {
        return Err(RepError::Parameter(format!("zero-dimensional summand on {}", s.rho)));
    }
    let mut pool: Vec<ParamSummand> = summands.to_vec();
    pool.sort();
    let mut duals: Vec<ParamSummand> = summands.iter().map(|s| s.dual()).collect();
    duals.sort();
    if pool != duals {
        return Err(RepError::Parameter("parameter is not self-dual: a dual summand is missing".into()));
    }
    let (good, bad) = summands.iter().cloned().partition(|s| s.is_good(g));
    Ok((good, bad))
}

/// Basis of distinct triples with multiplicities; `z_ψ` is the multiplicity vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentGroup {
    pub basis: Vec<(Rho, u32, u32)>,
    pub mult: Vec<u32>,
}

impl ComponentGroup {
    /// A character, given by its values on the basis, is trivial on `z_ψ`.
    pub fn admissible(&self, eps: &[i8]) -> bool {
        eps.len() == self.basis.len()
            && eps.iter().all(|e| *e == 1 || *e == -1)
            && eps
                .iter()
                .zip(&self.mult)
                .map(|(e, m)| if m % 2 == 1 { *e } else { 1 })
                .product::<i8>()
                == 1
    }

    pub fn count_admissible(&self) -> u64 {
        let r = self.basis.len() as u32;
        if self.mult.iter().any(|m| m % 2 == 1) {
            1u64 << (r - 1)
        } else {
            1u64 << r
        }
    }
}

pub fn component_group(psi: &AParameter) -> Result<ComponentGroup, RepError> {
    if !psi.is_good_parity() {
        return Err(RepError::Parameter("component group needs a good-parity parameter".into()));
    }
    let mut basis: Vec<(Rho, u32, u32)> = vec![];
    let mut mult = vec![];
    for t in &psi.triples {
        if basis.last() == Some(t) {
            *mult.last_mut().expect("nonempty") += 1;
        } else {
            basis.push(t.clone());
            mult.push(1);
        }
    }
    Ok(ComponentGroup { basis, mult })
}

/// A tempered summand that is not of good parity (kept without a sign).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BadTempered {
    pub rho: Rho,
    pub a: u32,
    pub mult: u32,
}

/// A Langlands datum together with a bad-parity part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralDatum {
    pub good: LanglandsDatum,
    pub bad_segments: Vec<RatSegment>,
    pub bad_tempered: Vec<BadTempered>,
}

impl GeneralDatum {
    pub fn from_good(good: LanglandsDatum) -> Self {
        GeneralDatum { good, bad_segments: vec![], bad_tempered: vec![] }
    }

    pub fn violations(&self) -> Vec<String> {
        let mut out: Vec<String> = self.good.violations().iter().map(|v| v.to_string()).collect();
        for s in &self.bad_segments {
            if !s.center2().is_negative() {
                out.push(format!("bad segment on {} has non-negative center", s.rho));
            }
        }
        for t in &self.bad_tempered {
            if t.rho.good_triple(self.good.group, t.a as u64, 1) {
                out.push(format!("{} ⊠ S_{} is of good parity", t.rho, t.a));
            }
        }
        let dim_bad: u64 = self.bad_segments.iter().map(|s| 2 * s.len() * s.rho.dim() as u64).sum::<u64>()
            + self.bad_tempered.iter().map(|t| (t.a * t.mult) as u64 * t.rho.dim() as u64).sum::<u64>();
        let dim = self.good.dim() + dim_bad;
        if !self.good.group.dim_ok(dim) {
            out.push(format!("parameter dimension {dim} has the wrong parity"));
        }
        // bad pairs must be closed under duality
        let mut lhs: Vec<(String, u32, u32)> = vec![];
        let mut rhs: Vec<(String, u32, u32)> = vec![];
        for t in &self.bad_tempered {
            lhs.push((t.rho.id().to_string(), t.a, t.mult));
            rhs.push((t.rho.dual().id().to_string(), t.a, t.mult));
        }
        lhs.sort();
        rhs.sort();
        if lhs != rhs {
            out.push("bad tempered summands are not closed under duality".into());
        }
        out
    }
}
