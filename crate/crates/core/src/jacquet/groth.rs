use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use super::JacError;
use crate::halfint::HalfInt;
use crate::repdata::{LanglandsDatum, Rho, Segment};

/// Integer combinations of symbols.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Groth<K: Ord>(BTreeMap<K, i64>);

impl<K: Ord> Default for Groth<K> {
    fn default() -> Self {
        Groth(BTreeMap::new())
    }
}

impl<K: Ord + Clone> Groth<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(k: K) -> Self {
        let mut g = Self::zero();
        g.add_term(k, 1);
        g
    }

    pub fn add_term(&mut self, k: K, c: i64) {
        if c == 0 {
            return;
        }
        match self.0.entry(k) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, o: &Groth<K>) {
        for (k, c) in &o.0 {
            self.add_term(k.clone(), *c);
        }
    }

    pub fn scale(&self, c: i64) -> Self {
        if c == 0 {
            return Self::zero();
        }
        Groth(self.0.iter().map(|(k, v)| (k.clone(), v * c)).collect())
    }

    /// Exact division of every coefficient; `None` when some coefficient is not divisible.
    pub fn div_exact(&self, c: i64) -> Option<Self> {
        if self.0.values().any(|v| v % c != 0) {
            return None;
        }
        Some(Groth(self.0.iter().map(|(k, v)| (k.clone(), v / c)).collect()))
    }

    pub fn coeff(&self, k: &K) -> i64 {
        self.0.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, i64)> {
        self.0.iter().map(|(k, v)| (k, *v))
    }

    /// Coefficientwise `self ≥ other`.
    pub fn dominates(&self, other: &Groth<K>) -> bool {
        let mut d = self.clone();
        d.add_assign(&other.scale(-1));
        d.0.values().all(|v| *v > 0)
    }

    /// Every coefficient is positive.
    pub fn is_effective(&self) -> bool {
        self.0.values().all(|v| *v > 0)
    }

    pub fn map_keys<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> L) -> Groth<L> {
        let mut out = Groth::zero();
        for (k, v) in &self.0 {
            out.add_term(f(k), *v);
        }
        out
    }
}

impl<K: Ord + Clone> Add for Groth<K> {
    type Output = Groth<K>;
    fn add(mut self, o: Groth<K>) -> Groth<K> {
        self.add_assign(&o);
        self
    }
}

impl<K: Ord + Clone> Sub for Groth<K> {
    type Output = Groth<K>;
    fn sub(mut self, o: Groth<K>) -> Groth<K> {
        self.add_assign(&o.scale(-1));
        self
    }
}

impl<K: Ord + Clone> Neg for Groth<K> {
    type Output = Groth<K>;
    fn neg(self) -> Groth<K> {
        self.scale(-1)
    }
}

impl<K: Ord + Clone> FromIterator<(K, i64)> for Groth<K> {
    fn from_iter<I: IntoIterator<Item = (K, i64)>>(iter: I) -> Self {
        let mut g = Groth::zero();
        for (k, c) in iter {
            g.add_term(k, c);
        }
        g
    }
}

impl<K: Ord + fmt::Debug> fmt::Debug for Groth<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, v) in &self.0 {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if *v != 1 {
                write!(f, "{v}·")?;
            }
            write!(f, "{k:?}")?;
        }
        Ok(())
    }
}

/// Irreducible or induced representations of general linear groups.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GLSymbol {
    Cuspidal(Rho, HalfInt),
    /// The essentially discrete series `Δ_ρ[x, y]`.
    Delta(Segment),
    /// `Z_ρ[y, x]`, stored by the same segment `[x, y]`.
    Zel(Segment),
    /// `L(Δ_1, …, Δ_k)` with rows listed top to bottom, both ends strictly decreasing.
    Ladder(Vec<Segment>),
    /// Parabolic induction; the empty product is the trivial representation of GL_0.
    Product(Vec<GLSymbol>),
}

impl GLSymbol {
    pub fn one() -> Self {
        GLSymbol::Product(vec![])
    }

    pub fn is_one(&self) -> bool {
        matches!(self, GLSymbol::Product(v) if v.is_empty())
    }

    pub fn cusp(rho: &Rho, x: HalfInt) -> Self {
        GLSymbol::Cuspidal(rho.clone(), x)
    }

    /// `Δ_ρ[x, y]`, allowing the empty segment `y = x + 1`.
    pub fn delta(rho: &Rho, x: HalfInt, y: HalfInt) -> Self {
        if y == x + 1 {
            return GLSymbol::one();
        }
        GLSymbol::Delta(Segment::new(rho.clone(), x, y).expect("segment")).norm()
    }

    pub fn zel(rho: &Rho, x: HalfInt, y: HalfInt) -> Self {
        if y == x + 1 {
            return GLSymbol::one();
        }
        GLSymbol::Zel(Segment::new(rho.clone(), x, y).expect("segment")).norm()
    }

    pub fn product(fs: Vec<GLSymbol>) -> Self {
        GLSymbol::Product(fs).norm()
    }

    /// Ladder from rows; empty rows are dropped and the shape is checked.
    pub fn ladder(rows: Vec<Segment>) -> Result<Self, JacError> {
        let mut rows = rows;
        rows.sort_by(|a, b| b.x.cmp(&a.x));
        for w in rows.windows(2) {
            if w[0].rho != w[1].rho || !(w[0].x > w[1].x && w[0].y > w[1].y) {
                return Err(JacError::NotLadder(format!("{rows:?}")));
            }
        }
        Ok(GLSymbol::Ladder(rows).norm())
    }

    /// Canonical form: products flattened and sorted, degenerate shapes collapsed.
    pub fn norm(self) -> Self {
        match self {
            GLSymbol::Cuspidal(..) => self,
            GLSymbol::Delta(s) | GLSymbol::Zel(s) if s.len() == 1 => GLSymbol::Cuspidal(s.rho, s.x),
            GLSymbol::Delta(_) | GLSymbol::Zel(_) => self,
            GLSymbol::Ladder(mut rows) => {
                rows.sort_by(|a, b| b.x.cmp(&a.x));
                match rows.len() {
                    0 => GLSymbol::one(),
                    1 => GLSymbol::Delta(rows.pop().expect("one row")).norm(),
                    _ => {
                        let singletons = rows.iter().all(|r| r.len() == 1)
                            && rows.windows(2).all(|w| w[0].x == w[1].x + 1);
                        if singletons {
                            let top = rows[0].x;
                            let bottom = rows[rows.len() - 1].y;
                            GLSymbol::Zel(Segment { rho: rows[0].rho.clone(), x: top, y: bottom })
                        } else {
                            GLSymbol::Ladder(rows)
                        }
                    }
                }
            }
            GLSymbol::Product(fs) => {
                let mut flat = vec![];
                for f in fs {
                    match f.norm() {
                        GLSymbol::Product(inner) => flat.extend(inner),
                        g => flat.push(g),
                    }
                }
                flat.sort();
                if flat.len() == 1 {
                    flat.pop().expect("one factor")
                } else {
                    GLSymbol::Product(flat)
                }
            }
        }
    }

    /// GL rank.
    pub fn size(&self) -> u64 {
        match self {
            GLSymbol::Cuspidal(r, _) => r.dim() as u64,
            GLSymbol::Delta(s) | GLSymbol::Zel(s) => s.size(),
            GLSymbol::Ladder(rows) => rows.iter().map(|r| r.size()).sum(),
            GLSymbol::Product(fs) => fs.iter().map(|f| f.size()).sum(),
        }
    }

    /// Contragredient.
    pub fn dual(&self) -> Self {
        match self {
            GLSymbol::Cuspidal(r, x) => GLSymbol::Cuspidal(r.dual(), -*x),
            GLSymbol::Delta(s) => GLSymbol::Delta(s.dual()),
            GLSymbol::Zel(s) => GLSymbol::Zel(s.dual()),
            GLSymbol::Ladder(rows) => GLSymbol::Ladder(rows.iter().map(|r| r.dual()).collect()).norm(),
            GLSymbol::Product(fs) => GLSymbol::Product(fs.iter().map(|f| f.dual()).collect()).norm(),
        }
    }

    /// Cuspidal support as a sorted list.
    pub fn support(&self) -> Vec<(Rho, HalfInt)> {
        let mut out = vec![];
        self.collect_support(&mut out);
        out.sort();
        out
    }

    fn collect_support(&self, out: &mut Vec<(Rho, HalfInt)>) {
        match self {
            GLSymbol::Cuspidal(r, x) => out.push((r.clone(), *x)),
            GLSymbol::Delta(s) | GLSymbol::Zel(s) => out.extend(s.exponents().map(|e| (s.rho.clone(), e))),
            GLSymbol::Ladder(rows) => {
                for s in rows {
                    out.extend(s.exponents().map(|e| (s.rho.clone(), e)));
                }
            }
            GLSymbol::Product(fs) => fs.iter().for_each(|f| f.collect_support(out)),
        }
    }

    /// All two-step Jacquet pieces `(first, second)` with multiplicity, over every split.
    pub fn cuts(&self) -> Vec<(GLSymbol, GLSymbol, i64)> {
        match self {
            GLSymbol::Cuspidal(..) => vec![(GLSymbol::one(), self.clone(), 1), (self.clone(), GLSymbol::one(), 1)],
            GLSymbol::Delta(s) => {
                let n = s.len() as i64;
                (0..=n)
                    .map(|k| {
                        (GLSymbol::delta(&s.rho, s.x, s.x - k + 1), GLSymbol::delta(&s.rho, s.x - k, s.y), 1)
                    })
                    .collect()
            }
            GLSymbol::Zel(s) => {
                let n = s.len() as i64;
                (0..=n)
                    .map(|k| (GLSymbol::zel(&s.rho, s.y + k - 1, s.y), GLSymbol::zel(&s.rho, s.x, s.y + k), 1))
                    .collect()
            }
            GLSymbol::Ladder(rows) => ladder_cuts(rows),
            GLSymbol::Product(fs) => {
                let mut acc: Vec<(Vec<GLSymbol>, Vec<GLSymbol>, i64)> = vec![(vec![], vec![], 1)];
                for f in fs {
                    let cs = f.cuts();
                    let mut next = Vec::with_capacity(acc.len() * cs.len());
                    for (a, b, c) in &acc {
                        for (x, y, d) in &cs {
                            let mut a2 = a.clone();
                            a2.push(x.clone());
                            let mut b2 = b.clone();
                            b2.push(y.clone());
                            next.push((a2, b2, c * d));
                        }
                    }
                    acc = next;
                }
                let mut g: Groth<(GLSymbol, GLSymbol)> = Groth::zero();
                for (a, b, c) in acc {
                    g.add_term((GLSymbol::product(a), GLSymbol::product(b)), c);
                }
                g.iter().map(|((a, b), c)| (a.clone(), b.clone(), c)).collect()
            }
        }
    }
}

/// Cuts of a ladder: `c_i ∈ [y_i - 1, x_i]` strictly decreasing.
fn ladder_cuts(rows: &[Segment]) -> Vec<(GLSymbol, GLSymbol, i64)> {
    let mut out = vec![];
    let mut cs: Vec<HalfInt> = Vec::with_capacity(rows.len());
    fn rec(rows: &[Segment], i: usize, cs: &mut Vec<HalfInt>, out: &mut Vec<(GLSymbol, GLSymbol, i64)>) {
        if i == rows.len() {
            let rho = &rows[0].rho;
            out.push((rows_to_ladder(rho, rows, cs, true), rows_to_ladder(rho, rows, cs, false), 1));
            return;
        }
        let r = &rows[i];
        let mut c = r.x;
        while c >= r.y - 1 {
            if i == 0 || cs[i - 1] > c {
                cs.push(c);
                rec(rows, i + 1, cs, out);
                cs.pop();
            }
            c -= 1;
        }
    }
    rec(rows, 0, &mut cs, &mut out);
    out
}

fn rows_to_ladder(rho: &Rho, rows: &[Segment], cs: &[HalfInt], upper: bool) -> GLSymbol {
    let mut new_rows = vec![];
    for (r, c) in rows.iter().zip(cs) {
        let (x, y) = if upper { (r.x, *c + 1) } else { (*c, r.y) };
        if y <= x {
            new_rows.push(Segment { rho: rho.clone(), x, y });
        }
    }
    GLSymbol::Ladder(new_rows).norm()
}

impl fmt::Debug for GLSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GLSymbol::Cuspidal(r, x) => write!(f, "{r}ν^{x}"),
            GLSymbol::Delta(s) => write!(f, "Δ[{},{}]_{}", s.x, s.y, s.rho),
            GLSymbol::Zel(s) => write!(f, "Z[{},{}]_{}", s.y, s.x, s.rho),
            GLSymbol::Ladder(rows) => {
                f.write_str("L(")?;
                for (i, r) in rows.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "[{},{}]", r.x, r.y)?;
                }
                write!(f, ")_{}", rows[0].rho)
            }
            GLSymbol::Product(fs) if fs.is_empty() => f.write_str("𝟙"),
            GLSymbol::Product(fs) => {
                for (i, g) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str("×")?;
                    }
                    write!(f, "{g:?}")?;
                }
                Ok(())
            }
        }
    }
}

/// Base of a classical induced symbol.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassicalLabel {
    /// An opaque supercuspidal representation of a classical group.
    Cusp(String),
    /// An irreducible representation given by its Langlands datum.
    Datum(Box<LanglandsDatum>),
}

/// `ind ⋊ base`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassicalSym {
    pub ind: GLSymbol,
    pub base: ClassicalLabel,
}

impl ClassicalSym {
    pub fn cusp(label: &str) -> Self {
        ClassicalSym { ind: GLSymbol::one(), base: ClassicalLabel::Cusp(label.into()) }
    }

    pub fn induced(tau: GLSymbol, base: ClassicalLabel) -> Self {
        ClassicalSym { ind: tau.norm(), base }
    }
}

impl fmt::Debug for ClassicalSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match &self.base {
            ClassicalLabel::Cusp(s) => s.clone(),
            ClassicalLabel::Datum(d) => format!("{d:?}"),
        };
        if self.ind.is_one() {
            f.write_str(&base)
        } else {
            write!(f, "{:?}⋊{base}", self.ind)
        }
    }
}

/// `gl ⊗ cl`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TensorSymbol {
    pub gl: GLSymbol,
    pub cl: ClassicalSym,
}

impl fmt::Debug for TensorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} ⊗ {:?}", self.gl, self.cl)
    }
}

pub type GrothElem = Groth<TensorSymbol>;
