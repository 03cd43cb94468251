//! JSON shapes of requests and their conversion to library types.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::amseg::{ExtMultiSegment, ExtSegment};
use crate::halfint::HalfInt;
use crate::repdata::{
    AParameter, BadTempered, CuspSymbol, GeneralDatum, GroupType, LanglandsDatum, Multisegment, RatSegment, Rho,
    Segment, TemperedParam,
};
use crate::unitary::{Answer, BeyondDatum, Factor, FixtureEntry, IrreducibleInput, Pi0};

pub const SCHEMA_VERSION: u32 = 1;

/// A rational number written as an integer or a string `"p/q"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rat(pub Rational64);

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_integer() {
            s.serialize_i64(self.0.to_integer())
        } else {
            s.serialize_str(&format!("{}/{}", self.0.numer(), self.0.denom()))
        }
    }
}

struct RatVisitor;

impl<'de> Visitor<'de> for RatVisitor {
    type Value = Rat;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a string \"p/q\"")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rat, E> {
        Ok(Rat(Rational64::from_integer(v)))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rat, E> {
        i64::try_from(v).map(|v| Rat(Rational64::from_integer(v))).map_err(|_| E::custom("integer out of range"))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Rat, E> {
        let err = || E::custom(format!("not a rational number: {v:?}"));
        let (p, q) = v.trim().split_once('/').unwrap_or((v.trim(), "1"));
        let p = i64::from_str(p.trim()).map_err(|_| err())?;
        let q = i64::from_str(q.trim()).map_err(|_| err())?;
        if q == 0 {
            return Err(err());
        }
        Ok(Rat(Rational64::new(p, q)))
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(RatVisitor)
    }
}

fn one() -> u32 {
    1
}

fn is_one(n: &u32) -> bool {
    *n == 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentDto {
    pub rho: String,
    pub x: HalfInt,
    pub y: HalfInt,
}

/// `mult` copies of `ρ ⊠ S_a` with sign `eps`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemperedDto {
    pub rho: String,
    pub a: u32,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub mult: u32,
    pub eps: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatSegmentDto {
    pub rho: String,
    pub x: Rat,
    pub y: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BadTemperedDto {
    pub rho: String,
    pub a: u32,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub mult: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumDto {
    #[serde(default)]
    pub segments: Vec<SegmentDto>,
    #[serde(default)]
    pub tempered: Vec<TemperedDto>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bad_segments: Vec<RatSegmentDto>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bad_tempered: Vec<BadTemperedDto>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockDto {
    pub rho: String,
    #[serde(rename = "A")]
    pub big_a: HalfInt,
    #[serde(rename = "B")]
    pub big_b: HalfInt,
    pub l: u32,
    pub eta: i8,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtDto {
    pub blocks: Vec<BlockDto>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleDto {
    pub rho: String,
    pub a: u32,
    pub b: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PsiDto {
    pub triples: Vec<TripleDto>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Pi0Dto {
    Datum(DatumDto),
    Ext(ExtDto),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorDto {
    pub rho: String,
    pub c: u32,
    pub d: u32,
    pub x: Rat,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IrreducibleDto {
    #[default]
    Asserted,
    OracleChecked,
}

fn is_default<T: Default + PartialEq>(t: &T) -> bool {
    *t == T::default()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeyondDto {
    pub pi0: Pi0Dto,
    #[serde(default)]
    pub factors: Vec<FactorDto>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub irreducible_input: IrreducibleDto,
}

/// `D^{(k)}` at `ρ|·|^x`, or the chain from `x` to `to`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeriveDto {
    pub rho: String,
    pub x: HalfInt,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub k: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub to: Option<HalfInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleEntryDto {
    pub rho: String,
    pub c: u32,
    pub d: u32,
    pub pi0: DatumDto,
    pub answer: Answer,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frp: Option<Rat>,
}

/// Every input of every command; each command reads the fields it needs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Payload {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupType>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cusps: Vec<CuspSymbol>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub datum: Option<DatumDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ext: Option<ExtDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<PsiDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beyond: Option<BeyondDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derive: Option<DeriveDto>,
    /// Known answers for `weak-check` when no `--oracle` is given.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub oracle_fixture: Vec<OracleEntryDto>,
}

/// Parse with the path of the offending field and its line and column.
pub fn parse<T: de::DeserializeOwned>(text: &str) -> Result<T, String> {
    let mut de = serde_json::Deserializer::from_str(text);
    let v: T = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        format!("line {} column {}: at `{path}`: {inner}", inner.line(), inner.column())
    })?;
    de.end().map_err(|e| format!("line {} column {}: {e}", e.line(), e.column()))?;
    Ok(v)
}

/// Resolves cusp labels; "1" is the trivial character unless declared otherwise.
pub struct Ctx {
    cusps: BTreeMap<String, Rho>,
    pub group: GroupType,
}

impl Ctx {
    pub fn new(symbols: &[CuspSymbol], group: GroupType) -> Result<Self, String> {
        let mut cusps = BTreeMap::new();
        for s in symbols {
            let r = Rho::new(s.clone()).map_err(|e| e.to_string())?;
            if cusps.insert(s.id.clone(), r.clone()).is_some() {
                return Err(format!("cusp {:?} declared twice", s.id));
            }
        }
        // duals of non-self-dual symbols are implied
        let implied: Vec<Rho> = cusps.values().filter(|r| !r.is_selfdual()).map(|r| r.dual()).collect();
        for d in implied {
            match cusps.get(d.id()) {
                Some(e) if e.symbol() != d.symbol() => {
                    return Err(format!("cusp {:?} disagrees with the dual of {:?}", d.id(), d.dual().id()))
                }
                Some(_) => {}
                None => {
                    cusps.insert(d.id().to_string(), d);
                }
            }
        }
        cusps.entry("1".into()).or_insert_with(Rho::trivial);
        Ok(Ctx { cusps, group })
    }

    pub fn rho(&self, id: &str) -> Result<Rho, String> {
        self.cusps.get(id).cloned().ok_or_else(|| format!("unknown cusp {id:?}"))
    }

    pub fn datum(&self, d: &DatumDto) -> Result<LanglandsDatum, String> {
        Ok(self.general(d)?.good)
    }

    pub fn general(&self, d: &DatumDto) -> Result<GeneralDatum, String> {
        let mut segs = vec![];
        for (i, s) in d.segments.iter().enumerate() {
            let seg = Segment::new(self.rho(&s.rho)?, s.x, s.y).map_err(|e| format!("segments[{i}]: {e}"))?;
            segs.push(seg);
        }
        let mut t = TemperedParam::new();
        for (i, e) in d.tempered.iter().enumerate() {
            if e.a == 0 {
                return Err(format!("tempered[{i}]: a must be positive"));
            }
            let z = HalfInt::from_twice(e.a as i64 - 1);
            t.insert(self.rho(&e.rho)?, z, e.mult, e.eps).map_err(|err| format!("tempered[{i}]: {err}"))?;
        }
        let mut bad_segments = vec![];
        for (i, s) in d.bad_segments.iter().enumerate() {
            let seg = RatSegment::new(self.rho(&s.rho)?, s.x.0, s.y.0).map_err(|e| format!("bad_segments[{i}]: {e}"))?;
            bad_segments.push(seg);
        }
        let mut bad_tempered = vec![];
        for t in &d.bad_tempered {
            bad_tempered.push(BadTempered { rho: self.rho(&t.rho)?, a: t.a, mult: t.mult });
        }
        Ok(GeneralDatum {
            good: LanglandsDatum::new(Multisegment::new(segs), t, self.group),
            bad_segments,
            bad_tempered,
        })
    }

    pub fn ext(&self, e: &ExtDto) -> Result<ExtMultiSegment, String> {
        let mut blocks = vec![];
        for (i, b) in e.blocks.iter().enumerate() {
            let s = ExtSegment::new(self.rho(&b.rho)?, b.big_a, b.big_b, b.l, b.eta)
                .map_err(|err| format!("blocks[{i}]: {err}"))?;
            blocks.push(s);
        }
        Ok(ExtMultiSegment::new(blocks, self.group))
    }

    pub fn psi(&self, p: &PsiDto) -> Result<AParameter, String> {
        let mut triples = vec![];
        for t in &p.triples {
            triples.push((self.rho(&t.rho)?, t.a, t.b));
        }
        AParameter::new(triples, self.group).map_err(|e| e.to_string())
    }

    pub fn beyond(&self, b: &BeyondDto) -> Result<BeyondDatum, String> {
        let pi0 = match &b.pi0 {
            Pi0Dto::Datum(d) => Pi0::Datum(self.datum(d)?),
            Pi0Dto::Ext(e) => Pi0::Ext(self.ext(e)?),
        };
        let mut factors = vec![];
        for f in &b.factors {
            factors.push(Factor { rho: self.rho(&f.rho)?, c: f.c, d: f.d, x: f.x.0 });
        }
        let irreducible_input = match b.irreducible_input {
            IrreducibleDto::Asserted => IrreducibleInput::Asserted,
            IrreducibleDto::OracleChecked => IrreducibleInput::OracleChecked,
        };
        Ok(BeyondDatum { pi0, factors, irreducible_input })
    }

    pub fn fixture(&self, entries: &[OracleEntryDto]) -> Result<Vec<FixtureEntry>, String> {
        entries
            .iter()
            .map(|e| {
                Ok(FixtureEntry {
                    rho: self.rho(&e.rho)?,
                    c: e.c,
                    d: e.d,
                    pi0: self.datum(&e.pi0)?,
                    answer: e.answer,
                    frp: e.frp.map(|r| r.0),
                })
            })
            .collect()
    }
}

/// The inverse direction, for reports.
pub fn datum_dto(d: &LanglandsDatum) -> DatumDto {
    DatumDto {
        segments: d.m.items().iter().map(|s| SegmentDto { rho: s.rho.id().into(), x: s.x, y: s.y }).collect(),
        tempered: d
            .tempered
            .iter()
            .map(|(r, z, e)| TemperedDto { rho: r.id().into(), a: (z.twice() + 1) as u32, mult: e.mult, eps: e.eps })
            .collect(),
        bad_segments: vec![],
        bad_tempered: vec![],
    }
}

pub fn ext_dto(e: &ExtMultiSegment) -> ExtDto {
    ExtDto {
        blocks: e
            .blocks
            .iter()
            .map(|b| BlockDto { rho: b.rho.id().into(), big_a: b.big_a, big_b: b.big_b, l: b.l, eta: b.eta })
            .collect(),
    }
}

pub fn psi_dto(p: &AParameter) -> PsiDto {
    PsiDto { triples: p.triples.iter().map(|(r, a, b)| TripleDto { rho: r.id().into(), a: *a, b: *b }).collect() }
}
