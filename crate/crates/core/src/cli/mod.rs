//! Batch front-end: JSON in, a deterministic JSON or text report out.
//!
//! Exit codes: 0 for a definite answer, 2 when the answer depends on an oracle or a criterion
//! outside the certified rules, 1 for bad input.

pub mod dto;
pub mod oracle;

use std::io::{Read, Write};

use clap::{Parser, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::amseg::{self, enumerate_packet, eval, eval_ddr, is_ddr, psi_of, Evaluation, ExtMultiSegment, ExtSegment};
use crate::decide::{dual_ext, is_arthur, sz_decompose, ArthurVerdict, Block, SearchLimits, SzOutcome};
use crate::halfint::HalfInt;
use crate::jacquet::{d_chain, d_rho_k, Derived, Target};
use crate::reason::Reason;
use crate::repdata::{GroupType, LanglandsDatum, Rho, Segment};
use crate::unitary::{
    is_unitary_good_parity, unitary_necessary, weak_check, Answer, FixtureOracle, GroupCheck, IrreducibilityOracle,
    NecessaryVerdict, StubOracle, UnitaryVerdict,
};
use dto::{datum_dto, ext_dto, parse, psi_dto, Ctx, Payload, Rat, SCHEMA_VERSION};
use oracle::SubprocessOracle;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Validate,
    Eval,
    Packet,
    Derive,
    Sz,
    IsArthur,
    IsUnitary,
    WeakCheck,
    /// Randomized consistency checks driven by `--seed`.
    Selfcheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Eval => "eval",
            Command::Packet => "packet",
            Command::Derive => "derive",
            Command::Sz => "sz",
            Command::IsArthur => "is-arthur",
            Command::IsUnitary => "is-unitary",
            Command::WeakCheck => "weak-check",
            Command::Selfcheck => "selfcheck",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        <Command as ValueEnum>::from_str(s, false).ok()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Json,
    Text,
}

fn default_dim() -> u64 {
    40
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default)]
    pub group: Option<GroupType>,
    #[serde(default = "default_dim")]
    pub dim_bound: u64,
    /// A shell command, `fixture:PATH` or `stub:irreducible|reducible|unknown`.
    #[serde(default)]
    pub oracle: Option<String>,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options { group: None, dim_bound: default_dim(), oracle: None, format: Format::Json, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub code: i32,
    pub output: String,
}

#[derive(Parser, Debug)]
#[command(name = "arthurtype", version, about = "Arthur type and unitarity of good-parity representations")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// JSON payload file; standard input when absent or "-".
    input: Option<String>,
    #[arg(long, value_parser = parse_group)]
    group: Option<GroupType>,
    #[arg(long = "dim-bound", default_value_t = 40)]
    dim_bound: u64,
    /// Oracle command, `fixture:PATH` or `stub:ANSWER`.
    #[arg(long)]
    oracle: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_group(s: &str) -> Result<GroupType, String> {
    match s {
        "Sp" => Ok(GroupType::Sp),
        "SOodd" => Ok(GroupType::SOodd),
        _ => Err(format!("unknown group {s:?}; expected Sp or SOodd")),
    }
}

pub fn main_entry() -> i32 {
    let cli = Cli::parse();
    let opts = Options { group: cli.group, dim_bound: cli.dim_bound, oracle: cli.oracle, format: cli.format, seed: cli.seed };
    let text = match cli.input.as_deref() {
        None | Some("-") if cli.command == Command::Selfcheck => Ok("{}".to_string()),
        None | Some("-") => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map(|_| s).map_err(|e| format!("cannot read standard input: {e}"))
        }
        Some(p) => std::fs::read_to_string(p).map_err(|e| format!("cannot read {p}: {e}")),
    };
    let report = match text {
        Ok(t) => run(cli.command, &t, &opts),
        Err(e) => failure(cli.command, &e, opts.format),
    };
    // a closed pipe downstream is not an error of ours
    let _ = writeln!(std::io::stdout(), "{}", report.output);
    report.code
}

/// Entry point shared with the C interface; `options` is a JSON object of [`Options`].
pub fn run_json(command: &str, payload: &str, options: &str) -> Report {
    let opts: Options = if options.trim().is_empty() {
        Options::default()
    } else {
        match parse(options) {
            Ok(o) => o,
            Err(e) => return failure_named(command, &format!("options: {e}"), Format::Json),
        }
    };
    match Command::parse(command) {
        Some(c) => run(c, payload, &opts),
        None => failure_named(command, "unknown command", opts.format),
    }
}

pub fn run(command: Command, payload: &str, opts: &Options) -> Report {
    match dispatch(command, payload, opts) {
        Ok((body, partial)) => Report { code: if partial { 2 } else { 0 }, output: render(command.name(), body, opts.format) },
        Err(e) => failure(command, &e, opts.format),
    }
}

fn failure(command: Command, msg: &str, format: Format) -> Report {
    failure_named(command.name(), msg, format)
}

fn failure_named(command: &str, msg: &str, format: Format) -> Report {
    Report { code: 1, output: render(command, json!({ "error": msg }), format) }
}

fn render(command: &str, mut body: Value, format: Format) -> String {
    let obj = body.as_object_mut().expect("reports are objects");
    obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
    obj.insert("command".into(), json!(command));
    match format {
        Format::Json => serde_json::to_string_pretty(&body).expect("serializable report"),
        Format::Text => text(&body),
    }
}

const HEAD: [&str; 5] = ["command", "verdict", "basis", "reason", "error"];

fn text(body: &Value) -> String {
    let obj = body.as_object().expect("object");
    let mut out = vec![];
    for k in HEAD {
        if let Some(v) = obj.get(k) {
            out.push(format!("{k}: {}", scalar(v)));
        }
    }
    for (k, v) in obj {
        if HEAD.contains(&k.as_str()) || k == "schema_version" {
            continue;
        }
        lines(k, v, 0, &mut out);
    }
    out.push(format!("schema version {SCHEMA_VERSION}"));
    out.join("\n")
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn lines(key: &str, v: &Value, depth: usize, out: &mut Vec<String>) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) if m.contains_key("notation") => out.push(format!("{pad}{key}: {}", scalar(&m["notation"]))),
        Value::Object(m) => {
            out.push(format!("{pad}{key}:"));
            for (k, x) in m {
                lines(k, x, depth + 1, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object()) => {
            out.push(format!("{pad}{key}:"));
            for (i, x) in a.iter().enumerate() {
                lines(&format!("[{}]", i + 1), x, depth + 1, out);
            }
        }
        other => out.push(format!("{pad}{key}: {}", scalar(other))),
    }
}

fn group_of(p: &Payload, opts: &Options) -> Result<GroupType, String> {
    match (p.group, opts.group) {
        (Some(a), Some(b)) if a != b => Err(format!("payload group {a} conflicts with --group {b}")),
        (a, b) => Ok(a.or(b).unwrap_or(GroupType::Sp)),
    }
}

fn need<'a, T>(x: &'a Option<T>, field: &str, command: Command) -> Result<&'a T, String> {
    x.as_ref().ok_or_else(|| format!("{} needs a `{field}` object", command.name()))
}

fn limits(opts: &Options) -> SearchLimits {
    SearchLimits::with_dim(opts.dim_bound)
}

fn datum_json(d: &LanglandsDatum) -> Value {
    let mut v = serde_json::to_value(datum_dto(d)).expect("serializable");
    v["notation"] = json!(format!("{d:?}"));
    v
}

fn ext_json(e: &ExtMultiSegment) -> Value {
    let mut v = serde_json::to_value(ext_dto(e)).expect("serializable");
    v["notation"] = json!(format!("{e:?}"));
    v
}

fn seg_json(s: &Segment, k: u32) -> Value {
    json!({ "rho": s.rho.id(), "x": s.x, "y": s.y, "k": k })
}

fn eval_json(ev: &Evaluation) -> (Value, bool) {
    match ev {
        Evaluation::Datum(d) => (json!({ "result": "datum", "datum": datum_json(d) }), false),
        Evaluation::Vanishes => (json!({ "result": "vanishes" }), false),
        Evaluation::NeedsOracle(r) => (json!({ "result": "needs-oracle", "reason": r }), true),
    }
}

fn dispatch(command: Command, payload: &str, opts: &Options) -> Result<(Value, bool), String> {
    let p: Payload = parse(payload)?;
    if let Some(v) = p.schema_version {
        if v != SCHEMA_VERSION {
            return Err(format!("schema_version {v} is not supported (expected {SCHEMA_VERSION})"));
        }
    }
    let ctx = Ctx::new(&p.cusps, group_of(&p, opts)?)?;
    match command {
        Command::Validate => validate(&p, &ctx),
        Command::Eval => {
            let e = ctx.ext(need(&p.ext, "ext", command)?)?;
            let v = e.violations();
            if !v.is_empty() {
                return Err(format!("invalid extended multi-segment: {}", join(&v)));
            }
            let (mut body, partial) = eval_json(&eval(&e));
            body["basis"] = json!("evaluation of π(ℰ): shift to a DDR multi-segment, then lower block by block through derivatives");
            body["verdict"] = body["result"].clone();
            body["psi"] = json!(psi_dto(&psi_of(&e).map_err(|x| x.to_string())?));
            Ok((body, partial))
        }
        Command::Packet => packet(&p, &ctx, opts),
        Command::Derive => derive(&p, &ctx),
        Command::Sz => sz(&p, &ctx, opts),
        Command::IsArthur => {
            let d = ctx.datum(need(&p.datum, "datum", command)?)?;
            let general = ctx.general(need(&p.datum, "datum", command)?)?;
            if !general.bad_segments.is_empty() || !general.bad_tempered.is_empty() {
                return Err("is-arthur takes a good-parity datum".into());
            }
            let v = is_arthur(&d, &limits(opts)).map_err(|e| e.to_string())?;
            let mut body = json!({
                "verdict": v.status(),
                "basis": "exhaustive search over A-parameters with the infinitesimal character of π, each packet enumerated by extended multi-segments",
                "datum": datum_json(&d),
            });
            match &v {
                ArthurVerdict::Yes(e) => body["witness"] = ext_json(e),
                ArthurVerdict::Unknown(r) => body["reason"] = json!(r),
                ArthurVerdict::No => {}
            }
            Ok((body, matches!(v, ArthurVerdict::Unknown(_))))
        }
        Command::IsUnitary => is_unitary(&p, &ctx, opts),
        Command::WeakCheck => weak(&p, &ctx, opts),
        Command::Selfcheck => Ok(selfcheck(ctx.group, opts.seed)),
    }
}

fn join<T: std::fmt::Display>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

fn validate(p: &Payload, ctx: &Ctx) -> Result<(Value, bool), String> {
    let mut checks = serde_json::Map::new();
    if let Some(d) = &p.datum {
        let g = ctx.general(d)?;
        checks.insert("datum".into(), verdict_list(g.violations()));
    }
    if let Some(e) = &p.ext {
        let e = ctx.ext(e)?;
        checks.insert("ext".into(), verdict_list(e.violations().iter().map(|v| v.to_string()).collect()));
    }
    if let Some(s) = &p.psi {
        let psi = ctx.psi(s)?;
        let mut v = vec![];
        if let Err(e) = psi.check_full() {
            v.push(e.to_string());
        }
        if !psi.is_good_parity() {
            v.push("not of good parity".into());
        }
        checks.insert("psi".into(), verdict_list(v));
    }
    if let Some(b) = &p.beyond {
        let b = ctx.beyond(b)?;
        let mut v = vec![];
        if let Err(e) = b.check(ctx.group) {
            v.push(e.to_string());
        }
        match &b.pi0 {
            crate::unitary::Pi0::Datum(d) => v.extend(d.violations().iter().map(|x| x.to_string())),
            crate::unitary::Pi0::Ext(e) => v.extend(e.violations().iter().map(|x| x.to_string())),
        }
        checks.insert("beyond".into(), verdict_list(v));
    }
    if checks.is_empty() {
        return Err("validate needs at least one of `datum`, `ext`, `psi`, `beyond`".into());
    }
    let valid = checks.values().all(|c| c["valid"] == json!(true));
    Ok((
        json!({
            "verdict": if valid { "valid" } else { "invalid" },
            "basis": "invariants of Langlands data, A-parameters, and the admissible order and sign condition of extended multi-segments",
            "checks": checks,
        }),
        false,
    ))
}

fn verdict_list(v: Vec<String>) -> Value {
    json!({ "valid": v.is_empty(), "violations": v })
}

fn packet(p: &Payload, ctx: &Ctx, opts: &Options) -> Result<(Value, bool), String> {
    let psi = ctx.psi(need(&p.psi, "psi", Command::Packet)?)?;
    let lim = amseg::PacketLimits { max_dim: opts.dim_bound, ..amseg::PacketLimits::default() };
    let pk = enumerate_packet(&psi, &lim).map_err(|e| e.to_string())?;
    let entries: Vec<Value> = pk
        .entries
        .iter()
        .map(|e| {
            let (mut v, _) = eval_json(&e.outcome);
            v["ext"] = ext_json(&e.ext);
            v
        })
        .collect();
    let members: Vec<Value> =
        pk.members.iter().map(|(e, d)| json!({ "ext": ext_json(e), "datum": datum_json(d) })).collect();
    let mut body = json!({
        "verdict": if pk.complete { "complete" } else { "partial" },
        "basis": "the A-packet as the nonzero π(ℰ) over extended multi-segments ℰ with ψ_ℰ = ψ",
        "psi": psi_dto(&psi),
        "entries": entries,
        "members": members,
    });
    if let Some(r) = pk.reason() {
        body["reason"] = json!(r);
    }
    Ok((body, !pk.complete))
}

fn derive(p: &Payload, ctx: &Ctx) -> Result<(Value, bool), String> {
    let dto = need(&p.derive, "derive", Command::Derive)?;
    let d = ctx.datum(need(&p.datum, "datum", Command::Derive)?)?;
    let v = d.violations();
    if !v.is_empty() {
        return Err(format!("invalid datum: {}", join(&v)));
    }
    let rho = ctx.rho(&dto.rho)?;
    let target = Target::Datum(d.clone());
    let res = match dto.to {
        Some(to) => d_chain(&target, &rho, dto.x, to, dto.k),
        None => d_rho_k(&target, &rho, dto.x, dto.k),
    }
    .map_err(|e| e.to_string())?;
    let mut body = json!({
        "basis": "derivative rules for Langlands data, with vanishing decided by the certified tests",
        "datum": datum_json(&d),
    });
    let partial = match &res {
        Derived::Datum(x) => {
            body["verdict"] = json!("datum");
            body["result"] = datum_json(x);
            false
        }
        Derived::Zero => {
            body["verdict"] = json!("zero");
            false
        }
        Derived::Groth(g) => {
            body["verdict"] = json!("virtual");
            body["result"] = json!(format!("{g:?}"));
            false
        }
        Derived::Unknown(r) => {
            body["verdict"] = json!("unknown");
            body["reason"] = json!(r);
            true
        }
    };
    Ok((body, partial))
}

fn block_json(b: &Block) -> Value {
    match b {
        Block::Delta { seg, k } => json!({ "kind": "delta", "rho": seg.rho.id(), "x": seg.x, "y": seg.y, "k": k }),
        Block::Zel { rho, from, to, k } => json!({ "kind": "zel", "rho": rho.id(), "from": from, "to": to, "k": k }),
    }
}

fn tau_bad_json(t: &crate::decide::TauBad) -> Value {
    json!({
        "segments": t.segments.iter().map(|s| json!({ "rho": s.rho.id(), "x": Rat(s.x), "y": Rat(s.y) })).collect::<Vec<_>>(),
        "tempered": t.tempered.iter().map(|b| json!({ "rho": b.rho.id(), "a": b.a, "mult": b.mult })).collect::<Vec<_>>(),
    })
}

fn sz(p: &Payload, ctx: &Ctx, opts: &Options) -> Result<(Value, bool), String> {
    let g = ctx.general(need(&p.datum, "datum", Command::Sz)?)?;
    let basis = "negative Δ-blocks first, then Z-blocks read off the Aubert dual of the remaining representation";
    match sz_decompose(&g, &limits(opts)).map_err(|e| e.to_string())? {
        SzOutcome::NeedsOracle { reason, tau_bad_minus, tau_minus } => Ok((
            json!({
                "verdict": "needs-oracle",
                "basis": basis,
                "reason": reason,
                "tau_bad_minus": tau_bad_json(&tau_bad_minus),
                "tau_minus": tau_minus.iter().map(|(s, k)| seg_json(s, *k)).collect::<Vec<_>>(),
            }),
            true,
        )),
        SzOutcome::Done(sz) => {
            let chain: Vec<Value> = sz
                .chain
                .iter()
                .map(|c| json!({ "block": block_json(&c.block), "datum": c.datum.as_ref().map(datum_json) }))
                .collect();
            let open = sz.chain.iter().any(|c| c.datum.is_none()) || !sz.pi0_uncertified.is_empty();
            let mut body = json!({
                "verdict": if open { "partial" } else { "done" },
                "basis": basis,
                "tau_bad_minus": tau_bad_json(&sz.tau_bad_minus),
                "tau_minus": sz.tau_minus.iter().map(|(s, k)| seg_json(s, *k)).collect::<Vec<_>>(),
                "tau_plus": sz.tau_plus.iter().map(|(s, k)| seg_json(s, *k)).collect::<Vec<_>>(),
                "pi0": datum_json(&sz.pi0),
                "pi_prime": datum_json(&sz.pi_prime),
                "hat_pi_prime": datum_json(&sz.hat_pi_prime),
                "hat_pi0": datum_json(&sz.hat_pi0),
                "chain": chain,
                "tie_broken": sz.tie_broken,
                "pi0_uncertified": sz.pi0_uncertified.iter().map(|(r, x)| json!({ "rho": r.id(), "x": x })).collect::<Vec<_>>(),
            });
            if open {
                body["reason"] = json!(Reason::VanishingUndetermined);
            }
            Ok((body, open))
        }
    }
}

fn is_unitary(p: &Payload, ctx: &Ctx, opts: &Options) -> Result<(Value, bool), String> {
    let g = ctx.general(need(&p.datum, "datum", Command::IsUnitary)?)?;
    let pure = g.bad_segments.is_empty() && g.bad_tempered.is_empty();
    let mut body;
    let partial;
    if pure {
        let v = is_unitary_good_parity(&g.good, &limits(opts)).map_err(|e| e.to_string())?;
        body = json!({
            "verdict": v.status(),
            "basis": "a good-parity representation is unitary exactly when it is of Arthur type",
            "datum": datum_json(&g.good),
        });
        match &v {
            UnitaryVerdict::Unitary(e) => body["witness"] = ext_json(e),
            UnitaryVerdict::Unknown(r) => body["reason"] = json!(r),
            UnitaryVerdict::NotUnitary => {}
        }
        partial = matches!(v, UnitaryVerdict::Unknown(_));
    } else {
        let v = unitary_necessary(&g, &limits(opts)).map_err(|e| e.to_string())?;
        body = json!({
            "verdict": v.status(),
            "basis": "a unitary representation has a good part of Arthur type; the converse needs the bad part",
            "datum": datum_json(&g.good),
        });
        match &v {
            NecessaryVerdict::Unitary(e) | NecessaryVerdict::PossiblyUnitary(e) => body["witness"] = ext_json(e),
            NecessaryVerdict::Unknown(r) => body["reason"] = json!(r),
            NecessaryVerdict::NotUnitary => {}
        }
        partial = matches!(v, NecessaryVerdict::Unknown(_) | NecessaryVerdict::PossiblyUnitary(_));
    }
    Ok((body, partial))
}

enum OracleChoice {
    Sub(SubprocessOracle),
    Fixture(FixtureOracle),
    Stub(StubOracle),
}

impl OracleChoice {
    fn get(&self) -> &dyn IrreducibilityOracle {
        match self {
            OracleChoice::Sub(o) => o,
            OracleChoice::Fixture(o) => o,
            OracleChoice::Stub(o) => o,
        }
    }

    fn describe(&self) -> &'static str {
        match self {
            OracleChoice::Sub(_) => "subprocess",
            OracleChoice::Fixture(_) => "fixture",
            OracleChoice::Stub(_) => "stub",
        }
    }
}

fn oracle_for(p: &Payload, ctx: &Ctx, opts: &Options) -> Result<OracleChoice, String> {
    match opts.oracle.as_deref() {
        None => Ok(if p.oracle_fixture.is_empty() {
            OracleChoice::Stub(StubOracle(Answer::Unknown))
        } else {
            OracleChoice::Fixture(FixtureOracle::new(ctx.fixture(&p.oracle_fixture)?))
        }),
        Some(s) if s.starts_with("stub:") => match &s[5..] {
            "irreducible" => Ok(OracleChoice::Stub(StubOracle(Answer::Irreducible))),
            "reducible" => Ok(OracleChoice::Stub(StubOracle(Answer::Reducible))),
            "unknown" => Ok(OracleChoice::Stub(StubOracle(Answer::Unknown))),
            other => Err(format!("unknown stub answer {other:?}")),
        },
        Some(s) if s.starts_with("fixture:") => {
            let path = &s[8..];
            let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
            let f: Payload = parse(&text).map_err(|e| format!("{path}: {e}"))?;
            let fctx = Ctx::new(&[p.cusps.clone(), f.cusps].concat(), ctx.group)?;
            Ok(OracleChoice::Fixture(FixtureOracle::new(fctx.fixture(&f.oracle_fixture)?)))
        }
        Some(cmd) => Ok(OracleChoice::Sub(SubprocessOracle::spawn(cmd)?)),
    }
}

fn weak(p: &Payload, ctx: &Ctx, opts: &Options) -> Result<(Value, bool), String> {
    let b = ctx.beyond(need(&p.beyond, "beyond", Command::WeakCheck)?)?;
    let oracle = oracle_for(p, ctx, opts)?;
    let r = weak_check(&b, oracle.get(), &limits(opts)).map_err(|e| e.to_string())?;
    let groups: Vec<Value> = r
        .groups
        .iter()
        .map(|g| {
            let mut v = json!({
                "rho": g.rho.id(),
                "c": g.c,
                "d": g.d,
                "members": g.members,
                "condition": g.condition(),
                "holds": g.holds(),
            });
            match &g.check {
                GroupCheck::Multiset { dual, dual_members, lhs, rhs, .. } => {
                    v["dual"] = json!(dual.id());
                    v["dual_members"] = json!(dual_members);
                    v["exponents"] = json!(lhs.iter().map(|x| Rat(*x)).collect::<Vec<_>>());
                    v["dual_exponents"] = json!(rhs.iter().map(|x| Rat(*x)).collect::<Vec<_>>());
                }
                GroupCheck::Induction { answer, frp } => {
                    v["answer"] = json!(answer);
                    v["frp"] = json!(frp.map(Rat));
                }
                GroupCheck::Even => v["multiplicity"] = json!("even"),
            }
            v
        })
        .collect();
    let mut body = json!({
        "verdict": r.verdict.status(),
        "basis": "unitarity of Sp(ρ,c,d)|·|^x ⋊ π_0 with 0 ≤ x < 1/2: (i) matching exponents between ρ and its dual, (ii) irreducibility of Sp(ρ,c,d) ⋊ π_0 at odd multiplicity",
        "pi0": datum_json(&r.pi0),
        "groups": groups,
        "oracle": oracle.describe(),
    });
    match &r.verdict {
        UnitaryVerdict::Unitary(e) => body["witness"] = ext_json(e),
        UnitaryVerdict::Unknown(reason) => body["reason"] = json!(reason),
        UnitaryVerdict::NotUnitary => {}
    }
    if let OracleChoice::Sub(s) = &oracle {
        let errs = s.errors();
        if !errs.is_empty() {
            body["oracle_errors"] = json!(errs);
        }
    }
    Ok((body, matches!(r.verdict, UnitaryVerdict::Unknown(_))))
}

/// Random DDR multi-segments on the trivial line, checked against the closed formula, dimension
/// conservation and the dual involution.
fn selfcheck(group: GroupType, seed: u64) -> (Value, bool) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rho = Rho::trivial();
    // the trivial line has good parity on integers for Sp and on half-integers for SOodd
    let off = if group == GroupType::Sp { 0 } else { 1 };
    let (mut tried, mut valid, mut failures) = (0u32, 0u32, vec![]);
    while tried < 200 {
        tried += 1;
        let n = rng.gen_range(1..=4);
        let mut b2: i64 = off + 2 * rng.gen_range(0..2);
        let mut blocks = vec![];
        for _ in 0..n {
            let a2 = b2 + 2 * rng.gen_range(0..3);
            let (a, b) = (HalfInt::from_twice(a2), HalfInt::from_twice(b2));
            let len = a.int_diff(b) as u32 + 1;
            let l = rng.gen_range(0..=len / 2);
            let eta = if rng.gen_bool(0.5) { 1 } else { -1 };
            blocks.push(ExtSegment::new(rho.clone(), a, b, l, eta).expect("well-formed block"));
            b2 = a2 + 2 + 2 * rng.gen_range(0..2);
        }
        let e = ExtMultiSegment::new(blocks, group);
        if !e.is_valid() || !is_ddr(&e) {
            continue;
        }
        valid += 1;
        let d = match eval_ddr(&e) {
            Ok(d) => d,
            Err(err) => {
                failures.push(format!("{e:?}: {err}"));
                continue;
            }
        };
        if eval(&e) != Evaluation::Datum(d.clone()) {
            failures.push(format!("{e:?}: evaluation disagrees with the closed formula"));
        }
        if d.dim() != e.dim() {
            failures.push(format!("{e:?}: dimension {} of π(ℰ) against {} of ψ", d.dim(), e.dim()));
        }
        if let Some(dd) = dual_ext(&e).as_ref().and_then(dual_ext) {
            if !amseg::equivalent(&dd, &e) {
                failures.push(format!("{e:?}: dual is not an involution"));
            }
        }
    }
    let ok = failures.is_empty();
    (
        json!({
            "verdict": if ok { "pass" } else { "fail" },
            "basis": "closed formula for DDR multi-segments, dimension conservation and the dual involution",
            "seed": seed,
            "tried": tried,
            "valid": valid,
            "failures": failures,
        }),
        !ok,
    )
}
