//! Irreducibility oracle in a child process: one JSON request per line on its stdin, one JSON
//! response per line on its stdout.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::dto::{datum_dto, DatumDto, FactorDto, Rat, SCHEMA_VERSION};
use crate::repdata::{CuspSymbol, GroupType, LanglandsDatum, Rho};
use crate::unitary::{Answer, Factor, InductionQuery, IrreducibilityOracle};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "query", rename_all = "kebab-case")]
pub enum OracleRequest {
    Induction { schema_version: u32, group: GroupType, cusps: Vec<CuspSymbol>, rho: String, c: u32, d: u32, pi0: DatumDto },
    FullInduction { schema_version: u32, group: GroupType, cusps: Vec<CuspSymbol>, factors: Vec<FactorDto>, pi0: DatumDto },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResponse {
    pub answer: Answer,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frp: Option<Rat>,
}

struct Io {
    child: Child,
    stdin: Option<ChildStdin>,
    stdout: BufReader<ChildStdout>,
}

/// Answers are cached by request; failures become `Unknown` and are kept in `errors`.
pub struct SubprocessOracle {
    io: Mutex<Io>,
    cache: Mutex<BTreeMap<String, OracleResponse>>,
    errors: Mutex<Vec<String>>,
}

impl SubprocessOracle {
    /// Runs `cmd` through the shell.
    pub fn spawn(cmd: &str) -> Result<Self, String> {
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(cmd)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| format!("cannot start oracle {cmd:?}: {e}"))?;
        let stdin = child.stdin.take().expect("piped");
        let stdout = BufReader::new(child.stdout.take().expect("piped"));
        Ok(SubprocessOracle {
            io: Mutex::new(Io { child, stdin: Some(stdin), stdout }),
            cache: Mutex::new(BTreeMap::new()),
            errors: Mutex::new(vec![]),
        })
    }

    pub fn errors(&self) -> Vec<String> {
        self.errors.lock().expect("oracle lock").clone()
    }

    fn exchange(&self, req: &OracleRequest) -> Option<OracleResponse> {
        let line = serde_json::to_string(req).expect("serializable request");
        if let Some(r) = self.cache.lock().expect("oracle lock").get(&line) {
            return Some(r.clone());
        }
        let res = {
            let mut guard = self.io.lock().expect("oracle lock");
            let io = &mut *guard;
            let mut buf = String::new();
            let stdin = io.stdin.as_mut().expect("open until drop");
            writeln!(stdin, "{line}")
                .and_then(|_| stdin.flush())
                .map_err(|e| format!("oracle write failed: {e}"))
                .and_then(|_| io.stdout.read_line(&mut buf).map_err(|e| format!("oracle read failed: {e}")))
                .and_then(|n| if n == 0 { Err("oracle closed its output".to_string()) } else { Ok(()) })
                .and_then(|_| {
                    serde_json::from_str::<OracleResponse>(&buf).map_err(|e| format!("bad oracle response {buf:?}: {e}"))
                })
        };
        match res {
            Ok(r) => {
                self.cache.lock().expect("oracle lock").insert(line, r.clone());
                Some(r)
            }
            Err(e) => {
                self.errors.lock().expect("oracle lock").push(e);
                None
            }
        }
    }

    fn ask(&self, q: &InductionQuery) -> Option<OracleResponse> {
        self.exchange(&OracleRequest::Induction {
            schema_version: SCHEMA_VERSION,
            group: q.pi0.group,
            cusps: symbols([&q.rho], &q.pi0),
            rho: q.rho.id().into(),
            c: q.c,
            d: q.d,
            pi0: datum_dto(&q.pi0),
        })
    }
}

fn symbols<'a>(rhos: impl IntoIterator<Item = &'a Rho>, pi0: &LanglandsDatum) -> Vec<CuspSymbol> {
    let mut out: BTreeMap<String, CuspSymbol> = BTreeMap::new();
    for r in rhos.into_iter().cloned().chain(pi0.rhos()) {
        out.insert(r.id().into(), r.symbol().clone());
    }
    out.into_values().collect()
}

impl Drop for SubprocessOracle {
    fn drop(&mut self) {
        if let Ok(io) = self.io.get_mut() {
            // end of input is the end of the session
            drop(io.stdin.take());
            let deadline = Instant::now() + Duration::from_secs(2);
            while matches!(io.child.try_wait(), Ok(None)) && Instant::now() < deadline {
                std::thread::sleep(Duration::from_millis(10));
            }
            let _ = io.child.kill();
            let _ = io.child.wait();
        }
    }
}

impl IrreducibilityOracle for SubprocessOracle {
    fn induction(&self, q: &InductionQuery) -> Answer {
        self.ask(q).map_or(Answer::Unknown, |r| r.answer)
    }

    fn frp(&self, q: &InductionQuery) -> Option<Rational64> {
        self.ask(q).and_then(|r| r.frp).map(|r| r.0)
    }

    fn full_induction(&self, factors: &[Factor], pi0: &LanglandsDatum) -> Answer {
        let req = OracleRequest::FullInduction {
            schema_version: SCHEMA_VERSION,
            group: pi0.group,
            cusps: symbols(factors.iter().map(|f| &f.rho), pi0),
            factors: factors
                .iter()
                .map(|f| FactorDto { rho: f.rho.id().into(), c: f.c, d: f.d, x: Rat(f.x) })
                .collect(),
            pi0: datum_dto(pi0),
        };
        self.exchange(&req).map_or(Answer::Unknown, |r| r.answer)
    }
}
