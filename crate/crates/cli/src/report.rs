//! Verification reports: one record per check, plus lifting certificates
//! and digests of the inputs. Rendering is deterministic; timings are
//! included only on request.

use std::fmt::Write;
use std::time::Duration;

use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub object: String,
    pub status: Status,
    /// Location of the failure, or a short summary; `-` when empty.
    pub witness: String,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Default)]
pub struct VerificationReport {
    pub context: Vec<(String, String)>,
    pub inputs: Vec<(String, String)>,
    pub checks: Vec<Check>,
    pub certificates: Vec<String>,
    pub notes: Vec<String>,
}

fn token(s: &str) -> String {
    if s.is_empty() {
        "-".into()
    } else {
        s.split_whitespace().collect::<Vec<_>>().join("_")
    }
}

impl VerificationReport {
    pub fn new() -> Self {
        let mut r = Self::default();
        r.context.push(("version".into(), env!("CARGO_PKG_VERSION").into()));
        r
    }

    pub fn context(&mut self, key: &str, value: impl Into<String>) {
        self.context.push((key.into(), value.into()));
    }

    pub fn input(&mut self, name: &str, bytes: &[u8]) {
        self.inputs.push((name.into(), hex::encode(Sha256::digest(bytes))));
    }

    pub fn check(&mut self, name: &str, object: &str, status: Status, witness: impl Into<String>, elapsed: Duration) {
        self.checks.push(Check {
            name: name.into(),
            object: object.into(),
            status,
            witness: witness.into(),
            elapsed,
        });
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    pub fn count(&self, s: Status) -> usize {
        self.checks.iter().filter(|c| c.status == s).count()
    }

    /// 0 all pass, 1 any failure, 2 inconclusive but no failure.
    pub fn exit_code(&self) -> i32 {
        if self.count(Status::Fail) > 0 {
            1
        } else if self.count(Status::Inconclusive) > 0 {
            2
        } else {
            0
        }
    }

    pub fn render(&self, timing: bool) -> String {
        let mut out = String::from("report simpcube\n");
        for (k, v) in &self.context {
            writeln!(out, "{} {v}", token(k)).unwrap();
        }
        for (name, digest) in &self.inputs {
            writeln!(out, "input {} sha256={digest}", token(name)).unwrap();
        }
        for n in &self.notes {
            writeln!(out, "note {n}").unwrap();
        }
        for c in &self.checks {
            writeln!(
                out,
                "check {} {} {} {}",
                token(&c.name),
                token(&c.object),
                c.status.as_str(),
                token(&c.witness)
            )
            .unwrap();
            if timing {
                writeln!(out, "time {} {} {}us", token(&c.name), token(&c.object), c.elapsed.as_micros()).unwrap();
            }
        }
        for cert in &self.certificates {
            writeln!(out, "{cert}").unwrap();
        }
        writeln!(
            out,
            "summary pass={} fail={} inconclusive={}",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Inconclusive)
        )
        .unwrap();
        out
    }
}
