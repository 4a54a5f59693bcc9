//! Command reports, rendered either as JSON or as text.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use mrbad_core::cohomology::CochainMrbad;
use mrbad_core::{CheckReport, MultiTensor, Scalar};
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Which check produced it: `pair`, `bimodule`, `order 2`, …
    pub check: String,
    pub identity: String,
    pub witness: Vec<usize>,
    pub residual: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub witnesses: Vec<Witness>,
    pub results: BTreeMap<String, Value>,
}

impl Report {
    pub fn new(command: &str, status: Status) -> Report {
        Report {
            command: command.to_string(),
            status,
            witnesses: Vec::new(),
            results: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.results.insert(key.to_string(), value.into());
    }

    pub fn witness(&mut self, check: &str, identity: &str, witness: &[usize], residual: &[Scalar]) {
        self.witnesses.push(Witness {
            check: check.to_string(),
            identity: identity.to_string(),
            witness: witness.to_vec(),
            residual: residual.iter().map(Scalar::to_exact_string).collect(),
        });
        self.status = Status::Fail;
    }

    /// Copies the violations of `report`; any violation makes this a failure.
    pub fn add_check(&mut self, check: &str, report: &CheckReport) {
        for v in &report.violations {
            self.witness(check, &v.identity, &v.witness, &v.residual);
        }
    }

    /// One witness per nonzero entry of `t`.
    pub fn add_nonzero_entries(&mut self, check: &str, identity: &str, t: &MultiTensor) {
        for idx in mrbad_core::tensor::BasisTuples::new(t.shape()) {
            let v = t.value(&idx);
            if v.iter().any(|x| !x.is_zero()) {
                self.witness(check, identity, &idx, v);
            }
        }
    }

    /// Witnesses for every nonzero component of a cochain named by `names`
    /// in the order `f, g, h, k`.
    pub fn add_nonzero_cochain(&mut self, check: &str, names: [&str; 4], c: &CochainMrbad) {
        self.add_nonzero_entries(check, names[0], &c.top.f);
        if let Some(g) = &c.top.g {
            self.add_nonzero_entries(check, names[1], g);
        }
        if let Some(b) = &c.bottom {
            self.add_nonzero_entries(check, names[2], &b.f);
            if let Some(k) = &b.g {
                self.add_nonzero_entries(check, names[3], k);
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Fail => 1,
            _ => 0,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let status = match self.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Value => "ok",
        };
        let mut out = format!("{}: {status}\n", self.command);
        for (k, v) in &self.results {
            match v {
                Value::String(s) if s.contains('\n') => {
                    let _ = writeln!(out, "{k}:");
                    for line in s.lines() {
                        let _ = writeln!(out, "  {line}");
                    }
                }
                Value::String(s) => {
                    let _ = writeln!(out, "{k}: {s}");
                }
                Value::Array(_) | Value::Object(_) => {
                    let _ = writeln!(out, "{k}: {}", serde_json::to_string(v).expect("plain data"));
                }
                other => {
                    let _ = writeln!(out, "{k}: {other}");
                }
            }
        }
        for w in &self.witnesses {
            let _ = writeln!(
                out,
                "  [{}] {} at {:?}: residual ({})",
                w.check,
                w.identity,
                w.witness,
                w.residual.join(", ")
            );
        }
        out
    }
}
