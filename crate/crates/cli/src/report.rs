//! The JSON run report and the exit-code contract.

use std::time::Instant;

use coreprod::{Engine, Verdict};
use serde::Serialize;
use serde_json::Value;

use crate::input::{Input, InputDigest};

#[derive(Serialize)]
pub struct Budget {
    pub node_budget: u64,
    pub max_vertices: usize,
}

#[derive(Serialize)]
pub struct CheckReport {
    pub name: String,
    pub verdict: Verdict,
    /// Search nodes spent on this check alone.
    pub nodes: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

#[derive(Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub budget: Budget,
    pub checks: Vec<CheckReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<Value>,
    pub verdict: Verdict,
    pub nodes: u64,
    pub searches: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

/// Collects checks while a command runs, charging each the nodes it used.
pub struct Recorder<'e> {
    engine: &'e Engine,
    command: Vec<String>,
    inputs: Vec<InputDigest>,
    checks: Vec<CheckReport>,
    output: Option<Value>,
    started: Instant,
}

impl<'e> Recorder<'e> {
    pub fn new(engine: &'e Engine, command: Vec<String>) -> Self {
        Recorder {
            engine,
            command,
            inputs: Vec::new(),
            checks: Vec::new(),
            output: None,
            started: Instant::now(),
        }
    }

    pub fn engine(&self) -> &'e Engine {
        self.engine
    }

    pub fn input(&mut self, input: &Input) {
        self.inputs.push(input.digest());
    }

    /// Runs `f` and records its verdict, witness and detail.
    pub fn check<F>(&mut self, name: &str, f: F) -> Verdict
    where
        F: FnOnce(&Engine) -> (Verdict, Option<Value>, Option<Value>),
    {
        let before = self.engine.nodes();
        let (verdict, witness, detail) = f(self.engine);
        self.checks.push(CheckReport {
            name: name.to_string(),
            verdict,
            nodes: self.engine.nodes() - before,
            witness,
            detail,
        });
        verdict
    }

    /// Records a verdict computed elsewhere; `nodes` is whatever the caller measured.
    pub fn push(&mut self, name: &str, verdict: Verdict, nodes: u64, witness: Option<Value>, detail: Option<Value>) {
        self.checks.push(CheckReport {
            name: name.to_string(),
            verdict,
            nodes,
            witness,
            detail,
        });
    }

    pub fn output(&mut self, value: Value) {
        self.output = Some(value);
    }

    pub fn finish(self, timings: bool) -> RunReport {
        let verdict = overall(self.checks.iter().map(|c| c.verdict));
        let config = self.engine.config();
        RunReport {
            command: self.command,
            inputs: self.inputs,
            budget: Budget {
                node_budget: config.node_budget,
                max_vertices: config.max_vertices,
            },
            checks: self.checks,
            output: self.output,
            verdict,
            nodes: self.engine.nodes(),
            searches: self.engine.searches(),
            elapsed_ms: timings.then(|| self.started.elapsed().as_millis()),
        }
    }
}

/// A definite failure outranks an inconclusive check.
pub fn overall(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
    let mut out = Verdict::True;
    for v in verdicts {
        match v {
            Verdict::False => return Verdict::False,
            Verdict::Inconclusive => out = Verdict::Inconclusive,
            Verdict::True => {}
        }
    }
    out
}

pub fn exit_code(v: Verdict) -> u8 {
    match v {
        Verdict::True => 0,
        Verdict::False => 1,
        Verdict::Inconclusive => 2,
    }
}
