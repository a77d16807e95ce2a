//! Digraph arguments: a file in the text format, or an inline literal.

use std::fs;

use anyhow::{bail, Context, Result};
use coreprod::cone::cone;
use coreprod::mountain::MountainSeq;
use coreprod::path::PathWord;
use coreprod::Digraph;
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const LITERAL_HELP: &str = "a digraph file, or one of mountain:3,1@k=3  word:U D U@k=3  \
cycle:N  dipath:N (N arcs)  complete:N  empty:N  cone:<any of these>";

/// A loaded digraph argument together with what identifies it in a report.
pub struct Input {
    pub source: String,
    pub graph: Digraph,
    pub sha256: String,
}

#[derive(Serialize)]
pub struct InputDigest {
    pub source: String,
    pub sha256: String,
    pub order: usize,
    pub arcs: usize,
}

impl Input {
    pub fn digest(&self) -> InputDigest {
        InputDigest {
            source: self.source.clone(),
            sha256: self.sha256.clone(),
            order: self.graph.order(),
            arcs: self.graph.arc_count(),
        }
    }
}

fn sha256(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn load(spec: &str) -> Result<Input> {
    let (graph, bytes) = match literal(spec)? {
        Some(g) => (g, spec.as_bytes().to_vec()),
        None => {
            let bytes = fs::read(spec).with_context(|| format!("reading {spec}: expected {LITERAL_HELP}"))?;
            let text = String::from_utf8(bytes.clone()).with_context(|| format!("{spec} is not UTF-8"))?;
            (from_file_text(&text).with_context(|| format!("parsing {spec}"))?, bytes)
        }
    };
    Ok(Input {
        source: spec.to_string(),
        graph,
        sha256: sha256(&bytes),
    })
}

fn count(rest: &str, what: &str) -> Result<usize> {
    rest.trim()
        .parse()
        .with_context(|| format!("{what} needs a vertex count, got {rest:?}"))
}

fn literal(spec: &str) -> Result<Option<Digraph>> {
    let Some((kind, rest)) = spec.split_once(':') else {
        return Ok(None);
    };
    let g = match kind {
        "mountain" => rest.parse::<MountainSeq>()?.to_word().to_digraph(),
        "word" => rest.parse::<PathWord>()?.to_digraph(),
        "cycle" => {
            let n = count(rest, "cycle")?;
            if n < 2 {
                bail!("cycle:{n} would need a loop");
            }
            Digraph::directed_cycle(n)
        }
        "dipath" => Digraph::directed_path(count(rest, "dipath")? + 1),
        "complete" => Digraph::complete(count(rest, "complete")?),
        "empty" => Digraph::empty(count(rest, "empty")?),
        "cone" => match literal(rest)? {
            Some(g) => cone(&g).into_graph(),
            None => cone(&load(rest)?.graph).into_graph(),
        },
        _ => return Ok(None),
    };
    Ok(Some(g))
}

/// The text format, or a file holding a single word or mountain literal.
fn from_file_text(text: &str) -> Result<Digraph> {
    match Digraph::parse(text) {
        Ok(g) => Ok(g),
        Err(err) => {
            let body: String = text
                .lines()
                .map(|l| l.split('#').next().unwrap_or("").trim())
                .filter(|l| !l.is_empty())
                .collect::<Vec<_>>()
                .join(" ");
            if let Ok(m) = body.parse::<MountainSeq>() {
                return Ok(m.to_word().to_digraph());
            }
            if let Ok(w) = body.parse::<PathWord>() {
                return Ok(w.to_digraph());
            }
            Err(err.into())
        }
    }
}
