//! Loop-free digraphs over indexed vertex sets, with the plain-text file format and DOT export.
//!
//! A graph is a digraph whose arc relation is symmetric; an undirected edge is stored as a
//! digon `u <-> v`. Oriented graphs have no digons.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::bitset::BitSet;
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct Digraph {
    out: Vec<BitSet>,
    inn: Vec<BitSet>,
    arc_count: usize,
    labels: Option<Vec<String>>,
}

/// Structural equality: vertex count and arc relation. Labels are provenance only.
impl PartialEq for Digraph {
    fn eq(&self, other: &Self) -> bool {
        self.out == other.out
    }
}

impl Eq for Digraph {}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Digraph")
            .field("order", &self.order())
            .field("arcs", &self.arcs().collect::<Vec<_>>())
            .finish()
    }
}

impl Digraph {
    /// `n` vertices and no arcs.
    pub fn empty(n: usize) -> Self {
        Digraph {
            out: vec![BitSet::new(n); n],
            inn: vec![BitSet::new(n); n],
            arc_count: 0,
            labels: None,
        }
    }

    pub fn from_arcs<I: IntoIterator<Item = (usize, usize)>>(n: usize, arcs: I) -> Self {
        let mut g = Digraph::empty(n);
        for (u, v) in arcs {
            g.add_arc(u, v);
        }
        g
    }

    /// Inserts `u -> v`, returning false if it was already present.
    ///
    /// Panics on loops and out-of-range endpoints; use [`Digraph::parse`] for untrusted input.
    pub fn add_arc(&mut self, u: usize, v: usize) -> bool {
        assert!(u != v, "loop on vertex {u}");
        assert!(u < self.order() && v < self.order(), "arc {u} -> {v} out of range");
        let fresh = self.out[u].insert(v);
        if fresh {
            self.inn[v].insert(u);
            self.arc_count += 1;
        }
        fresh
    }

    pub fn add_digon(&mut self, u: usize, v: usize) {
        self.add_arc(u, v);
        self.add_arc(v, u);
    }

    pub fn directed_cycle(n: usize) -> Self {
        assert!(n >= 2, "directed cycles need at least two vertices");
        Digraph::from_arcs(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    /// Directed path on `n` vertices (length `n - 1`).
    pub fn directed_path(n: usize) -> Self {
        Digraph::from_arcs(n, (1..n).map(|i| (i - 1, i)))
    }

    /// Complete graph `K_n` as a symmetric digraph.
    pub fn complete(n: usize) -> Self {
        let mut g = Digraph::empty(n);
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    g.add_arc(u, v);
                }
            }
        }
        g
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.order());
        self.labels = Some(labels);
        self
    }

    pub fn order(&self) -> usize {
        self.out.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out[u].contains(v)
    }

    pub fn out_row(&self, u: usize) -> &BitSet {
        &self.out[u]
    }

    pub fn in_row(&self, u: usize) -> &BitSet {
        &self.inn[u]
    }

    pub fn out_neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.out[u].iter()
    }

    pub fn in_neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.inn[u].iter()
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.out[u].count()
    }

    pub fn in_degree(&self, u: usize) -> usize {
        self.inn[u].count()
    }

    /// Distinct neighbours in the underlying graph.
    pub fn neighbors(&self, u: usize) -> Vec<usize> {
        let mut all: Vec<usize> = self.out[u].iter().chain(self.inn[u].iter()).collect();
        all.sort_unstable();
        all.dedup();
        all
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.order()).flat_map(move |u| self.out[u].iter().map(move |v| (u, v)))
    }

    pub fn is_symmetric(&self) -> bool {
        self.arcs().all(|(u, v)| self.has_arc(v, u))
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.arcs().all(|(u, v)| !self.has_arc(v, u))
    }

    pub fn label(&self, v: usize) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => v.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Induced subgraph on `vertices`, renumbered in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Digraph {
        let mut pos = vec![usize::MAX; self.order()];
        for (i, &v) in vertices.iter().enumerate() {
            pos[v] = i;
        }
        let mut g = Digraph::empty(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for v in self.out[u].iter() {
                if pos[v] != usize::MAX {
                    g.add_arc(i, pos[v]);
                }
            }
        }
        if self.labels.is_some() {
            g.labels = Some(vertices.iter().map(|&v| self.label(v)).collect());
        }
        g
    }

    pub fn without_vertex(&self, v: usize) -> Digraph {
        let keep: Vec<usize> = (0..self.order()).filter(|&u| u != v).collect();
        self.induced(&keep)
    }

    /// Disjoint union; the vertices of `other` follow those of `self`.
    pub fn disjoint_union(&self, other: &Digraph) -> Digraph {
        let n = self.order();
        let mut g = Digraph::empty(n + other.order());
        for (u, v) in self.arcs() {
            g.add_arc(u, v);
        }
        for (u, v) in other.arcs() {
            g.add_arc(n + u, n + v);
        }
        if self.labels.is_some() || other.labels.is_some() {
            let mut labels: Vec<String> = (0..n).map(|v| self.label(v)).collect();
            labels.extend((0..other.order()).map(|v| other.label(v)));
            g.labels = Some(labels);
        }
        g
    }

    /// Symmetric closure: every arc becomes a digon.
    pub fn underlying(&self) -> Digraph {
        let mut g = Digraph::empty(self.order());
        for (u, v) in self.arcs() {
            g.add_arc(u, v);
            g.add_arc(v, u);
        }
        g.labels = self.labels.clone();
        g
    }

    /// Weakly connected components, each sorted, ordered by smallest vertex.
    pub fn weak_components(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut i = 0;
            while i < members.len() {
                let u = members[i];
                i += 1;
                for w in self.out[u].iter().chain(self.inn[u].iter()) {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Parses the text format: first line is the vertex count, then one `u -> v` (arc) or
    /// `u <-> v` (digon) per line. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Digraph> {
        let mut graph: Option<Digraph> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some(g) = graph.as_mut() else {
                let n = line.parse::<usize>().map_err(|_| Error::Syntax {
                    line: line_no,
                    message: format!("expected vertex count, found {line:?}"),
                })?;
                graph = Some(Digraph::empty(n));
                continue;
            };
            let (lhs, rhs, both) = if let Some((a, b)) = line.split_once("<->") {
                (a, b, true)
            } else if let Some((a, b)) = line.split_once("->") {
                (a, b, false)
            } else {
                return Err(Error::Syntax {
                    line: line_no,
                    message: format!("expected `u -> v` or `u <-> v`, found {line:?}"),
                });
            };
            let parse_vertex = |s: &str| -> Result<usize> {
                let s = s.trim();
                let v = s.parse::<usize>().map_err(|_| Error::Syntax {
                    line: line_no,
                    message: format!("bad vertex index {s:?}"),
                })?;
                if v >= g.order() {
                    return Err(Error::VertexOutOfRange {
                        line: line_no,
                        vertex: v,
                        order: g.order(),
                    });
                }
                Ok(v)
            };
            let u = parse_vertex(lhs)?;
            let v = parse_vertex(rhs)?;
            if u == v {
                return Err(Error::Loop {
                    line: line_no,
                    vertex: u,
                });
            }
            let pairs: &[(usize, usize)] = if both { &[(u, v), (v, u)] } else { &[(u, v)] };
            for &(a, b) in pairs {
                if !g.add_arc(a, b) {
                    return Err(Error::DuplicateArc {
                        line: line_no,
                        from: a,
                        to: b,
                    });
                }
            }
        }
        graph.ok_or(Error::Syntax {
            line: 1,
            message: "missing vertex count".into(),
        })
    }

    /// Serializes to the text format; digons are written once as `u <-> v` with `u < v`.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.order());
        for (u, v) in self.arcs() {
            if self.has_arc(v, u) {
                if u < v {
                    writeln!(s, "{u} <-> {v}").unwrap();
                }
            } else {
                writeln!(s, "{u} -> {v}").unwrap();
            }
        }
        s
    }

    /// Graphviz export: arcs as directed edges, digons as undirected edges.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("digraph \"{name}\" {{\n");
        for v in 0..self.order() {
            writeln!(s, "  {v} [label=\"{}\"];", self.label(v).replace('"', "'")).unwrap();
        }
        for (u, v) in self.arcs() {
            if self.has_arc(v, u) {
                if u < v {
                    writeln!(s, "  {u} -> {v} [dir=none];").unwrap();
                }
            } else {
                writeln!(s, "  {u} -> {v};").unwrap();
            }
        }
        s.push_str("}\n");
        s
    }
}

impl FromStr for Digraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Digraph::parse(s)
    }
}
