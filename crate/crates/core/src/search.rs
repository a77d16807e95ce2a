//! Homomorphism search and everything reduced to it: surjectivity, coreness, cores.
//!
//! The solver is a backtracking search over source vertices in a static order with forward
//! checking on bit-vector domains. Domains are first made arc consistent at the root. Source
//! components are solved independently. Values are tried in increasing target index, so the
//! witness returned is the lexicographically least one under the static variable order, whatever
//! the thread count.

use std::collections::{BinaryHeap, VecDeque};
use std::cmp::Reverse;
use std::ops::ControlFlow;
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::{next_set_bit, words_for, BitSet};
use crate::digraph::Digraph;
use crate::error::Result;
use crate::map::VertexMap;
use crate::product::{product_of, Product};

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;
pub const DEFAULT_MAX_VERTICES: usize = 250_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Search nodes allowed per connected component of a single homomorphism query.
    pub node_budget: u64,
    /// Largest digraph any product construction may build.
    pub max_vertices: usize,
    /// Run independent sub-searches on the rayon pool.
    pub parallel: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            node_budget: DEFAULT_NODE_BUDGET,
            max_vertices: DEFAULT_MAX_VERTICES,
            parallel: false,
        }
    }
}

/// Three-valued answer; `Inconclusive` means a search budget ran out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    True,
    False,
    Inconclusive,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }

    pub fn is_true(self) -> bool {
        self == Verdict::True
    }

    /// Conjunction: a definite `False` wins over `Inconclusive`.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::False, _) | (_, Verdict::False) => Verdict::False,
            (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
            _ => Verdict::True,
        }
    }

    pub fn negate(self) -> Verdict {
        match self {
            Verdict::True => Verdict::False,
            Verdict::False => Verdict::True,
            Verdict::Inconclusive => Verdict::Inconclusive,
        }
    }

    pub fn all<I: IntoIterator<Item = Verdict>>(it: I) -> Verdict {
        it.into_iter().fold(Verdict::True, Verdict::and)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome<T> {
    Found(T),
    Absent,
    Inconclusive,
}

impl<T> Outcome<T> {
    pub fn verdict(&self) -> Verdict {
        match self {
            Outcome::Found(_) => Verdict::True,
            Outcome::Absent => Verdict::False,
            Outcome::Inconclusive => Verdict::Inconclusive,
        }
    }

    pub fn found(&self) -> Option<&T> {
        match self {
            Outcome::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn into_found(self) -> Option<T> {
        match self {
            Outcome::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Outcome::Found(_))
    }
}

/// Restrictions on a homomorphism search.
#[derive(Clone, Debug, Default)]
pub struct Constraints {
    pins: Vec<(usize, usize)>,
    allowed: Vec<(usize, Vec<usize>)>,
    forbidden_targets: Vec<usize>,
}

impl Constraints {
    pub fn new() -> Self {
        Self::default()
    }

    /// Require `source -> target`.
    pub fn pin(mut self, source: usize, target: usize) -> Self {
        self.pins.push((source, target));
        self
    }

    /// Restrict the image of `source` to `targets`.
    pub fn allow(mut self, source: usize, targets: Vec<usize>) -> Self {
        self.allowed.push((source, targets));
        self
    }

    /// Exclude `target` from every image; a search into `H - target`.
    pub fn avoid(mut self, target: usize) -> Self {
        self.forbidden_targets.push(target);
        self
    }
}

/// Result of checking that every homomorphism `G -> H` is onto.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Surjectivity {
    /// No homomorphism exists at all.
    NoHomomorphism,
    Surjective,
    /// A homomorphism missing at least one target vertex.
    NotSurjective(VertexMap),
    Inconclusive,
}

impl Surjectivity {
    pub fn verdict(&self) -> Verdict {
        match self {
            Surjectivity::Surjective => Verdict::True,
            Surjectivity::NoHomomorphism | Surjectivity::NotSurjective(_) => Verdict::False,
            Surjectivity::Inconclusive => Verdict::Inconclusive,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CoreResult {
    /// Induced subgraph of the input on `vertices`.
    pub core: Digraph,
    /// Vertices of the input that form the core, ascending.
    pub vertices: Vec<usize>,
    /// Idempotent endomorphism of the input whose image is `vertices`.
    pub retract: VertexMap,
    /// False when some minimality test ran out of budget.
    pub certified: bool,
}

enum DfsEnd {
    Exhausted,
    Stopped,
    Budget,
    Cancelled,
}

struct Cancel<'a> {
    first_stop: Option<&'a AtomicUsize>,
    index: usize,
    parent: Option<&'a Cancel<'a>>,
}

impl Cancel<'_> {
    const NEVER: Cancel<'static> = Cancel {
        first_stop: None,
        index: 0,
        parent: None,
    };

    fn is_set(&self) -> bool {
        self.first_stop
            .is_some_and(|f| f.load(Ordering::Relaxed) < self.index)
            || self.parent.is_some_and(Cancel::is_set)
    }
}

/// Homomorphism search engine with a node budget and cumulative counters.
#[derive(Debug, Default)]
pub struct Engine {
    config: SearchConfig,
    nodes: AtomicU64,
    searches: AtomicU64,
}

impl Engine {
    pub fn new(config: SearchConfig) -> Self {
        Engine {
            config,
            nodes: AtomicU64::new(0),
            searches: AtomicU64::new(0),
        }
    }

    pub fn config(&self) -> &SearchConfig {
        &self.config
    }

    /// Search nodes visited so far by all queries on this engine.
    pub fn nodes(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed)
    }

    /// Number of homomorphism queries answered so far.
    pub fn searches(&self) -> u64 {
        self.searches.load(Ordering::Relaxed)
    }

    pub fn hom(&self, g: &Digraph, h: &Digraph) -> Outcome<VertexMap> {
        self.find_homomorphism(g, h, &Constraints::default())
    }

    pub fn hom_exists(&self, g: &Digraph, h: &Digraph) -> Verdict {
        self.hom(g, h).verdict()
    }

    pub fn find_homomorphism(
        &self,
        g: &Digraph,
        h: &Digraph,
        constraints: &Constraints,
    ) -> Outcome<VertexMap> {
        let (out, nodes) = self.find_inner(g, h, constraints, &Cancel::NEVER);
        self.nodes.fetch_add(nodes, Ordering::Relaxed);
        out
    }

    fn find_inner(
        &self,
        g: &Digraph,
        h: &Digraph,
        constraints: &Constraints,
        cancel: &Cancel<'_>,
    ) -> (Outcome<VertexMap>, u64) {
        self.searches.fetch_add(1, Ordering::Relaxed);
        let Some(domains) = initial_domains(g, h, constraints) else {
            return (Outcome::Absent, 0);
        };
        let components = g.weak_components();
        let solve = |i: usize, inner: &Cancel<'_>| {
            if cancel.is_set() {
                return ((DfsEnd::Cancelled, Vec::new()), 0);
            }
            let comp = &components[i];
            let order = variable_order(g, comp, &domains);
            let mut witness = Vec::new();
            let (end, nodes) = dfs(g, h, &order, &domains, self.config.node_budget, inner, |a| {
                witness = order.iter().copied().zip(a.iter().copied()).collect();
                false
            });
            ((end, witness), nodes)
        };
        let stop = |r: &(DfsEnd, Vec<(usize, usize)>)| matches!(r.0, DfsEnd::Exhausted);
        let (results, nodes) = self.run_ordered_within(cancel, components.len(), solve, stop);
        let mut images = vec![usize::MAX; g.order()];
        let mut inconclusive = false;
        for (end, pairs) in results {
            match end {
                DfsEnd::Stopped => {
                    for (u, t) in pairs {
                        images[u] = t;
                    }
                }
                DfsEnd::Exhausted => return (Outcome::Absent, nodes),
                DfsEnd::Budget | DfsEnd::Cancelled => inconclusive = true,
            }
        }
        if inconclusive {
            return (Outcome::Inconclusive, nodes);
        }
        (Outcome::Found(VertexMap::new(images)), nodes)
    }

    /// Visits every homomorphism `g -> h` satisfying `constraints`, in lexicographic order along
    /// the static variable order. Returns `True` if enumeration finished, `False` if the visitor broke
    /// off, `Inconclusive` if the budget ran out.
    pub fn for_each_homomorphism<F>(
        &self,
        g: &Digraph,
        h: &Digraph,
        constraints: &Constraints,
        mut visit: F,
    ) -> Verdict
    where
        F: FnMut(&VertexMap) -> ControlFlow<()>,
    {
        self.searches.fetch_add(1, Ordering::Relaxed);
        let Some(domains) = initial_domains(g, h, constraints) else {
            return Verdict::True;
        };
        let all: Vec<usize> = (0..g.order()).collect();
        let order = variable_order(g, &all, &domains);
        let mut images = vec![0usize; g.order()];
        let (end, nodes) = dfs(
            g,
            h,
            &order,
            &domains,
            self.config.node_budget,
            &Cancel::NEVER,
            |a| {
                for (&u, &t) in order.iter().zip(a) {
                    images[u] = t;
                }
                let map = VertexMap::new(images.clone());
                visit(&map).is_continue()
            },
        );
        self.nodes.fetch_add(nodes, Ordering::Relaxed);
        match end {
            DfsEnd::Exhausted => Verdict::True,
            DfsEnd::Stopped => Verdict::False,
            DfsEnd::Budget | DfsEnd::Cancelled => Verdict::Inconclusive,
        }
    }

    /// Whether every homomorphism `g -> h` is surjective: no homomorphism `g -> h - v` exists for
    /// any vertex `v` of `h`.
    pub fn all_homs_to_target_surjective(&self, g: &Digraph, h: &Digraph) -> Surjectivity {
        let first = match self.hom(g, h) {
            Outcome::Absent => return Surjectivity::NoHomomorphism,
            Outcome::Inconclusive => return Surjectivity::Inconclusive,
            Outcome::Found(f) => f,
        };
        if !first.is_surjective_onto(h.order()) {
            return Surjectivity::NotSurjective(first);
        }
        let results = self.avoiding_each_vertex(g, h);
        let mut inconclusive = false;
        for r in results {
            match r {
                Outcome::Found(f) => return Surjectivity::NotSurjective(f),
                Outcome::Inconclusive => inconclusive = true,
                Outcome::Absent => {}
            }
        }
        if inconclusive {
            Surjectivity::Inconclusive
        } else {
            Surjectivity::Surjective
        }
    }

    /// Searches `g -> h - v` for each `v` in order, stopping at the first success.
    fn avoiding_each_vertex(&self, g: &Digraph, h: &Digraph) -> Vec<Outcome<VertexMap>> {
        let (results, nodes) = self.run_ordered(
            h.order(),
            |v, cancel| self.find_inner(g, h, &Constraints::new().avoid(v), cancel),
            Outcome::is_found,
        );
        self.nodes.fetch_add(nodes, Ordering::Relaxed);
        results
    }

    /// A digraph is a core iff it admits no homomorphism to any of its vertex-deleted subgraphs.
    pub fn is_core(&self, g: &Digraph) -> Verdict {
        let mut verdict = Verdict::True;
        for r in self.avoiding_each_vertex(g, g) {
            match r {
                Outcome::Found(_) => return Verdict::False,
                Outcome::Inconclusive => verdict = Verdict::Inconclusive,
                Outcome::Absent => {}
            }
        }
        verdict
    }

    pub fn are_hom_equivalent(&self, g: &Digraph, h: &Digraph) -> Verdict {
        let there = self.hom_exists(g, h);
        if there == Verdict::False {
            return Verdict::False;
        }
        there.and(self.hom_exists(h, g))
    }

    /// Folds `g` onto a core by repeatedly mapping the current subgraph into one of its
    /// vertex-deleted subgraphs and passing to the image.
    pub fn compute_core(&self, g: &Digraph) -> CoreResult {
        let n = g.order();
        let mut current: Vec<usize> = (0..n).collect();
        // g -> positions in `current`
        let mut fold = VertexMap::identity(n);
        let certified = loop {
            let sub = g.induced(&current);
            let mut shrink = None;
            let mut inconclusive = false;
            for r in self.avoiding_each_vertex(&sub, &sub) {
                match r {
                    Outcome::Found(f) => shrink = Some(f),
                    Outcome::Inconclusive => inconclusive = true,
                    Outcome::Absent => {}
                }
            }
            let Some(f) = shrink else {
                break !inconclusive;
            };
            let image = f.image();
            let mut reindex = vec![usize::MAX; sub.order()];
            for (i, &p) in image.iter().enumerate() {
                reindex[p] = i;
            }
            fold = fold.then(&f).then(&VertexMap::new(reindex));
            current = image.iter().map(|&p| current[p]).collect();
        };
        // fold restricted to the core is an automorphism when certified; undo it so the result
        // fixes the core pointwise
        let sigma: Vec<usize> = current.iter().map(|&v| fold.apply(v)).collect();
        let mut inverse = vec![usize::MAX; sigma.len()];
        for (i, &s) in sigma.iter().enumerate() {
            inverse[s] = i;
        }
        let to_core = if inverse.iter().all(|&i| i != usize::MAX) {
            fold.then(&VertexMap::new(inverse))
        } else {
            fold
        };
        let retract = VertexMap::new(to_core.images().iter().map(|&i| current[i]).collect());
        CoreResult {
            core: g.induced(&current),
            vertices: current,
            retract,
            certified,
        }
    }

    /// Core of the tensor product of `factors`, found without searching the whole product.
    ///
    /// Each factor is first replaced by its core. A factor that receives a homomorphism from
    /// another remaining factor is then dropped, since `A x B` and `A` are equivalent when
    /// `A -> B`. Only the product of what is left is folded generically. The retract is lifted
    /// back to the full product, where the dropped coordinates follow the recorded maps.
    pub fn core_of_product(&self, factors: &[&Digraph]) -> Result<(Product, CoreResult)> {
        let full = product_of(factors, self.config.max_vertices)?;
        let cores: Vec<CoreResult> = factors.iter().map(|f| self.compute_core(f)).collect();
        let mut certified = cores.iter().all(|c| c.certified);
        let k = factors.len();
        // source[j] = (i, map from core i to core j) once j is dropped
        let mut source: Vec<Option<(usize, VertexMap)>> = vec![None; k];
        let kept = |source: &[Option<(usize, VertexMap)>], i: usize| source[i].is_none();
        'drop: loop {
            for i in 0..k {
                for j in 0..k {
                    if i == j || !kept(&source, i) || !kept(&source, j) {
                        continue;
                    }
                    match self.hom(&cores[i].core, &cores[j].core) {
                        Outcome::Found(f) => {
                            for s in source.iter_mut().flatten() {
                                if s.0 == j {
                                    *s = (i, f.then(&s.1));
                                }
                            }
                            source[j] = Some((i, f));
                            continue 'drop;
                        }
                        Outcome::Inconclusive => certified = false,
                        Outcome::Absent => {}
                    }
                }
            }
            break;
        }
        let keep: Vec<usize> = (0..k).filter(|&i| kept(&source, i)).collect();
        let reduced_factors: Vec<&Digraph> = keep.iter().map(|&i| &cores[i].core).collect();
        let reduced = product_of(&reduced_factors, self.config.max_vertices)?;
        let inner = self.compute_core(&reduced.graph);
        certified &= inner.certified;

        // position of each factor vertex inside that factor's core
        let slot: Vec<Vec<usize>> = cores
            .iter()
            .zip(factors)
            .map(|(c, f)| {
                let mut s = vec![usize::MAX; f.order()];
                for (p, &v) in c.vertices.iter().enumerate() {
                    s[v] = p;
                }
                s
            })
            .collect();
        let mut place = vec![usize::MAX; k];
        for (p, &i) in keep.iter().enumerate() {
            place[i] = p;
        }
        let lift = |x: usize| -> usize {
            let y = reduced.coords(x);
            let coords: Vec<usize> = (0..k)
                .map(|j| match &source[j] {
                    None => cores[j].vertices[y[place[j]]],
                    Some((i, f)) => cores[j].vertices[f.apply(y[place[*i]])],
                })
                .collect();
            full.index_of(&coords)
        };
        let images: Vec<usize> = (0..full.graph.order())
            .map(|v| {
                let c = full.coords(v);
                let down: Vec<usize> = keep
                    .iter()
                    .map(|&i| slot[i][cores[i].retract.apply(c[i])])
                    .collect();
                lift(inner.retract.apply(reduced.index_of(&down)))
            })
            .collect();
        let mut vertices: Vec<usize> = inner.vertices.iter().map(|&x| lift(x)).collect();
        vertices.sort_unstable();
        let result = CoreResult {
            core: full.graph.induced(&vertices),
            vertices,
            retract: VertexMap::new(images),
            certified,
        };
        Ok((full, result))
    }

    /// Runs `f(0), f(1), ...` and keeps results up to and including the first one for which
    /// `stop` holds. In parallel mode later items may run speculatively and are discarded, so
    /// both the results and the node counts match the sequential run.
    fn run_ordered<T, F, S>(&self, n: usize, f: F, stop: S) -> (Vec<T>, u64)
    where
        T: Send,
        F: Fn(usize, &Cancel<'_>) -> (T, u64) + Sync,
        S: Fn(&T) -> bool + Sync,
    {
        self.run_ordered_within(&Cancel::NEVER, n, f, stop)
    }

    fn run_ordered_within<T, F, S>(
        &self,
        outer: &Cancel<'_>,
        n: usize,
        f: F,
        stop: S,
    ) -> (Vec<T>, u64)
    where
        T: Send,
        F: Fn(usize, &Cancel<'_>) -> (T, u64) + Sync,
        S: Fn(&T) -> bool + Sync,
    {
        if !self.config.parallel || n < 2 {
            let mut out = Vec::new();
            let mut nodes = 0;
            for i in 0..n {
                let (t, c) = f(i, outer);
                nodes += c;
                let halt = stop(&t);
                out.push(t);
                if halt {
                    break;
                }
            }
            return (out, nodes);
        }
        let first = AtomicUsize::new(usize::MAX);
        let raw: Vec<Option<(T, u64)>> = (0..n)
            .into_par_iter()
            .map(|i| {
                if first.load(Ordering::Relaxed) < i {
                    return None;
                }
                let cancel = Cancel {
                    first_stop: Some(&first),
                    index: i,
                    parent: Some(outer),
                };
                let (t, c) = f(i, &cancel);
                if stop(&t) {
                    first.fetch_min(i, Ordering::Relaxed);
                }
                Some((t, c))
            })
            .collect();
        let cut = first.load(Ordering::Relaxed);
        let mut out = Vec::new();
        let mut nodes = 0;
        for (i, r) in raw.into_iter().enumerate() {
            if i > cut {
                break;
            }
            let (t, c) = r.expect("items before the first stop always run");
            nodes += c;
            out.push(t);
        }
        (out, nodes)
    }
}

fn initial_domains(g: &Digraph, h: &Digraph, c: &Constraints) -> Option<Vec<BitSet>> {
    let m = h.order();
    let mut base = BitSet::full(m);
    for &t in &c.forbidden_targets {
        base.remove(t);
    }
    let mut domains = vec![base; g.order()];
    for (u, targets) in &c.allowed {
        let mut allowed = BitSet::new(m);
        for &t in targets {
            if t < m {
                allowed.insert(t);
            }
        }
        domains[*u].intersect_with(&allowed);
    }
    for &(u, t) in &c.pins {
        let keep = domains[u].contains(t);
        domains[u] = BitSet::new(m);
        if keep {
            domains[u].insert(t);
        }
    }
    arc_consistency(g, h, &mut domains).then_some(domains)
}

/// AC-3 over the arc constraints; false on a domain wipe-out.
fn arc_consistency(g: &Digraph, h: &Digraph, domains: &mut [BitSet]) -> bool {
    let n = g.order();
    if domains.iter().any(BitSet::is_empty) {
        return false;
    }
    let mut queue: VecDeque<usize> = (0..n).collect();
    let mut queued = vec![true; n];
    while let Some(u) = queue.pop_front() {
        queued[u] = false;
        let mut changed = false;
        let candidates: Vec<usize> = domains[u].iter().collect();
        for t in candidates {
            let supported = g
                .out_neighbors(u)
                .all(|w| h.out_row(t).intersects(&domains[w]))
                && g.in_neighbors(u)
                    .all(|w| h.in_row(t).intersects(&domains[w]));
            if !supported {
                domains[u].remove(t);
                changed = true;
            }
        }
        if domains[u].is_empty() {
            return false;
        }
        if changed {
            for w in g.neighbors(u) {
                if !queued[w] {
                    queued[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    true
}

/// Static variable order for `vertices` (one or more components): pinned vertices first, then
/// greedily the vertex with most already-ordered neighbours, ties broken by degree then index.
fn variable_order(g: &Digraph, vertices: &[usize], domains: &[BitSet]) -> Vec<usize> {
    let mut conn = vec![0usize; g.order()];
    let mut member = vec![false; g.order()];
    for &v in vertices {
        member[v] = true;
    }
    let key = |v: usize, c: usize| {
        let singleton = domains[v].count() == 1;
        let degree = g.out_degree(v) + g.in_degree(v);
        (singleton, c, degree, Reverse(v))
    };
    let mut heap: BinaryHeap<_> = vertices.iter().map(|&v| key(v, 0)).collect();
    let mut placed = vec![false; g.order()];
    let mut order = Vec::with_capacity(vertices.len());
    while let Some((_, c, _, Reverse(v))) = heap.pop() {
        if placed[v] || c != conn[v] {
            continue;
        }
        placed[v] = true;
        order.push(v);
        for w in g.neighbors(v) {
            if member[w] && !placed[w] {
                conn[w] += 1;
                heap.push(key(w, conn[w]));
            }
        }
    }
    order
}

/// Backtracking with forward checking over `order`. `on_solution` receives images by position
/// and returns whether to keep enumerating.
fn dfs<F>(
    g: &Digraph,
    h: &Digraph,
    order: &[usize],
    domains: &[BitSet],
    budget: u64,
    cancel: &Cancel<'_>,
    mut on_solution: F,
) -> (DfsEnd, u64)
where
    F: FnMut(&[usize]) -> bool,
{
    let len = order.len();
    let words = words_for(h.order());
    let mut pos = vec![usize::MAX; g.order()];
    for (d, &v) in order.iter().enumerate() {
        pos[v] = d;
    }
    // forward neighbours of each position: (later position, needs out-arc, needs in-arc)
    let forward: Vec<Vec<(usize, bool, bool)>> = order
        .iter()
        .enumerate()
        .map(|(d, &u)| {
            g.neighbors(u)
                .into_iter()
                .filter(|&w| pos[w] != usize::MAX && pos[w] > d)
                .map(|w| (pos[w], g.has_arc(u, w), g.has_arc(w, u)))
                .collect()
        })
        .collect();
    let mut dom = vec![0u64; len * words];
    for (d, &v) in order.iter().enumerate() {
        dom[d * words..(d + 1) * words].copy_from_slice(domains[v].words());
    }
    let mut trail: Vec<(usize, u64)> = Vec::new();
    let mut next = vec![0usize; len];
    let mut mark = vec![0usize; len];
    let mut assign = vec![0usize; len];
    let mut nodes: u64 = 0;

    let undo = |dom: &mut Vec<u64>, trail: &mut Vec<(usize, u64)>, to: usize| {
        while trail.len() > to {
            let (i, old) = trail.pop().unwrap();
            dom[i] = old;
        }
    };

    if len == 0 {
        return if on_solution(&assign) {
            (DfsEnd::Exhausted, 0)
        } else {
            (DfsEnd::Stopped, 0)
        };
    }

    let mut d = 0usize;
    loop {
        if d == len {
            if !on_solution(&assign) {
                return (DfsEnd::Stopped, nodes);
            }
            d = len - 1;
            undo(&mut dom, &mut trail, mark[d]);
            continue;
        }
        match next_set_bit(&dom[d * words..(d + 1) * words], next[d]) {
            None => {
                if d == 0 {
                    return (DfsEnd::Exhausted, nodes);
                }
                next[d] = 0;
                d -= 1;
                undo(&mut dom, &mut trail, mark[d]);
            }
            Some(t) => {
                nodes += 1;
                if nodes > budget {
                    return (DfsEnd::Budget, nodes);
                }
                if nodes & 0xfff == 0 && cancel.is_set() {
                    return (DfsEnd::Cancelled, nodes);
                }
                next[d] = t + 1;
                mark[d] = trail.len();
                assign[d] = t;
                let out_t = h.out_row(t).words();
                let in_t = h.in_row(t).words();
                let mut consistent = true;
                for &(p, need_out, need_in) in &forward[d] {
                    let base = p * words;
                    let mut any = 0u64;
                    for i in 0..words {
                        let mut mask = !0u64;
                        if need_out {
                            mask &= out_t[i];
                        }
                        if need_in {
                            mask &= in_t[i];
                        }
                        let old = dom[base + i];
                        let new = old & mask;
                        if new != old {
                            trail.push((base + i, old));
                            dom[base + i] = new;
                        }
                        any |= new;
                    }
                    if any == 0 {
                        consistent = false;
                        break;
                    }
                }
                if consistent {
                    d += 1;
                } else {
                    undo(&mut dom, &mut trail, mark[d]);
                }
            }
        }
    }
}
