//! The arc gadget: replace every arc of a digraph by a copy of the join of an edge and a
//! 5-cycle to obtain an undirected graph that remembers orientations.
//!
//! For an arc `u -> v` the copy has vertex classes `{v, k}` (the edge) and `{u, c1, c2, c3, c4}`
//! (the cycle `u c1 c2 c3 c4`), with every edge between the two classes. `k` and `c1..c4` are
//! fresh. Graphs are stored as symmetric digraphs.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::map::VertexMap;
use crate::product::tensor_product;
use crate::search::{Constraints, Engine, Outcome, Verdict};

/// Vertices of one gadget copy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetBlock {
    pub tail: usize,
    pub head: usize,
    /// Fresh partner of `head` on the edge side.
    pub edge_partner: usize,
    /// The 5-cycle in cyclic order; `cycle[0]` is `tail`.
    pub cycle: [usize; 5],
}

impl GadgetBlock {
    /// Same order as the vertices of `gadget()`: tail, head, partner, rest of the cycle.
    pub fn vertices(&self) -> [usize; 7] {
        let c = self.cycle;
        [c[0], self.head, self.edge_partner, c[1], c[2], c[3], c[4]]
    }
}

/// Layout of a gadget graph, serializable as a sidecar to its edge list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetLayout {
    pub origin_order: usize,
    /// One block per arc of the source, in lexicographic arc order.
    pub blocks: Vec<GadgetBlock>,
}

impl GadgetLayout {
    /// Sends every vertex to a source vertex: originals to themselves, the edge partner of a
    /// block to its head and the rest of its cycle to its tail.
    pub fn collapse(&self) -> Vec<usize> {
        let mut to = (0..self.origin_order).collect::<Vec<_>>();
        for b in &self.blocks {
            to.push(b.head);
            to.extend(std::iter::repeat(b.tail).take(4));
        }
        to
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetGraph {
    pub graph: Digraph,
    pub layout: GadgetLayout,
}

/// Source vertices keep their indices; each arc appends five fresh vertices.
pub fn build_gadget_graph(d: &Digraph) -> GadgetGraph {
    let n = d.order();
    let arcs: Vec<(usize, usize)> = d.arcs().collect();
    let total = n + 5 * arcs.len();
    let mut graph = Digraph::empty(total);
    let mut blocks = Vec::with_capacity(arcs.len());
    for (i, &(u, v)) in arcs.iter().enumerate() {
        let base = n + 5 * i;
        let block = GadgetBlock {
            tail: u,
            head: v,
            edge_partner: base,
            cycle: [u, base + 1, base + 2, base + 3, base + 4],
        };
        add_gadget_edges(&mut graph, &block);
        blocks.push(block);
    }
    let mut labels: Vec<String> = (0..n).map(|v| d.label(v)).collect();
    for &(u, v) in &arcs {
        let (lu, lv) = (d.label(u), d.label(v));
        labels.push(format!("{lu}>{lv}:k"));
        for j in 1..5 {
            labels.push(format!("{lu}>{lv}:c{j}"));
        }
    }
    GadgetGraph {
        graph: graph.with_labels(labels),
        layout: GadgetLayout {
            origin_order: n,
            blocks,
        },
    }
}

fn add_gadget_edges(g: &mut Digraph, b: &GadgetBlock) {
    g.add_digon(b.head, b.edge_partner);
    for i in 0..5 {
        g.add_digon(b.cycle[i], b.cycle[(i + 1) % 5]);
        g.add_digon(b.head, b.cycle[i]);
        g.add_digon(b.edge_partner, b.cycle[i]);
    }
}

/// The gadget itself: the gadget graph of a single arc `0 -> 1`.
pub fn gadget() -> Digraph {
    build_gadget_graph(&Digraph::directed_path(2)).graph
}

/// Number of vertices of the gadget graph of a digraph with `n` vertices and `arcs` arcs.
pub fn gadget_order(n: usize, arcs: usize) -> usize {
    n + 5 * arcs
}

/// Whether the graph has a homomorphism to the complete graph on four vertices.
pub fn is_4_colorable(engine: &Engine, g: &Digraph) -> Verdict {
    engine.hom_exists(g, &Digraph::complete(4))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetReport {
    pub digraph_hom: Verdict,
    pub digraph_witness: Option<Vec<usize>>,
    pub graph_hom: Verdict,
    pub graph_witness: Option<Vec<usize>>,
    /// Both searches conclusive and in agreement.
    pub equivalent: Verdict,
    /// Every graph homomorphism, restricted to the source vertices, is a digraph homomorphism.
    /// False as soon as the target has an arc: rotating a gadget's 5-cycle moves the tail off
    /// the original vertices.
    pub restrictions_are_homs: Verdict,
    pub restriction_counterexample: Option<Vec<usize>>,
    /// Every graph homomorphism, restricted to the source vertices and followed by
    /// `GadgetLayout::collapse` of the target, is a digraph homomorphism.
    pub induced_maps_are_homs: Verdict,
    pub induced_counterexample: Option<Vec<usize>>,
    /// Pinned searches run for the two checks above.
    pub searches: usize,
}

/// Compares `d1 -> d2` with `G[d1] -> G[d2]` and checks what graph homomorphisms do to the
/// source vertices, both literally and after collapsing target blocks onto their arcs. Refuses targets whose underlying graph is not 4-colourable.
pub fn verify_gadget_equivalence(engine: &Engine, d1: &Digraph, d2: &Digraph) -> Result<GadgetReport> {
    match is_4_colorable(engine, &d2.underlying()) {
        Verdict::True => {}
        Verdict::False => {
            return Err(Error::InvalidParameters(
                "hypothesis unmet: underlying graph of the target is not 4-colorable".into(),
            ))
        }
        Verdict::Inconclusive => {
            return Err(Error::InvalidParameters(
                "could not decide 4-colorability of the target within budget".into(),
            ))
        }
    }
    let (g1, g2) = (build_gadget_graph(d1), build_gadget_graph(d2));
    let digraph = engine.hom(d1, d2);
    let graph = engine.hom(&g1.graph, &g2.graph);
    let equivalent = match (digraph.verdict(), graph.verdict()) {
        (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
        (a, b) => Verdict::from_bool(a == b),
    };
    let probe = |probes: &[Constraints]| {
        let mut verdict = Verdict::True;
        for c in probes {
            match engine.find_homomorphism(&g1.graph, &g2.graph, c) {
                Outcome::Found(f) => return (Verdict::False, Some(f.into_images())),
                Outcome::Inconclusive => verdict = Verdict::Inconclusive,
                Outcome::Absent => {}
            }
        }
        (verdict, None)
    };
    // the literal restriction fails exactly when some source vertex lands off the target's
    // original vertices, or some arc lands on a pair that is not an arc
    let n2 = d2.order();
    let outside: Vec<usize> = (n2..g2.graph.order()).collect();
    let mut literal: Vec<Constraints> = (0..d1.order())
        .map(|u| Constraints::new().allow(u, outside.clone()))
        .collect();
    for (u, v) in d1.arcs() {
        for a in 0..n2 {
            for b in 0..n2 {
                if !d2.has_arc(a, b) {
                    literal.push(Constraints::new().pin(u, a).pin(v, b));
                }
            }
        }
    }
    // after collapsing each target block onto its arc, an arc u -> v breaks the induced map
    // when u lands on x and v on a neighbour y of x whose collapsed pair is not an arc
    let collapse = g2.layout.collapse();
    let mut induced = Vec::new();
    for (u, v) in d1.arcs() {
        for x in 0..g2.graph.order() {
            let bad: Vec<usize> = g2
                .graph
                .out_neighbors(x)
                .filter(|&y| !d2.has_arc(collapse[x], collapse[y]))
                .collect();
            if !bad.is_empty() {
                induced.push(Constraints::new().pin(u, x).allow(v, bad));
            }
        }
    }
    let (restrictions_are_homs, restriction_counterexample) = probe(&literal);
    let (induced_maps_are_homs, induced_counterexample) = probe(&induced);
    Ok(GadgetReport {
        digraph_hom: digraph.verdict(),
        digraph_witness: digraph.into_found().map(VertexMap::into_images),
        graph_hom: graph.verdict(),
        graph_witness: graph.into_found().map(VertexMap::into_images),
        equivalent,
        restrictions_are_homs,
        restriction_counterexample,
        induced_maps_are_homs,
        induced_counterexample,
        searches: literal.len() + induced.len(),
    })
}

/// Shape of a homomorphic image: order, edge count and sorted degrees.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ImageShape {
    pub order: usize,
    pub edges: usize,
    pub degrees: Vec<usize>,
}

impl ImageShape {
    pub fn of(g: &Digraph) -> ImageShape {
        let mut degrees: Vec<usize> = (0..g.order()).map(|v| g.neighbors(v).len()).collect();
        degrees.sort_unstable();
        let edges = g.underlying().arc_count() / 2;
        ImageShape {
            order: g.order(),
            edges,
            degrees,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageClass {
    pub shape: ImageShape,
    /// Vertex partitions of the gadget realising this image.
    pub partitions: usize,
    /// One partition, as a class index per gadget vertex.
    pub example: Vec<usize>,
}

/// Every homomorphic image of the gadget, grouped by shape. Images are quotients by
/// partitions into independent sets; these are enumerated as colourings with canonical
/// (first-occurrence) class labels into the complete graph on seven vertices.
pub fn gadget_image_catalog(engine: &Engine) -> Result<Vec<ImageClass>> {
    let g = gadget();
    let n = g.order();
    let mut partitions: Vec<Vec<usize>> = Vec::new();
    let done = engine.for_each_homomorphism(&g, &Digraph::complete(n), &Constraints::new(), |f| {
        let mut relabel = vec![usize::MAX; n];
        let mut next = 0;
        let canon: Vec<usize> = f
            .images()
            .iter()
            .map(|&c| {
                if relabel[c] == usize::MAX {
                    relabel[c] = next;
                    next += 1;
                }
                relabel[c]
            })
            .collect();
        partitions.push(canon);
        ControlFlow::Continue(())
    });
    if done != Verdict::True {
        return Err(Error::BudgetExceeded("gadget colouring enumeration".into()));
    }
    partitions.sort();
    partitions.dedup();
    let mut classes: BTreeMap<ImageShape, ImageClass> = BTreeMap::new();
    for p in partitions {
        let q = quotient(&g, &p);
        let shape = ImageShape::of(&q);
        classes
            .entry(shape.clone())
            .or_insert_with(|| ImageClass {
                shape,
                partitions: 0,
                example: p.clone(),
            })
            .partitions += 1;
    }
    let mut out: Vec<ImageClass> = classes.into_values().collect();
    out.sort_by(|a, b| b.shape.cmp(&a.shape));
    Ok(out)
}

/// Quotient of `g` by a partition given as class indices `0..m`.
pub fn quotient(g: &Digraph, classes: &[usize]) -> Digraph {
    let m = classes.iter().max().map_or(0, |&c| c + 1);
    let mut q = Digraph::empty(m);
    for (u, v) in g.arcs() {
        let (a, b) = (classes[u], classes[v]);
        assert_ne!(a, b, "partition classes must be independent");
        q.add_arc(a, b);
    }
    q
}

/// The embedding of `G[d1 x d2]` into `G[d1] x G[d2]` that pairs corresponding vertices of
/// gadget copies. Returns the map and whether it is an injective homomorphism.
pub fn diagonal_embedding(d1: &Digraph, d2: &Digraph, max_vertices: usize) -> Result<(VertexMap, bool)> {
    let p = tensor_product(d1, d2, max_vertices)?;
    let gp = build_gadget_graph(&p.graph);
    let (g1, g2) = (build_gadget_graph(d1), build_gadget_graph(d2));
    let target = tensor_product(&g1.graph, &g2.graph, max_vertices)?;
    let block_of = |layout: &GadgetLayout, tail: usize, head: usize| {
        *layout
            .blocks
            .iter()
            .find(|b| b.tail == tail && b.head == head)
            .expect("product arcs come from factor arcs")
    };
    let mut images = vec![usize::MAX; gp.graph.order()];
    for v in 0..p.graph.order() {
        images[v] = target.index_of(&p.coords(v));
    }
    for b in &gp.layout.blocks {
        let (t, h) = (p.coords(b.tail), p.coords(b.head));
        let b1 = block_of(&g1.layout, t[0], h[0]);
        let b2 = block_of(&g2.layout, t[1], h[1]);
        images[b.edge_partner] = target.index_of(&[b1.edge_partner, b2.edge_partner]);
        for i in 1..5 {
            images[b.cycle[i]] = target.index_of(&[b1.cycle[i], b2.cycle[i]]);
        }
    }
    let map = VertexMap::new(images);
    let injective = map.image().len() == map.len();
    let ok = injective && map.is_homomorphism(&gp.graph, &target.graph);
    Ok((map, ok))
}

/// Compares `|G[core(d1 x ... )]|` with `|core(G[d1] x ...)|` for a small family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoreSizeComparison {
    pub gadget_of_core: usize,
    pub core_of_gadgets: usize,
    pub certified: bool,
}

pub fn compare_core_sizes(engine: &Engine, family: &[Digraph]) -> Result<CoreSizeComparison> {
    let refs: Vec<&Digraph> = family.iter().collect();
    let (_, core) = engine.core_of_product(&refs)?;
    let gadgets: Vec<Digraph> = family.iter().map(|d| build_gadget_graph(d).graph).collect();
    let grefs: Vec<&Digraph> = gadgets.iter().collect();
    let (_, gcore) = engine.core_of_product(&grefs)?;
    Ok(CoreSizeComparison {
        gadget_of_core: gadget_order(core.core.order(), core.core.arc_count()),
        core_of_gadgets: gcore.core.order(),
        certified: core.certified && gcore.certified,
    })
}

/// Vertex counts of the gadget graphs of cones over the smallest and largest members of the
/// mountain family with `m` peaks.
pub fn cone_gadget_orders(m: usize) -> (usize, usize) {
    let (lo, hi) = crate::mountain::extreme_orders(m);
    (16 * lo - 4, 16 * hi - 4)
}
