//! Cones: a digraph plus an apex joined by digons to every vertex.

use serde::{Deserialize, Serialize};

use crate::digraph::Digraph;
use crate::map::VertexMap;
use crate::product::Product;

pub const APEX_LABEL: &str = "apex";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConedDigraph {
    graph: Digraph,
    base_order: usize,
}

/// Adds vertex `|g|` with a digon to each vertex of `g`.
pub fn cone(g: &Digraph) -> ConedDigraph {
    let n = g.order();
    let mut graph = Digraph::empty(n + 1);
    for (u, v) in g.arcs() {
        graph.add_arc(u, v);
    }
    for v in 0..n {
        graph.add_digon(v, n);
    }
    let mut labels: Vec<String> = (0..n).map(|v| g.label(v)).collect();
    labels.push(APEX_LABEL.to_string());
    ConedDigraph {
        graph: graph.with_labels(labels),
        base_order: n,
    }
}

impl ConedDigraph {
    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn into_graph(self) -> Digraph {
        self.graph
    }

    pub fn base_order(&self) -> usize {
        self.base_order
    }

    pub fn apex(&self) -> usize {
        self.base_order
    }

    pub fn base(&self) -> Digraph {
        let base: Vec<usize> = (0..self.base_order).collect();
        self.graph.induced(&base)
    }
}

/// Where a vertex of a product of cones sits: which coordinates are apexes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConePart(pub Vec<bool>);

impl ConePart {
    pub fn all_apex(&self) -> bool {
        self.0.iter().all(|&a| a)
    }

    pub fn all_base(&self) -> bool {
        self.0.iter().all(|&a| !a)
    }
}

/// Part of each vertex of `product`, whose factors are cones with the given base orders.
pub fn cone_parts(product: &Product, base_orders: &[usize]) -> Vec<ConePart> {
    assert_eq!(product.factor_orders().len(), base_orders.len());
    (0..product.graph.order())
        .map(|v| {
            ConePart(
                product
                    .coords(v)
                    .iter()
                    .zip(base_orders)
                    .map(|(&c, &n)| c == n)
                    .collect(),
            )
        })
        .collect()
}

/// Whether `retract` fixes the all-apex vertex and sends the product of the bases into itself.
pub fn fixes_apex_and_base(product: &Product, base_orders: &[usize], retract: &VertexMap) -> bool {
    let parts = cone_parts(product, base_orders);
    let apex = product.index_of(base_orders);
    if retract.apply(apex) != apex {
        return false;
    }
    parts
        .iter()
        .enumerate()
        .filter(|(_, p)| p.all_base())
        .all(|(v, _)| parts[retract.apply(v)].all_base())
}
