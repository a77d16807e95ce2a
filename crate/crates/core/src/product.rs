//! Tensor (categorical) products with row-major pair indexing.

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::map::VertexMap;

/// A product digraph together with the orders of its factors.
///
/// Vertex `v` has coordinates given by the mixed-radix expansion of `v` over the factor orders,
/// most significant first, so a binary product indexes `(i, j)` as `i * |H| + j`.
#[derive(Clone, Debug)]
pub struct Product {
    pub graph: Digraph,
    factor_orders: Vec<usize>,
}

impl Product {
    pub fn factor_orders(&self) -> &[usize] {
        &self.factor_orders
    }

    pub fn coords(&self, mut v: usize) -> Vec<usize> {
        let mut c = vec![0; self.factor_orders.len()];
        for (slot, &n) in c.iter_mut().zip(&self.factor_orders).rev() {
            *slot = v % n;
            v /= n;
        }
        c
    }

    pub fn index_of(&self, coords: &[usize]) -> usize {
        assert_eq!(coords.len(), self.factor_orders.len());
        coords
            .iter()
            .zip(&self.factor_orders)
            .fold(0, |acc, (&c, &n)| acc * n + c)
    }

    /// Projection onto factor `i`.
    pub fn projection(&self, i: usize) -> VertexMap {
        VertexMap::new((0..self.graph.order()).map(|v| self.coords(v)[i]).collect())
    }

    /// The map `x -> (φ_1(x), ..., φ_k(x))` into the product induced by maps into each factor.
    pub fn pairing(&self, maps: &[&VertexMap]) -> VertexMap {
        assert_eq!(maps.len(), self.factor_orders.len());
        let n = maps.first().map_or(0, |m| m.len());
        VertexMap::new(
            (0..n)
                .map(|x| {
                    let c: Vec<usize> = maps.iter().map(|m| m.apply(x)).collect();
                    self.index_of(&c)
                })
                .collect(),
        )
    }
}

pub fn tensor_product(g: &Digraph, h: &Digraph, max_vertices: usize) -> Result<Product> {
    product_of(&[g, h], max_vertices)
}

/// Tensor product of any number of factors; the empty product is rejected.
pub fn product_of(factors: &[&Digraph], max_vertices: usize) -> Result<Product> {
    if factors.is_empty() {
        return Err(Error::InvalidParameters("empty product".into()));
    }
    let orders: Vec<usize> = factors.iter().map(|g| g.order()).collect();
    let mut total: usize = 1;
    for &n in &orders {
        total = total.checked_mul(n).unwrap_or(usize::MAX);
    }
    if total > max_vertices {
        return Err(Error::CapacityExceeded {
            requested: total,
            budget: max_vertices,
        });
    }
    let mut graph = Digraph::empty(total);
    let arc_lists: Vec<Vec<(usize, usize)>> = factors.iter().map(|g| g.arcs().collect()).collect();
    if arc_lists.iter().all(|a| !a.is_empty()) {
        let mut pick = vec![0usize; factors.len()];
        'outer: loop {
            let (mut tail, mut head) = (0usize, 0usize);
            for (f, &i) in pick.iter().enumerate() {
                let (u, v) = arc_lists[f][i];
                tail = tail * orders[f] + u;
                head = head * orders[f] + v;
            }
            graph.add_arc(tail, head);
            for f in (0..factors.len()).rev() {
                pick[f] += 1;
                if pick[f] < arc_lists[f].len() {
                    continue 'outer;
                }
                pick[f] = 0;
            }
            break;
        }
    }
    let product = Product {
        graph,
        factor_orders: orders,
    };
    let labels = (0..total)
        .map(|v| {
            let parts: Vec<String> = product
                .coords(v)
                .iter()
                .zip(factors)
                .map(|(&c, g)| g.label(c))
                .collect();
            format!("({})", parts.join(","))
        })
        .collect();
    Ok(Product {
        graph: product.graph.with_labels(labels),
        factor_orders: product.factor_orders,
    })
}
