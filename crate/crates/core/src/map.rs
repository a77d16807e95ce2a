use serde::{Deserialize, Serialize};

use crate::digraph::Digraph;

/// A total map between vertex index sets, used as a homomorphism or retract witness.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexMap(Vec<usize>);

impl VertexMap {
    pub fn new(images: Vec<usize>) -> Self {
        VertexMap(images)
    }

    pub fn identity(n: usize) -> Self {
        VertexMap((0..n).collect())
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn into_images(self) -> Vec<usize> {
        self.0
    }

    #[inline]
    pub fn apply(&self, v: usize) -> usize {
        self.0[v]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True iff this map is total on `source` and sends every arc of `source` to an arc of `target`.
    pub fn is_homomorphism(&self, source: &Digraph, target: &Digraph) -> bool {
        self.0.len() == source.order()
            && self.0.iter().all(|&t| t < target.order())
            && source
                .arcs()
                .all(|(u, v)| target.has_arc(self.0[u], self.0[v]))
    }

    /// `other ∘ self`: apply `self`, then `other`.
    pub fn then(&self, other: &VertexMap) -> VertexMap {
        VertexMap(self.0.iter().map(|&v| other.0[v]).collect())
    }

    pub fn is_idempotent(&self) -> bool {
        self.0.iter().all(|&v| v < self.0.len() && self.0[v] == v)
    }

    /// Sorted, deduplicated image.
    pub fn image(&self) -> Vec<usize> {
        let mut im = self.0.clone();
        im.sort_unstable();
        im.dedup();
        im
    }

    pub fn is_surjective_onto(&self, target_order: usize) -> bool {
        self.image().len() == target_order
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_c6_onto_c3() {
        let c6 = Digraph::directed_cycle(6);
        let c3 = Digraph::directed_cycle(3);
        let wrap = VertexMap::new((0..6).map(|i| i % 3).collect());
        assert!(wrap.is_homomorphism(&c6, &c3));
        assert!(wrap.is_surjective_onto(3));
        let shift = VertexMap::new(vec![1, 2, 0]);
        assert!(wrap.then(&shift).is_homomorphism(&c6, &c3));
        assert!(!VertexMap::new(vec![0; 6]).is_homomorphism(&c6, &c3));
    }

    #[test]
    fn retract_is_idempotent() {
        assert!(VertexMap::new(vec![0, 1, 0, 1]).is_idempotent());
        assert!(!VertexMap::new(vec![1, 0]).is_idempotent());
    }
}
