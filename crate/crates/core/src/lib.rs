//! Homomorphisms, cores and tensor products of small digraphs, with the bounded-path lattice,
//! mountain families, cones, orthogonality checks and the edge gadget that turns digraphs into
//! graphs.

pub mod bitset;
pub mod cone;
pub mod digraph;
pub mod error;
pub mod gadget;
pub mod map;
pub mod mountain;
pub mod orthogonal;
pub mod path;
pub mod product;
pub mod search;
pub mod sum;

pub use digraph::Digraph;
pub use error::{Error, Result};
pub use map::VertexMap;
pub use product::{product_of, tensor_product, Product};
pub use search::{
    Constraints, CoreResult, Engine, Outcome, SearchConfig, Surjectivity, Verdict,
};
