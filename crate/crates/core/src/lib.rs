//! Edge Mostar index computation, isomorphism-free enumeration of connected
//! graphs with few cycles, and tooling for extremal tricyclic and bicyclic
//! graphs.

pub mod braces;
pub mod canon;
pub mod enumerate;
pub mod error;
pub mod families;
pub mod graph;
pub mod graph6;
pub mod harness;
pub mod invariants;
pub mod transforms;

pub use canon::{canonical_form, canonical_labeling, is_isomorphic, CanonicalForm};
pub use error::{Error, Result};
pub use graph::{Edge, Graph};
pub use graph6::{parse_graph6, write_graph6};
pub use invariants::{edge_mostar, edge_report, vertex_mostar};
