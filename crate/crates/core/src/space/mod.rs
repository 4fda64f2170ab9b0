//! Finite models of compact spaces: metric spaces with a boundary, partial
//! group actions, simplicial complexes and their ℓ1 geometry.

mod action;
mod complex;
mod l1;
mod metric;
mod models;

pub use action::{ActionReport, PartialAction};
pub use complex::{SimplicialComplex, VertexAction};
pub use l1::L1Point;
pub use metric::FiniteMetricSpace;
pub use models::{interval_compactification, stable_points, tree_boundary_model, CompactificationModel};
