//! Finite desk-scale models for equivariant asymptotic dimension.
//!
//! The crate builds windows of finitely generated groups, finite
//! compactification models with (partial) group actions, covers of
//! `Window × Points`, and the transformations between the various ways of
//! witnessing equivariant asymptotic dimension: covers with G-Lebesgue
//! numbers, long covers for homotopy actions, almost-equivariant maps into
//! simplicial complexes, disjoint families and multiplicity covers.
//!
//! Every universal statement over the group is checked over the inner
//! window of a finite ball, and every report carries the window radius and
//! inner radius it was computed with. Nothing here claims anything about the
//! genuine infinite objects.

pub mod boundary;
pub mod characterisations;
pub mod covers;
pub mod error;
pub mod gen;
pub mod group;
pub mod homotopy;
pub mod io;
pub mod q;
pub mod refine;
pub mod report;
pub mod space;

pub use error::{Error, Result};
pub use q::Q;
