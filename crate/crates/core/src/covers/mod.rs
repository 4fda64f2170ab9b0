//! Covers of `Window × Points` and the checkers for the definitions they
//! are meant to witness.

mod checks;
mod ground;
mod ops;
mod predicate;

pub use checks::{
    equivariance_check, f_subset_check, family_dimension, g_multiplicity, lebesgue_check, split_boundary_parts,
    BoundarySplit, FSubsetReport, FSubsetVerdict, LebesgueReport, MultiplicityReport, OrbitInfo,
};
pub use ground::{CoverFamily, Ground, GroundAction, Subset, DEFAULT_GROUND_CAP};
pub use ops::{fiber_pad, pad, r_disjointness_check, shrink, PaddedSet};
pub use predicate::{FamilyKind, FamilyPredicate};
