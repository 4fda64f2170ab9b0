//! Conversions between the ways of witnessing equivariant asymptotic
//! dimension: long covers, antidiagonally Lipschitz maps into simplicial
//! complexes, almost equivariant maps, disjoint families and covers of
//! bounded `(G, d)`-multiplicity. Also the structural verifiers for
//! zero-dimensional covers and the abelian obstruction.

mod maps;
mod multiplicity;
mod partition;
mod structure;

pub use maps::{
    cover_to_map, map_to_disjoint_families, nerve, phi_to_psi, psi_to_phi, AlmostEquivariantMap, CoverToMap,
    DisjointFamilies, EquivariantMap,
};
pub use multiplicity::{cover_to_multiplicity_cover, multiplicity_to_lebesgue_cover, MultiplicityCertificate, PaddedCertificate};
pub use partition::{partition_lu, PartitionLu, Weights};
pub use structure::{abelian_obstruction_check, zero_dim_structure_check, ObstructionReport, ZeroDimReport};
