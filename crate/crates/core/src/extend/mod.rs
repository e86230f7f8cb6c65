//! The extendibility hierarchy and the entanglement-breaking criterion.

pub mod eb;
pub mod gap;
pub mod hierarchy;
pub mod membership;
pub mod omega;
pub mod products;
pub mod reduction;

pub use eb::{admissible_tuples, is_entanglement_breaking, EbDecomposition, EbTerm, EbVerdict};
pub use gap::{find_extension_gap, max_product_vertex, GapPoint};
pub use hierarchy::{dual_hierarchy_k, HierarchyOutcome, DEFAULT_MAX_LEVEL};
pub use membership::{bipartite, ext_k_membership, ExtVerdict};
pub use omega::{omega_interior_test, vertex_facet_tensor, OmegaReport};
pub use products::{
    compare_min_max, max_tensor_halfspaces, min_membership, min_tensor_generators,
    ProductComparison,
};
pub use reduction::ReductionMap;
