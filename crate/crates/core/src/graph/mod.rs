//! Finite graphs: automorphisms, constrained embeddings, planarity and the
//! edge-lattice invariant constructions.

pub mod automorphism;
pub mod embed;
pub mod gn;
pub mod invariant;
pub mod model;
pub mod planarity;

pub use automorphism::{automorphism_group, edge_orbits, induced_edge_perm, is_automorphism, Automorphisms};
pub use embed::{embed, embed_constrained, Embedding};
pub use gn::{gen_gn, GnInstance};
pub use invariant::{
    forbid_invariant, local_embed_invariant, planarize_invariant, Caps, ForbidOutcome, ForbiddenPredicate,
    LayeredOutcome, Round,
};
pub use model::{families, Edge, Graph, Vertex};
pub use planarity::{kuratowski_extract, planarity_test};
