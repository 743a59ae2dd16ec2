//! Symmetric invariant elements of finite lattices.
//!
//! Given a finite lattice, a finite set of endomorphism generators and a
//! codimension, [`engine::engine_run`] turns any element `N` into an
//! invariant element `H` with `codim H <= f^{t-1}(codim N)`, where
//! `f(x) = x(x + 1)` and `t` is the arity of the (monotone, multilinear)
//! property to be preserved. The instance modules apply it to edge sets of
//! graphs, normal subgroups of finite groups and subsets of point sets and
//! relational structures.

pub mod clause;
pub mod codim;
pub mod engine;
pub mod error;
pub mod geomset;
pub mod graph;
pub mod group;
pub mod idset;
pub mod lattice;
pub mod oracle;
pub mod perm;
pub mod predicate;

pub use clause::Clause;
pub use codim::{iterate_f, Codim};
pub use engine::{engine_run, greedy_select, orbit_closure, EngineRun, EngineTrace, Step};
pub use error::{Error, Result};
pub use idset::IdSet;
pub use lattice::{dualize, CofiniteLattice, Dual, Lattice};
pub use predicate::{compose_predicates, lemma1_check, FnPredicate, FnRowPredicate, Predicate, RowPredicate};
