//! Finite groups given by Cayley tables: subgroup operations, automorphisms,
//! outer commutator words, radical classes and the engine runs on the
//! lattice of normal subgroups.

pub mod aut;
pub mod class;
pub mod runs;
pub mod table;
pub mod word;

pub use aut::{automorphism_group, GroupAutomorphisms};
pub use class::{class_test, ClassTester};
pub use runs::{
    characteristic_subgroups, khm_run, law_predicate, parse_subgroup, series_composed_predicate, series_predicate,
    series_run, spectrum_predicate, spectrum_run, GroupOutcome, Law, Layer, NormalLattice, SpectrumOutcome,
};
pub use table::{corpus, FiniteGroup, Subgroup};
pub use word::{verbal_subgroup, Word};
