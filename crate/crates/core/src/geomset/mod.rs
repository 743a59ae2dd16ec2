//! Subset-lattice instances beyond graphs: rational point sets with their
//! distance symmetries, and candidate pools under a "respects" relation.

pub mod points;
pub mod runs;
pub mod team;
pub mod tuples;

pub use points::{isometry_group, on_common_sphere, Isometries, PointSet, RationalPoint};
pub use runs::{cospherical_subsets, sphere_invariant_run, team_invariant_run, SetOutcome};
pub use team::{efficient_team_check, inefficient_groups, Relation, SelfRespect};
pub use tuples::{k_subsets, ForbiddenTuples};
