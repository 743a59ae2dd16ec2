//! Engine runs on the cofinite subset lattice of a point set or of a
//! candidate pool.

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::Serialize;

use super::points::{isometry_group, on_common_sphere, PointSet};
use super::team::{inefficient_groups, Relation, SelfRespect};
use super::tuples::{k_subsets, ForbiddenTuples};
use crate::clause::{ensure_all, Clause};
use crate::codim::{iterate_f, Codim};
use crate::engine::{engine_run, trace_predicate_failures, EngineTrace};
use crate::error::{Error, Result};
use crate::graph::Caps;
use crate::idset::IdSet;
use crate::lattice::CofiniteLattice;
use crate::perm::Perm;
use crate::predicate::Predicate;

#[derive(Clone, Debug, Serialize)]
pub struct SetOutcome {
    /// Removed ids, sorted.
    pub removed: Vec<usize>,
    pub remaining: usize,
    pub arity: usize,
    pub bound: String,
    #[serde(serialize_with = "crate::clause::as_string")]
    pub group_order: BigUint,
    pub trace: EngineTrace<Vec<usize>>,
    pub clauses: Vec<Clause>,
}

fn removed_set(size: usize, ids: &[usize]) -> Result<IdSet> {
    if let Some(bad) = ids.iter().find(|&&i| i >= size) {
        return Err(Error::Parse(format!("id {bad} out of range 0..{size}")));
    }
    Ok(IdSet::from_iter_with_len(size, ids.iter().copied()))
}

/// Engine run plus the clauses shared by both instances; `property` is the
/// exhaustive re-verification of the defining property on the result.
fn run(
    size: usize,
    perms: Vec<Perm>,
    group_order: BigUint,
    predicate: &ForbiddenTuples,
    removed_n: &IdSet,
    caps: Caps,
    extra: impl FnOnce(&IdSet) -> Vec<Clause>,
) -> Result<SetOutcome> {
    let t = predicate.arity();
    if let Some(s) = predicate.surviving(removed_n).first() {
        return Err(Error::PreconditionViolated(format!(
            "{} violated by {:?} outside the removed set",
            predicate.name(),
            s
        )));
    }
    let lattice = CofiniteLattice::new(size, perms);
    let run = engine_run(&lattice, removed_n, t, caps.orbit)?;
    let h = run.result.clone();
    let n_len = BigRational::from_integer(removed_n.len().into());
    let bound = iterate_f(&n_len, (t - 1) as u32);
    let bound_ok = run.codim.le_f_iterate(&Codim::from_int(removed_n.len() as u64), (t - 1) as u32)?;
    let failures = trace_predicate_failures(&run.trace, predicate);
    let mut clauses = vec![Clause::new("invariant", lattice.is_invariant(&h))];
    clauses.extend(extra(&h));
    clauses.push(Clause::with_detail("codim_bound", bound_ok, format!("{} <= f^{}({})", h.len(), t - 1, removed_n.len())));
    clauses.push(Clause::with_detail(
        "remaining_nonempty",
        h.len() < size || BigRational::from_integer(size.into()) <= bound,
        format!("{} of {size} remain", size - h.len()),
    ));
    clauses.push(Clause::with_detail("trace_predicate", failures.is_empty(), format!("failing steps {failures:?}")));
    ensure_all(&clauses)?;
    Ok(SetOutcome {
        removed: h.to_vec(),
        remaining: size - h.len(),
        arity: t,
        bound: bound.to_string(),
        group_order,
        trace: run.trace.map(IdSet::to_vec),
        clauses,
    })
}

/// The `k`-subsets of the points lying on a common sphere.
pub fn cospherical_subsets(points: &PointSet, k: usize, allow_planes: bool) -> Result<Vec<Vec<usize>>> {
    let ids: Vec<usize> = (0..points.len()).collect();
    let mut out = Vec::new();
    for s in k_subsets(&ids, k) {
        if on_common_sphere(&points.subset(&s), allow_planes)? {
            out.push(s);
        }
    }
    Ok(out)
}

/// Isometry-invariant removed set `H` such that no `k` remaining points lie
/// on a common sphere, with `|H| <= f^{k-1}(|N|)`.
pub fn sphere_invariant_run(
    points: &PointSet,
    removed_n: &[usize],
    k: usize,
    allow_planes: bool,
    caps: Caps,
) -> Result<SetOutcome> {
    if k == 0 {
        return Err(Error::PreconditionViolated("arity must be at least 1".into()));
    }
    let n = removed_set(points.len(), removed_n)?;
    let predicate = ForbiddenTuples::new(
        format!("no {k} points on a common sphere"),
        k,
        cospherical_subsets(points, k, allow_planes)?,
    );
    let iso = isometry_group(points, caps.automorphism_nodes)?;
    let distances_ok = iso.generators.iter().all(|g| points.preserves_distances(g));
    let verify = |h: &IdSet| -> Vec<Clause> {
        // independent of the precomputed list: test every surviving k-subset again
        let remaining: Vec<usize> = (0..points.len()).filter(|i| !h.contains(*i)).collect();
        let witness = k_subsets(&remaining, k)
            .into_iter()
            .find(|s| on_common_sphere(&points.subset(s), allow_planes).unwrap_or(true));
        vec![
            Clause::new("distances_preserved", distances_ok),
            Clause::with_detail("sphere_free", witness.is_none(), format!("cospherical {witness:?}")),
        ]
    };
    run(points.len(), iso.generators.clone(), iso.order, &predicate, &n, caps, verify)
}

/// Relation-invariant expelled set `H` leaving a team in which every
/// `k`-subset is efficient, with `|H| <= f^{k-1}(|N|)`.
pub fn team_invariant_run(
    relation: &Relation,
    expel_n: &[usize],
    k: usize,
    self_respect: SelfRespect,
    caps: Caps,
) -> Result<SetOutcome> {
    if k == 0 {
        return Err(Error::PreconditionViolated("group size must be at least 1".into()));
    }
    let n = removed_set(relation.n, expel_n)?;
    let all: Vec<usize> = (0..relation.n).collect();
    let predicate = ForbiddenTuples::new(
        format!("every {k} remaining candidates are efficient"),
        k,
        inefficient_groups(relation, &all, k, self_respect),
    );
    let (gens, order) = relation.automorphisms(caps.automorphism_nodes)?;
    let relation_ok = gens.iter().all(|p| relation.preserved_by(p));
    let verify = |h: &IdSet| -> Vec<Clause> {
        let team: Vec<usize> = all.iter().copied().filter(|&i| !h.contains(i)).collect();
        let bad = inefficient_groups(relation, &team, k, self_respect);
        vec![
            Clause::new("relation_preserved", relation_ok),
            Clause::with_detail("team_efficient", bad.is_empty(), format!("inefficient {:?}", bad.first())),
        ]
    };
    run(relation.n, gens, order, &predicate, &n, caps, verify)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geomset::points::RationalPoint;

    fn set(v: &[(i64, i64, i64)]) -> PointSet {
        PointSet::new(v.iter().map(|&(x, y, z)| RationalPoint::from_ints(x, y, z)).collect()).unwrap()
    }

    fn octahedron() -> PointSet {
        set(&[(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)])
    }

    #[test]
    fn sphere_free_input_needs_nothing() {
        let line = set(&[(0, 0, 0), (1, 0, 0), (2, 0, 0), (3, 0, 0), (5, 0, 0)]);
        let out = sphere_invariant_run(&line, &[], 3, false, Caps::default()).unwrap();
        assert!(out.removed.is_empty());
    }

    #[test]
    fn octahedron_antipodal_pair() {
        let out = sphere_invariant_run(&octahedron(), &[4, 5], 5, false, Caps::default()).unwrap();
        assert_eq!(out.group_order, 48u32.into());
        assert!(out.remaining < 5);
        assert!(out.removed.len() <= 6);
        assert!(out.clauses.iter().all(|c| c.passed));
        assert!(matches!(
            sphere_invariant_run(&octahedron(), &[5], 5, false, Caps::default()),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn planted_team() {
        let r = Relation::new((0..12).map(|_| (0..12).map(|x| x < 7).collect()).collect()).unwrap();
        // only the five outsiders together are inefficient
        let out = team_invariant_run(&r, &[7, 8], 5, SelfRespect::Counted, Caps::default()).unwrap();
        assert!(out.removed.len() <= 42);
        assert!(out.removed.iter().all(|&x| x >= 7));
        assert!(out.clauses.iter().all(|c| c.passed));
        assert!(team_invariant_run(&r, &[], 5, SelfRespect::Counted, Caps::default()).is_err());
    }

    #[test]
    fn asymmetric_relation_keeps_input() {
        // a directed path: nobody is respected by two others
        let r = Relation::new((0..7).map(|y| (0..7).map(|x| y == x + 1).collect()).collect()).unwrap();
        let expel = vec![0, 1, 2, 3, 4];
        let out = team_invariant_run(&r, &expel, 3, SelfRespect::Counted, Caps::default()).unwrap();
        assert_eq!(out.group_order, 1u32.into());
        assert_eq!(out.removed, expel);
    }
}
