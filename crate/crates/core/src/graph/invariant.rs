//! Invariant edge sets: forbidden subgraphs, planarization and local
//! embeddability.

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::Serialize;

use super::automorphism::{automorphism_group, Automorphisms, DEFAULT_SEARCH_CAP};
use super::embed::{embed, embed_constrained, Embedding};
use super::model::Graph;
use super::planarity::{kuratowski_extract, planarity_test};
use crate::clause::{ensure_all, Clause};
use crate::codim::{iterate_f, Codim};
use crate::engine::{engine_run, trace_predicate_failures, EngineTrace, DEFAULT_ORBIT_CAP};
use crate::error::{Error, Result};
use crate::idset::IdSet;
use crate::lattice::CofiniteLattice;
use crate::perm;
use crate::predicate::Predicate;

/// Search limits shared by the graph constructions.
#[derive(Clone, Copy, Debug)]
pub struct Caps {
    pub orbit: usize,
    pub automorphism_nodes: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { orbit: DEFAULT_ORBIT_CAP, automorphism_nodes: DEFAULT_SEARCH_CAP }
    }
}

/// "No member of the family has its `j`-th edge in the complement of the
/// `j`-th argument for every `j`." Arguments are removed sets over host
/// edge positions; a member with `e < t` edges reads only the first `e`.
pub struct ForbiddenPredicate<'a> {
    host: &'a Graph,
    family: &'a [Graph],
}

impl<'a> ForbiddenPredicate<'a> {
    pub fn new(host: &'a Graph, family: &'a [Graph]) -> Result<Self> {
        if family.is_empty() {
            return Err(Error::PreconditionViolated("empty forbidden family".into()));
        }
        if let Some(i) = family.iter().position(|g| g.edge_count() == 0) {
            return Err(Error::PreconditionViolated(format!("forbidden graph {i} has no edges")));
        }
        Ok(ForbiddenPredicate { host, family })
    }

    /// The first member embedding under the given removed sets.
    pub fn violation(&self, removed: &[IdSet]) -> Option<(usize, Embedding)> {
        self.family.iter().enumerate().find_map(|(i, pattern)| {
            let allowed: Vec<IdSet> = removed[..pattern.edge_count()].iter().map(IdSet::complement).collect();
            embed_constrained(pattern, self.host, &allowed)
                .expect("allowed sets sized to the pattern")
                .map(|e| (i, e))
        })
    }
}

impl Predicate<IdSet> for ForbiddenPredicate<'_> {
    fn arity(&self) -> usize {
        self.family.iter().map(Graph::edge_count).max().unwrap_or(0)
    }
    fn eval(&self, args: &[IdSet]) -> bool {
        self.violation(args).is_none()
    }
    fn name(&self) -> String {
        format!("forbidden subgraphs ({} members)", self.family.len())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ForbidOutcome {
    /// Removed edge ids, sorted.
    pub removed: Vec<usize>,
    pub arity: usize,
    pub bound: String,
    #[serde(serialize_with = "crate::clause::as_string")]
    pub group_order: BigUint,
    pub trace: EngineTrace<Vec<usize>>,
    pub clauses: Vec<Clause>,
}

/// Witness that `host` minus `removed` still contains a forbidden graph.
type FreeCheck<'a> = dyn Fn(&Graph, &IdSet) -> Option<(usize, Embedding)> + 'a;

fn orbit_union(auts: &Automorphisms, seed: &IdSet) -> IdSet {
    let mut out = IdSet::empty(seed.universe_len());
    for e in seed.iter() {
        for x in perm::orbit_of(e, &auts.edge_generators) {
            out.insert(x);
        }
    }
    out
}

fn is_invariant(auts: &Automorphisms, set: &IdSet) -> bool {
    auts.edge_generators
        .iter()
        .all(|p| set.iter().all(|e| set.contains(p[e])))
}

fn precondition_error(member: usize, emb: Embedding) -> Error {
    Error::PreconditionViolated(format!(
        "forbidden graph {member} embeds: vertices {:?}, edges {:?}",
        emb.vertex_map, emb.edge_map
    ))
}

fn forbid_core(
    g: &Graph,
    removed_n: &IdSet,
    family: &[Graph],
    free: &FreeCheck<'_>,
    verify_trace: bool,
    caps: Caps,
) -> Result<ForbidOutcome> {
    let predicate = ForbiddenPredicate::new(g, family)?;
    let t = predicate.arity();
    if let Some((member, emb)) = free(g, removed_n) {
        return Err(precondition_error(member, emb));
    }
    let auts = automorphism_group(g, caps.automorphism_nodes)?;
    let lattice = CofiniteLattice::new(g.edge_count(), auts.edge_generators.clone());
    let run = engine_run(&lattice, removed_n, t, caps.orbit)?;
    let h = run.result.clone();

    let bound_ok = run.codim.le_f_iterate(&Codim::from_int(removed_n.len() as u64), (t - 1) as u32)?;
    let leftover = free(g, &h);
    let mut clauses = vec![
        Clause::new("invariant", is_invariant(&auts, &h)),
        match &leftover {
            None => Clause::new("forbidden_free", true),
            Some((m, e)) => Clause::with_detail("forbidden_free", false, format!("member {m} embeds via {:?}", e.edge_map)),
        },
        Clause::with_detail("codim_bound", bound_ok, format!("{} <= f^{}({})", h.len(), t - 1, removed_n.len())),
        Clause::new("within_orbit_union", h.is_subset(&orbit_union(&auts, removed_n))),
        Clause::new("meets_removed", h.is_empty() || !h.is_disjoint(removed_n)),
    ];
    if verify_trace {
        let failures = trace_predicate_failures(&run.trace, &predicate);
        clauses.push(Clause::with_detail("trace_predicate", failures.is_empty(), format!("failing steps {failures:?}")));
    }
    ensure_all(&clauses)?;
    Ok(ForbidOutcome {
        removed: g.ids_of(&h),
        arity: t,
        bound: iterate_f(&BigRational::from_integer(removed_n.len().into()), (t - 1) as u32).to_string(),
        group_order: auts.order,
        trace: run.trace.map(|s| g.ids_of(s)),
        clauses,
    })
}

/// Invariant removed set `H̄` with `G ∖ H̄` free of the family, `|H̄| <=
/// f^{t-1}(|N̄|)` for `t` the largest member edge count, `H̄` inside the
/// automorphic images of `N̄` and meeting `N̄` unless empty.
pub fn forbid_invariant(g: &Graph, removed_n: &[usize], family: &[Graph], caps: Caps) -> Result<ForbidOutcome> {
    let n = g.positions_of(removed_n)?;
    let check = |host: &Graph, removed: &IdSet| {
        let t = family.iter().map(Graph::edge_count).max().unwrap_or(0);
        ForbiddenPredicate { host, family }.violation(&vec![removed.clone(); t])
    };
    forbid_core(g, &n, family, &check, true, caps)
}

#[derive(Clone, Debug, Serialize)]
pub struct Round {
    /// The obstruction used in this round, with its own edge ids.
    pub obstruction: Graph,
    /// Edge ids removed in this round.
    pub removed: Vec<usize>,
    pub trace: EngineTrace<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LayeredOutcome {
    pub removed: Vec<usize>,
    #[serde(serialize_with = "crate::clause::as_string")]
    pub group_order: BigUint,
    pub rounds: Vec<Round>,
    pub clauses: Vec<Clause>,
}

/// Repeatedly removes an invariant layer chosen against one obstruction of
/// the current graph until `done` accepts it.
fn layered(
    g: &Graph,
    removed_n: &IdSet,
    caps: Caps,
    done: &dyn Fn(&Graph) -> bool,
    obstruction: &dyn Fn(&Graph) -> Result<Graph>,
    free_with: &dyn Fn(&Graph, &Graph, &IdSet) -> Option<(usize, Embedding)>,
) -> Result<(IdSet, Vec<Round>)> {
    let mut acc = IdSet::empty(g.edge_count());
    let mut rounds = Vec::new();
    loop {
        let current = g.without_positions(&acc);
        if done(&current) {
            return Ok((acc, rounds));
        }
        if rounds.len() > removed_n.len() {
            return Err(Error::InvariantViolation("layering did not terminate within |N̄| rounds".into()));
        }
        let k = obstruction(&current)?;
        let n_ids = g.ids_of(&removed_n.difference(&acc));
        let n_cur = current.positions_of(&n_ids)?;
        let family = [k];
        let free = |host: &Graph, removed: &IdSet| free_with(&family[0], host, removed);
        let out = forbid_core(&current, &n_cur, &family, &free, false, caps)?;
        if out.removed.is_empty() {
            return Err(Error::InvariantViolation("empty layer for an obstructed graph".into()));
        }
        for p in g.positions_of(&out.removed)?.iter() {
            acc.insert(p);
        }
        let [k] = family;
        rounds.push(Round { obstruction: k, removed: out.removed, trace: out.trace });
    }
}

/// Invariant removed set whose deletion leaves a planar graph.
pub fn planarize_invariant(g: &Graph, removed_n: &[usize], caps: Caps) -> Result<LayeredOutcome> {
    let n = g.positions_of(removed_n)?;
    if !planarity_test(&g.without_positions(&n)) {
        return Err(Error::PreconditionViolated("graph minus removed_N is not planar".into()));
    }
    let free = |k: &Graph, host: &Graph, removed: &IdSet| {
        let rest = host.without_positions(removed);
        if planarity_test(&rest) {
            None
        } else {
            embed(k, &rest).map(|e| (0, e))
        }
    };
    let (h, rounds) = layered(g, &n, caps, &planarity_test, &kuratowski_extract, &free)?;
    let auts = automorphism_group(g, caps.automorphism_nodes)?;
    let clauses = vec![
        Clause::new("invariant", is_invariant(&auts, &h)),
        Clause::new("planar_complement", planarity_test(&g.without_positions(&h))),
        Clause::new("meets_removed", h.is_empty() || !h.is_disjoint(&n)),
    ];
    ensure_all(&clauses)?;
    Ok(LayeredOutcome { removed: g.ids_of(&h), group_order: auts.order, rounds, clauses })
}

/// Edge-minimal subgraph of `g` that does not embed into `target`, by
/// deleting edges in position order.
fn minimal_non_embeddable(g: &Graph, target: &Graph) -> Graph {
    let mut keep = IdSet::full(g.edge_count());
    for e in 0..g.edge_count() {
        keep.remove(e);
        if embed(&g.edge_induced(&keep), target).is_some() {
            keep.insert(e);
        }
    }
    g.edge_induced(&keep)
}

/// Invariant removed set whose complement embeds into `G ∖ M̄`, hence so
/// does each of its subgraphs.
pub fn local_embed_invariant(g: &Graph, removed_m: &[usize], size_cap: usize, caps: Caps) -> Result<LayeredOutcome> {
    if g.edge_count() > size_cap {
        return Err(Error::PreconditionViolated(format!(
            "{} edges exceed the size cap {size_cap}",
            g.edge_count()
        )));
    }
    let m = g.positions_of(removed_m)?;
    let target = g.without_positions(&m);
    let done = |cur: &Graph| embed(cur, &target).is_some();
    let obstruction = |cur: &Graph| Ok(minimal_non_embeddable(cur, &target));
    let free = |k: &Graph, host: &Graph, removed: &IdSet| embed(k, &host.without_positions(removed)).map(|e| (0, e));
    let (h, rounds) = layered(g, &m, caps, &done, &obstruction, &free)?;
    let auts = automorphism_group(g, caps.automorphism_nodes)?;
    let clauses = vec![
        Clause::new("invariant", is_invariant(&auts, &h)),
        Clause::new("embeds_into_target", embed(&g.without_positions(&h), &target).is_some()),
        Clause::new("meets_removed", h.is_empty() || !h.is_disjoint(&m)),
    ];
    ensure_all(&clauses)?;
    Ok(LayeredOutcome { removed: g.ids_of(&h), group_order: auts.order, rounds, clauses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::model::families;

    fn tri() -> Vec<Graph> {
        vec![families::triangle()]
    }

    #[test]
    fn c6_needs_nothing() {
        let out = forbid_invariant(&families::cycle(6), &[], &tri(), Caps::default()).unwrap();
        assert!(out.removed.is_empty());
    }

    #[test]
    fn k4_matching_removes_everything() {
        let k4 = families::complete(4);
        // edges in order: 01 02 03 12 13 23; {01, 23} is a perfect matching
        let out = forbid_invariant(&k4, &[0, 5], &tri(), Caps::default()).unwrap();
        assert_eq!(out.removed, (0..6).collect::<Vec<_>>());
        assert_eq!(out.bound, "42");
        assert!(out.clauses.iter().all(|c| c.passed));
    }

    #[test]
    fn precondition_reports_embedding() {
        let err = forbid_invariant(&families::complete(4), &[], &tri(), Caps::default()).unwrap_err();
        assert!(matches!(err, Error::PreconditionViolated(ref m) if m.contains("embeds")));
    }

    #[test]
    fn planarize_examples() {
        let c = families::cycle(5);
        assert!(planarize_invariant(&c, &[0], Caps::default()).unwrap().removed.is_empty());
        let k5 = families::complete(5);
        let out = planarize_invariant(&k5, &[0], Caps::default()).unwrap();
        assert_eq!(out.removed.len(), 10);
        assert!(planarize_invariant(&k5, &[], Caps::default()).is_err());
    }

    #[test]
    fn local_embed_examples() {
        let c4 = families::cycle(4);
        assert!(local_embed_invariant(&c4, &[], 20, Caps::default()).unwrap().removed.is_empty());
        assert_eq!(local_embed_invariant(&c4, &[0], 20, Caps::default()).unwrap().removed.len(), 4);
        let two = Graph::from_pairs(false, 6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        let out = local_embed_invariant(&two, &[0, 1, 2], 20, Caps::default()).unwrap();
        assert_eq!(out.removed.len(), 6);
        assert!(local_embed_invariant(&two, &[], 3, Caps::default()).is_err());
    }
}
