//! The invariantization engine.
//!
//! Starting from an element `N`, each of the `t` steps closes the current
//! element under the endomorphism generators, greedily picks a subfamily of
//! the orbit with the same join, and replaces the current element by the
//! meet of that subfamily. After `t` steps the last join is invariant and its
//! codimension is at most `f^{t-1}(codim N)`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::codim::Codim;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::predicate::Predicate;

pub const DEFAULT_ORBIT_CAP: usize = 100_000;

/// One step of an engine run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step<E> {
    pub orbit_size: usize,
    /// The orbit images kept by greedy selection, in canonical order.
    pub selected: Vec<E>,
    /// Join of the selected images (equals the join of the whole orbit).
    pub join: E,
    /// Left fold of the meet over the selected images.
    pub meet: E,
    pub join_codim: Codim,
    pub meet_codim: Codim,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EngineTrace<E> {
    pub start: E,
    pub start_codim: Codim,
    pub steps: Vec<Step<E>>,
}

impl<E: Clone> EngineTrace<E> {
    pub fn arity(&self) -> usize {
        self.steps.len()
    }

    /// The returned invariant element (join of the last step).
    pub fn result(&self) -> &E {
        &self.steps.last().expect("trace has at least one step").join
    }

    /// Codimension of the element the step starts from.
    pub fn input_codim(&self, step: usize) -> &Codim {
        if step == 0 {
            &self.start_codim
        } else {
            &self.steps[step - 1].meet_codim
        }
    }

    pub fn map<F, T>(&self, mut f: F) -> EngineTrace<T>
    where
        F: FnMut(&E) -> T,
    {
        EngineTrace {
            start: f(&self.start),
            start_codim: self.start_codim.clone(),
            steps: self
                .steps
                .iter()
                .map(|s| Step {
                    orbit_size: s.orbit_size,
                    selected: s.selected.iter().map(&mut f).collect(),
                    join: f(&s.join),
                    meet: f(&s.meet),
                    join_codim: s.join_codim.clone(),
                    meet_codim: s.meet_codim.clone(),
                })
                .collect(),
        }
    }
}

/// Result of [`engine_run`].
#[derive(Clone, Debug, Serialize)]
pub struct EngineRun<E> {
    pub result: E,
    pub trace: EngineTrace<E>,
    /// `codim(result)`.
    pub codim: Codim,
}

/// Smallest set containing `seed` and closed under every generator, sorted.
pub fn orbit_closure<L: Lattice>(lattice: &L, seed: &L::Elem, cap: usize) -> Result<Vec<L::Elem>> {
    let mut seen = BTreeSet::new();
    seen.insert(seed.clone());
    let mut frontier = vec![seed.clone()];
    while let Some(x) = frontier.pop() {
        for g in 0..lattice.generator_count() {
            let y = lattice.apply(g, &x);
            if !seen.contains(&y) {
                if seen.len() >= cap {
                    return Err(Error::cap("orbit closure", cap));
                }
                seen.insert(y.clone());
                frontier.push(y);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Scans `family` in order, keeping an element iff it strictly raises the
/// running join. Returns the kept elements and the join of the family.
pub fn greedy_select<L: Lattice>(lattice: &L, family: &[L::Elem]) -> (Vec<L::Elem>, L::Elem) {
    let mut iter = family.iter();
    let first = iter.next().expect("greedy_select on an empty family");
    let mut selected = vec![first.clone()];
    let mut sup = first.clone();
    for x in iter {
        if !lattice.leq(x, &sup) {
            sup = lattice.join(&sup, x);
            selected.push(x.clone());
        }
    }
    (selected, sup)
}

fn meet_fold<L: Lattice>(lattice: &L, items: &[L::Elem]) -> L::Elem {
    let mut iter = items.iter();
    let first = iter.next().expect("meet of an empty family").clone();
    iter.fold(first, |acc, x| lattice.meet(&acc, x))
}

/// Runs `t` steps from `start` and returns the invariant element with its
/// trace, after re-checking invariance, the codimension bound, containment
/// in the first orbit join and the per-step inequalities.
pub fn engine_run<L: Lattice>(
    lattice: &L,
    start: &L::Elem,
    t: usize,
    cap: usize,
) -> Result<EngineRun<L::Elem>> {
    if t == 0 {
        return Err(Error::PreconditionViolated("engine arity must be positive".into()));
    }
    let mut steps = Vec::with_capacity(t);
    let mut current = start.clone();
    for _ in 0..t {
        let orbit = orbit_closure(lattice, &current, cap)?;
        let (selected, join) = greedy_select(lattice, &orbit);
        let meet = meet_fold(lattice, &selected);
        steps.push(Step {
            orbit_size: orbit.len(),
            join_codim: lattice.codim(&join),
            meet_codim: lattice.codim(&meet),
            selected,
            join,
            meet: meet.clone(),
        });
        current = meet;
    }
    let trace = EngineTrace {
        start: start.clone(),
        start_codim: lattice.codim(start),
        steps,
    };
    let result = trace.result().clone();

    for g in 0..lattice.generator_count() {
        if !lattice.leq(&lattice.apply(g, &result), &result) {
            return Err(Error::InvariantViolation(format!(
                "result {result:?} is not invariant under generator {g}"
            )));
        }
    }
    let codim = lattice.codim(&result);
    if !codim.le_f_iterate(&trace.start_codim, (t - 1) as u32)? {
        return Err(Error::InvariantViolation(format!(
            "codim {codim} exceeds f^{}({})",
            t - 1,
            trace.start_codim
        )));
    }
    if !lattice.leq(&result, &trace.steps[0].join) {
        return Err(Error::InvariantViolation(
            "result is not below the join of the first orbit".into(),
        ));
    }
    let violations = trace_violations(lattice, &trace)?;
    if let Some(v) = violations.first() {
        return Err(Error::InvariantViolation(v.clone()));
    }
    Ok(EngineRun { result, trace, codim })
}

/// Checks the per-step inequalities of a trace and returns every violation:
/// `G_s` is the join and `N_s` the meet-fold of the selection,
/// `codim N_s <= f(codim N_{s-1})`, `codim G_s <= codim N_{s-1}` and
/// `G_s <= G_{s-1}`.
pub fn trace_violations<L: Lattice>(lattice: &L, trace: &EngineTrace<L::Elem>) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for (s, step) in trace.steps.iter().enumerate() {
        let n = s + 1;
        let (_, join) = greedy_select(lattice, &step.selected);
        if join != step.join {
            out.push(format!("step {n}: join does not match the selection"));
        }
        if meet_fold(lattice, &step.selected) != step.meet {
            out.push(format!("step {n}: meet does not match the selection"));
        }
        let prev = trace.input_codim(s);
        if !step.meet_codim.le_f_iterate(prev, 1)? {
            out.push(format!("step {n}: codim N_s = {} > f({prev})", step.meet_codim));
        }
        if !step.join_codim.le(prev) {
            out.push(format!("step {n}: codim G_s = {} > {prev}", step.join_codim));
        }
        if s > 0 && !lattice.leq(&step.join, &trace.steps[s - 1].join) {
            out.push(format!("step {n}: G_s is not below G_(s-1)"));
        }
    }
    Ok(out)
}

/// Evaluates the predicate on the tuple `(N_s x (t-s), G_s x s)` for every
/// step; the last tuple is `P(H, ..., H)`. Returns the failing steps.
pub fn trace_predicate_failures<E: Clone, P: Predicate<E> + ?Sized>(
    trace: &EngineTrace<E>,
    predicate: &P,
) -> Vec<usize> {
    let t = trace.arity();
    let mut failures = Vec::new();
    for (s, step) in trace.steps.iter().enumerate() {
        let n = s + 1;
        let mut args = vec![step.meet.clone(); t - n];
        args.extend(std::iter::repeat(step.join.clone()).take(n));
        if !predicate.eval(&args) {
            failures.push(n);
        }
    }
    failures
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::idset::IdSet;
    use crate::lattice::CofiniteLattice;

    fn rotation(n: usize) -> Vec<usize> {
        (0..n).map(|i| (i + 1) % n).collect()
    }

    #[test]
    fn identity_orbit_is_singleton() {
        let lat = CofiniteLattice::new(4, vec![(0..4).collect()]);
        let n = lat.element([1]);
        assert_eq!(orbit_closure(&lat, &n, 10).unwrap(), vec![n]);
    }

    #[test]
    fn rotation_orbit_of_single_edge() {
        let lat = CofiniteLattice::new(4, vec![rotation(4)]);
        let orbit = orbit_closure(&lat, &lat.element([0]), 10).unwrap();
        assert_eq!(orbit.len(), 4);
    }

    #[test]
    fn orbit_cap() {
        let lat = CofiniteLattice::new(4, vec![rotation(4)]);
        assert!(matches!(
            orbit_closure(&lat, &lat.element([0]), 3),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn greedy_on_a_chain() {
        // subset order on removed sets: {0,1,2} <= {0,1} <= {0}
        let lat = CofiniteLattice::new(3, vec![]);
        let a = lat.element([0, 1, 2]);
        let b = lat.element([0, 1]);
        let c = lat.element([0]);
        let (sel, sup) = greedy_select(&lat, &[a.clone(), b.clone(), c.clone()]);
        assert_eq!(sel, vec![a.clone(), b.clone(), c.clone()]);
        assert_eq!(sup, c);
        let (sel, sup) = greedy_select(&lat, &[c.clone(), b, a]);
        assert_eq!(sel, vec![c.clone()]);
        assert_eq!(sup, c);
    }

    #[test]
    fn identity_generators_fix_everything() {
        let lat = CofiniteLattice::new(5, vec![(0..5).collect()]);
        let n = lat.element([1, 3]);
        let run = engine_run(&lat, &n, 3, 100).unwrap();
        assert_eq!(run.result, n);
        for step in &run.trace.steps {
            assert_eq!(step.join, n);
            assert_eq!(step.meet, n);
        }
    }

    #[test]
    fn zero_arity_rejected() {
        let lat = CofiniteLattice::new(2, vec![]);
        assert!(engine_run(&lat, &IdSet::empty(2), 0, 10).is_err());
    }
}
