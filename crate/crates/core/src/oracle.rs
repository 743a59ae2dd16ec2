//! Brute-force verifiers used as ground truth for the engine and the
//! instance modules.
//!
//! Law checks work over an explicit finite universe of elements. When the
//! truth table `|universe|^t` fits [`LawConfig::max_table`] the check is
//! exhaustive: the predicate is evaluated once per tuple and monotonicity
//! (closure under lower covers inside the universe, one coordinate at a
//! time) and multilinearity (closure under pairwise joins in one
//! coordinate) are read off the table. Otherwise tuples are sampled with a
//! seeded generator.

use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::codim::Codim;
use crate::error::{Error, Result};
use crate::idset::IdSet;
use crate::lattice::Lattice;
use crate::predicate::Predicate;

pub const DEFAULT_SEED: u64 = 0;
/// Largest truth table evaluated for an exhaustive law check.
pub const MAX_EXHAUSTIVE_TABLE: usize = 1 << 22;
/// Largest number of orbit unions enumerated by [`brute_min_invariant`].
pub const MAX_ORBIT_UNIONS: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Law {
    Monotone,
    Multilinear,
}

/// A violation: every tuple in `premises` satisfies the predicate while
/// `conclusion` does not, although the law requires it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample<E> {
    pub premises: Vec<Vec<E>>,
    pub conclusion: Vec<E>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LawReport<E> {
    pub predicate: String,
    pub law: Law,
    pub checks: u64,
    pub exhaustive: bool,
    pub counterexample: Option<Counterexample<E>>,
}

impl<E> LawReport<E> {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }

    /// Re-evaluates the counterexample; true when there is none or it is genuine.
    pub fn revalidate<P: Predicate<E> + ?Sized>(&self, predicate: &P) -> bool {
        match &self.counterexample {
            None => true,
            Some(c) => c.premises.iter().all(|p| predicate.eval(p)) && !predicate.eval(&c.conclusion),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct LawConfig {
    pub max_table: usize,
    pub trials: usize,
    pub seed: u64,
}

impl Default for LawConfig {
    fn default() -> Self {
        LawConfig { max_table: MAX_EXHAUSTIVE_TABLE, trials: 20_000, seed: DEFAULT_SEED }
    }
}

struct Universe<'a, L: Lattice> {
    lattice: &'a L,
    elems: &'a [L::Elem],
    index: HashMap<L::Elem, usize>,
}

impl<'a, L: Lattice> Universe<'a, L> {
    fn new(lattice: &'a L, elems: &'a [L::Elem]) -> Self {
        let index = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        Universe { lattice, elems, index }
    }

    /// For each element, the elements strictly below it with nothing from the
    /// universe in between.
    fn lower_covers(&self) -> Vec<Vec<usize>> {
        let n = self.elems.len();
        let below: Vec<Vec<usize>> = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| self.lattice.lt(&self.elems[j], &self.elems[i]))
                    .collect()
            })
            .collect();
        (0..n)
            .map(|i| {
                below[i]
                    .iter()
                    .copied()
                    .filter(|&j| {
                        !below[i]
                            .iter()
                            .any(|&k| k != j && self.lattice.lt(&self.elems[j], &self.elems[k]))
                    })
                    .collect()
            })
            .collect()
    }

    fn tuple(&self, idx: &[usize]) -> Vec<L::Elem> {
        idx.iter().map(|&i| self.elems[i].clone()).collect()
    }
}

fn decode(mut code: usize, base: usize, t: usize, out: &mut [usize]) {
    for slot in out.iter_mut().take(t) {
        *slot = code % base;
        code /= base;
    }
}

fn encode(idx: &[usize], base: usize) -> usize {
    idx.iter().rev().fold(0, |acc, &i| acc * base + i)
}

fn truth_table<L, P>(u: &Universe<'_, L>, predicate: &P, t: usize) -> Vec<bool>
where
    L: Lattice,
    P: Predicate<L::Elem> + ?Sized,
{
    let base = u.elems.len();
    let size = base.pow(t as u32);
    let mut idx = vec![0; t];
    (0..size)
        .map(|code| {
            decode(code, base, t, &mut idx);
            predicate.eval(&u.tuple(&idx))
        })
        .collect()
}

fn table_size(base: usize, t: usize) -> Option<usize> {
    base.checked_pow(t as u32)
}

/// Checks `P(N) ⇒ P(N')` whenever `N' <= N` coordinatewise.
pub fn check_monotone<L, P>(lattice: &L, predicate: &P, universe: &[L::Elem], config: &LawConfig) -> LawReport<L::Elem>
where
    L: Lattice,
    P: Predicate<L::Elem> + ?Sized,
{
    let t = predicate.arity();
    let u = Universe::new(lattice, universe);
    let mut report = LawReport {
        predicate: predicate.name(),
        law: Law::Monotone,
        checks: 0,
        exhaustive: false,
        counterexample: None,
    };
    if universe.is_empty() {
        report.exhaustive = true;
        return report;
    }
    let base = universe.len();
    match table_size(base, t) {
        Some(size) if size <= config.max_table => {
            report.exhaustive = true;
            let table = truth_table(&u, predicate, t);
            let covers = u.lower_covers();
            let mut idx = vec![0; t];
            for (code, &holds) in table.iter().enumerate() {
                if !holds {
                    continue;
                }
                decode(code, base, t, &mut idx);
                for i in 0..t {
                    for &c in &covers[idx[i]] {
                        report.checks += 1;
                        let mut lower = idx.clone();
                        lower[i] = c;
                        if !table[encode(&lower, base)] {
                            report.counterexample = Some(Counterexample {
                                premises: vec![u.tuple(&idx)],
                                conclusion: u.tuple(&lower),
                            });
                            return report;
                        }
                    }
                }
            }
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let below: Vec<Vec<usize>> = (0..base)
                .map(|i| (0..base).filter(|&j| lattice.lt(&universe[j], &universe[i])).collect())
                .collect();
            for _ in 0..config.trials {
                let idx: Vec<usize> = (0..t).map(|_| rng.gen_range(0..base)).collect();
                let i = rng.gen_range(0..t);
                if below[idx[i]].is_empty() {
                    continue;
                }
                let tuple = u.tuple(&idx);
                if !predicate.eval(&tuple) {
                    continue;
                }
                let mut lower = idx.clone();
                lower[i] = below[idx[i]][rng.gen_range(0..below[idx[i]].len())];
                report.checks += 1;
                let lower = u.tuple(&lower);
                if !predicate.eval(&lower) {
                    report.counterexample = Some(Counterexample { premises: vec![tuple], conclusion: lower });
                    return report;
                }
            }
        }
    }
    report
}

/// Checks `P(.., a, ..) ∧ P(.., b, ..) ⇒ P(.., join(a, b), ..)` in every coordinate.
pub fn check_multilinear<L, P>(lattice: &L, predicate: &P, universe: &[L::Elem], config: &LawConfig) -> LawReport<L::Elem>
where
    L: Lattice,
    P: Predicate<L::Elem> + ?Sized,
{
    let t = predicate.arity();
    let u = Universe::new(lattice, universe);
    let mut report = LawReport {
        predicate: predicate.name(),
        law: Law::Multilinear,
        checks: 0,
        exhaustive: false,
        counterexample: None,
    };
    if universe.is_empty() {
        report.exhaustive = true;
        return report;
    }
    let base = universe.len();
    match table_size(base, t) {
        Some(size) if size <= config.max_table => {
            report.exhaustive = true;
            let table = truth_table(&u, predicate, t);
            let joins: Vec<Vec<Option<usize>>> = (0..base)
                .map(|a| {
                    (0..base)
                        .map(|b| u.index.get(&lattice.join(&universe[a], &universe[b])).copied())
                        .collect()
                })
                .collect();
            let contexts = base.pow(t as u32 - 1);
            let mut idx = vec![0; t];
            let mut holds = Vec::with_capacity(base);
            for i in 0..t {
                // code of the tuple with `a` in coordinate i: low + a·stride + high·stride·base
                let stride = base.pow(i as u32);
                for ctx in 0..contexts {
                    let offset = ctx % stride + (ctx / stride) * stride * base;
                    let code_of = |a: usize| offset + a * stride;
                    holds.clear();
                    holds.extend((0..base).filter(|&a| table[code_of(a)]));
                    for (x, &a) in holds.iter().enumerate() {
                        for &b in &holds[x + 1..] {
                            report.checks += 1;
                            let ok = match joins[a][b] {
                                Some(j) => table[code_of(j)],
                                None => {
                                    decode(code_of(a), base, t, &mut idx);
                                    let mut tuple = u.tuple(&idx);
                                    tuple[i] = lattice.join(&universe[a], &universe[b]);
                                    predicate.eval(&tuple)
                                }
                            };
                            if !ok {
                                decode(code_of(a), base, t, &mut idx);
                                let with = |v: usize| {
                                    let mut w = idx.clone();
                                    w[i] = v;
                                    w
                                };
                                let mut conclusion = u.tuple(&with(a));
                                conclusion[i] = lattice.join(&universe[a], &universe[b]);
                                report.counterexample = Some(Counterexample {
                                    premises: vec![u.tuple(&with(a)), u.tuple(&with(b))],
                                    conclusion,
                                });
                                return report;
                            }
                        }
                    }
                }
            }
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            for _ in 0..config.trials {
                let idx: Vec<usize> = (0..t).map(|_| rng.gen_range(0..base)).collect();
                let i = rng.gen_range(0..t);
                let b = rng.gen_range(0..base);
                let first = u.tuple(&idx);
                let mut second = first.clone();
                second[i] = universe[b].clone();
                if !predicate.eval(&first) || !predicate.eval(&second) {
                    continue;
                }
                report.checks += 1;
                let mut conclusion = first.clone();
                conclusion[i] = lattice.join(&first[i], &universe[b]);
                if !predicate.eval(&conclusion) {
                    report.counterexample = Some(Counterexample { premises: vec![first, second], conclusion });
                    return report;
                }
            }
        }
    }
    report
}

/// Minimum-cardinality union of orbits satisfying `property`, ties broken
/// by canonical set order. `None` when no union qualifies.
pub fn brute_min_invariant<F>(universe_len: usize, orbits: &[Vec<usize>], mut property: F) -> Result<Option<IdSet>>
where
    F: FnMut(&IdSet) -> bool,
{
    if orbits.len() >= usize::BITS as usize || (1usize << orbits.len()) > MAX_ORBIT_UNIONS {
        return Err(Error::cap("orbit unions", MAX_ORBIT_UNIONS));
    }
    let mut best: Option<IdSet> = None;
    for mask in 0..(1usize << orbits.len()) {
        let set = IdSet::from_iter_with_len(
            universe_len,
            orbits
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .flat_map(|(_, o)| o.iter().copied()),
        );
        let better = match &best {
            None => true,
            Some(b) => (set.len(), &set) < (b.len(), b),
        };
        if better && property(&set) {
            best = Some(set);
        }
    }
    Ok(best)
}

/// Closes `seeds` under join and meet and tests whether `target` is reached.
pub fn sublattice_membership<L: Lattice>(lattice: &L, seeds: &[L::Elem], target: &L::Elem, cap: usize) -> Result<bool> {
    let mut closed: BTreeSet<L::Elem> = seeds.iter().cloned().collect();
    loop {
        let items: Vec<L::Elem> = closed.iter().cloned().collect();
        let mut grew = false;
        for (i, a) in items.iter().enumerate() {
            for b in &items[i + 1..] {
                for c in [lattice.join(a, b), lattice.meet(a, b)] {
                    if closed.insert(c) {
                        grew = true;
                        if closed.len() > cap {
                            return Err(Error::cap("sublattice closure", cap));
                        }
                    }
                }
            }
        }
        if !grew {
            return Ok(closed.contains(target));
        }
    }
}

/// Checks the lattice-instance contract on an enumerated universe: partial
/// order, least upper bound, lower bound, the three codimension axioms,
/// integer gaps under strict order and order/join preservation by the
/// generators. Returns every violation found.
pub fn instance_violations<L: Lattice>(lattice: &L, universe: &[L::Elem]) -> Vec<String> {
    let mut out = Vec::new();
    let one = Codim::from_int(1);
    for a in universe {
        if !lattice.leq(a, a) {
            out.push(format!("leq not reflexive at {a:?}"));
        }
        for g in 0..lattice.generator_count() {
            if !lattice.codim(&lattice.apply(g, a)).le(&lattice.codim(a)) {
                out.push(format!("generator {g} raises codim at {a:?}"));
            }
        }
        for b in universe {
            let j = lattice.join(a, b);
            let m = lattice.meet(a, b);
            if !lattice.leq(a, &j) || !lattice.leq(b, &j) {
                out.push(format!("join not an upper bound at {a:?}, {b:?}"));
            }
            if !lattice.leq(&m, a) || !lattice.leq(&m, b) {
                out.push(format!("meet not a lower bound at {a:?}, {b:?}"));
            }
            for c in universe {
                if lattice.leq(a, c) && lattice.leq(b, c) && !lattice.leq(&j, c) {
                    out.push(format!("join not least at {a:?}, {b:?}"));
                }
                if lattice.leq(a, b) && lattice.leq(b, c) && !lattice.leq(a, c) {
                    out.push(format!("leq not transitive at {a:?}, {b:?}, {c:?}"));
                }
            }
            if a != b && lattice.leq(a, b) && lattice.leq(b, a) {
                out.push(format!("leq not antisymmetric at {a:?}, {b:?}"));
            }
            let (ca, cb) = (lattice.codim(a), lattice.codim(b));
            if lattice.leq(b, a) && !ca.le(&cb) {
                out.push(format!("codim axiom 1 fails at {a:?} >= {b:?}"));
            }
            if let Some(sum) = ca.checked_add(&cb) {
                if !lattice.codim(&m).le(&sum) {
                    out.push(format!("codim axiom 3 fails at {a:?}, {b:?}"));
                }
            }
            if lattice.lt(a, b) {
                if let Some(gap) = cb.checked_add(&one) {
                    if !gap.le(&ca) {
                        out.push(format!("codim gap below 1 between {a:?} < {b:?}"));
                    }
                }
            }
            for g in 0..lattice.generator_count() {
                let (ga, gb) = (lattice.apply(g, a), lattice.apply(g, b));
                if lattice.leq(a, b) && !lattice.leq(&ga, &gb) {
                    out.push(format!("generator {g} not monotone at {a:?}, {b:?}"));
                }
                if lattice.apply(g, &j) != lattice.join(&ga, &gb) {
                    out.push(format!("generator {g} does not preserve join at {a:?}, {b:?}"));
                }
            }
        }
    }
    out
}

/// Predicates on cofinite-lattice elements that break a law, kept as
/// negative controls for the law checks and the single-step lemma.
pub mod negatives {
    use crate::idset::IdSet;
    use crate::predicate::FnPredicate;

    /// "The first argument keeps an even number of points": not monotone.
    pub fn even_kept(arity: usize) -> FnPredicate<impl Fn(&[IdSet]) -> bool> {
        FnPredicate::new("|kept(arg1)| even", arity, |a: &[IdSet]| a[0].complement().len() % 2 == 0)
    }

    /// "The first argument keeps at most one point": monotone, not multilinear.
    pub fn at_most_one_kept(arity: usize) -> FnPredicate<impl Fn(&[IdSet]) -> bool> {
        FnPredicate::new("|kept(arg1)| <= 1", arity, |a: &[IdSet]| a[0].complement().len() <= 1)
    }
}
