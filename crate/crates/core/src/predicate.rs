//! Predicates over lattice elements and the combinators built on them.
//!
//! The engine never evaluates predicates. They are used on verification
//! paths: checking a trace, checking the laws, and the brute-force
//! composition used for desk-scale checks of composed properties.

use crate::error::{Error, Result};
use crate::lattice::Lattice;

/// A `t`-ary predicate on lattice elements.
pub trait Predicate<E> {
    fn arity(&self) -> usize;
    fn eval(&self, args: &[E]) -> bool;

    fn name(&self) -> String {
        format!("{}-ary predicate", self.arity())
    }
}

/// Predicate backed by a closure.
pub struct FnPredicate<F> {
    name: String,
    arity: usize,
    f: F,
}

impl<F> FnPredicate<F> {
    pub fn new(name: impl Into<String>, arity: usize, f: F) -> Self {
        FnPredicate { name: name.into(), arity, f }
    }
}

impl<E, F: Fn(&[E]) -> bool> Predicate<E> for FnPredicate<F> {
    fn arity(&self) -> usize {
        self.arity
    }
    fn eval(&self, args: &[E]) -> bool {
        debug_assert_eq!(args.len(), self.arity);
        (self.f)(args)
    }
    fn name(&self) -> String {
        self.name.clone()
    }
}

impl<E, P: Predicate<E> + ?Sized> Predicate<E> for &P {
    fn arity(&self) -> usize {
        (**self).arity()
    }
    fn eval(&self, args: &[E]) -> bool {
        (**self).eval(args)
    }
    fn name(&self) -> String {
        (**self).name()
    }
}

impl<E, P: Predicate<E> + ?Sized> Predicate<E> for Box<P> {
    fn arity(&self) -> usize {
        (**self).arity()
    }
    fn eval(&self, args: &[E]) -> bool {
        (**self).eval(args)
    }
    fn name(&self) -> String {
        (**self).name()
    }
}

/// A predicate with a first row of `row_len` elements and a single
/// second-row element.
pub trait RowPredicate<E> {
    fn row_len(&self) -> usize;
    fn eval(&self, row: &[E], second: &E) -> bool;
}

pub struct FnRowPredicate<F> {
    row_len: usize,
    f: F,
}

impl<F> FnRowPredicate<F> {
    pub fn new(row_len: usize, f: F) -> Self {
        FnRowPredicate { row_len, f }
    }
}

impl<E, F: Fn(&[E], &E) -> bool> RowPredicate<E> for FnRowPredicate<F> {
    fn row_len(&self) -> usize {
        self.row_len
    }
    fn eval(&self, row: &[E], second: &E) -> bool {
        (self.f)(row, second)
    }
}

/// Default bound on `|candidates|^k` for a composition.
pub const DEFAULT_COMPOSITION_BUDGET: usize = 1 << 20;

/// `(Q ∘ R)(N_1..N_{kl}) = ∃ M_1..M_k ∈ candidates: Q(M_1..M_k) and
/// R_i(N_{(i-1)l+1}..N_{il}; M_i)` for every `i`, by exhaustive search.
pub struct Composition<'a, E> {
    outer: Box<dyn Predicate<E> + 'a>,
    rows: Vec<Box<dyn RowPredicate<E> + 'a>>,
    candidates: Vec<E>,
    row_len: usize,
}

pub fn compose_predicates<'a, E: Clone>(
    outer: Box<dyn Predicate<E> + 'a>,
    rows: Vec<Box<dyn RowPredicate<E> + 'a>>,
    candidates: Vec<E>,
    budget: usize,
) -> Result<Composition<'a, E>> {
    let k = outer.arity();
    if rows.len() != k {
        return Err(Error::ArityMismatch { expected: k, got: rows.len() });
    }
    let row_len = rows.first().map_or(0, |r| r.row_len());
    if let Some(bad) = rows.iter().find(|r| r.row_len() != row_len) {
        return Err(Error::ArityMismatch { expected: row_len, got: bad.row_len() });
    }
    let space = (candidates.len() as u128).checked_pow(k as u32);
    if space.map_or(true, |s| s > budget as u128) {
        return Err(Error::cap("composition search space", budget));
    }
    Ok(Composition { outer, rows, candidates, row_len })
}

impl<E: Clone> Composition<'_, E> {
    fn search(&self, args: &[E], chosen: &mut Vec<E>) -> bool {
        let i = chosen.len();
        if i == self.rows.len() {
            return self.outer.eval(chosen);
        }
        let block = &args[i * self.row_len..(i + 1) * self.row_len];
        for m in &self.candidates {
            if self.rows[i].eval(block, m) {
                chosen.push(m.clone());
                if self.search(args, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
}

impl<E: Clone> Predicate<E> for Composition<'_, E> {
    fn arity(&self) -> usize {
        self.rows.len() * self.row_len
    }
    fn eval(&self, args: &[E]) -> bool {
        let mut chosen = Vec::with_capacity(self.rows.len());
        self.search(args, &mut chosen)
    }
    fn name(&self) -> String {
        format!("composition of {}", self.outer.name())
    }
}

/// Evaluates `P(N̂ x (m-1), Ĝ x (t-m+1))` with `N̂` the meet and `Ĝ` the
/// join of `family`, after checking the hypothesis `P(N x m, top x (t-m))`
/// for every member.
pub fn lemma1_check<L, P>(lattice: &L, predicate: &P, m: usize, family: &[L::Elem], top: &L::Elem) -> Result<bool>
where
    L: Lattice,
    P: Predicate<L::Elem> + ?Sized,
{
    let t = predicate.arity();
    if m == 0 || m > t {
        return Err(Error::ArityMismatch { expected: t, got: m });
    }
    let Some(first) = family.first() else {
        return Err(Error::PreconditionViolated("empty family".into()));
    };
    for n in family {
        let mut args = vec![n.clone(); m];
        args.extend(std::iter::repeat(top.clone()).take(t - m));
        if !predicate.eval(&args) {
            return Err(Error::PreconditionViolated(format!(
                "hypothesis fails for family member {n:?}"
            )));
        }
    }
    let mut meet = first.clone();
    let mut join = first.clone();
    for n in &family[1..] {
        meet = lattice.meet(&meet, n);
        join = lattice.join(&join, n);
    }
    let mut args = vec![meet; m - 1];
    args.extend(std::iter::repeat(join).take(t - m + 1));
    Ok(predicate.eval(&args))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::idset::IdSet;
    use crate::lattice::CofiniteLattice;

    #[test]
    fn composition_with_trivial_rows() {
        let top = IdSet::empty(3);
        let t2 = top.clone();
        let outer = FnPredicate::new("is top", 1, move |m: &[IdSet]| m[0] == t2);
        let rows: Vec<Box<dyn RowPredicate<IdSet>>> =
            vec![Box::new(FnRowPredicate::new(2, |_: &[IdSet], _: &IdSet| true))];
        let cands = vec![IdSet::from_iter_with_len(3, [1]), top.clone()];
        let comp = compose_predicates(Box::new(outer), rows, cands, 100).unwrap();
        assert_eq!(comp.arity(), 2);
        let x = IdSet::from_iter_with_len(3, [0, 2]);
        assert!(comp.eval(&[x.clone(), x]));
    }

    #[test]
    fn composition_over_no_candidates_is_false() {
        let outer = FnPredicate::new("true", 1, |_: &[IdSet]| true);
        let rows: Vec<Box<dyn RowPredicate<IdSet>>> =
            vec![Box::new(FnRowPredicate::new(1, |_: &[IdSet], _: &IdSet| true))];
        let comp = compose_predicates(Box::new(outer), rows, vec![], 100).unwrap();
        assert!(!comp.eval(&[IdSet::empty(2)]));
    }

    #[test]
    fn composition_budget() {
        let outer = FnPredicate::new("true", 2, |_: &[IdSet]| true);
        let rows: Vec<Box<dyn RowPredicate<IdSet>>> = vec![
            Box::new(FnRowPredicate::new(1, |_: &[IdSet], _: &IdSet| true)),
            Box::new(FnRowPredicate::new(1, |_: &[IdSet], _: &IdSet| true)),
        ];
        let cands: Vec<IdSet> = (0..11).map(|i| IdSet::from_iter_with_len(11, [i])).collect();
        assert!(matches!(
            compose_predicates(Box::new(outer), rows, cands, 100),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn lemma1_singleton_family() {
        let lat = CofiniteLattice::new(4, vec![]);
        // "arg1 and arg2 together keep at least one of {0, 1}"
        let p = FnPredicate::new("p", 2, |a: &[IdSet]| !a[0].contains(0) || !a[1].contains(1));
        let n = lat.element([0]);
        let top = lat.top().unwrap();
        assert!(lemma1_check(&lat, &p, 2, &[n], &top).unwrap());
    }

    #[test]
    fn lemma1_needs_multilinearity() {
        // Elements are removed sets over {0, 1}; "arg1 keeps at most one point"
        // is monotone but not closed under joins.
        let lat = CofiniteLattice::new(2, vec![]);
        let p = FnPredicate::new("|arg1| <= 1", 2, |a: &[IdSet]| {
            a[0].complement().len() <= 1
        });
        let family = [lat.element([0]), lat.element([1])];
        let top = lat.top().unwrap();
        assert!(!lemma1_check(&lat, &p, 1, &family, &top).unwrap());
    }

    #[test]
    fn lemma1_arity_errors() {
        let lat = CofiniteLattice::new(2, vec![]);
        let p = FnPredicate::new("t", 2, |_: &[IdSet]| true);
        let top = lat.top().unwrap();
        assert!(matches!(
            lemma1_check(&lat, &p, 3, &[top.clone()], &top),
            Err(Error::ArityMismatch { .. })
        ));
    }
}
