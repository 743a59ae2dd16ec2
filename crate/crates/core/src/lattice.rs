//! The engine's only view of a problem: a finite lattice with a codimension
//! and a finite list of endomorphism generators.

use std::fmt::Debug;
use std::hash::Hash;

use fixedbitset::FixedBitSet;

use crate::codim::Codim;
use crate::idset::IdSet;

/// A finite lattice instance.
///
/// `Elem`'s `Ord` is the canonical order used for every tie-break; equality
/// of elements must coincide with lattice equality.
pub trait Lattice {
    type Elem: Clone + Ord + Hash + Debug;

    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;

    /// Least upper bound.
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// A lower bound satisfying the codimension subadditivity axiom; every
    /// shipped instance returns the greatest lower bound.
    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn codim(&self, a: &Self::Elem) -> Codim;

    fn generator_count(&self) -> usize;

    /// Image of `a` under endomorphism generator `generator`.
    fn apply(&self, generator: usize, a: &Self::Elem) -> Self::Elem;

    fn top(&self) -> Option<Self::Elem> {
        None
    }

    fn bottom(&self) -> Option<Self::Elem> {
        None
    }

    fn lt(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        a != b && self.leq(a, b)
    }
}

impl<L: Lattice + ?Sized> Lattice for &L {
    type Elem = L::Elem;

    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        (**self).leq(a, b)
    }
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (**self).join(a, b)
    }
    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (**self).meet(a, b)
    }
    fn codim(&self, a: &Self::Elem) -> Codim {
        (**self).codim(a)
    }
    fn generator_count(&self) -> usize {
        (**self).generator_count()
    }
    fn apply(&self, generator: usize, a: &Self::Elem) -> Self::Elem {
        (**self).apply(generator, a)
    }
    fn top(&self) -> Option<Self::Elem> {
        (**self).top()
    }
    fn bottom(&self) -> Option<Self::Elem> {
        (**self).bottom()
    }
}

/// The order-dual of a lattice with a caller-supplied codimension.
///
/// Requires the inner meet to be a true greatest lower bound, so that it is
/// a least upper bound in the dual.
pub struct Dual<L: Lattice, F> {
    inner: L,
    codim: F,
}

/// Reverses the order of `inner`; `codim` becomes the dual codimension.
pub fn dualize<L, F>(inner: L, codim: F) -> Dual<L, F>
where
    L: Lattice,
    F: Fn(&L::Elem) -> Codim,
{
    Dual { inner, codim }
}

impl<L: Lattice, F> Dual<L, F> {
    pub fn inner(&self) -> &L {
        &self.inner
    }
}

impl<L, F> Lattice for Dual<L, F>
where
    L: Lattice,
    F: Fn(&L::Elem) -> Codim,
{
    type Elem = L::Elem;

    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.inner.leq(b, a)
    }
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.inner.meet(a, b)
    }
    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.inner.join(a, b)
    }
    fn codim(&self, a: &Self::Elem) -> Codim {
        (self.codim)(a)
    }
    fn generator_count(&self) -> usize {
        self.inner.generator_count()
    }
    fn apply(&self, generator: usize, a: &Self::Elem) -> Self::Elem {
        self.inner.apply(generator, a)
    }
    fn top(&self) -> Option<Self::Elem> {
        self.inner.bottom()
    }
    fn bottom(&self) -> Option<Self::Elem> {
        self.inner.top()
    }
}

/// Cofinite-subset lattice over a finite ground set `0..n`.
///
/// An element is represented by its removed set; `A <= B` iff
/// `removed(A) ⊇ removed(B)`, join intersects removed sets, meet unites them
/// and the codimension is the removed count. Generators are permutations of
/// the ground set.
#[derive(Clone, Debug)]
pub struct CofiniteLattice {
    size: usize,
    perms: Vec<Vec<usize>>,
}

impl CofiniteLattice {
    pub fn new(size: usize, perms: Vec<Vec<usize>>) -> Self {
        debug_assert!(perms.iter().all(|p| p.len() == size));
        CofiniteLattice { size, perms }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn perms(&self) -> &[Vec<usize>] {
        &self.perms
    }

    pub fn element<I: IntoIterator<Item = usize>>(&self, removed: I) -> IdSet {
        IdSet::from_iter_with_len(self.size, removed)
    }

    /// Whether the removed set is mapped into itself by every generator.
    pub fn is_invariant(&self, removed: &IdSet) -> bool {
        self.perms
            .iter()
            .all(|p| removed.iter().all(|i| removed.contains(p[i])))
    }
}

impl Lattice for CofiniteLattice {
    type Elem = IdSet;

    fn leq(&self, a: &IdSet, b: &IdSet) -> bool {
        b.is_subset(a)
    }
    fn join(&self, a: &IdSet, b: &IdSet) -> IdSet {
        a.intersection(b)
    }
    fn meet(&self, a: &IdSet, b: &IdSet) -> IdSet {
        a.union(b)
    }
    fn codim(&self, a: &IdSet) -> Codim {
        Codim::from_int(a.len() as u64)
    }
    fn generator_count(&self) -> usize {
        self.perms.len()
    }
    fn apply(&self, generator: usize, a: &IdSet) -> IdSet {
        let p = &self.perms[generator];
        IdSet::from_iter_with_len(self.size, a.iter().map(|i| p[i]))
    }
    fn top(&self) -> Option<IdSet> {
        Some(IdSet::empty(self.size))
    }
    fn bottom(&self) -> Option<IdSet> {
        let mut all = FixedBitSet::with_capacity(self.size);
        all.insert_range(..);
        Some(IdSet::from_bits(all))
    }
}
