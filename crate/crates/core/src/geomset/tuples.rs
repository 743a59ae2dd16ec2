//! Predicates of the form "no forbidden k-subset can be picked with its
//! i-th member outside the i-th removed set", over a finite ground set.

use crate::idset::IdSet;
use crate::predicate::Predicate;

/// Every `k`-subset of `items`, in lexicographic order of positions.
pub fn k_subsets<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > items.len() {
        return out;
    }
    loop {
        out.push(idx.iter().map(|&i| items[i].clone()).collect());
        let Some(pos) = (0..k).rev().find(|&i| idx[i] < items.len() - k + i) else {
            return out;
        };
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// `P(K_1..K_k)` holds iff no forbidden subset `S` admits a bijection
/// `i ↦ x_i ∈ S` with `x_i ∉ K_i`. Arguments are removed sets of the
/// cofinite lattice, so the predicate is monotone and multilinear.
#[derive(Clone, Debug)]
pub struct ForbiddenTuples {
    name: String,
    arity: usize,
    forbidden: Vec<Vec<usize>>,
}

impl ForbiddenTuples {
    /// `forbidden` holds sorted `arity`-subsets of the ground set.
    pub fn new(name: impl Into<String>, arity: usize, forbidden: Vec<Vec<usize>>) -> Self {
        debug_assert!(forbidden.iter().all(|s| s.len() == arity));
        ForbiddenTuples { name: name.into(), arity, forbidden }
    }

    pub fn forbidden(&self) -> &[Vec<usize>] {
        &self.forbidden
    }

    /// A forbidden subset realizable against `args`, as the picked `x_i`.
    pub fn violation(&self, args: &[IdSet]) -> Option<Vec<usize>> {
        let args = &args[..self.arity];
        self.forbidden.iter().find_map(|s| assign(s, args))
    }

    /// Forbidden subsets lying entirely outside `removed`.
    pub fn surviving(&self, removed: &IdSet) -> Vec<&Vec<usize>> {
        self.forbidden.iter().filter(|s| s.iter().all(|&x| !removed.contains(x))).collect()
    }
}

/// Perfect matching of argument slots to members of `s` avoiding the
/// removed sets, by augmenting paths.
fn assign(s: &[usize], args: &[IdSet]) -> Option<Vec<usize>> {
    let k = s.len();
    let mut slot_of: Vec<Option<usize>> = vec![None; k];
    fn augment(slot: usize, s: &[usize], args: &[IdSet], seen: &mut [bool], slot_of: &mut [Option<usize>]) -> bool {
        for (m, &x) in s.iter().enumerate() {
            if seen[m] || args[slot].contains(x) {
                continue;
            }
            seen[m] = true;
            if slot_of[m].map_or(true, |other| augment(other, s, args, seen, slot_of)) {
                slot_of[m] = Some(slot);
                return true;
            }
        }
        false
    }
    for slot in 0..k {
        let mut seen = vec![false; k];
        if !augment(slot, s, args, &mut seen, &mut slot_of) {
            return None;
        }
    }
    let mut picked = vec![0; k];
    for (m, slot) in slot_of.into_iter().enumerate() {
        picked[slot.expect("perfect matching")] = s[m];
    }
    Some(picked)
}

impl Predicate<IdSet> for ForbiddenTuples {
    fn arity(&self) -> usize {
        self.arity
    }
    fn eval(&self, args: &[IdSet]) -> bool {
        self.violation(args).is_none()
    }
    fn name(&self) -> String {
        self.name.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_count() {
        let items: Vec<usize> = (0..6).collect();
        assert_eq!(k_subsets(&items, 3).len(), 20);
        assert_eq!(k_subsets(&items, 0), vec![Vec::<usize>::new()]);
        assert!(k_subsets(&items, 7).is_empty());
    }

    #[test]
    fn matching_respects_slots() {
        let p = ForbiddenTuples::new("pair", 2, vec![vec![0, 1]]);
        let s = |v: &[usize]| IdSet::from_iter_with_len(3, v.iter().copied());
        assert!(!p.eval(&[s(&[]), s(&[])]));
        // slot 0 cannot take 0, slot 1 cannot take 1: pick (1, 0)
        assert_eq!(p.violation(&[s(&[0]), s(&[1])]), Some(vec![1, 0]));
        assert!(p.eval(&[s(&[0]), s(&[0])]));
        assert!(p.eval(&[s(&[0, 1]), s(&[])]));
    }
}
