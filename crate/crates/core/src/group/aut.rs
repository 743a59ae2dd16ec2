//! Automorphisms of a Cayley-table group.

use std::collections::BTreeSet;

use serde::Serialize;

use super::table::FiniteGroup;
use crate::error::{Error, Result};
use crate::perm::{self, Perm};

/// Largest group order accepted by the automorphism search.
pub const MAX_GROUP_ORDER: usize = 128;
/// Default bound on the number of automorphisms enumerated.
pub const DEFAULT_AUT_CAP: usize = 100_000;

#[derive(Clone, Debug, Serialize)]
pub struct GroupAutomorphisms {
    /// Generators as permutations of element ids.
    pub generators: Vec<Perm>,
    pub order: usize,
}

/// A generating set chosen greedily in id order.
pub fn generating_set(g: &FiniteGroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = g.trivial_subgroup();
    for x in 0..g.order() {
        if !span.contains(x) {
            gens.push(x);
            span = g.generate(gens.iter().copied());
        }
    }
    gens
}

/// Extends generator images to a map by `φ(x·s) = φ(x)·φ(s)`; `None` if
/// inconsistent or not bijective.
fn extend(g: &FiniteGroup, gens: &[usize], images: &[usize]) -> Option<Perm> {
    let n = g.order();
    let mut map = vec![usize::MAX; n];
    map[g.identity()] = g.identity();
    let mut frontier = vec![g.identity()];
    while let Some(x) = frontier.pop() {
        for (&s, &img) in gens.iter().zip(images) {
            let y = g.mul(x, s);
            let fy = g.mul(map[x], img);
            if map[y] == usize::MAX {
                map[y] = fy;
                frontier.push(y);
            } else if map[y] != fy {
                return None;
            }
        }
    }
    perm::is_permutation(&map).then_some(map)
}

pub fn is_automorphism(g: &FiniteGroup, p: &[usize]) -> bool {
    p.len() == g.order()
        && perm::is_permutation(p)
        && (0..g.order()).all(|a| (0..g.order()).all(|b| p[g.mul(a, b)] == g.mul(p[a], p[b])))
}

/// Every automorphism, sorted.
pub fn all_automorphisms(g: &FiniteGroup, cap: usize) -> Result<Vec<Perm>> {
    if g.order() > MAX_GROUP_ORDER {
        return Err(Error::PreconditionViolated(format!(
            "group order {} exceeds {MAX_GROUP_ORDER}",
            g.order()
        )));
    }
    let gens = generating_set(g);
    let orders: Vec<usize> = (0..g.order()).map(|x| g.element_order(x)).collect();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| (0..g.order()).filter(|&y| orders[y] == orders[s]).collect())
        .collect();
    let mut found = BTreeSet::new();
    let mut images = Vec::with_capacity(gens.len());
    fn search(
        g: &FiniteGroup,
        gens: &[usize],
        candidates: &[Vec<usize>],
        images: &mut Vec<usize>,
        found: &mut BTreeSet<Perm>,
        cap: usize,
    ) -> Result<()> {
        if images.len() == gens.len() {
            if let Some(p) = extend(g, gens, images) {
                if found.len() >= cap {
                    return Err(Error::cap("automorphism enumeration", cap));
                }
                found.insert(p);
            }
            return Ok(());
        }
        for &y in &candidates[images.len()] {
            if images.contains(&y) {
                continue;
            }
            images.push(y);
            search(g, gens, candidates, images, found, cap)?;
            images.pop();
        }
        Ok(())
    }
    search(g, &gens, &candidates, &mut images, &mut found, cap)?;
    Ok(found.into_iter().collect())
}

/// Generators of `Aut(G)` chosen greedily from the sorted list of all
/// automorphisms, with the group order.
pub fn automorphism_group(g: &FiniteGroup, cap: usize) -> Result<GroupAutomorphisms> {
    let all = all_automorphisms(g, cap)?;
    let order = all.len();
    let mut generators: Vec<Perm> = Vec::new();
    let mut span: BTreeSet<Perm> = BTreeSet::from([perm::identity(g.order())]);
    for p in &all {
        if span.contains(p) {
            continue;
        }
        generators.push(p.clone());
        span = perm::enumerate_group(g.order(), &generators, order + 1)?.into_iter().collect();
        if span.len() == order {
            break;
        }
    }
    Ok(GroupAutomorphisms { generators, order })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn aut_order(g: &FiniteGroup) -> usize {
        automorphism_group(g, DEFAULT_AUT_CAP).unwrap().order
    }

    #[test]
    fn known_orders() {
        assert_eq!(aut_order(&FiniteGroup::trivial()), 1);
        assert_eq!(aut_order(&FiniteGroup::cyclic(5)), 4);
        assert_eq!(aut_order(&FiniteGroup::cyclic(12)), 4);
        assert_eq!(aut_order(&FiniteGroup::symmetric(3)), 6);
        assert_eq!(aut_order(&FiniteGroup::dihedral(4)), 8);
        assert_eq!(aut_order(&FiniteGroup::quaternion()), 24);
        assert_eq!(aut_order(&FiniteGroup::alternating(4)), 24);
        let v4 = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
        assert_eq!(aut_order(&v4), 6);
    }

    #[test]
    fn brute_force_agrees_on_c5() {
        let g = FiniteGroup::cyclic(5);
        let brute = perm::enumerate_group(5, &[vec![1, 0, 2, 3, 4], vec![1, 2, 3, 4, 0]], 200)
            .unwrap()
            .into_iter()
            .filter(|p| is_automorphism(&g, p))
            .count();
        assert_eq!(brute, 4);
        for p in automorphism_group(&g, 100).unwrap().generators {
            assert!(is_automorphism(&g, &p));
        }
    }

    #[test]
    fn cap_and_order_limit() {
        assert!(matches!(
            automorphism_group(&FiniteGroup::quaternion(), 5),
            Err(Error::CapExceeded { .. })
        ));
        assert!(automorphism_group(&FiniteGroup::cyclic(130), 10).is_err());
    }
}
