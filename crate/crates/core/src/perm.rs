//! Permutations of `0..n` as image vectors.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

pub type Perm = Vec<usize>;

pub fn identity(n: usize) -> Perm {
    (0..n).collect()
}

pub fn is_identity(p: &[usize]) -> bool {
    p.iter().enumerate().all(|(i, &j)| i == j)
}

/// `(p ∘ q)(i) = p[q[i]]`.
pub fn compose(p: &[usize], q: &[usize]) -> Perm {
    q.iter().map(|&i| p[i]).collect()
}

pub fn inverse(p: &[usize]) -> Perm {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

pub fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&j| j < p.len() && !std::mem::replace(&mut seen[j], true))
}

/// Orbits of `0..n` under the generators, each sorted, ordered by least member.
pub fn orbits(n: usize, gens: &[Perm]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for g in gens {
        for (i, &j) in g.iter().enumerate() {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
}

/// Orbit of a single point.
pub fn orbit_of(point: usize, gens: &[Perm]) -> BTreeSet<usize> {
    let mut seen = BTreeSet::from([point]);
    let mut stack = vec![point];
    while let Some(x) = stack.pop() {
        for g in gens {
            if seen.insert(g[x]) {
                stack.push(g[x]);
            }
        }
    }
    seen
}

/// All elements of the group generated by `gens`, sorted.
pub fn enumerate_group(n: usize, gens: &[Perm], cap: usize) -> Result<Vec<Perm>> {
    let id = identity(n);
    let mut seen = BTreeSet::from([id.clone()]);
    let mut stack = vec![id];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = compose(g, &x);
            if !seen.contains(&y) {
                if seen.len() >= cap {
                    return Err(Error::cap("group enumeration", cap));
                }
                seen.insert(y.clone());
                stack.push(y);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_and_invert() {
        let p = vec![1, 2, 0];
        let q = inverse(&p);
        assert!(is_identity(&compose(&p, &q)));
        assert_eq!(compose(&p, &p), vec![2, 0, 1]);
    }

    #[test]
    fn orbit_partition() {
        let gens = vec![vec![1, 0, 2, 4, 3]];
        assert_eq!(orbits(5, &gens), vec![vec![0, 1], vec![2], vec![3, 4]]);
        assert_eq!(orbit_of(3, &gens).len(), 2);
    }

    #[test]
    fn symmetric_group_order() {
        let gens = vec![vec![1, 0, 2, 3], vec![1, 2, 3, 0]];
        assert_eq!(enumerate_group(4, &gens, 100).unwrap().len(), 24);
        assert!(enumerate_group(4, &gens, 10).is_err());
    }

    #[test]
    fn permutation_check() {
        assert!(is_permutation(&[2, 0, 1]));
        assert!(!is_permutation(&[0, 0, 1]));
    }
}
