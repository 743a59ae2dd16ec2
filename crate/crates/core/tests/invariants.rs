//! Property tests for the structural guarantees of the engine and the
//! shipped instances.

use std::collections::BTreeSet;

use latinv::geomset::{isometry_group, on_common_sphere, ForbiddenTuples, PointSet, RationalPoint};
use latinv::graph::{automorphism_group, is_automorphism, Graph};
use latinv::perm::enumerate_group;
use latinv::{engine_run, CofiniteLattice, IdSet, Predicate};
use proptest::prelude::*;

fn perm(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

/// Ground size, a few generators and a start element.
fn cofinite_instance() -> impl Strategy<Value = (usize, Vec<Vec<usize>>, BTreeSet<usize>)> {
    (2usize..=8).prop_flat_map(|n| {
        (Just(n), prop::collection::vec(perm(n), 0..=2), prop::collection::btree_set(0..n, 0..=3))
    })
}

fn image(p: &[usize], s: &BTreeSet<usize>) -> BTreeSet<usize> {
    s.iter().map(|&x| p[x]).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn engine_result_is_invariant_and_bounded((n, gens, start) in cofinite_instance(), t in 1usize..=3) {
        let lattice = CofiniteLattice::new(n, gens.clone());
        let run = engine_run(&lattice, &lattice.element(start.iter().copied()), t, 1 << 16).unwrap();
        let removed: BTreeSet<usize> = run.result.iter().collect();
        let group = enumerate_group(n, &gens, 1 << 16).unwrap();
        for g in &group {
            prop_assert_eq!(image(g, &removed), removed.clone());
        }
        // codimension bound f^{t-1}
        let mut bound = start.len() as u128;
        for _ in 1..t {
            bound *= bound + 1;
        }
        prop_assert!(removed.len() as u128 <= bound);
        // H sits inside the union of the images of N and contains their intersection
        let images: Vec<BTreeSet<usize>> = group.iter().map(|g| image(g, &start)).collect();
        let union: BTreeSet<usize> = images.iter().flatten().copied().collect();
        prop_assert!(removed.is_subset(&union));
        let common = images.iter().skip(1).fold(images[0].clone(), |acc, s| &acc & s);
        prop_assert!(common.is_subset(&removed));
    }

    #[test]
    fn removing_more_keeps_forbidden_tuples_absent(
        family in prop::collection::vec(prop::collection::btree_set(0usize..6, 2), 0..6),
        removed in prop::collection::vec(prop::collection::btree_set(0usize..6, 0..6), 2),
        extra in prop::collection::btree_set(0usize..6, 0..3),
    ) {
        let forbidden: Vec<Vec<usize>> = family.into_iter().map(|s| s.into_iter().collect()).collect();
        let p = ForbiddenTuples::new("pairs", 2, forbidden);
        let args: Vec<IdSet> = removed.iter().map(|r| IdSet::from_iter_with_len(6, r.iter().copied())).collect();
        let more: Vec<IdSet> = removed
            .iter()
            .map(|r| IdSet::from_iter_with_len(6, r.iter().chain(&extra).copied()))
            .collect();
        if p.eval(&args) {
            prop_assert!(p.eval(&more));
        }
        prop_assert_eq!(p.eval(&args), p.violation(&args).is_none());
    }

    #[test]
    fn isometry_generators_preserve_distances(
        coords in prop::collection::btree_set((-2i64..=2, -2i64..=2, -2i64..=2), 1..=7),
    ) {
        let pts = PointSet::new(coords.iter().map(|&(x, y, z)| RationalPoint::from_ints(x, y, z)).collect()).unwrap();
        let iso = isometry_group(&pts, 200_000).unwrap();
        for g in &iso.generators {
            for i in 0..pts.len() {
                for j in 0..pts.len() {
                    prop_assert_eq!(pts.points()[i].dist2(&pts.points()[j]), pts.points()[g[i]].dist2(&pts.points()[g[j]]));
                }
            }
        }
        let group = enumerate_group(pts.len(), &iso.generators, 1 << 16).unwrap();
        prop_assert_eq!(iso.order.to_string(), group.len().to_string());
    }

    #[test]
    fn cosphericity_ignores_translation_and_order(
        coords in prop::collection::btree_set((-2i64..=2, -2i64..=2, -2i64..=2), 4..=5),
        shift in (-3i64..=3, -3i64..=3, -3i64..=3),
    ) {
        let pts: Vec<RationalPoint> = coords.iter().map(|&(x, y, z)| RationalPoint::from_ints(x, y, z)).collect();
        let moved: Vec<RationalPoint> = coords
            .iter()
            .rev()
            .map(|&(x, y, z)| RationalPoint::from_ints(x + shift.0, y + shift.1, z + shift.2))
            .collect();
        prop_assert_eq!(on_common_sphere(&pts, false).unwrap(), on_common_sphere(&moved, false).unwrap());
    }

    #[test]
    fn lattice_points_of_a_shell_are_cospherical(pick in prop::sample::subsequence(
        vec![(1, 2, 0), (2, 1, 0), (-1, 2, 0), (0, 1, 2), (0, -2, 1), (2, 0, -1), (-2, 0, 1), (1, 0, -2), (0, 2, -1)], 4..=6,
    )) {
        let pts: Vec<RationalPoint> = pick.iter().map(|&(x, y, z)| RationalPoint::from_ints(x, y, z)).collect();
        prop_assert!(on_common_sphere(&pts, false).unwrap());
    }

    #[test]
    fn graph_generators_are_automorphisms(
        n in 2usize..=7,
        pairs in prop::collection::btree_set((0usize..7, 0usize..7), 0..12),
    ) {
        let pairs: Vec<(usize, usize)> = pairs
            .into_iter()
            .filter(|&(u, v)| u < v && v < n)
            .collect();
        let g = Graph::from_pairs(false, n, &pairs);
        let auts = automorphism_group(&g, 200_000).unwrap();
        for p in &auts.vertex_generators {
            prop_assert!(is_automorphism(&g, p));
        }
        let all = enumerate_group(n, &auts.vertex_generators, 1 << 16).unwrap();
        prop_assert_eq!(auts.vertex_order.to_string(), all.len().to_string());
    }
}
