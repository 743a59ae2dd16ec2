//! The `G_n` family: invariant planarization needs at least `n` edges.

use latinv::graph::{edge_orbits, gen_gn, planarity_test, planarize_invariant, Caps};

#[test]
fn invariant_planarization_of_gn() {
    for n in 1..=3 {
        let gn = gen_gn(n);
        let out = planarize_invariant(&gn.graph, &gn.designated, Caps::default()).unwrap();
        assert!(out.removed.len() >= n, "n = {n}: {:?}", out.removed);
        assert!(planarity_test(&gn.graph.without_ids(&out.removed).unwrap()));
        let orbits = edge_orbits(&gn.graph, &[gn.rotation.clone()]).unwrap();
        for o in orbits {
            let inside = o.iter().filter(|e| out.removed.contains(e)).count();
            assert!(inside == 0 || inside == o.len(), "not a union of rotation orbits");
        }
    }
}
