//! Planarity against a brute-force K5 / K3,3 minor search on small graphs.

use latinv::graph::{planarity_test, Graph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn connected(adj: &[Vec<bool>], set: &[usize]) -> bool {
    if set.is_empty() {
        return false;
    }
    let mut seen = vec![set[0]];
    let mut i = 0;
    while i < seen.len() {
        let x = seen[i];
        for &y in set {
            if adj[x][y] && !seen.contains(&y) {
                seen.push(y);
            }
        }
        i += 1;
    }
    seen.len() == set.len()
}

fn touching(adj: &[Vec<bool>], a: &[usize], b: &[usize]) -> bool {
    a.iter().any(|&x| b.iter().any(|&y| adj[x][y]))
}

/// Every assignment of vertices to `k` branch sets or to none.
fn has_minor(adj: &[Vec<bool>], k: usize, need: &dyn Fn(usize, usize) -> bool) -> bool {
    let n = adj.len();
    let mut assign = vec![0usize; n];
    loop {
        let mut sets = vec![Vec::new(); k];
        for (v, &a) in assign.iter().enumerate() {
            if a > 0 {
                sets[a - 1].push(v);
            }
        }
        if sets.iter().all(|s| connected(adj, s))
            && (0..k).all(|i| (i + 1..k).all(|j| !need(i, j) || touching(adj, &sets[i], &sets[j])))
        {
            return true;
        }
        let mut i = 0;
        loop {
            if i == n {
                return false;
            }
            assign[i] += 1;
            if assign[i] <= k {
                break;
            }
            assign[i] = 0;
            i += 1;
        }
    }
}

fn brute_planar(g: &Graph) -> bool {
    let n = g.vertex_count();
    let mut adj = vec![vec![false; n]; n];
    for e in 0..g.edge_count() {
        let (u, v) = g.ends(e);
        if u != v {
            adj[u][v] = true;
            adj[v][u] = true;
        }
    }
    !has_minor(&adj, 5, &|_, _| true) && !has_minor(&adj, 6, &|i, j| (i < 3) != (j < 3))
}

#[test]
fn random_small_graphs_agree_with_minor_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut nonplanar = 0;
    for _ in 0..120 {
        let n = rng.gen_range(5..=7);
        let density = rng.gen_range(0.4..0.9);
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(density) {
                    pairs.push((i, j));
                }
            }
        }
        let g = Graph::from_pairs(false, n, &pairs);
        let expected = brute_planar(&g);
        nonplanar += usize::from(!expected);
        assert_eq!(planarity_test(&g), expected, "{pairs:?}");
    }
    assert!(nonplanar > 10, "sample should contain nonplanar graphs");
}
