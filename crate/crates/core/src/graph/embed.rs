//! Injective (not necessarily induced) subgraph embeddings with per-edge
//! constraints on the image.

use std::collections::HashMap;

use serde::Serialize;

use super::model::Graph;
use crate::error::{Error, Result};
use crate::idset::IdSet;

/// An embedding, as (pattern id, host id) pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Embedding {
    pub vertex_map: Vec<(usize, usize)>,
    pub edge_map: Vec<(usize, usize)>,
}

fn color_ok(pattern: Option<i64>, host: Option<i64>) -> bool {
    pattern.is_none() || pattern == host
}

struct Matcher<'a> {
    pattern: &'a Graph,
    host: &'a Graph,
    /// Allowed host edge positions per pattern edge position.
    allowed: &'a [IdSet],
    order: Vec<usize>,
    /// Pattern edges to place once `order[i]` is mapped.
    pending: Vec<Vec<usize>>,
    host_pairs: HashMap<(usize, usize), Vec<usize>>,
    host_adj: Vec<Vec<usize>>,
    host_deg: Vec<usize>,
    pattern_deg: Vec<usize>,
    vmap: Vec<usize>,
    vused: Vec<bool>,
    emap: Vec<usize>,
    eused: Vec<bool>,
}

const UNSET: usize = usize::MAX;

impl<'a> Matcher<'a> {
    fn new(pattern: &'a Graph, host: &'a Graph, allowed: &'a [IdSet]) -> Self {
        let pn = pattern.vertex_count();
        let mut p_adj = vec![Vec::new(); pn];
        for e in 0..pattern.edge_count() {
            let (u, v) = pattern.ends(e);
            p_adj[u].push(v);
            p_adj[v].push(u);
        }
        let pattern_deg = pattern.degrees();
        // Most constrained first: maximize links to placed vertices, then degree.
        let mut order = Vec::with_capacity(pn);
        let mut placed = vec![false; pn];
        let mut links = vec![0usize; pn];
        for _ in 0..pn {
            let next = (0..pn)
                .filter(|&v| !placed[v])
                .max_by_key(|&v| (links[v], pattern_deg[v], std::cmp::Reverse(v)))
                .unwrap();
            placed[next] = true;
            order.push(next);
            for &w in &p_adj[next] {
                links[w] += 1;
            }
        }
        let mut rank = vec![0; pn];
        for (i, &v) in order.iter().enumerate() {
            rank[v] = i;
        }
        let mut pending = vec![Vec::new(); pn];
        for e in 0..pattern.edge_count() {
            let (u, v) = pattern.ends(e);
            pending[rank[u].max(rank[v])].push(e);
        }
        let mut host_pairs: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        let mut host_adj = vec![Vec::new(); host.vertex_count()];
        for e in 0..host.edge_count() {
            let (u, v) = host.ends(e);
            host_pairs.entry((u, v)).or_default().push(e);
            if !host.directed && u != v {
                host_pairs.entry((v, u)).or_default().push(e);
            }
            host_adj[u].push(v);
            host_adj[v].push(u);
        }
        for a in &mut host_adj {
            a.sort_unstable();
            a.dedup();
        }
        Matcher {
            pattern,
            host,
            allowed,
            order,
            pending,
            host_pairs,
            host_adj,
            host_deg: host.degrees(),
            pattern_deg,
            vmap: vec![UNSET; pn],
            vused: vec![false; host.vertex_count()],
            emap: vec![UNSET; pattern.edge_count()],
            eused: vec![false; host.edge_count()],
        }
    }

    fn candidates(&self, x: usize) -> Vec<usize> {
        // Restrict to neighbours of an already-mapped neighbour when possible.
        let anchor = (0..self.pattern.edge_count()).find_map(|e| {
            let (u, v) = self.pattern.ends(e);
            if u == x && v != x && self.vmap[v] != UNSET {
                Some(self.vmap[v])
            } else if v == x && u != x && self.vmap[u] != UNSET {
                Some(self.vmap[u])
            } else {
                None
            }
        });
        let pool: Vec<usize> = match anchor {
            Some(h) => self.host_adj[h].clone(),
            None => (0..self.host.vertex_count()).collect(),
        };
        let xc = self.pattern.vertices[x].color;
        pool.into_iter()
            .filter(|&y| {
                !self.vused[y]
                    && self.host_deg[y] >= self.pattern_deg[x]
                    && color_ok(xc, self.host.vertices[y].color)
            })
            .collect()
    }

    fn place_vertex(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let x = self.order[depth];
        for y in self.candidates(x) {
            self.vmap[x] = y;
            self.vused[y] = true;
            if self.place_edges(depth, 0) {
                return true;
            }
            self.vused[y] = false;
            self.vmap[x] = UNSET;
        }
        false
    }

    fn place_edges(&mut self, depth: usize, k: usize) -> bool {
        let Some(&pe) = self.pending[depth].get(k) else {
            return self.place_vertex(depth + 1);
        };
        let (u, v) = self.pattern.ends(pe);
        let key = (self.vmap[u], self.vmap[v]);
        let pc = self.pattern.edges[pe].color;
        let options = self.host_pairs.get(&key).cloned().unwrap_or_default();
        for he in options {
            if self.eused[he]
                || !self.allowed[pe].contains(he)
                || !color_ok(pc, self.host.edges[he].color)
            {
                continue;
            }
            self.eused[he] = true;
            self.emap[pe] = he;
            if self.place_edges(depth, k + 1) {
                return true;
            }
            self.emap[pe] = UNSET;
            self.eused[he] = false;
        }
        false
    }

    fn result(&self) -> Embedding {
        Embedding {
            vertex_map: (0..self.pattern.vertex_count())
                .map(|x| (self.pattern.vertices[x].id, self.host.vertices[self.vmap[x]].id))
                .collect(),
            edge_map: (0..self.pattern.edge_count())
                .map(|e| (self.pattern.edges[e].id, self.host.edges[self.emap[e]].id))
                .collect(),
        }
    }
}

/// Embeds `pattern` into `host` with pattern edge `j` (by position) mapped
/// into `allowed[j]`, a set of host edge positions. Pattern colours of
/// `None` match any host colour. Direction is respected when the host is
/// directed and ignored otherwise.
pub fn embed_constrained(pattern: &Graph, host: &Graph, allowed: &[IdSet]) -> Result<Option<Embedding>> {
    if allowed.len() != pattern.edge_count() {
        return Err(Error::ArityMismatch { expected: pattern.edge_count(), got: allowed.len() });
    }
    if pattern.vertex_count() > host.vertex_count() || pattern.edge_count() > host.edge_count() {
        return Ok(None);
    }
    if allowed.iter().any(|a| a.universe_len() < host.edge_count()) {
        return Err(Error::PreconditionViolated("allowed set over a different edge universe".into()));
    }
    let mut m = Matcher::new(pattern, host, allowed);
    Ok(m.place_vertex(0).then(|| m.result()))
}

/// Unconstrained embedding.
pub fn embed(pattern: &Graph, host: &Graph) -> Option<Embedding> {
    let all = vec![IdSet::full(host.edge_count()); pattern.edge_count()];
    embed_constrained(pattern, host, &all).expect("allowed sets sized to the host")
}

/// Allowed sets built from host edge ids.
pub fn allowed_from_ids(host: &Graph, ids: &[Vec<usize>]) -> Result<Vec<IdSet>> {
    ids.iter().map(|s| host.positions_of(s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::model::families;

    #[test]
    fn triangle_in_k4() {
        let tri = families::triangle();
        let k4 = families::complete(4);
        assert!(embed(&tri, &k4).is_some());
    }

    #[test]
    fn triangle_not_in_tree() {
        let tree = Graph::from_pairs(false, 6, &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5)]);
        assert!(embed(&families::triangle(), &tree).is_none());
    }

    #[test]
    fn first_edge_pinned() {
        let tri = families::triangle();
        let k4 = families::complete(4);
        for e in 0..6 {
            let mut allowed = vec![IdSet::full(6); 3];
            allowed[0] = IdSet::from_iter_with_len(6, [e]);
            let emb = embed_constrained(&tri, &k4, &allowed).unwrap().unwrap();
            assert_eq!(emb.edge_map[0], (0, e));
        }
    }

    #[test]
    fn parallel_edges_are_literal() {
        let digon = Graph::from_pairs(false, 2, &[(0, 1), (0, 1)]);
        assert!(embed(&digon, &families::path(2)).is_none());
        assert!(embed(&digon, &Graph::from_pairs(false, 3, &[(0, 1), (1, 2), (1, 2)])).is_some());
    }

    #[test]
    fn direction_and_colour_respected() {
        let arc = Graph::from_pairs(true, 3, &[(0, 1), (1, 2)]);
        let host = Graph::from_pairs(true, 3, &[(1, 0), (1, 2)]);
        assert!(embed(&arc, &host).is_none());
        let host2 = Graph::from_pairs(true, 3, &[(0, 1), (1, 2)]);
        assert!(embed(&arc, &host2).is_some());
        let mut p = families::path(2);
        p.vertices[0].color = Some(5);
        let p = Graph::new(false, p.vertices.clone(), p.edges.clone()).unwrap();
        assert!(embed(&p, &families::path(3)).is_none());
    }

    #[test]
    fn arity_checked() {
        let tri = families::triangle();
        assert!(matches!(
            embed_constrained(&tri, &families::complete(4), &[]),
            Err(Error::ArityMismatch { .. })
        ));
    }
}
