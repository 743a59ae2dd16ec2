//! Automorphisms by colour refinement plus individualization backtracking.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use super::model::Graph;
use crate::error::{Error, Result};
use crate::perm::{self, Perm};

/// Default bound on search-tree nodes.
pub const DEFAULT_SEARCH_CAP: usize = 200_000;

#[derive(Clone, Debug, Serialize)]
pub struct Automorphisms {
    /// Generators acting on vertex positions.
    pub vertex_generators: Vec<Perm>,
    /// Generators acting on edge positions, including swaps of parallel edges.
    pub edge_generators: Vec<Perm>,
    /// Order of the group acting on vertices.
    #[serde(serialize_with = "crate::clause::as_string")]
    pub vertex_order: BigUint,
    /// Order of the group acting on edges and vertices together.
    #[serde(serialize_with = "crate::clause::as_string")]
    pub order: BigUint,
}

/// Edges between an ordered pair of vertex positions, keyed for matching.
type PairKey = (usize, usize);

struct Labeled {
    n: usize,
    vertex_color: Vec<Option<i64>>,
    loops: Vec<Vec<Option<i64>>>,
    /// Interned label of the colour multiset of edges `v -> w`, `0` if none.
    pair_label: HashMap<PairKey, usize>,
    /// `(w, out label, in label)` for every `w != v` adjacent to `v`.
    neighbours: Vec<Vec<(usize, usize, usize)>>,
}

impl Labeled {
    fn new(g: &Graph) -> Self {
        let n = g.vertex_count();
        let mut multisets: HashMap<PairKey, Vec<Option<i64>>> = HashMap::new();
        let mut loops = vec![Vec::new(); n];
        for e in 0..g.edge_count() {
            let (u, v) = g.ends(e);
            let c = g.edges[e].color;
            if u == v {
                loops[u].push(c);
                continue;
            }
            multisets.entry((u, v)).or_default().push(c);
            if !g.directed {
                multisets.entry((v, u)).or_default().push(c);
            }
        }
        for l in &mut loops {
            l.sort();
        }
        let mut keys: Vec<_> = multisets.into_iter().collect();
        keys.sort();
        let mut intern: BTreeMap<Vec<Option<i64>>, usize> = BTreeMap::new();
        for (_, ms) in keys.iter_mut() {
            ms.sort();
            intern.entry(ms.clone()).or_insert(0);
        }
        for (i, v) in intern.values_mut().enumerate() {
            *v = i + 1;
        }
        let pair_label: HashMap<PairKey, usize> =
            keys.iter().map(|(k, ms)| (*k, intern[ms])).collect();
        let mut neighbours = vec![Vec::new(); n];
        let mut adjacent: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(u, v) in pair_label.keys() {
            adjacent[u].push(v);
            adjacent[v].push(u);
        }
        for v in 0..n {
            adjacent[v].sort_unstable();
            adjacent[v].dedup();
            for &w in &adjacent[v] {
                let out = pair_label.get(&(v, w)).copied().unwrap_or(0);
                let inn = pair_label.get(&(w, v)).copied().unwrap_or(0);
                neighbours[v].push((w, out, inn));
            }
        }
        Labeled {
            n,
            vertex_color: g.vertices.iter().map(|v| v.color).collect(),
            loops,
            pair_label,
            neighbours,
        }
    }

    fn initial_coloring(&self) -> Vec<usize> {
        let keys: Vec<_> = (0..self.n)
            .map(|v| (self.vertex_color[v], self.loops[v].clone()))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        sorted.dedup();
        keys.iter().map(|k| sorted.binary_search(k).unwrap()).collect()
    }

    fn signature(&self, colors: &[usize], v: usize) -> (usize, Vec<(usize, usize, usize)>) {
        let mut s: Vec<_> = self.neighbours[v]
            .iter()
            .map(|&(w, o, i)| (colors[w], o, i))
            .collect();
        s.sort_unstable();
        (colors[v], s)
    }

    /// Refines two colourings side by side with one shared colour numbering.
    /// Returns `None` when the colour class sizes differ.
    fn refine_pair(&self, a: &[usize], b: &[usize]) -> Option<(Vec<usize>, Vec<usize>)> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        let mut classes = count_classes(&a);
        loop {
            let sa: Vec<_> = (0..self.n).map(|v| self.signature(&a, v)).collect();
            let sb: Vec<_> = (0..self.n).map(|v| self.signature(&b, v)).collect();
            let mut all: Vec<_> = sa.iter().chain(sb.iter()).collect();
            all.sort();
            all.dedup();
            let na: Vec<usize> = sa.iter().map(|s| all.binary_search(&s).unwrap()).collect();
            let nb: Vec<usize> = sb.iter().map(|s| all.binary_search(&s).unwrap()).collect();
            if histogram(&na) != histogram(&nb) {
                return None;
            }
            let next = count_classes(&na);
            a = na;
            b = nb;
            if next == classes {
                return Some((a, b));
            }
            classes = next;
        }
    }

    fn refine(&self, a: &[usize]) -> Vec<usize> {
        self.refine_pair(a, a).expect("a colouring is compatible with itself").0
    }

    fn is_automorphism(&self, p: &[usize]) -> bool {
        (0..self.n).all(|v| {
            self.vertex_color[v] == self.vertex_color[p[v]] && self.loops[v] == self.loops[p[v]]
        }) && self
                .pair_label
                .iter()
                .all(|(&(u, v), l)| self.pair_label.get(&(p[u], p[v])) == Some(l))
    }
}

fn count_classes(c: &[usize]) -> usize {
    let mut seen: Vec<usize> = c.to_vec();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

fn histogram(c: &[usize]) -> Vec<usize> {
    let mut h = vec![0; c.len() * 2 + 1];
    for &x in c {
        if x >= h.len() {
            h.resize(x + 1, 0);
        }
        h[x] += 1;
    }
    h
}

fn individualize(c: &[usize], v: usize) -> Vec<usize> {
    let fresh = c.iter().max().map_or(0, |m| m + 1);
    let mut out = c.to_vec();
    out[v] = fresh;
    out
}

/// The first non-singleton colour class, as sorted vertex positions.
fn target_cell(c: &[usize]) -> Option<Vec<usize>> {
    let h = histogram(c);
    let color = (0..h.len()).find(|&x| h[x] > 1)?;
    Some((0..c.len()).filter(|&v| c[v] == color).collect())
}

struct Search<'a> {
    g: &'a Labeled,
    nodes: usize,
    cap: usize,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(Error::cap("automorphism search nodes", self.cap));
        }
        Ok(())
    }

    /// An automorphism carrying colouring `a` onto colouring `b`, if any.
    fn find_mapping(&mut self, a: Vec<usize>, b: Vec<usize>) -> Result<Option<Perm>> {
        self.tick()?;
        let Some(cell) = target_cell(&a) else {
            let mut by_color = vec![0; self.g.n * 2 + 2];
            for (y, &c) in b.iter().enumerate() {
                if c >= by_color.len() {
                    by_color.resize(c + 1, 0);
                }
                by_color[c] = y;
            }
            let p: Perm = a.iter().map(|&c| by_color[c]).collect();
            return Ok(self.g.is_automorphism(&p).then_some(p));
        };
        let x = cell[0];
        let color = a[x];
        let ia = individualize(&a, x);
        for y in (0..self.g.n).filter(|&y| b[y] == color) {
            let ib = individualize(&b, y);
            if let Some((ra, rb)) = self.g.refine_pair(&ia, &ib) {
                if let Some(p) = self.find_mapping(ra, rb)? {
                    return Ok(Some(p));
                }
            }
        }
        Ok(None)
    }

    /// Collects generators of the stabilizer of the individualized prefix
    /// encoded in `coloring`, multiplying `order` by the basic orbit sizes.
    fn descend(&mut self, coloring: Vec<usize>, gens: &mut Vec<Perm>, order: &mut BigUint) -> Result<()> {
        self.tick()?;
        let Some(cell) = target_cell(&coloring) else {
            return Ok(());
        };
        let base = cell[0];
        let child = self.g.refine(&individualize(&coloring, base));
        self.descend(child.clone(), gens, order)?;
        let mut orbit = perm::orbit_of(base, gens);
        for &y in &cell[1..] {
            if orbit.contains(&y) {
                continue;
            }
            let other = individualize(&coloring, y);
            if let Some((ra, rb)) = self.g.refine_pair(&individualize(&coloring, base), &other) {
                if let Some(p) = self.find_mapping(ra, rb)? {
                    gens.push(p);
                    orbit = perm::orbit_of(base, gens);
                }
            }
        }
        *order *= BigUint::from(orbit.len());
        Ok(())
    }
}

/// Edge positions grouped by (endpoints, colour); parallel edges share a key.
fn parallel_classes(g: &Graph) -> BTreeMap<(usize, usize, Option<i64>), Vec<usize>> {
    let mut classes: BTreeMap<_, Vec<usize>> = BTreeMap::new();
    for e in 0..g.edge_count() {
        classes.entry(class_key(g, g.ends(e), g.edges[e].color)).or_default().push(e);
    }
    classes
}

fn class_key(g: &Graph, (u, v): (usize, usize), c: Option<i64>) -> (usize, usize, Option<i64>) {
    if g.directed {
        (u, v, c)
    } else {
        (u.min(v), u.max(v), c)
    }
}

/// The permutation of edge positions induced by a vertex automorphism;
/// parallel edges are matched in position order. `None` if `p` is not an
/// automorphism of the edge structure.
pub fn induced_edge_perm(g: &Graph, p: &[usize]) -> Option<Perm> {
    let classes = parallel_classes(g);
    let mut out = vec![usize::MAX; g.edge_count()];
    for ((u, v, c), edges) in &classes {
        let image = classes.get(&class_key(g, (p[*u], p[*v]), *c))?;
        if image.len() != edges.len() {
            return None;
        }
        for (a, b) in edges.iter().zip(image) {
            out[*a] = *b;
        }
    }
    Some(out)
}

/// Generators of the full automorphism group respecting direction and
/// colours, in a deterministic order.
pub fn automorphism_group(g: &Graph, cap: usize) -> Result<Automorphisms> {
    let labeled = Labeled::new(g);
    let mut search = Search { g: &labeled, nodes: 0, cap };
    let start = labeled.refine(&labeled.initial_coloring());
    let mut vertex_generators = Vec::new();
    let mut vertex_order = BigUint::one();
    search.descend(start, &mut vertex_generators, &mut vertex_order)?;
    for p in &vertex_generators {
        if !labeled.is_automorphism(p) {
            return Err(Error::InvariantViolation("automorphism search produced a non-automorphism".into()));
        }
    }
    let mut edge_generators = Vec::new();
    for p in &vertex_generators {
        let e = induced_edge_perm(g, p).ok_or_else(|| {
            Error::InvariantViolation("vertex automorphism does not act on edges".into())
        })?;
        edge_generators.push(e);
    }
    let mut order = vertex_order.clone();
    let m = g.edge_count();
    for edges in parallel_classes(g).values() {
        let k = edges.len();
        if k < 2 {
            continue;
        }
        let mut swap = perm::identity(m);
        swap.swap(edges[0], edges[1]);
        edge_generators.push(swap);
        if k > 2 {
            let mut cycle = perm::identity(m);
            for i in 0..k {
                cycle[edges[i]] = edges[(i + 1) % k];
            }
            edge_generators.push(cycle);
        }
        order *= (1..=k).map(BigUint::from).product::<BigUint>();
    }
    Ok(Automorphisms { vertex_generators, edge_generators, vertex_order, order })
}

/// Orbits of the edge action of the given vertex automorphisms (together
/// with parallel-edge swaps), as sorted lists of edge ids ordered by least id.
pub fn edge_orbits(g: &Graph, vertex_gens: &[Perm]) -> Result<Vec<Vec<usize>>> {
    let labeled = Labeled::new(g);
    let mut gens = Vec::new();
    for p in vertex_gens {
        if p.len() != g.vertex_count() || !perm::is_permutation(p) || !labeled.is_automorphism(p) {
            return Err(Error::PreconditionViolated("generator is not an automorphism".into()));
        }
        gens.push(induced_edge_perm(g, p).expect("verified automorphism"));
    }
    for edges in parallel_classes(g).values() {
        if edges.len() > 1 {
            let mut cycle = perm::identity(g.edge_count());
            for i in 0..edges.len() {
                cycle[edges[i]] = edges[(i + 1) % edges.len()];
            }
            gens.push(cycle);
        }
    }
    let mut out: Vec<Vec<usize>> = perm::orbits(g.edge_count(), &gens)
        .into_iter()
        .map(|o| {
            let mut ids: Vec<usize> = o.iter().map(|&e| g.edges[e].id).collect();
            ids.sort_unstable();
            ids
        })
        .collect();
    out.sort();
    Ok(out)
}

/// True iff `p` (on vertex positions) preserves adjacency, direction and colours.
pub fn is_automorphism(g: &Graph, p: &[usize]) -> bool {
    p.len() == g.vertex_count() && perm::is_permutation(p) && Labeled::new(g).is_automorphism(p)
}
