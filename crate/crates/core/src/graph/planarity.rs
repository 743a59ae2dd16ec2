//! Left-right planarity test and Kuratowski subgraph extraction.
//!
//! The test runs on the underlying simple graph: direction is ignored,
//! loops are dropped and parallel edges merged.

use std::collections::BTreeSet;

use super::model::Graph;
use crate::error::{Error, Result};
use crate::idset::IdSet;

const NONE: usize = usize::MAX;

#[derive(Clone, Copy, Default, PartialEq, Eq)]
struct Interval {
    low: Option<usize>,
    high: Option<usize>,
}

impl Interval {
    fn is_empty(&self) -> bool {
        self.low.is_none() && self.high.is_none()
    }
}

#[derive(Clone, Copy)]
struct ConflictPair {
    id: usize,
    left: Interval,
    right: Interval,
}

impl ConflictPair {
    fn swap(&mut self) {
        std::mem::swap(&mut self.left, &mut self.right);
    }
}

struct LeftRight {
    adj: Vec<Vec<usize>>,
    height: Vec<usize>,
    parent_edge: Vec<usize>,
    src: Vec<usize>,
    dst: Vec<usize>,
    lowpt: Vec<usize>,
    lowpt2: Vec<usize>,
    nesting_depth: Vec<usize>,
    oriented: BTreeSet<(usize, usize)>,
    out: Vec<Vec<usize>>,
    refs: Vec<Option<usize>>,
    lowpt_edge: Vec<Option<usize>>,
    stack: Vec<ConflictPair>,
    stack_bottom: Vec<Option<usize>>,
    next_pair: usize,
}

impl LeftRight {
    fn new(adj: Vec<Vec<usize>>) -> Self {
        let n = adj.len();
        LeftRight {
            adj,
            height: vec![NONE; n],
            parent_edge: vec![NONE; n],
            src: Vec::new(),
            dst: Vec::new(),
            lowpt: Vec::new(),
            lowpt2: Vec::new(),
            nesting_depth: Vec::new(),
            oriented: BTreeSet::new(),
            out: vec![Vec::new(); n],
            refs: Vec::new(),
            lowpt_edge: Vec::new(),
            stack: Vec::new(),
            stack_bottom: Vec::new(),
            next_pair: 0,
        }
    }

    fn new_pair(&mut self, left: Interval, right: Interval) -> ConflictPair {
        self.next_pair += 1;
        ConflictPair { id: self.next_pair, left, right }
    }

    fn top_id(&self) -> Option<usize> {
        self.stack.last().map(|p| p.id)
    }

    fn conflicting(&self, i: &Interval, b: usize) -> bool {
        i.high.is_some_and(|h| self.lowpt[h] > self.lowpt[b])
    }

    fn lowest(&self, p: &ConflictPair) -> usize {
        match (p.left.low, p.right.low) {
            (None, Some(r)) => self.lowpt[r],
            (Some(l), None) => self.lowpt[l],
            (Some(l), Some(r)) => self.lowpt[l].min(self.lowpt[r]),
            (None, None) => NONE,
        }
    }

    fn orient(&mut self, v: usize) {
        let neighbours = self.adj[v].clone();
        for w in neighbours {
            if self.oriented.contains(&(v.min(w), v.max(w))) {
                continue;
            }
            self.oriented.insert((v.min(w), v.max(w)));
            let e = self.src.len();
            self.src.push(v);
            self.dst.push(w);
            self.lowpt.push(self.height[v]);
            self.lowpt2.push(self.height[v]);
            self.nesting_depth.push(0);
            self.refs.push(None);
            self.lowpt_edge.push(None);
            self.stack_bottom.push(None);
            self.out[v].push(e);
            if self.height[w] == NONE {
                self.parent_edge[w] = e;
                self.height[w] = self.height[v] + 1;
                self.orient(w);
            } else {
                self.lowpt[e] = self.height[w];
            }
            self.nesting_depth[e] = 2 * self.lowpt[e] + usize::from(self.lowpt2[e] < self.height[v]);
            let pe = self.parent_edge[v];
            if pe != NONE {
                if self.lowpt[e] < self.lowpt[pe] {
                    self.lowpt2[pe] = self.lowpt[pe].min(self.lowpt2[e]);
                    self.lowpt[pe] = self.lowpt[e];
                } else if self.lowpt[e] > self.lowpt[pe] {
                    self.lowpt2[pe] = self.lowpt2[pe].min(self.lowpt[e]);
                } else {
                    self.lowpt2[pe] = self.lowpt2[pe].min(self.lowpt2[e]);
                }
            }
        }
    }

    fn test(&mut self, v: usize) -> bool {
        let e = self.parent_edge[v];
        let mut ordered = self.out[v].clone();
        ordered.sort_by_key(|&x| self.nesting_depth[x]);
        for (i, &ei) in ordered.iter().enumerate() {
            self.stack_bottom[ei] = self.top_id();
            let w = self.dst[ei];
            if self.parent_edge[w] == ei {
                if !self.test(w) {
                    return false;
                }
            } else {
                self.lowpt_edge[ei] = Some(ei);
                let pair = self.new_pair(Interval::default(), Interval { low: Some(ei), high: Some(ei) });
                self.stack.push(pair);
            }
            if self.lowpt[ei] < self.height[v] {
                if i == 0 {
                    if e != NONE {
                        self.lowpt_edge[e] = self.lowpt_edge[ei];
                    }
                } else if e != NONE && !self.add_constraints(ei, e) {
                    return false;
                }
            }
        }
        if e != NONE {
            self.remove_back_edges(e);
        }
        true
    }

    fn add_constraints(&mut self, ei: usize, e: usize) -> bool {
        let mut p = self.new_pair(Interval::default(), Interval::default());
        loop {
            let Some(mut q) = self.stack.pop() else { break };
            if !q.left.is_empty() {
                q.swap();
            }
            if !q.left.is_empty() {
                return false;
            }
            let ql = q.right.low.expect("nonempty right interval");
            if self.lowpt[ql] > self.lowpt[e] {
                if p.right.is_empty() {
                    p.right.high = q.right.high;
                } else if let Some(pl) = p.right.low {
                    self.refs[pl] = q.right.high;
                }
                p.right.low = q.right.low;
            } else {
                self.refs[ql] = self.lowpt_edge[e];
            }
            if self.top_id() == self.stack_bottom[ei] {
                break;
            }
        }
        while let Some(top) = self.stack.last() {
            if !(self.conflicting(&top.left, ei) || self.conflicting(&top.right, ei)) {
                break;
            }
            let mut q = self.stack.pop().unwrap();
            if self.conflicting(&q.right, ei) {
                q.swap();
            }
            if self.conflicting(&q.right, ei) {
                return false;
            }
            if let Some(pl) = p.right.low {
                self.refs[pl] = q.right.high;
            }
            if q.right.low.is_some() {
                p.right.low = q.right.low;
            }
            if p.left.is_empty() {
                p.left.high = q.left.high;
            } else if let Some(pl) = p.left.low {
                self.refs[pl] = q.left.high;
            }
            p.left.low = q.left.low;
        }
        if !(p.left.is_empty() && p.right.is_empty()) {
            self.stack.push(p);
        }
        true
    }

    fn remove_back_edges(&mut self, e: usize) {
        let u = self.src[e];
        while let Some(top) = self.stack.last() {
            if self.lowest(top) != self.height[u] {
                break;
            }
            self.stack.pop();
        }
        if let Some(mut p) = self.stack.pop() {
            while let Some(h) = p.left.high {
                if self.dst[h] != u {
                    break;
                }
                p.left.high = self.refs[h];
            }
            if p.left.high.is_none() && p.left.low.is_some() {
                self.refs[p.left.low.unwrap()] = p.right.low;
                p.left.low = None;
            }
            while let Some(h) = p.right.high {
                if self.dst[h] != u {
                    break;
                }
                p.right.high = self.refs[h];
            }
            if p.right.high.is_none() && p.right.low.is_some() {
                self.refs[p.right.low.unwrap()] = p.left.low;
                p.right.low = None;
            }
            self.stack.push(p);
        }
        if self.lowpt[e] < self.height[u] {
            if let Some(top) = self.stack.last() {
                let hl = top.left.high;
                let hr = top.right.high;
                self.refs[e] = match (hl, hr) {
                    (Some(l), Some(r)) if self.lowpt[l] > self.lowpt[r] => Some(l),
                    (Some(l), None) => Some(l),
                    _ => hr,
                };
            }
        }
    }
}

/// Adjacency lists of the underlying simple undirected graph.
fn simple_adjacency(g: &Graph, keep: Option<&IdSet>) -> Vec<Vec<usize>> {
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); g.vertex_count()];
    for e in 0..g.edge_count() {
        if keep.is_some_and(|k| !k.contains(e)) {
            continue;
        }
        let (u, v) = g.ends(e);
        if u != v {
            adj[u].insert(v);
            adj[v].insert(u);
        }
    }
    adj.into_iter().map(|s| s.into_iter().collect()).collect()
}

fn is_planar_adj(adj: Vec<Vec<usize>>) -> bool {
    let n = adj.len();
    let m: usize = adj.iter().map(Vec::len).sum::<usize>() / 2;
    if n > 2 && m > 3 * n - 6 {
        return false;
    }
    let mut lr = LeftRight::new(adj);
    let mut roots = Vec::new();
    for v in 0..n {
        if lr.height[v] == NONE {
            lr.height[v] = 0;
            roots.push(v);
            lr.orient(v);
        }
    }
    roots.into_iter().all(|r| lr.test(r))
}

pub fn planarity_test(g: &Graph) -> bool {
    is_planar_adj(simple_adjacency(g, None))
}

/// Planarity of the subgraph on the given edge positions.
pub fn is_planar_subset(g: &Graph, keep: &IdSet) -> bool {
    is_planar_adj(simple_adjacency(g, Some(keep)))
}

/// An edge-minimal nonplanar subgraph, by deleting edges in position order
/// whenever the rest stays nonplanar. Isolated vertices are dropped; ids
/// are kept.
pub fn kuratowski_extract(g: &Graph) -> Result<Graph> {
    let mut keep = IdSet::full(g.edge_count());
    if is_planar_subset(g, &keep) {
        return Err(Error::PreconditionViolated("graph is planar".into()));
    }
    for e in 0..g.edge_count() {
        keep.remove(e);
        if is_planar_subset(g, &keep) {
            keep.insert(e);
        }
    }
    Ok(g.edge_induced(&keep))
}
