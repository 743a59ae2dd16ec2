use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::idset::IdSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: usize,
    pub u: usize,
    pub v: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color: Option<i64>,
}

/// A finite graph, optionally directed and colored, with loops and parallel
/// edges allowed. Edge ids are stable: restricting to a subset of edges
/// never renumbers them.
///
/// Algorithms address vertices and edges by *position* (index into
/// `vertices` / `edges`); ids appear only at the boundary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Graph {
    pub directed: bool,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    #[serde(skip)]
    vertex_pos: HashMap<usize, usize>,
    #[serde(skip)]
    edge_pos: HashMap<usize, usize>,
}

#[derive(Deserialize)]
struct RawGraph {
    #[serde(default)]
    directed: bool,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawGraph::deserialize(d)?;
        Graph::new(raw.directed, raw.vertices, raw.edges).map_err(serde::de::Error::custom)
    }
}

impl Graph {
    pub fn new(directed: bool, vertices: Vec<Vertex>, edges: Vec<Edge>) -> Result<Self> {
        let mut vertex_pos = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if vertex_pos.insert(v.id, i).is_some() {
                return Err(Error::Parse(format!("duplicate vertex id {}", v.id)));
            }
        }
        let mut edge_pos = HashMap::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            if edge_pos.insert(e.id, i).is_some() {
                return Err(Error::Parse(format!("duplicate edge id {}", e.id)));
            }
            for end in [e.u, e.v] {
                if !vertex_pos.contains_key(&end) {
                    return Err(Error::Parse(format!("edge {} references missing vertex {end}", e.id)));
                }
            }
        }
        Ok(Graph { directed, vertices, edges, vertex_pos, edge_pos })
    }

    /// Uncolored graph on vertices `0..n` with edges numbered in order.
    pub fn from_pairs(directed: bool, n: usize, pairs: &[(usize, usize)]) -> Self {
        let vertices = (0..n).map(|id| Vertex { id, color: None }).collect();
        let edges = pairs
            .iter()
            .enumerate()
            .map(|(id, &(u, v))| Edge { id, u, v, color: None })
            .collect();
        Graph::new(directed, vertices, edges).expect("pairs reference vertices 0..n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serializes")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_position(&self, id: usize) -> Option<usize> {
        self.vertex_pos.get(&id).copied()
    }

    pub fn edge_position(&self, id: usize) -> Option<usize> {
        self.edge_pos.get(&id).copied()
    }

    /// Endpoint positions of the edge at position `e`.
    pub fn ends(&self, e: usize) -> (usize, usize) {
        let edge = &self.edges[e];
        (self.vertex_pos[&edge.u], self.vertex_pos[&edge.v])
    }

    /// Edge ids to a position set.
    pub fn positions_of(&self, ids: &[usize]) -> Result<IdSet> {
        let mut set = IdSet::empty(self.edge_count());
        for id in ids {
            let p = self
                .edge_position(*id)
                .ok_or_else(|| Error::Parse(format!("unknown edge id {id}")))?;
            set.insert(p);
        }
        Ok(set)
    }

    /// Position set to sorted edge ids.
    pub fn ids_of(&self, positions: &IdSet) -> Vec<usize> {
        let ids: BTreeSet<usize> = positions.iter().map(|p| self.edges[p].id).collect();
        ids.into_iter().collect()
    }

    pub fn edge_ids(&self) -> Vec<usize> {
        self.edges.iter().map(|e| e.id).collect()
    }

    /// The graph with the edges at `removed` positions deleted; vertices and
    /// remaining ids are kept.
    pub fn without_positions(&self, removed: &IdSet) -> Graph {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| !removed.contains(*i))
            .map(|(_, e)| e.clone())
            .collect();
        Graph::new(self.directed, self.vertices.clone(), edges).expect("subgraph of a valid graph")
    }

    pub fn without_ids(&self, removed: &[usize]) -> Result<Graph> {
        Ok(self.without_positions(&self.positions_of(removed)?))
    }

    /// Subgraph on the given edge positions, dropping vertices left isolated.
    pub fn edge_induced(&self, keep: &IdSet) -> Graph {
        let edges: Vec<Edge> = keep.iter().map(|p| self.edges[p].clone()).collect();
        let used: BTreeSet<usize> = edges.iter().flat_map(|e| [e.u, e.v]).collect();
        let vertices = self
            .vertices
            .iter()
            .filter(|v| used.contains(&v.id))
            .cloned()
            .collect();
        Graph::new(self.directed, vertices, edges).expect("subgraph of a valid graph")
    }

    /// Total degree of each vertex position; a loop counts twice.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count()];
        for e in 0..self.edge_count() {
            let (u, v) = self.ends(e);
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }
}

/// Common small graphs on vertices `0..n`.
pub mod families {
    use super::Graph;

    pub fn path(n: usize) -> Graph {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_pairs(false, n, &pairs)
    }

    pub fn cycle(n: usize) -> Graph {
        let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_pairs(false, n, &pairs)
    }

    pub fn complete(n: usize) -> Graph {
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                pairs.push((i, j));
            }
        }
        Graph::from_pairs(false, n, &pairs)
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let mut pairs = Vec::new();
        for i in 0..a {
            for j in 0..b {
                pairs.push((i, a + j));
            }
        }
        Graph::from_pairs(false, a + b, &pairs)
    }

    pub fn triangle() -> Graph {
        cycle(3)
    }
}
