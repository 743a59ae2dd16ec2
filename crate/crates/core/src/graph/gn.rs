//! The family `G_n`: a `5n`-cycle with `n` rotated copies of the pentagram
//! diagonals of `K5` attached.

use serde::Serialize;

use super::model::Graph;
use crate::perm::Perm;

#[derive(Clone, Debug, Serialize)]
pub struct GnInstance {
    pub n: usize,
    pub graph: Graph,
    /// Every `n`-th cycle edge; deleting them leaves a planar graph.
    pub designated: Vec<usize>,
    /// Rotation by one cycle edge, on vertex positions.
    pub rotation: Perm,
}

/// Vertices `0..5n` on the cycle; edge `j < 5n` joins `j` and `j + 1`,
/// edge `5n + j` joins `j` and `j + 2n` (indices mod `5n`). Copy `i` of the
/// diagonals is the set of edges `5n + kn + i` for `k = 0..5`.
pub fn gen_gn(n: usize) -> GnInstance {
    assert!(n >= 1, "n must be positive");
    let len = 5 * n;
    let mut pairs: Vec<(usize, usize)> = (0..len).map(|j| (j, (j + 1) % len)).collect();
    pairs.extend((0..len).map(|j| (j, (j + 2 * n) % len)));
    GnInstance {
        n,
        graph: Graph::from_pairs(false, len, &pairs),
        designated: (0..5).map(|k| k * n).collect(),
        rotation: (0..len).map(|j| (j + 1) % len).collect(),
    }
}
