//! A "respects" relation on candidates and the efficient-team property.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::tuples::k_subsets;
use crate::error::{Error, Result};
use crate::graph::{automorphism_group, Edge, Graph, Vertex};
use crate::perm::Perm;

/// `respects[y][x]`: candidate `y` respects candidate `x`. No symmetry,
/// transitivity or reflexivity is assumed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub n: usize,
    pub respects: Vec<Vec<bool>>,
}

/// Whether a candidate's opinion of themself counts towards their majority.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SelfRespect {
    #[default]
    Counted,
    Excluded,
}

impl FromStr for SelfRespect {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "counted" => Ok(SelfRespect::Counted),
            "excluded" => Ok(SelfRespect::Excluded),
            other => Err(Error::Parse(format!("self-respect must be counted or excluded, got {other:?}"))),
        }
    }
}

impl fmt::Display for SelfRespect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SelfRespect::Counted => "counted",
            SelfRespect::Excluded => "excluded",
        })
    }
}

impl Relation {
    pub fn new(respects: Vec<Vec<bool>>) -> Result<Self> {
        let n = respects.len();
        if let Some(i) = respects.iter().position(|r| r.len() != n) {
            return Err(Error::Parse(format!("row {i} has {} entries, expected {n}", respects[i].len())));
        }
        Ok(Relation { n, respects })
    }

    /// `n`, then `n` rows of `0`/`1`, either whitespace-separated or packed.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty relation file".into()))?;
        let n: usize = header.parse().map_err(|_| Error::Parse(format!("bad candidate count {header:?}")))?;
        let mut respects = Vec::with_capacity(n);
        for line in lines {
            let row = line
                .chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    other => Err(Error::Parse(format!("unexpected {other:?} in relation row"))),
                })
                .collect::<Result<Vec<bool>>>()?;
            respects.push(row);
        }
        if respects.len() != n {
            return Err(Error::Parse(format!("expected {n} rows, found {}", respects.len())));
        }
        Relation::new(respects)
    }

    /// Candidates `0..n` with `y -> x` for each `y ≠ x` respecting `x`;
    /// self-respect becomes the vertex colour.
    pub fn digraph(&self) -> Graph {
        let vertices = (0..self.n).map(|id| Vertex { id, color: Some(self.respects[id][id] as i64) }).collect();
        let mut edges = Vec::new();
        for y in 0..self.n {
            for x in 0..self.n {
                if x != y && self.respects[y][x] {
                    edges.push(Edge { id: edges.len(), u: y, v: x, color: None });
                }
            }
        }
        Graph::new(true, vertices, edges).expect("well-formed digraph")
    }

    /// Permutations of candidates preserving the relation.
    pub fn automorphisms(&self, cap: usize) -> Result<(Vec<Perm>, num_bigint::BigUint)> {
        let auts = automorphism_group(&self.digraph(), cap)?;
        Ok((auts.vertex_generators, auts.vertex_order))
    }

    pub fn preserved_by(&self, p: &[usize]) -> bool {
        (0..self.n).all(|y| (0..self.n).all(|x| self.respects[y][x] == self.respects[p[y]][p[x]]))
    }

    /// Some member respected by at least `⌈(k+1)/2⌉` of the group.
    pub fn is_efficient(&self, group: &[usize], self_respect: SelfRespect) -> bool {
        let need = (group.len() + 2) / 2;
        group.iter().any(|&x| {
            group
                .iter()
                .filter(|&&y| (y != x || self_respect == SelfRespect::Counted) && self.respects[y][x])
                .count()
                >= need
        })
    }
}

/// Every `k`-subset of `team` is efficient. Vacuous for teams smaller than `k`.
pub fn efficient_team_check(r: &Relation, team: &[usize], k: usize, self_respect: SelfRespect) -> bool {
    inefficient_groups(r, team, k, self_respect).is_empty()
}

/// The `k`-subsets of `team` with no majority-respected member.
pub fn inefficient_groups(r: &Relation, team: &[usize], k: usize, self_respect: SelfRespect) -> Vec<Vec<usize>> {
    let mut team = team.to_vec();
    team.sort_unstable();
    team.dedup();
    k_subsets(&team, k).into_iter().filter(|s| !r.is_efficient(s, self_respect)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn relation(n: usize, f: impl Fn(usize, usize) -> bool) -> Relation {
        Relation::new((0..n).map(|y| (0..n).map(|x| f(y, x)).collect()).collect()).unwrap()
    }

    #[test]
    fn parse_rows() {
        let r = Relation::parse("3\n0 1 0\n001\n1 1 1\n").unwrap();
        assert!(r.respects[0][1] && r.respects[1][2] && !r.respects[1][0]);
        assert!(Relation::parse("2\n01\n").is_err());
        assert!(Relation::parse("2\n01\n012\n").is_err());
        assert!(Relation::parse("2\n01\n1\n").is_err());
    }

    #[test]
    fn team_examples() {
        let everyone_respects_0 = relation(8, |_, x| x == 0);
        assert!(efficient_team_check(&everyone_respects_0, &[0, 1, 2, 3, 4], 5, SelfRespect::Counted));
        assert!(efficient_team_check(&everyone_respects_0, &[1, 2, 3], 5, SelfRespect::Counted));
        let nobody = relation(8, |_, _| false);
        assert!(!efficient_team_check(&nobody, &[0, 1, 2, 3, 4], 5, SelfRespect::Counted));
        assert!(efficient_team_check(&nobody, &[0, 1, 2, 3], 5, SelfRespect::Counted));
    }

    #[test]
    fn self_respect_semantics() {
        // 0 is respected by 1, 2 and themself only
        let r = relation(5, |y, x| x == 0 && y <= 2);
        assert!(r.is_efficient(&[0, 1, 2, 3, 4], SelfRespect::Counted));
        assert!(!r.is_efficient(&[0, 1, 2, 3, 4], SelfRespect::Excluded));
    }

    #[test]
    fn digraph_symmetries() {
        let cyclic = relation(5, |y, x| (y + 1) % 5 == x);
        let (gens, order) = cyclic.automorphisms(10_000).unwrap();
        assert_eq!(order, 5u32.into());
        assert!(gens.iter().all(|p| cyclic.preserved_by(p)));
    }
}
