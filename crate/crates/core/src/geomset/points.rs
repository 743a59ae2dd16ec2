//! Exact rational point sets in three dimensions: parsing, distance
//! symmetries and cosphericity.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{automorphism_group, Edge, Graph, Vertex};
use crate::perm::Perm;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint {
    pub x: BigRational,
    pub y: BigRational,
    pub z: BigRational,
}

impl RationalPoint {
    pub fn new(x: BigRational, y: BigRational, z: BigRational) -> Self {
        RationalPoint { x, y, z }
    }

    pub fn from_ints(x: i64, y: i64, z: i64) -> Self {
        let r = |v: i64| BigRational::from_integer(v.into());
        RationalPoint::new(r(x), r(y), r(z))
    }

    pub fn coords(&self) -> [&BigRational; 3] {
        [&self.x, &self.y, &self.z]
    }

    pub fn norm2(&self) -> BigRational {
        self.coords().iter().map(|c| *c * *c).sum()
    }

    pub fn dist2(&self, other: &RationalPoint) -> BigRational {
        self.coords()
            .iter()
            .zip(other.coords())
            .map(|(a, b)| {
                let d = *a - b;
                &d * &d
            })
            .sum()
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.x, self.y, self.z)
    }
}

impl Serialize for RationalPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.x.to_string(), self.y.to_string(), self.z.to_string()].serialize(s)
    }
}

fn parse_rational(tok: &str) -> Result<BigRational> {
    let r = BigRational::from_str(tok).map_err(|_| Error::Parse(format!("bad rational {tok:?}")))?;
    Ok(r)
}

/// Distinct points addressed by position `0..len`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct PointSet {
    points: Vec<RationalPoint>,
}

impl PointSet {
    pub fn new(points: Vec<RationalPoint>) -> Result<Self> {
        check_distinct(&points)?;
        Ok(PointSet { points })
    }

    /// One point per line, three rationals `p/q` or integers; blank lines
    /// and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut points = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 3 {
                return Err(Error::Parse(format!("line {}: expected 3 coordinates", lineno + 1)));
            }
            points.push(RationalPoint::new(
                parse_rational(toks[0])?,
                parse_rational(toks[1])?,
                parse_rational(toks[2])?,
            ));
        }
        PointSet::new(points)
    }

    pub fn points(&self) -> &[RationalPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn subset(&self, ids: &[usize]) -> Vec<RationalPoint> {
        ids.iter().map(|&i| self.points[i].clone()).collect()
    }

    /// Whether the permutation preserves every pairwise squared distance.
    pub fn preserves_distances(&self, p: &[usize]) -> bool {
        let n = self.len();
        p.len() == n
            && (0..n).all(|i| (i + 1..n).all(|j| self.points[i].dist2(&self.points[j]) == self.points[p[i]].dist2(&self.points[p[j]])))
    }
}

fn check_distinct(points: &[RationalPoint]) -> Result<()> {
    let mut seen = BTreeMap::new();
    for (i, p) in points.iter().enumerate() {
        if let Some(j) = seen.insert(p, i) {
            return Err(Error::DuplicatePoints(j, i));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct Isometries {
    /// Generators as permutations of point positions.
    pub generators: Vec<Perm>,
    #[serde(serialize_with = "crate::clause::as_string")]
    pub order: num_bigint::BigUint,
}

/// Distance-preserving permutations, as automorphisms of the complete
/// graph whose edges are coloured by squared distance. On a finite subset
/// of Euclidean space these are exactly the restrictions of isometries.
pub fn isometry_group(points: &PointSet, cap: usize) -> Result<Isometries> {
    let n = points.len();
    let mut classes: BTreeMap<BigRational, i64> = BTreeMap::new();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((i, j, points.points[i].dist2(&points.points[j])));
        }
    }
    for (_, _, d) in &pairs {
        let next = classes.len() as i64;
        classes.entry(d.clone()).or_insert(next);
    }
    let vertices = (0..n).map(|id| Vertex { id, color: None }).collect();
    let edges = pairs
        .iter()
        .enumerate()
        .map(|(id, (u, v, d))| Edge { id, u: *u, v: *v, color: Some(classes[d]) })
        .collect();
    let g = Graph::new(false, vertices, edges)?;
    let auts = automorphism_group(&g, cap)?;
    Ok(Isometries { generators: auts.vertex_generators, order: auts.vertex_order })
}

/// Basis of the kernel of `rows` (each of equal width) over the rationals.
fn kernel(mut rows: Vec<Vec<BigRational>>, width: usize) -> Vec<Vec<BigRational>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = BigRational::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                for j in 0..width {
                    let sub = &factor * &rows[r][j];
                    rows[i][j] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..width)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![BigRational::zero(); width];
            v[free] = BigRational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[row][free].clone();
            }
            v
        })
        .collect()
}

/// Whether the points satisfy `a|p|² + b·x + c·y + d·z + e = 0` for some
/// rational coefficients with `a ≠ 0`, or, with `allow_planes`, any
/// nonzero coefficient vector (sphere or plane).
pub fn on_common_sphere(points: &[RationalPoint], allow_planes: bool) -> Result<bool> {
    check_distinct(points)?;
    let rows = points
        .iter()
        .map(|p| vec![p.norm2(), p.x.clone(), p.y.clone(), p.z.clone(), BigRational::one()])
        .collect();
    let basis = kernel(rows, 5);
    Ok(if allow_planes { !basis.is_empty() } else { basis.iter().any(|v| !v[0].is_zero()) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(i64, i64, i64)]) -> Vec<RationalPoint> {
        v.iter().map(|&(x, y, z)| RationalPoint::from_ints(x, y, z)).collect()
    }

    #[test]
    fn parse_points() {
        let p = PointSet::parse("0 0 0\n1/2 -3/4 2 # comment\n\n1 1 1\n").unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.points()[1].y, BigRational::new((-3).into(), 4.into()));
        assert!(matches!(PointSet::parse("0 0"), Err(Error::Parse(_))));
        assert!(matches!(PointSet::parse("1 x 0"), Err(Error::Parse(_))));
        assert!(matches!(PointSet::parse("1/0 0 0"), Err(Error::Parse(_))));
        assert!(matches!(PointSet::parse("0 0 0\n0 0/3 0"), Err(Error::DuplicatePoints(..))));
    }

    #[test]
    fn isometry_orders() {
        let order = |v: &[(i64, i64, i64)]| {
            let set = PointSet::new(pts(v)).unwrap();
            let iso = isometry_group(&set, 10_000).unwrap();
            assert!(iso.generators.iter().all(|g| set.preserves_distances(g)));
            iso.order
        };
        assert_eq!(order(&[(0, 0, 0), (4, 0, 0), (0, 3, 0)]), 1u32.into());
        assert_eq!(order(&[(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)]), 8u32.into());
        assert_eq!(order(&[(5, 5, 5)]), 1u32.into());
        let octahedron = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)];
        assert_eq!(order(&octahedron), 48u32.into());
    }

    #[test]
    fn sphere_examples() {
        assert!(on_common_sphere(&pts(&[(0, 0, 0), (3, 1, 2)]), false).unwrap());
        let unit = pts(&[(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1)]);
        assert!(on_common_sphere(&unit, false).unwrap());
        let off = pts(&[(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, 0, 1), (0, 0, 2)]);
        assert!(!on_common_sphere(&off, false).unwrap());
        // a circle and one point off its plane: the sphere centred at (0, 0, 3/4)
        let circle_and_pole = pts(&[(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 2)]);
        assert!(on_common_sphere(&circle_and_pole, false).unwrap());
        // a circle lies on many spheres; collinear triples on none, but on a plane
        assert!(on_common_sphere(&pts(&[(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0)]), false).unwrap());
        let line = pts(&[(0, 0, 0), (1, 1, 1), (2, 2, 2)]);
        assert!(!on_common_sphere(&line, false).unwrap());
        assert!(on_common_sphere(&line, true).unwrap());
        let square_and_centre = pts(&[(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 0)]);
        assert!(!on_common_sphere(&square_and_centre, false).unwrap());
        assert!(on_common_sphere(&square_and_centre, true).unwrap());
        assert!(matches!(on_common_sphere(&pts(&[(1, 1, 1), (1, 1, 1)]), false), Err(Error::DuplicatePoints(..))));
    }
}
