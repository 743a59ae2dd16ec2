//! Finite groups as validated Cayley tables, and subgroup operations.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::idset::IdSet;
use crate::perm::{self, Perm};

/// A subgroup as a membership set over element ids.
pub type Subgroup = IdSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    n: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a Cayley table; row `g` lists the products `g·h`.
    pub fn from_table(rows: Vec<Vec<usize>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Parse("empty table".into()));
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Parse(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::Parse(format!("entry {bad} out of range in row {i}")));
            }
            table.extend_from_slice(row);
        }
        let at = |a: usize, b: usize| table[a * n + b];
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| at(e, a) == a && at(a, e) == a))
            .ok_or(Error::NotAGroup { axiom: "identity", witness: vec![] })?;
        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::NotAGroup { axiom: "associativity", witness: vec![a, b, c] });
                    }
                }
            }
        }
        let mut inverse = vec![0; n];
        for a in 0..n {
            inverse[a] = (0..n)
                .find(|&b| at(a, b) == identity && at(b, a) == identity)
                .ok_or(Error::NotAGroup { axiom: "inverse", witness: vec![a] })?;
        }
        Ok(FiniteGroup { n, table, identity, inverse })
    }

    /// Text form: `n`, then `n` rows of `n` whitespace-separated ids.
    pub fn parse(text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace().map(|t| {
            t.parse::<usize>().map_err(|_| Error::Parse(format!("not an element id: {t:?}")))
        });
        let n = tokens.next().ok_or_else(|| Error::Parse("missing order".into()))??;
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let mut row = Vec::with_capacity(n);
            for _ in 0..n {
                row.push(tokens.next().ok_or_else(|| Error::Parse("table truncated".into()))??);
            }
            rows.push(row);
        }
        if tokens.next().is_some() {
            return Err(Error::Parse("trailing data after table".into()));
        }
        FiniteGroup::from_table(rows)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for a in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|b| self.mul(a, b).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn trivial() -> Self {
        FiniteGroup::from_table(vec![vec![0]]).unwrap()
    }

    pub fn cyclic(n: usize) -> Self {
        let rows = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::from_table(rows).unwrap()
    }

    /// Dihedral group of order `2m`; element `i + m·j` is `r^i s^j`.
    pub fn dihedral(m: usize) -> Self {
        let n = 2 * m;
        let rows = (0..n)
            .map(|x| {
                let (a, b) = (x % m, x / m);
                (0..n)
                    .map(|y| {
                        let (c, d) = (y % m, y / m);
                        let rot = if b == 0 { (a + c) % m } else { (a + m - c) % m };
                        rot + m * ((b + d) % 2)
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(rows).unwrap()
    }

    /// Quaternion group; element `u + 4·s` is `(-1)^s` times unit `u` of `1, i, j, k`.
    pub fn quaternion() -> Self {
        // unit products (sign, unit)
        const UNIT: [[(usize, usize); 4]; 4] = [
            [(0, 0), (0, 1), (0, 2), (0, 3)],
            [(0, 1), (1, 0), (0, 3), (1, 2)],
            [(0, 2), (1, 3), (1, 0), (0, 1)],
            [(0, 3), (0, 2), (1, 1), (1, 0)],
        ];
        let rows = (0..8)
            .map(|x| {
                (0..8)
                    .map(|y| {
                        let (s, u) = UNIT[x % 4][y % 4];
                        u + 4 * ((s + x / 4 + y / 4) % 2)
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(rows).unwrap()
    }

    /// The group generated by permutations of `0..degree`, elements sorted
    /// (so the identity is element 0).
    pub fn from_permutations(degree: usize, gens: &[Perm], cap: usize) -> Result<Self> {
        let elems = perm::enumerate_group(degree, gens, cap)?;
        let index: BTreeMap<&Perm, usize> = elems.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let rows = elems
            .iter()
            .map(|p| elems.iter().map(|q| index[&perm::compose(p, q)]).collect())
            .collect();
        FiniteGroup::from_table(rows)
    }

    pub fn symmetric(k: usize) -> Self {
        let mut gens = Vec::new();
        if k > 1 {
            let mut t = perm::identity(k);
            t.swap(0, 1);
            gens.push(t);
            gens.push((0..k).map(|i| (i + 1) % k).collect());
        }
        FiniteGroup::from_permutations(k, &gens, 1 << 20).unwrap()
    }

    pub fn alternating(k: usize) -> Self {
        let gens: Vec<Perm> = (2..k)
            .map(|c| {
                let mut p = perm::identity(k);
                p[0] = 1;
                p[1] = c;
                p[c] = 0;
                p
            })
            .collect();
        FiniteGroup::from_permutations(k, &gens, 1 << 20).unwrap()
    }

    /// `(x, y) ↦ x·|b| + y`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order(), b.order());
        let rows = (0..na * nb)
            .map(|p| {
                (0..na * nb)
                    .map(|q| a.mul(p / nb, q / nb) * nb + b.mul(p % nb, q % nb))
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(rows).unwrap()
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        let (mut acc, mut base, mut k) = (self.identity, a, k);
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// `[a, b] = a⁻¹ b⁻¹ a b`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn conjugate(&self, g: usize, a: usize) -> usize {
        self.mul(self.mul(g, a), self.inv(g))
    }

    pub fn whole(&self) -> Subgroup {
        IdSet::full(self.n)
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        IdSet::from_iter_with_len(self.n, [self.identity])
    }

    pub fn subset<I: IntoIterator<Item = usize>>(&self, items: I) -> IdSet {
        IdSet::from_iter_with_len(self.n, items)
    }

    /// Subgroup generated by a set of elements.
    pub fn generate<I: IntoIterator<Item = usize>>(&self, gens: I) -> Subgroup {
        let gens: Vec<usize> = gens.into_iter().collect();
        let mut set = self.trivial_subgroup();
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = self.mul(x, g);
                if !set.contains(y) {
                    set.insert(y);
                    frontier.push(y);
                }
            }
        }
        set
    }

    pub fn is_subgroup(&self, s: &IdSet) -> bool {
        s.contains(self.identity)
            && s.iter().all(|a| s.contains(self.inv(a)) && s.iter().all(|b| s.contains(self.mul(a, b))))
    }

    /// The subgroup generated by both; the set product when both are normal.
    pub fn product(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        self.generate(a.union(b).iter())
    }

    pub fn intersect(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        a.intersection(b)
    }

    pub fn is_normal(&self, a: &Subgroup) -> bool {
        (0..self.n).all(|g| a.iter().all(|x| a.contains(self.conjugate(g, x))))
    }

    pub fn normal_closure<I: IntoIterator<Item = usize>>(&self, items: I) -> Subgroup {
        let items: Vec<usize> = items.into_iter().collect();
        let conj: Vec<usize> = (0..self.n)
            .flat_map(|g| items.iter().map(move |&x| (g, x)))
            .map(|(g, x)| self.conjugate(g, x))
            .collect();
        self.generate(conj)
    }

    /// Every normal subgroup, sorted by order then canonically.
    pub fn normal_subgroups(&self) -> Vec<Subgroup> {
        let mut found: Vec<Subgroup> = (0..self.n).map(|g| self.normal_closure([g])).collect();
        found.sort_by_key(|s| (s.len(), s.clone()));
        found.dedup();
        let mut all = found.clone();
        let mut i = 0;
        while i < all.len() {
            for c in &found {
                let p = self.product(&all[i], c);
                if !all.contains(&p) {
                    all.push(p);
                }
            }
            i += 1;
        }
        all.sort_by_key(|s| (s.len(), s.clone()));
        all
    }

    /// Subgroup generated by all `[a, b]`, `a ∈ a_set`, `b ∈ b_set`.
    pub fn commutator_subgroup(&self, a_set: &Subgroup, b_set: &Subgroup) -> Subgroup {
        let comms: Vec<usize> = a_set
            .iter()
            .flat_map(|a| b_set.iter().map(move |b| (a, b)))
            .map(|(a, b)| self.commutator(a, b))
            .collect();
        self.generate(comms)
    }

    pub fn is_abelian(&self, s: &Subgroup) -> bool {
        s.iter().all(|a| s.iter().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// `H` as a group in its own right; element `i` is the `i`-th member of `H`.
    pub fn restrict(&self, h: &Subgroup) -> (FiniteGroup, Vec<usize>) {
        let members = h.to_vec();
        let local: BTreeMap<usize, usize> = members.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let rows = members
            .iter()
            .map(|&a| members.iter().map(|&b| local[&self.mul(a, b)]).collect())
            .collect();
        (FiniteGroup::from_table(rows).expect("a subgroup is a group"), members)
    }

    /// `G/K` with cosets numbered by least member, and the projection.
    pub fn quotient(&self, k: &Subgroup) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_subgroup(k) || !self.is_normal(k) {
            return Err(Error::NotNormal);
        }
        let mut proj = vec![usize::MAX; self.n];
        let mut reps = Vec::new();
        for g in 0..self.n {
            if proj[g] != usize::MAX {
                continue;
            }
            for x in k.iter() {
                proj[self.mul(g, x)] = reps.len();
            }
            reps.push(g);
        }
        let rows = reps
            .iter()
            .map(|&a| reps.iter().map(|&b| proj[self.mul(a, b)]).collect())
            .collect();
        Ok((FiniteGroup::from_table(rows).expect("a quotient is a group"), proj))
    }

    /// Order of `xK` in `G/K` for every `x`, collected.
    pub fn spectrum_of_quotient(&self, k: &Subgroup) -> Result<Vec<usize>> {
        if !self.is_subgroup(k) || !self.is_normal(k) {
            return Err(Error::NotNormal);
        }
        let mut spec: Vec<usize> = (0..self.n)
            .map(|x| {
                let mut y = x;
                let mut m = 1;
                while !k.contains(y) {
                    y = self.mul(y, x);
                    m += 1;
                }
                m
            })
            .collect();
        spec.sort_unstable();
        spec.dedup();
        Ok(spec)
    }

    /// Image of a subgroup under an element permutation.
    pub fn image(&self, p: &[usize], s: &Subgroup) -> Subgroup {
        self.subset(s.iter().map(|x| p[x]))
    }
}

/// Small named groups used as a test corpus.
pub fn corpus() -> Vec<(String, FiniteGroup)> {
    let mut out: Vec<(String, FiniteGroup)> =
        (2..=12).map(|n| (format!("C{n}"), FiniteGroup::cyclic(n))).collect();
    out.push(("S3".into(), FiniteGroup::symmetric(3)));
    out.push(("D4".into(), FiniteGroup::dihedral(4)));
    out.push(("Q8".into(), FiniteGroup::quaternion()));
    out.push(("A4".into(), FiniteGroup::alternating(4)));
    out.push(("D6".into(), FiniteGroup::dihedral(6)));
    out.push(("S3xC2".into(), FiniteGroup::direct_product(&FiniteGroup::symmetric(3), &FiniteGroup::cyclic(2))));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors_have_expected_orders() {
        assert_eq!(FiniteGroup::trivial().order(), 1);
        assert_eq!(FiniteGroup::symmetric(3).order(), 6);
        assert_eq!(FiniteGroup::alternating(4).order(), 12);
        assert_eq!(FiniteGroup::dihedral(4).order(), 8);
        assert_eq!(FiniteGroup::quaternion().order(), 8);
        let s3 = FiniteGroup::symmetric(3);
        assert!(!s3.is_abelian(&s3.whole()));
        let q8 = FiniteGroup::quaternion();
        let involutions = (0..8).filter(|&x| q8.element_order(x) == 2).count();
        assert_eq!(involutions, 1);
        let d4 = FiniteGroup::dihedral(4);
        assert_eq!((0..8).filter(|&x| d4.element_order(x) == 2).count(), 5);
    }

    #[test]
    fn broken_associativity_is_rejected() {
        let mut rows: Vec<Vec<usize>> = (0..4).map(|a| (0..4).map(|b| (a + b) % 4).collect()).collect();
        rows[1][1] = 3;
        rows[1][2] = 2;
        assert!(matches!(FiniteGroup::from_table(rows), Err(Error::NotAGroup { .. })));
    }

    #[test]
    fn text_round_trip() {
        let g = FiniteGroup::dihedral(3);
        assert_eq!(FiniteGroup::parse(&g.to_text()).unwrap(), g);
        assert!(FiniteGroup::parse("2\n0 1\n1").is_err());
    }

    #[test]
    fn s3_subgroups() {
        let s3 = FiniteGroup::symmetric(3);
        let a3 = s3.commutator_subgroup(&s3.whole(), &s3.whole());
        assert_eq!(a3.len(), 3);
        let t = (0..6).find(|&x| s3.element_order(x) == 2).unwrap();
        let ts = s3.generate([t]);
        assert_eq!(s3.product(&a3, &ts), s3.whole());
        assert_eq!(s3.intersect(&a3, &ts), s3.trivial_subgroup());
        assert!(s3.is_normal(&a3));
        assert!(!s3.is_normal(&ts));
        assert_eq!(s3.generate([s3.identity()]), s3.trivial_subgroup());
        assert_eq!(s3.normal_subgroups().len(), 3);
    }

    #[test]
    fn quotient_spectra() {
        let s3 = FiniteGroup::symmetric(3);
        let a3 = s3.commutator_subgroup(&s3.whole(), &s3.whole());
        assert_eq!(s3.spectrum_of_quotient(&a3).unwrap(), vec![1, 2]);
        assert_eq!(s3.spectrum_of_quotient(&s3.whole()).unwrap(), vec![1]);
        let c6 = FiniteGroup::cyclic(6);
        assert_eq!(c6.spectrum_of_quotient(&c6.trivial_subgroup()).unwrap(), vec![1, 2, 3, 6]);
        let (q, _) = s3.quotient(&a3).unwrap();
        assert_eq!(q.order(), 2);
    }

    #[test]
    fn normal_subgroup_counts() {
        // known counts: D4 has 6, Q8 has 6, A4 has 3
        assert_eq!(FiniteGroup::dihedral(4).normal_subgroups().len(), 6);
        assert_eq!(FiniteGroup::quaternion().normal_subgroups().len(), 6);
        assert_eq!(FiniteGroup::alternating(4).normal_subgroups().len(), 3);
        assert_eq!(FiniteGroup::cyclic(12).normal_subgroups().len(), 6);
    }
}
