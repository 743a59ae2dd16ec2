//! Decidable radical classes of finite groups.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::table::{FiniteGroup, Subgroup};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassTester {
    Trivial,
    Solvable,
    Nilpotent,
    /// Groups whose order has prime factors only in the set.
    Pi(Vec<usize>),
}

/// Iterates `step` from `start` until the term lies in `lower` (true) or
/// stabilizes outside it (false).
fn descends_into(start: &Subgroup, lower: &Subgroup, step: impl Fn(&Subgroup) -> Subgroup) -> bool {
    let mut cur = start.clone();
    loop {
        if cur.is_subset(lower) {
            return true;
        }
        let next = step(&cur);
        if next == cur {
            return false;
        }
        cur = next;
    }
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl ClassTester {
    /// Whether the subgroup `h` of `g`, as a group, lies in the class.
    pub fn contains(&self, g: &FiniteGroup, h: &Subgroup) -> bool {
        self.contains_quotient(g, h, &g.trivial_subgroup())
    }

    /// Whether `upper / lower` lies in the class, for `lower ⊆ upper` both
    /// normal in `g`. Series terms are computed in `g` and compared against
    /// `lower`.
    pub fn contains_quotient(&self, g: &FiniteGroup, upper: &Subgroup, lower: &Subgroup) -> bool {
        match self {
            ClassTester::Trivial => upper.is_subset(lower),
            ClassTester::Solvable => descends_into(upper, lower, |cur| g.commutator_subgroup(cur, cur)),
            ClassTester::Nilpotent => descends_into(upper, lower, |cur| g.commutator_subgroup(cur, upper)),
            ClassTester::Pi(primes) => {
                let index = upper.len() / upper.intersection(lower).len();
                prime_factors(index).iter().all(|p| primes.contains(p))
            }
        }
    }

    /// Whether the whole group lies in the class.
    pub fn contains_group(&self, g: &FiniteGroup) -> bool {
        self.contains(g, &g.whole())
    }
}

pub fn class_test(tag: &ClassTester, g: &FiniteGroup, h: &Subgroup) -> bool {
    tag.contains(g, h)
}

impl FromStr for ClassTester {
    type Err = Error;

    /// `trivial`, `solvable`, `nilpotent` or `pi:p,q,...`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "trivial" => Ok(ClassTester::Trivial),
            "solvable" => Ok(ClassTester::Solvable),
            "nilpotent" => Ok(ClassTester::Nilpotent),
            other => {
                let list = other
                    .strip_prefix("pi:")
                    .ok_or_else(|| Error::Parse(format!("unknown class {other:?}")))?;
                let mut primes = Vec::new();
                for p in list.split(',').filter(|p| !p.trim().is_empty()) {
                    let p: usize = p.trim().parse().map_err(|_| Error::Parse(format!("bad prime {p:?}")))?;
                    if p < 2 || prime_factors(p) != [p] {
                        return Err(Error::Parse(format!("{p} is not prime")));
                    }
                    primes.push(p);
                }
                primes.sort_unstable();
                primes.dedup();
                Ok(ClassTester::Pi(primes))
            }
        }
    }
}

impl fmt::Display for ClassTester {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassTester::Trivial => f.write_str("trivial"),
            ClassTester::Solvable => f.write_str("solvable"),
            ClassTester::Nilpotent => f.write_str("nilpotent"),
            ClassTester::Pi(ps) => {
                let list: Vec<String> = ps.iter().map(usize::to_string).collect();
                write!(f, "pi:{}", list.join(","))
            }
        }
    }
}
