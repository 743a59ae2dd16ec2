//! Exact codimension values and the bound function `f(x) = x(x + 1)`.
//!
//! Codimensions are either rationals (set cardinalities, removed-edge counts)
//! or base-2 logarithms of positive rationals (subgroup index, subgroup
//! order). Every comparison is decided exactly: with integer arithmetic when
//! both sides reduce to powers, otherwise by refining rigorous rational
//! enclosures of the logarithms until they separate.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Enclosure denominators tried, in order, when exact comparison is not possible.
const REFINEMENT_STEPS: [u32; 7] = [16, 64, 256, 1024, 4096, 16384, 65536];

/// `f(x) = x(x + 1)`.
pub fn f(x: &BigRational) -> BigRational {
    x * (x + BigRational::one())
}

/// `f^k(x)`, computed exactly.
pub fn iterate_f(x: &BigRational, k: u32) -> BigRational {
    let mut acc = x.clone();
    for _ in 0..k {
        acc = f(&acc);
    }
    acc
}

/// A nonnegative codimension value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Codim {
    Rational(BigRational),
    /// `log2(q)` for a positive rational `q` that is not a power of two.
    Log2(BigRational),
}

impl Codim {
    pub fn zero() -> Self {
        Codim::Rational(BigRational::zero())
    }

    pub fn from_int(n: u64) -> Self {
        Codim::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn rational(r: BigRational) -> Self {
        Codim::Rational(r)
    }

    /// `log2(q)`; collapses to an exact rational when `q` is a power of two.
    pub fn log2(q: BigRational) -> Self {
        assert!(q.is_positive(), "log2 of a non-positive value");
        match power_of_two_exponent(&q) {
            Some(e) => Codim::Rational(BigRational::from_integer(BigInt::from(e))),
            None => Codim::Log2(q),
        }
    }

    /// `log2(num / den)` for positive integers.
    pub fn log2_ratio(num: u64, den: u64) -> Self {
        Codim::log2(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Codim::Rational(r) => Some(r),
            Codim::Log2(_) => None,
        }
    }

    /// Exact sum when it stays representable: rational + rational,
    /// log + log, and log + integer.
    pub fn checked_add(&self, other: &Codim) -> Option<Codim> {
        match (self, other) {
            (Codim::Rational(a), Codim::Rational(b)) => Some(Codim::Rational(a + b)),
            (Codim::Log2(a), Codim::Log2(b)) => Some(Codim::log2(a * b)),
            (Codim::Log2(q), Codim::Rational(r)) | (Codim::Rational(r), Codim::Log2(q)) => {
                if !r.is_integer() {
                    return None;
                }
                let shift = r.to_integer().to_i64()?;
                Some(Codim::log2(q * pow2(shift)))
            }
        }
    }

    /// Exact comparison.
    pub fn exact_cmp(&self, other: &Codim) -> Ordering {
        match (self, other) {
            (Codim::Rational(a), Codim::Rational(b)) => a.cmp(b),
            (Codim::Log2(a), Codim::Log2(b)) => a.cmp(b),
            (Codim::Log2(q), Codim::Rational(r)) => cmp_log2_rational(q, r),
            (Codim::Rational(r), Codim::Log2(q)) => cmp_log2_rational(q, r).reverse(),
        }
    }

    pub fn le(&self, other: &Codim) -> bool {
        self.exact_cmp(other) != Ordering::Greater
    }

    /// Decides `self <= f^k(base)`.
    pub fn le_f_iterate(&self, base: &Codim, k: u32) -> Result<bool> {
        match base {
            Codim::Rational(r) => Ok(self.le(&Codim::Rational(iterate_f(r, k)))),
            Codim::Log2(_) if k == 0 => Ok(self.le(base)),
            Codim::Log2(q) => {
                if q < &BigRational::one() {
                    return Err(Error::InvariantViolation(format!(
                        "negative codimension log2({q}) used as a bound base"
                    )));
                }
                for &den in &REFINEMENT_STEPS {
                    let (lhs_lo, lhs_hi) = self.enclosure(den);
                    let (base_lo, base_hi) = log2_enclosure(q, den);
                    let base_lo = if base_lo.is_negative() {
                        BigRational::zero()
                    } else {
                        base_lo
                    };
                    let rhs_lo = iterate_f(&base_lo, k);
                    let rhs_hi = iterate_f(&base_hi, k);
                    if lhs_hi <= rhs_lo {
                        return Ok(true);
                    }
                    if lhs_lo > rhs_hi {
                        return Ok(false);
                    }
                }
                Err(Error::Undecided(format!(
                    "{self} <= f^{k}({base}) not separated at denominator {}",
                    REFINEMENT_STEPS[REFINEMENT_STEPS.len() - 1]
                )))
            }
        }
    }

    /// A closed rational interval containing the value, of width at most `2/den`.
    pub fn enclosure(&self, den: u32) -> (BigRational, BigRational) {
        match self {
            Codim::Rational(r) => (r.clone(), r.clone()),
            Codim::Log2(q) => log2_enclosure(q, den),
        }
    }

    /// Approximate value, for reports only.
    pub fn approx(&self) -> f64 {
        let (lo, hi) = self.enclosure(1 << 20);
        let mid = (lo + hi) / BigRational::from_integer(BigInt::from(2));
        mid.to_f64().unwrap_or(f64::INFINITY)
    }
}

impl fmt::Display for Codim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Codim::Rational(r) => write!(f, "{r}"),
            Codim::Log2(q) => write!(f, "log2({q})"),
        }
    }
}

impl Serialize for Codim {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn pow2(e: i64) -> BigRational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

fn is_power_of_two(n: &BigInt) -> Option<u64> {
    if n.sign() != Sign::Plus {
        return None;
    }
    let mag = n.magnitude();
    let bits = mag.bits();
    (mag.count_ones() == 1).then_some(bits - 1)
}

fn power_of_two_exponent(q: &BigRational) -> Option<i64> {
    let num = is_power_of_two(q.numer())?;
    let den = is_power_of_two(q.denom())?;
    Some(num as i64 - den as i64)
}

/// Compares `log2(q)` with `r` exactly: `q^d` against `2^n` where `r = n/d`.
fn cmp_log2_rational(q: &BigRational, r: &BigRational) -> Ordering {
    let d = r.denom().to_u32();
    let n = r.numer().to_i64();
    match (d, n) {
        (Some(d), Some(n)) if n.unsigned_abs() < (1 << 24) => {
            let lhs = BigRational::new(q.numer().pow(d), q.denom().pow(d));
            lhs.cmp(&pow2(n))
        }
        _ => {
            // Huge exponents: enclosures of log2(q) are tight enough against
            // any rational that differs from it.
            for &den in &REFINEMENT_STEPS {
                let (lo, hi) = log2_enclosure(q, den);
                if hi < *r {
                    return Ordering::Less;
                }
                if lo > *r {
                    return Ordering::Greater;
                }
            }
            // log2(q) is irrational here, so it never equals r; the midpoint of
            // the finest enclosure decides.
            let (lo, hi) = log2_enclosure(q, REFINEMENT_STEPS[REFINEMENT_STEPS.len() - 1]);
            let mid = (lo + hi) / BigRational::from_integer(BigInt::from(2));
            mid.cmp(r)
        }
    }
}

/// `floor(log2(n^den))` for a positive integer.
fn floor_log2_pow(n: &BigUint, den: u32) -> u64 {
    n.pow(den).bits() - 1
}

fn log2_int_enclosure(n: &BigInt, den: u32) -> (BigRational, BigRational) {
    let mag = n.magnitude();
    let c = floor_log2_pow(mag, den);
    let d = BigInt::from(den);
    let lo = BigRational::new(BigInt::from(c), d.clone());
    if mag.pow(den).count_ones() == 1 {
        (lo.clone(), lo)
    } else {
        (lo, BigRational::new(BigInt::from(c + 1), d))
    }
}

fn log2_enclosure(q: &BigRational, den: u32) -> (BigRational, BigRational) {
    let (nlo, nhi) = log2_int_enclosure(q.numer(), den);
    let (dlo, dhi) = log2_int_enclosure(q.denom(), den);
    (nlo - dhi, nhi - dlo)
}

/// Smallest integer not below `r`.
pub fn ceil(r: &BigRational) -> BigInt {
    let (q, rem) = r.numer().div_mod_floor(r.denom());
    if rem.is_zero() {
        q
    } else {
        q + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn f_values() {
        assert_eq!(iterate_f(&int(1), 1), int(2));
        assert_eq!(iterate_f(&int(7), 0), int(7));
        assert_eq!(iterate_f(&int(2), 2), int(42));
    }

    #[test]
    fn log2_collapses_powers_of_two() {
        assert_eq!(Codim::log2_ratio(8, 1), Codim::from_int(3));
        assert_eq!(Codim::log2_ratio(1, 4), Codim::Rational(int(-2)));
        assert!(matches!(Codim::log2_ratio(3, 1), Codim::Log2(_)));
    }

    #[test]
    fn exact_comparisons() {
        let l3 = Codim::log2_ratio(3, 1);
        assert!(Codim::from_int(1).le(&l3));
        assert!(l3.le(&Codim::from_int(2)));
        assert!(!l3.le(&Codim::from_int(1)));
        assert!(l3.le(&l3));
        // log2(3) vs 19/12: 3^12 = 531441 > 2^19 = 524288
        let r = Codim::Rational(BigRational::new(19.into(), 12.into()));
        assert_eq!(l3.exact_cmp(&r), Ordering::Greater);
    }

    #[test]
    fn sums() {
        let s = Codim::log2_ratio(3, 1)
            .checked_add(&Codim::log2_ratio(6, 1))
            .unwrap();
        assert_eq!(s, Codim::log2_ratio(18, 1));
        let s = Codim::log2_ratio(3, 1).checked_add(&Codim::from_int(2)).unwrap();
        assert_eq!(s, Codim::log2_ratio(12, 1));
        let half = Codim::Rational(BigRational::new(1.into(), 2.into()));
        assert!(Codim::log2_ratio(3, 1).checked_add(&half).is_none());
    }

    #[test]
    fn iterate_bound_on_logs() {
        // log2(6) <= f(log2 3) = log2(3) * log2(6) ~ 4.096
        let l3 = Codim::log2_ratio(3, 1);
        assert!(Codim::log2_ratio(6, 1).le_f_iterate(&l3, 1).unwrap());
        // 2^5 = 32 > 2^4.096
        assert!(!Codim::from_int(5).le_f_iterate(&l3, 1).unwrap());
        assert!(Codim::log2_ratio(17, 1).le_f_iterate(&l3, 1).unwrap());
        assert!(!Codim::log2_ratio(18, 1).le_f_iterate(&l3, 1).unwrap());
        assert!(l3.le_f_iterate(&l3, 0).unwrap());
    }

    #[test]
    fn ceiling() {
        assert_eq!(ceil(&BigRational::new(7.into(), 2.into())), BigInt::from(4));
        assert_eq!(ceil(&int(3)), BigInt::from(3));
    }
}
