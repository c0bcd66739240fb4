//! Rings and their elements.
//!
//! Every concrete ring implements [`Ring`]. Finite rings (residue rings,
//! polynomial quotients, 2×2 matrix rings and finite products) are all backed by
//! a single [`FiniteRing`] type with dense element indices; the infinite
//! polynomial rings over prime fields have their own element types.

mod bipoly;
mod finite;
mod poly;
mod spec;

use std::fmt;
use std::hash::Hash;

pub use bipoly::{BiPoly, BiPolyRing};
pub use finite::{Elem, FiniteRing};
pub use poly::{poly_divmod, Poly, UniPolyRing};
pub use spec::RingSpec;

use crate::error::{Error, Result};

/// An associative ring with unit element.
pub trait Ring {
    type Elem: Clone + Eq + Hash + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    /// True iff `a` has a two-sided inverse.
    fn is_unit(&self, a: &Self::Elem) -> bool;

    /// The two-sided inverse of `a`, or a domain error.
    fn unit_inverse(&self, a: &Self::Elem) -> Result<Self::Elem>;

    fn is_commutative(&self) -> bool;

    /// Whether `a` belongs to this ring (and not to some other ring).
    fn contains(&self, a: &Self::Elem) -> bool;

    /// All elements in index order, or `None` if the ring is not enumerable.
    fn elements(&self) -> Option<Vec<Self::Elem>>;

    fn fmt_elem(&self, a: &Self::Elem) -> String;
}

/// A ring built from a [`RingSpec`].
#[derive(Debug, Clone)]
pub enum AnyRing {
    Finite(FiniteRing),
    UniPoly(UniPolyRing),
    BiPoly(BiPolyRing),
}

impl AnyRing {
    pub fn name(&self) -> String {
        match self {
            AnyRing::Finite(r) => r.name().to_string(),
            AnyRing::UniPoly(r) => r.to_string(),
            AnyRing::BiPoly(r) => r.to_string(),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, AnyRing::Finite(_))
    }

    pub fn as_finite(&self) -> Result<&FiniteRing> {
        match self {
            AnyRing::Finite(r) => Ok(r),
            other => Err(Error::Capability(format!(
                "{} is not a finite ring",
                other.name()
            ))),
        }
    }

    pub fn as_unipoly(&self) -> Result<&UniPolyRing> {
        match self {
            AnyRing::UniPoly(r) => Ok(r),
            other => Err(Error::Capability(format!(
                "{} is not a univariate polynomial ring",
                other.name()
            ))),
        }
    }

    pub fn as_bipoly(&self) -> Result<&BiPolyRing> {
        match self {
            AnyRing::BiPoly(r) => Ok(r),
            other => Err(Error::Capability(format!(
                "{} is not a bivariate polynomial ring",
                other.name()
            ))),
        }
    }
}

/// Builds a ring from its spec.
pub fn ring_create(spec: &RingSpec) -> Result<AnyRing> {
    match spec {
        RingSpec::Poly { base, vars } => {
            let p = match base.as_ref() {
                RingSpec::Zn { n } if is_prime(*n) => *n as u32,
                other => {
                    return Err(Error::Construction(format!(
                        "polynomial rings need a prime field base, got {other}"
                    )))
                }
            };
            match vars {
                1 => Ok(AnyRing::UniPoly(UniPolyRing::new(p)?)),
                2 => Ok(AnyRing::BiPoly(BiPolyRing::new(p)?)),
                v => Err(Error::Construction(format!(
                    "polynomial rings support 1 or 2 variables, got {v}"
                ))),
            }
        }
        finite => Ok(AnyRing::Finite(FiniteRing::from_spec(finite)?)),
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Inverse of `a` modulo the prime `p`. `a` must be nonzero mod `p`.
pub fn fp_inv(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p));
    let (mut base, mut exp, mut acc) = (a as u64 % p as u64, p as u64 - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    acc as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fp_inverse_small_primes() {
        for p in [2u32, 3, 5, 7, 11, 13] {
            for a in 1..p {
                assert_eq!(a as u64 * fp_inv(a, p) as u64 % p as u64, 1);
            }
        }
    }

    #[test]
    fn poly_ring_needs_prime_base() {
        let spec =
            RingSpec::parse(r#"{"type":"poly","base":{"type":"Zn","n":4},"vars":1}"#).unwrap();
        assert!(matches!(ring_create(&spec), Err(Error::Construction(_))));
        let spec =
            RingSpec::parse(r#"{"type":"poly","base":{"type":"Zn","n":3},"vars":3}"#).unwrap();
        assert!(matches!(ring_create(&spec), Err(Error::Construction(_))));
    }

    #[test]
    fn creates_each_kind() {
        assert!(ring_create(&RingSpec::parse("F3[X]").unwrap())
            .unwrap()
            .as_unipoly()
            .is_ok());
        assert!(ring_create(&RingSpec::parse("F5[X,Y]").unwrap())
            .unwrap()
            .as_bipoly()
            .is_ok());
        let z4 = ring_create(&RingSpec::parse("Z/4").unwrap()).unwrap();
        assert_eq!(z4.as_finite().unwrap().size(), 4);
        assert!(z4.as_unipoly().is_err());
    }
}
