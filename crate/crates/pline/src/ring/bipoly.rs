use std::collections::BTreeMap;
use std::fmt;

use super::{fp_inv, is_prime, Ring};
use crate::error::{Error, Result};

/// A polynomial in two commuting variables `X1`, `X2` over `F_p`, stored as a
/// sparse map from exponent pairs to nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BiPoly {
    p: u32,
    terms: BTreeMap<(u32, u32), u32>,
}

impl BiPoly {
    pub fn zero(p: u32) -> Self {
        BiPoly {
            p,
            terms: BTreeMap::new(),
        }
    }

    /// `c·X1^i·X2^j`.
    pub fn term(p: u32, c: i64, i: u32, j: u32) -> Self {
        let mut out = Self::zero(p);
        let c = c.rem_euclid(p as i64) as u32;
        if c != 0 {
            out.terms.insert((i, j), c);
        }
        out
    }

    pub fn constant(p: u32, c: i64) -> Self {
        Self::term(p, c, 0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), u32)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    /// The constant term if the polynomial is constant.
    pub fn as_constant(&self) -> Option<u32> {
        match self.terms.len() {
            0 => Some(0),
            1 => self.terms.get(&(0, 0)).copied(),
            _ => None,
        }
    }

    fn insert_add(&mut self, exp: (u32, u32), c: u64) {
        let p = self.p as u64;
        let cur = self.terms.get(&exp).copied().unwrap_or(0) as u64;
        let v = ((cur + c % p) % p) as u32;
        if v == 0 {
            self.terms.remove(&exp);
        } else {
            self.terms.insert(exp, v);
        }
    }

    pub fn add(&self, other: &BiPoly) -> BiPoly {
        assert_eq!(
            self.p, other.p,
            "polynomials over different prime fields mixed"
        );
        let mut out = self.clone();
        for (&e, &c) in &other.terms {
            out.insert_add(e, c as u64);
        }
        out
    }

    pub fn neg(&self) -> BiPoly {
        BiPoly {
            p: self.p,
            terms: self.terms.iter().map(|(&e, &c)| (e, self.p - c)).collect(),
        }
    }

    pub fn sub(&self, other: &BiPoly) -> BiPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &BiPoly) -> BiPoly {
        assert_eq!(
            self.p, other.p,
            "polynomials over different prime fields mixed"
        );
        let mut out = Self::zero(self.p);
        for (&(i1, j1), &a) in &self.terms {
            for (&(i2, j2), &b) in &other.terms {
                out.insert_add((i1 + i2, j1 + j2), a as u64 * b as u64);
            }
        }
        out
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(&(i, j), &c)| {
                let mut vars = Vec::new();
                for (name, e) in [("X1", i), ("X2", j)] {
                    match e {
                        0 => {}
                        1 => vars.push(name.to_string()),
                        _ => vars.push(format!("{name}^{e}")),
                    }
                }
                match (c, vars.is_empty()) {
                    (_, true) => c.to_string(),
                    (1, false) => vars.join("*"),
                    _ => format!("{c}*{}", vars.join("*")),
                }
            })
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// The polynomial ring `F_p[X1, X2]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BiPolyRing {
    p: u32,
}

impl BiPolyRing {
    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::Construction(format!(
                "F_p[X1,X2] needs a prime p, got {p}"
            )));
        }
        Ok(BiPolyRing { p })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn term(&self, c: i64, i: u32, j: u32) -> BiPoly {
        BiPoly::term(self.p, c, i, j)
    }

    pub fn constant(&self, c: i64) -> BiPoly {
        BiPoly::constant(self.p, c)
    }
}

impl fmt::Display for BiPolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}[X,Y]", self.p)
    }
}

impl Ring for BiPolyRing {
    type Elem = BiPoly;

    fn zero(&self) -> BiPoly {
        BiPoly::zero(self.p)
    }

    fn one(&self) -> BiPoly {
        BiPoly::constant(self.p, 1)
    }

    fn add(&self, a: &BiPoly, b: &BiPoly) -> BiPoly {
        a.add(b)
    }

    fn neg(&self, a: &BiPoly) -> BiPoly {
        a.neg()
    }

    fn mul(&self, a: &BiPoly, b: &BiPoly) -> BiPoly {
        a.mul(b)
    }

    fn is_unit(&self, a: &BiPoly) -> bool {
        matches!(a.as_constant(), Some(c) if c != 0)
    }

    fn unit_inverse(&self, a: &BiPoly) -> Result<BiPoly> {
        match a.as_constant() {
            Some(c) if c != 0 => Ok(BiPoly::constant(self.p, fp_inv(c, self.p) as i64)),
            _ => Err(Error::Domain(format!("{a} is not a unit of {self}"))),
        }
    }

    fn is_commutative(&self) -> bool {
        true
    }

    fn contains(&self, a: &BiPoly) -> bool {
        a.p == self.p
    }

    fn elements(&self) -> Option<Vec<BiPoly>> {
        None
    }

    fn fmt_elem(&self, a: &BiPoly) -> String {
        a.to_string()
    }
}
