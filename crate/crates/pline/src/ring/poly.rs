use std::fmt;

use super::{fp_inv, is_prime, Ring};
use crate::error::{Error, Result};

/// A univariate polynomial over the prime field `F_p`.
///
/// Coefficients are stored in ascending degree with trailing zeros stripped,
/// so the zero polynomial is the empty list and equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    p: u32,
    coeffs: Vec<u32>,
}

impl Poly {
    pub fn new(p: u32, coeffs: impl IntoIterator<Item = i64>) -> Self {
        let m = p as i64;
        let coeffs = coeffs.into_iter().map(|c| c.rem_euclid(m) as u32).collect();
        Self::from_raw(p, coeffs)
    }

    fn from_raw(p: u32, mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { p, coeffs }
    }

    pub fn zero(p: u32) -> Self {
        Poly { p, coeffs: vec![] }
    }

    pub fn constant(p: u32, c: i64) -> Self {
        Self::new(p, [c])
    }

    pub fn one(p: u32) -> Self {
        Self::constant(p, 1)
    }

    /// `c·X^k`.
    pub fn monomial(p: u32, c: i64, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c;
        Self::new(p, coeffs)
    }

    pub fn x(p: u32) -> Self {
        Self::monomial(p, 1, 1)
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> u32 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    /// `None` stands for deg 0 = −∞.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    fn check_same(&self, other: &Poly) {
        assert_eq!(
            self.p, other.p,
            "polynomials over different prime fields mixed"
        );
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.check_same(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| (self.coeff(i) + other.coeff(i)) % self.p)
            .collect();
        Self::from_raw(self.p, coeffs)
    }

    pub fn neg(&self) -> Poly {
        let coeffs = self.coeffs.iter().map(|&c| (self.p - c) % self.p).collect();
        Self::from_raw(self.p, coeffs)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u32) -> Poly {
        let p = self.p as u64;
        let coeffs = self
            .coeffs
            .iter()
            .map(|&a| (a as u64 * c as u64 % p) as u32)
            .collect();
        Self::from_raw(self.p, coeffs)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.check_same(other);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.p);
        }
        let p = self.p as u64;
        let mut acc = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u64 * b as u64) % p;
            }
        }
        Self::from_raw(self.p, acc.into_iter().map(|c| c as u32).collect())
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Euclidean division: `self = den·q + r` with `deg r < deg den`.
    pub fn divmod(&self, den: &Poly) -> Result<(Poly, Poly)> {
        self.check_same(den);
        let dd = den
            .degree()
            .ok_or_else(|| Error::Domain("polynomial division by zero".into()))?;
        let p = self.p as u64;
        let lead_inv = fp_inv(den.leading(), self.p) as u64;
        let mut rem: Vec<u64> = self.coeffs.iter().map(|&c| c as u64).collect();
        if rem.len() <= dd {
            return Ok((Poly::zero(self.p), self.clone()));
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd] * lead_inv % p;
            quot[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &d) in den.coeffs.iter().enumerate() {
                rem[k + j] = (rem[k + j] + p - c * d as u64 % p) % p;
            }
        }
        rem.truncate(dd);
        Ok((
            Self::from_raw(self.p, quot.into_iter().map(|c| c as u32).collect()),
            Self::from_raw(self.p, rem.into_iter().map(|c| c as u32).collect()),
        ))
    }

    /// Parses `1+X^2`, `2X^3 - X + 1`, `3*x^2` style input.
    pub fn parse(s: &str, p: u32) -> Result<Poly> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let bad = |msg: &str| Error::Parse(format!("polynomial `{s}`: {msg}"));
        let bytes = text.as_bytes();
        let mut pos = 0;
        let mut acc = Poly::zero(p);
        while pos < bytes.len() {
            let mut sign = 1i64;
            while pos < bytes.len() && (bytes[pos] == b'+' || bytes[pos] == b'-') {
                if bytes[pos] == b'-' {
                    sign = -sign;
                }
                pos += 1;
            }
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            let coeff: Option<i64> = if pos > start {
                Some(
                    text[start..pos]
                        .parse::<i64>()
                        .map_err(|_| bad("coefficient out of range"))?
                        .rem_euclid(p as i64),
                )
            } else {
                None
            };
            if pos < bytes.len() && bytes[pos] == b'*' {
                pos += 1;
            }
            let mut exp = 0usize;
            if pos < bytes.len() && (bytes[pos] == b'X' || bytes[pos] == b'x') {
                pos += 1;
                exp = 1;
                if pos < bytes.len() && bytes[pos] == b'^' {
                    pos += 1;
                    let es = pos;
                    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    exp = text[es..pos].parse().map_err(|_| bad("bad exponent"))?;
                }
            } else if coeff.is_none() {
                return Err(bad(&format!("unexpected input at offset {pos}")));
            }
            if pos < bytes.len() && bytes[pos] != b'+' && bytes[pos] != b'-' {
                return Err(bad(&format!("unexpected input at offset {pos}")));
            }
            acc = acc.add(&Poly::monomial(p, sign * coeff.unwrap_or(1), exp));
        }
        Ok(acc)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (k, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "X")?,
                (1, _) => write!(f, "{c}X")?,
                (_, 1) => write!(f, "X^{k}")?,
                _ => write!(f, "{c}X^{k}")?,
            }
        }
        Ok(())
    }
}

/// Quotient and remainder of `num` by `den`.
pub fn poly_divmod(num: &Poly, den: &Poly) -> Result<(Poly, Poly)> {
    num.divmod(den)
}

/// Smallest monic irreducible polynomial of degree `k` over `F_p`, in the
/// order of ascending coefficient vectors.
pub(crate) fn find_irreducible(p: u32, k: u32) -> Poly {
    let k = k as usize;
    let count = (p as u64).pow(k as u32);
    (0..count)
        .map(|n| {
            let mut coeffs: Vec<i64> = digits(n, p as u64, k)
                .into_iter()
                .map(|d| d as i64)
                .collect();
            coeffs.push(1);
            Poly::new(p, coeffs)
        })
        .find(is_irreducible)
        .expect("irreducible polynomials exist in every degree")
}

fn digits(mut n: u64, radix: u64, len: usize) -> Vec<u64> {
    (0..len)
        .map(|_| {
            let d = n % radix;
            n /= radix;
            d
        })
        .collect()
}

fn is_irreducible(f: &Poly) -> bool {
    let deg = f.degree().unwrap_or(0);
    if deg == 0 {
        return false;
    }
    let p = f.p;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for n in 0..count {
            let mut coeffs: Vec<i64> = digits(n, p as u64, d)
                .into_iter()
                .map(|x| x as i64)
                .collect();
            coeffs.push(1);
            let g = Poly::new(p, coeffs);
            if f.divmod(&g).unwrap().1.is_zero() {
                return false;
            }
        }
    }
    true
}

/// The polynomial ring `F_p[X]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UniPolyRing {
    p: u32,
}

impl UniPolyRing {
    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::Construction(format!(
                "F_p[X] needs a prime p, got {p}"
            )));
        }
        Ok(UniPolyRing { p })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn parse(&self, s: &str) -> Result<Poly> {
        Poly::parse(s, self.p)
    }

    pub fn x(&self) -> Poly {
        Poly::x(self.p)
    }

    pub fn constant(&self, c: i64) -> Poly {
        Poly::constant(self.p, c)
    }
}

impl fmt::Display for UniPolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}[X]", self.p)
    }
}

impl Ring for UniPolyRing {
    type Elem = Poly;

    fn zero(&self) -> Poly {
        Poly::zero(self.p)
    }

    fn one(&self) -> Poly {
        Poly::one(self.p)
    }

    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a.add(b)
    }

    fn neg(&self, a: &Poly) -> Poly {
        a.neg()
    }

    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        a.mul(b)
    }

    fn is_unit(&self, a: &Poly) -> bool {
        a.degree() == Some(0)
    }

    fn unit_inverse(&self, a: &Poly) -> Result<Poly> {
        if !self.is_unit(a) {
            return Err(Error::Domain(format!("{a} is not a unit of {self}")));
        }
        Ok(Poly::constant(self.p, fp_inv(a.leading(), self.p) as i64))
    }

    fn is_commutative(&self) -> bool {
        true
    }

    fn contains(&self, a: &Poly) -> bool {
        a.p == self.p
    }

    fn elements(&self) -> Option<Vec<Poly>> {
        None
    }

    fn fmt_elem(&self, a: &Poly) -> String {
        a.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parse(s: &str, p: u32) -> Poly {
        Poly::parse(s, p).unwrap()
    }

    #[test]
    fn divmod_examples() {
        let (q, r) = poly_divmod(&parse("X^2+1", 2), &parse("X", 2)).unwrap();
        assert_eq!((q, r), (parse("X", 2), parse("1", 2)));

        // X^3 = (X+1)(X^2-X+1) - 1 over F3; checked by multiplying back
        let num = parse("X^3", 3);
        let den = parse("X+1", 3);
        let (q, r) = poly_divmod(&num, &den).unwrap();
        assert_eq!(q, parse("X^2-X+1", 3));
        assert_eq!(r, parse("-1", 3));
        assert_eq!(den.mul(&q).add(&r), num);

        let c = parse("X+2", 5);
        let d = parse("X^3", 5);
        assert_eq!(poly_divmod(&c, &d).unwrap(), (Poly::zero(5), c));
    }

    #[test]
    fn division_by_zero() {
        assert!(matches!(
            poly_divmod(&parse("X", 3), &Poly::zero(3)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(parse("1+X^2", 3).to_string(), "X^2+1");
        assert_eq!(parse("2*x^3 - x", 5).to_string(), "2X^3+4X");
        assert_eq!(parse("0", 2).to_string(), "0");
        assert_eq!(parse("X+X", 2), Poly::zero(2));
        assert_eq!(parse("-1", 3).coeffs(), &[2]);
        assert!(Poly::parse("", 2).is_err());
        assert!(Poly::parse("X^", 2).is_err());
        assert!(Poly::parse("Y", 2).is_err());
        assert!(Poly::parse("2X3", 5).is_err());
    }

    #[test]
    fn irreducibles() {
        assert_eq!(find_irreducible(2, 2), parse("X^2+X+1", 2));
        assert_eq!(find_irreducible(3, 2), parse("X^2+1", 3));
        assert!(is_irreducible(&parse("X^3+X+1", 2)));
        assert!(!is_irreducible(&parse("X^2+1", 2)));
    }

    #[test]
    fn units_of_poly_ring() {
        let r = UniPolyRing::new(3).unwrap();
        assert!(r.is_unit(&r.constant(2)));
        assert!(!r.is_unit(&r.zero()));
        assert!(!r.is_unit(&r.x()));
        assert_eq!(r.unit_inverse(&r.constant(2)).unwrap(), r.constant(2));
        assert!(r.unit_inverse(&r.x()).is_err());
        assert!(UniPolyRing::new(4).is_err());
    }

    fn arb_poly(p: u32) -> impl Strategy<Value = Poly> {
        prop::collection::vec(0..p as i64, 0..7).prop_map(move |c| Poly::new(p, c))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        // F_p[X] is a domain, so deg is additive on products.
        #[test]
        fn degree_laws_f2(a in arb_poly(2), b in arb_poly(2)) {
            let ab = a.mul(&b);
            match (a.degree(), b.degree()) {
                (Some(da), Some(db)) => prop_assert_eq!(ab.degree(), Some(da + db)),
                _ => prop_assert!(ab.is_zero()),
            }
            prop_assert!(a.add(&b).degree() <= a.degree().max(b.degree()));
        }

        #[test]
        fn degree_laws_f3(a in arb_poly(3), b in arb_poly(3)) {
            let ab = a.mul(&b);
            match (a.degree(), b.degree()) {
                (Some(da), Some(db)) => prop_assert_eq!(ab.degree(), Some(da + db)),
                _ => prop_assert!(ab.is_zero()),
            }
            prop_assert!(a.add(&b).degree() <= a.degree().max(b.degree()));
        }

        #[test]
        fn divmod_reconstructs(a in arb_poly(3), b in arb_poly(3)) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.divmod(&b).unwrap();
            prop_assert_eq!(b.mul(&q).add(&r), a);
            prop_assert!(r.degree() < b.degree());
        }

        #[test]
        fn display_parses_back(a in arb_poly(5)) {
            prop_assert_eq!(Poly::parse(&a.to_string(), 5).unwrap(), a);
        }
    }
}
