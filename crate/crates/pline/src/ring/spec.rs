use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::is_prime;
use super::poly::{find_irreducible, Poly};
use crate::error::{Error, Result};

/// Description of a ring, as read from JSON or from the shorthand syntax.
///
/// JSON examples: `{"type":"Zn","n":4}`,
/// `{"type":"quotientpoly","base":{"type":"Zn","n":2},"modulus":[0,0,1]}`
/// (ascending coefficients), `{"type":"matrix","base":{...},"dim":2}`,
/// `{"type":"product","factors":[...]}`, `{"type":"poly","base":{...},"vars":1}`.
///
/// Shorthand: `Z/4`, `Z4`, `F5`, `GF4`, `F2[e]` (dual numbers), `F3[X]/(X^2+1)`,
/// `M2(F2)`, `F2xF3`, `F2[X]`, `F5[X,Y]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum RingSpec {
    #[serde(rename = "Zn", alias = "zn", alias = "ZN")]
    Zn { n: u64 },
    #[serde(rename = "quotientpoly", alias = "QuotientPoly", alias = "quotient")]
    QuotientPoly {
        base: Box<RingSpec>,
        modulus: Vec<u64>,
    },
    #[serde(rename = "matrix", alias = "MatrixRing", alias = "Matrix")]
    Matrix { base: Box<RingSpec>, dim: u32 },
    #[serde(rename = "product", alias = "Product")]
    Product { factors: Vec<RingSpec> },
    #[serde(rename = "poly", alias = "PolyRing", alias = "Poly")]
    Poly { base: Box<RingSpec>, vars: u32 },
}

impl RingSpec {
    pub fn zn(n: u64) -> Self {
        RingSpec::Zn { n }
    }

    /// `base[X]/(X^2)`.
    pub fn dual(base: RingSpec) -> Self {
        RingSpec::QuotientPoly {
            base: Box::new(base),
            modulus: vec![0, 0, 1],
        }
    }

    pub fn matrix(base: RingSpec) -> Self {
        RingSpec::Matrix {
            base: Box::new(base),
            dim: 2,
        }
    }

    /// The field with `q` elements; `q` must be a prime power.
    pub fn galois(q: u64) -> Result<Self> {
        let (p, k) = prime_power(q)
            .ok_or_else(|| Error::Construction(format!("{q} is not a prime power")))?;
        if k == 1 {
            return Ok(RingSpec::Zn { n: p });
        }
        let modulus = find_irreducible(p as u32, k);
        Ok(RingSpec::QuotientPoly {
            base: Box::new(RingSpec::Zn { n: p }),
            modulus: modulus.coeffs().iter().map(|&c| c as u64).collect(),
        })
    }

    /// Parses either a JSON document or the shorthand syntax.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            return serde_json::from_str(s).map_err(|e| Error::Parse(format!("ring spec: {e}")));
        }
        let mut parser = Shorthand {
            src: s.as_bytes(),
            pos: 0,
        };
        let spec = parser.product()?;
        parser.skip_ws();
        if parser.pos != parser.src.len() {
            return Err(parser.err("trailing input"));
        }
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("ring specs always serialize")
    }
}

impl FromStr for RingSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RingSpec::parse(s)
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Zn { n } if is_prime(*n) => write!(f, "F{n}"),
            RingSpec::Zn { n } => write!(f, "Z/{n}"),
            RingSpec::QuotientPoly { base, modulus } => {
                let base_s = wrap_product(base);
                if modulus.as_slice() == [0, 0, 1] {
                    write!(f, "{base_s}[e]")
                } else {
                    let terms: Vec<String> = modulus
                        .iter()
                        .enumerate()
                        .rev()
                        .filter(|(_, &c)| c != 0)
                        .map(|(i, &c)| monomial(c, i))
                        .collect();
                    write!(f, "{base_s}[X]/({})", terms.join("+"))
                }
            }
            RingSpec::Matrix { base, dim } => write!(f, "M{dim}({base})"),
            RingSpec::Product { factors } => {
                let parts: Vec<String> = factors.iter().map(wrap_product).collect();
                write!(f, "{}", parts.join("x"))
            }
            RingSpec::Poly { base, vars } => match vars {
                1 => write!(f, "{}[X]", wrap_product(base)),
                _ => write!(f, "{}[X,Y]", wrap_product(base)),
            },
        }
    }
}

fn wrap_product(spec: &RingSpec) -> String {
    match spec {
        RingSpec::Product { .. } => format!("({spec})"),
        _ => spec.to_string(),
    }
}

fn monomial(c: u64, i: usize) -> String {
    let coeff = if c == 1 && i > 0 {
        String::new()
    } else {
        c.to_string()
    };
    match i {
        0 => coeff,
        1 => format!("{coeff}X"),
        _ => format!("{coeff}X^{i}"),
    }
}

/// Returns `(p, k)` with `q = p^k`, p prime.
fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut rest, mut k) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

struct Shorthand<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Shorthand<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!(
            "ring shorthand `{}` at offset {}: {msg}",
            String::from_utf8_lossy(self.src),
            self.pos
        ))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{token}`")))
        }
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("expected a number"))
    }

    fn product(&mut self) -> Result<RingSpec> {
        let mut factors = vec![self.factor()?];
        while self.eat("x") || self.eat("×") || self.eat("*") {
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            RingSpec::Product { factors }
        })
    }

    fn factor(&mut self) -> Result<RingSpec> {
        let base = if self.eat("(") {
            let inner = self.product()?;
            self.expect(")")?;
            inner
        } else if self.eat("M") {
            let dim = self.number()?;
            self.expect("(")?;
            let inner = self.product()?;
            self.expect(")")?;
            RingSpec::Matrix {
                base: Box::new(inner),
                dim: dim as u32,
            }
        } else if self.eat("GF") || self.eat("F") {
            let paren = self.eat("(");
            let q = self.number()?;
            if paren {
                self.expect(")")?;
            }
            RingSpec::galois(q).map_err(|_| self.err(&format!("no field with {q} elements")))?
        } else if self.eat("Z") {
            self.eat("/");
            let n = self.number()?;
            self.eat("Z");
            RingSpec::Zn { n }
        } else {
            return Err(self.err("expected a ring"));
        };
        self.suffix(base)
    }

    fn suffix(&mut self, base: RingSpec) -> Result<RingSpec> {
        if self.peek() != Some(b'[') {
            return Ok(base);
        }
        self.pos += 1;
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos] != b']' {
            self.pos += 1;
        }
        let inner: String = String::from_utf8_lossy(&self.src[start..self.pos])
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect();
        self.expect("]")?;
        match inner.as_str() {
            "e" | "eps" | "ε" => Ok(RingSpec::dual(base)),
            "X" | "x" => {
                if self.eat("/") {
                    self.expect("(")?;
                    let start = self.pos;
                    while self.pos < self.src.len() && self.src[self.pos] != b')' {
                        self.pos += 1;
                    }
                    let text = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
                    self.expect(")")?;
                    let p = match base {
                        RingSpec::Zn { n } if is_prime(n) => n as u32,
                        _ => return Err(self.err("quotient shorthand needs a prime field base")),
                    };
                    let modulus = Poly::parse(&text, p)?;
                    Ok(RingSpec::QuotientPoly {
                        base: Box::new(base),
                        modulus: modulus.coeffs().iter().map(|&c| c as u64).collect(),
                    })
                } else {
                    Ok(RingSpec::Poly {
                        base: Box::new(base),
                        vars: 1,
                    })
                }
            }
            "X,Y" | "x,y" | "X1,X2" | "x1,x2" => Ok(RingSpec::Poly {
                base: Box::new(base),
                vars: 2,
            }),
            other => Err(self.err(&format!("unknown adjunction `[{other}]`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_forms() {
        assert_eq!(
            RingSpec::parse(r#"{"type":"Zn","n":4}"#).unwrap(),
            RingSpec::zn(4)
        );
        assert_eq!(
            RingSpec::parse(
                r#"{"type":"quotientpoly","base":{"type":"Zn","n":2},"modulus":[0,0,1]}"#
            )
            .unwrap(),
            RingSpec::dual(RingSpec::zn(2))
        );
        assert_eq!(
            RingSpec::parse(r#"{"type":"matrix","base":{"type":"Zn","n":2},"dim":2}"#).unwrap(),
            RingSpec::matrix(RingSpec::zn(2))
        );
        let prod = RingSpec::parse(
            r#"{"type":"product","factors":[{"type":"Zn","n":2},{"type":"Zn","n":3}]}"#,
        )
        .unwrap();
        assert_eq!(
            prod,
            RingSpec::Product {
                factors: vec![RingSpec::zn(2), RingSpec::zn(3)]
            }
        );
        assert!(RingSpec::parse(r#"{"type":"Zn"}"#).is_err());
    }

    #[test]
    fn shorthand_forms() {
        assert_eq!(RingSpec::parse("Z/4").unwrap(), RingSpec::zn(4));
        assert_eq!(RingSpec::parse("Z4").unwrap(), RingSpec::zn(4));
        assert_eq!(RingSpec::parse("F5").unwrap(), RingSpec::zn(5));
        assert_eq!(
            RingSpec::parse("F2[e]").unwrap(),
            RingSpec::dual(RingSpec::zn(2))
        );
        assert_eq!(
            RingSpec::parse("M2(F2)").unwrap(),
            RingSpec::matrix(RingSpec::zn(2))
        );
        assert_eq!(
            RingSpec::parse("GF4").unwrap(),
            RingSpec::QuotientPoly {
                base: Box::new(RingSpec::zn(2)),
                modulus: vec![1, 1, 1]
            }
        );
        assert_eq!(
            RingSpec::parse("F3[X]").unwrap(),
            RingSpec::Poly {
                base: Box::new(RingSpec::zn(3)),
                vars: 1
            }
        );
        assert!(RingSpec::parse("F6").is_err());
        assert!(RingSpec::parse("Q").is_err());
        assert!(RingSpec::parse("F2[T]").is_err());
    }

    #[test]
    fn display_reparses() {
        for s in [
            "Z/4",
            "F3",
            "F2[e]",
            "M2(F2)",
            "F2xF2",
            "F2[X]",
            "F5[X,Y]",
            "GF9",
            "Z/1",
            "M2(F2xF3)",
        ] {
            let spec = RingSpec::parse(s).unwrap();
            assert_eq!(RingSpec::parse(&spec.to_string()).unwrap(), spec, "{s}");
            assert_eq!(RingSpec::parse(&spec.to_json()).unwrap(), spec, "{s}");
        }
    }
}
