use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::{Arc, OnceLock};

use super::{Ring, RingSpec};
use crate::error::{Error, Result};

/// Rings up to this size get precomputed addition and multiplication tables.
const TABLE_LIMIT: u64 = 256;
const MAX_SIZE: u64 = 1 << 24;

static NEXT_RING_ID: AtomicU32 = AtomicU32::new(1);

/// An element of a [`FiniteRing`].
///
/// Carries the id of its parent ring, so elements of different rings never
/// compare equal. Within a ring the index is dense: `0` is zero and `1` is one
/// (unless the ring is trivial).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem {
    ring: u32,
    idx: u32,
}

impl Elem {
    #[inline]
    pub fn index(self) -> usize {
        self.idx as usize
    }

    pub fn ring_id(self) -> u32 {
        self.ring
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.idx)
    }
}

enum Structure {
    Zn(u32),
    /// `base[X]/(modulus)`; `modulus` is monic, given by base indices in
    /// ascending degree.
    Quotient {
        base: FiniteRing,
        modulus: Vec<u32>,
        deg: usize,
    },
    Matrix {
        base: FiniteRing,
    },
    Product {
        factors: Vec<FiniteRing>,
    },
}

struct Inner {
    id: u32,
    name: String,
    spec: RingSpec,
    size: u32,
    structure: Structure,
    /// Index of one in the natural mixed-radix order; swapped with 1 so that
    /// the public index of one is always 1.
    one_nat: u32,
    neg: Vec<u32>,
    add_table: Option<Vec<u32>>,
    mul_table: Option<Vec<u32>>,
    commutative: bool,
    unimodular_shortcut: bool,
    inverses: OnceLock<Vec<Option<u32>>>,
}

/// A finite ring with densely indexed elements.
///
/// Cheap to clone; all clones share one immutable ring.
#[derive(Clone)]
pub struct FiniteRing(Arc<Inner>);

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteRing({}, |R| = {})", self.0.name, self.0.size)
    }
}

impl FiniteRing {
    pub fn from_spec(spec: &RingSpec) -> Result<FiniteRing> {
        let (structure, size) = match spec {
            RingSpec::Zn { n } => {
                if *n == 0 {
                    return Err(Error::Construction("Z/n needs n >= 1".into()));
                }
                if *n > MAX_SIZE {
                    return Err(Error::Construction(format!("Z/{n} is too large")));
                }
                (Structure::Zn(*n as u32), *n)
            }
            RingSpec::QuotientPoly { base, modulus } => {
                let base = FiniteRing::from_spec(base)?;
                if !base.is_field() {
                    return Err(Error::Construction(format!(
                        "quotient base {} is not a field",
                        base.name()
                    )));
                }
                if modulus.len() < 2 {
                    return Err(Error::Construction(
                        "quotient modulus must have degree >= 1".into(),
                    ));
                }
                if let Some(&c) = modulus.iter().find(|&&c| c >= base.size() as u64) {
                    return Err(Error::Construction(format!(
                        "modulus coefficient {c} is not an element of {}",
                        base.name()
                    )));
                }
                let coeffs: Vec<Elem> = modulus.iter().map(|&c| base.elem(c as usize)).collect();
                let lead = *coeffs.last().unwrap();
                let lead_inv = base.inverse(lead).ok_or_else(|| {
                    Error::Construction("modulus leading coefficient is not a unit".into())
                })?;
                let monic: Vec<u32> = coeffs.iter().map(|&c| base.mul(lead_inv, c).idx).collect();
                let deg = monic.len() - 1;
                let size = checked_pow(base.size() as u64, deg as u32)?;
                (
                    Structure::Quotient {
                        base,
                        modulus: monic,
                        deg,
                    },
                    size,
                )
            }
            RingSpec::Matrix { base, dim } => {
                if *dim != 2 {
                    return Err(Error::Construction(format!(
                        "only 2x2 matrix rings are supported, got dim {dim}"
                    )));
                }
                let base = FiniteRing::from_spec(base)?;
                let size = checked_pow(base.size() as u64, 4)?;
                (Structure::Matrix { base }, size)
            }
            RingSpec::Product { factors } => {
                if factors.is_empty() {
                    return Err(Error::Construction("empty product ring".into()));
                }
                let factors = factors
                    .iter()
                    .map(FiniteRing::from_spec)
                    .collect::<Result<Vec<_>>>()?;
                let mut size = 1u64;
                for f in &factors {
                    size *= f.size() as u64;
                    if size > MAX_SIZE {
                        return Err(Error::Construction("product ring is too large".into()));
                    }
                }
                (Structure::Product { factors }, size)
            }
            RingSpec::Poly { .. } => {
                return Err(Error::Capability(format!("{spec} is not a finite ring")))
            }
        };
        Ok(Self::build(spec.clone(), structure, size as u32))
    }

    fn build(spec: RingSpec, structure: Structure, size: u32) -> FiniteRing {
        let (commutative, unimodular_shortcut) = match &structure {
            Structure::Zn(_) | Structure::Quotient { .. } => (true, true),
            Structure::Matrix { base } => (base.size() == 1, base.is_field() || base.size() == 1),
            Structure::Product { factors } => (
                factors.iter().all(|f| f.is_commutative()),
                factors.iter().all(|f| f.unimodular_shortcut()),
            ),
        };
        let mut inner = Inner {
            id: NEXT_RING_ID.fetch_add(1, Ordering::Relaxed),
            name: spec.to_string(),
            spec,
            size,
            structure,
            one_nat: 0,
            neg: Vec::new(),
            add_table: None,
            mul_table: None,
            commutative,
            unimodular_shortcut,
            inverses: OnceLock::new(),
        };
        inner.one_nat = inner.natural_one();
        inner.neg = (0..size).map(|a| inner.raw_neg(a)).collect();
        if (size as u64) <= TABLE_LIMIT {
            let n = size as usize;
            let mut add = vec![0; n * n];
            let mut mul = vec![0; n * n];
            for a in 0..size {
                for b in 0..size {
                    add[a as usize * n + b as usize] = inner.raw_add(a, b);
                    mul[a as usize * n + b as usize] = inner.raw_mul(a, b);
                }
            }
            inner.add_table = Some(add);
            inner.mul_table = Some(mul);
        }
        FiniteRing(Arc::new(inner))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn spec(&self) -> &RingSpec {
        &self.0.spec
    }

    pub fn id(&self) -> u32 {
        self.0.id
    }

    pub fn size(&self) -> usize {
        self.0.size as usize
    }

    /// The element with index `i`. Panics if `i` is out of range.
    #[inline]
    pub fn elem(&self, i: usize) -> Elem {
        assert!(
            i < self.size(),
            "index {i} out of range for {}",
            self.name()
        );
        Elem {
            ring: self.0.id,
            idx: i as u32,
        }
    }

    pub fn try_elem(&self, i: usize) -> Result<Elem> {
        if i < self.size() {
            Ok(self.elem(i))
        } else {
            Err(Error::Domain(format!(
                "index {i} out of range for {} (|R| = {})",
                self.name(),
                self.size()
            )))
        }
    }

    pub fn elems(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.0.size).map(move |idx| Elem {
            ring: self.0.id,
            idx,
        })
    }

    #[inline]
    pub fn owns(&self, a: Elem) -> bool {
        a.ring == self.0.id
    }

    /// Error unless `a` belongs to this ring.
    pub fn check(&self, a: Elem) -> Result<Elem> {
        if self.owns(a) {
            Ok(a)
        } else {
            Err(Error::Domain(format!(
                "element {a:?} does not belong to {}",
                self.name()
            )))
        }
    }

    #[inline]
    fn wrap(&self, idx: u32) -> Elem {
        Elem {
            ring: self.0.id,
            idx,
        }
    }

    #[inline]
    pub fn zero(&self) -> Elem {
        self.wrap(0)
    }

    #[inline]
    pub fn one(&self) -> Elem {
        self.wrap(if self.0.size > 1 { 1 } else { 0 })
    }

    pub fn is_trivial(&self) -> bool {
        self.0.size == 1
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        debug_assert!(self.owns(a) && self.owns(b));
        let idx = match &self.0.add_table {
            Some(t) => t[a.index() * self.size() + b.index()],
            None => self.0.raw_add(a.idx, b.idx),
        };
        self.wrap(idx)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        debug_assert!(self.owns(a));
        self.wrap(self.0.neg[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        debug_assert!(self.owns(a) && self.owns(b));
        let idx = match &self.0.mul_table {
            Some(t) => t[a.index() * self.size() + b.index()],
            None => self.0.raw_mul(a.idx, b.idx),
        };
        self.wrap(idx)
    }

    fn inverse_table(&self) -> &[Option<u32>] {
        self.0.inverses.get_or_init(|| {
            let one = self.one();
            self.elems()
                .map(|a| {
                    self.elems()
                        .find(|&b| self.mul(a, b) == one && self.mul(b, a) == one)
                        .map(|b| b.idx)
                })
                .collect()
        })
    }

    /// The two-sided inverse of `a`, if any.
    pub fn inverse(&self, a: Elem) -> Option<Elem> {
        debug_assert!(self.owns(a));
        self.inverse_table()[a.index()].map(|i| self.wrap(i))
    }

    pub fn is_unit(&self, a: Elem) -> bool {
        self.inverse(a).is_some()
    }

    /// The unit group, in index order.
    pub fn units(&self) -> Vec<Elem> {
        self.elems().filter(|&a| self.is_unit(a)).collect()
    }

    pub fn is_commutative(&self) -> bool {
        self.0.commutative
    }

    /// Commutative and every nonzero element is a unit.
    pub fn is_field(&self) -> bool {
        self.0.size > 1 && self.is_commutative() && self.elems().skip(1).all(|a| self.is_unit(a))
    }

    /// Whether unimodular pairs are known to be admissible for this ring
    /// (commutative rings, and matrix rings over fields).
    pub fn unimodular_shortcut(&self) -> bool {
        self.0.unimodular_shortcut
    }

    pub fn fmt_elem(&self, a: Elem) -> String {
        self.0.fmt_idx(a.idx)
    }

    /// Reads an element from its printed form, `#k` (index) or a bare index.
    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let wanted: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(a) = self.elems().find(|&a| self.fmt_elem(a) == wanted) {
            return Ok(a);
        }
        let digits = wanted.strip_prefix('#').unwrap_or(&wanted);
        match digits.parse::<usize>() {
            Ok(i) => self.try_elem(i),
            Err(_) => Err(Error::Parse(format!(
                "`{s}` is not an element of {}",
                self.name()
            ))),
        }
    }
}

fn checked_pow(base: u64, exp: u32) -> Result<u64> {
    match base.checked_pow(exp) {
        Some(v) if v <= MAX_SIZE => Ok(v),
        _ => Err(Error::Construction(format!(
            "ring with {base}^{exp} elements is too large"
        ))),
    }
}

impl Inner {
    fn radices(&self) -> Vec<u32> {
        match &self.structure {
            Structure::Zn(n) => vec![*n],
            Structure::Quotient { base, deg, .. } => vec![base.size() as u32; *deg],
            Structure::Matrix { base } => vec![base.size() as u32; 4],
            Structure::Product { factors } => factors.iter().map(|f| f.size() as u32).collect(),
        }
    }

    fn natural_one(&self) -> u32 {
        let digits: Vec<u32> = match &self.structure {
            Structure::Zn(n) => return if *n > 1 { 1 } else { 0 },
            Structure::Quotient { base, deg, .. } => {
                let mut d = vec![0; *deg];
                d[0] = base.one().idx;
                d
            }
            Structure::Matrix { base } => {
                let one = base.one().idx;
                vec![one, 0, 0, one]
            }
            Structure::Product { factors } => factors.iter().map(|f| f.one().idx).collect(),
        };
        self.encode_natural(&digits)
    }

    fn encode_natural(&self, digits: &[u32]) -> u32 {
        let mut acc = 0u32;
        for (d, r) in digits.iter().zip(self.radices()).rev() {
            acc = acc * r + d;
        }
        acc
    }

    #[inline]
    fn swap_one(&self, i: u32) -> u32 {
        if self.one_nat <= 1 {
            i
        } else if i == 1 {
            self.one_nat
        } else if i == self.one_nat {
            1
        } else {
            i
        }
    }

    fn digits(&self, idx: u32) -> Vec<u32> {
        let mut n = self.swap_one(idx);
        self.radices()
            .into_iter()
            .map(|r| {
                let d = n % r;
                n /= r;
                d
            })
            .collect()
    }

    fn index_from_digits(&self, digits: &[u32]) -> u32 {
        self.swap_one(self.encode_natural(digits))
    }

    fn raw_add(&self, a: u32, b: u32) -> u32 {
        match &self.structure {
            Structure::Zn(n) => ((a as u64 + b as u64) % *n as u64) as u32,
            Structure::Quotient { base, .. } | Structure::Matrix { base } => {
                let d: Vec<u32> = self
                    .digits(a)
                    .into_iter()
                    .zip(self.digits(b))
                    .map(|(x, y)| base.add(base.wrap(x), base.wrap(y)).idx)
                    .collect();
                self.index_from_digits(&d)
            }
            Structure::Product { factors } => {
                let d: Vec<u32> = self
                    .digits(a)
                    .into_iter()
                    .zip(self.digits(b))
                    .zip(factors)
                    .map(|((x, y), f)| f.add(f.wrap(x), f.wrap(y)).idx)
                    .collect();
                self.index_from_digits(&d)
            }
        }
    }

    fn raw_neg(&self, a: u32) -> u32 {
        match &self.structure {
            Structure::Zn(n) => (*n - a) % *n,
            Structure::Quotient { base, .. } | Structure::Matrix { base } => {
                let d: Vec<u32> = self
                    .digits(a)
                    .into_iter()
                    .map(|x| base.neg(base.wrap(x)).idx)
                    .collect();
                self.index_from_digits(&d)
            }
            Structure::Product { factors } => {
                let d: Vec<u32> = self
                    .digits(a)
                    .into_iter()
                    .zip(factors)
                    .map(|(x, f)| f.neg(f.wrap(x)).idx)
                    .collect();
                self.index_from_digits(&d)
            }
        }
    }

    fn raw_mul(&self, a: u32, b: u32) -> u32 {
        match &self.structure {
            Structure::Zn(n) => ((a as u64 * b as u64) % *n as u64) as u32,
            Structure::Quotient { base, modulus, deg } => {
                let x: Vec<Elem> = self.digits(a).into_iter().map(|i| base.wrap(i)).collect();
                let y: Vec<Elem> = self.digits(b).into_iter().map(|i| base.wrap(i)).collect();
                let mut prod = vec![base.zero(); 2 * deg - 1];
                for (i, &xi) in x.iter().enumerate() {
                    for (j, &yj) in y.iter().enumerate() {
                        prod[i + j] = base.add(prod[i + j], base.mul(xi, yj));
                    }
                }
                // reduce by the monic modulus, top coefficient first
                for k in (*deg..prod.len()).rev() {
                    let c = prod[k];
                    if c == base.zero() {
                        continue;
                    }
                    for (j, &m) in modulus.iter().enumerate() {
                        let at = k - deg + j;
                        prod[at] = base.sub(prod[at], base.mul(c, base.wrap(m)));
                    }
                }
                let d: Vec<u32> = prod[..*deg].iter().map(|e| e.idx).collect();
                self.index_from_digits(&d)
            }
            Structure::Matrix { base } => {
                let x: Vec<Elem> = self.digits(a).into_iter().map(|i| base.wrap(i)).collect();
                let y: Vec<Elem> = self.digits(b).into_iter().map(|i| base.wrap(i)).collect();
                let dot = |p: Elem, q: Elem, r: Elem, s: Elem| {
                    base.add(base.mul(p, q), base.mul(r, s)).idx
                };
                let d = [
                    dot(x[0], y[0], x[1], y[2]),
                    dot(x[0], y[1], x[1], y[3]),
                    dot(x[2], y[0], x[3], y[2]),
                    dot(x[2], y[1], x[3], y[3]),
                ];
                self.index_from_digits(&d)
            }
            Structure::Product { factors } => {
                let d: Vec<u32> = self
                    .digits(a)
                    .into_iter()
                    .zip(self.digits(b))
                    .zip(factors)
                    .map(|((x, y), f)| f.mul(f.wrap(x), f.wrap(y)).idx)
                    .collect();
                self.index_from_digits(&d)
            }
        }
    }

    fn fmt_idx(&self, idx: u32) -> String {
        match &self.structure {
            Structure::Zn(_) => idx.to_string(),
            Structure::Quotient { base, modulus, deg } => {
                let var = if *deg == 2 && modulus[0] == 0 && modulus[1] == 0 {
                    "e"
                } else {
                    "X"
                };
                let simple_base = matches!(base.0.structure, Structure::Zn(_));
                let one = base.one().idx;
                let terms: Vec<String> = self
                    .digits(idx)
                    .into_iter()
                    .enumerate()
                    .rev()
                    .filter(|&(_, c)| c != 0)
                    .map(|(k, c)| {
                        let cs = if simple_base {
                            base.0.fmt_idx(c)
                        } else {
                            format!("({})", base.0.fmt_idx(c))
                        };
                        let pow = match k {
                            0 => return cs,
                            1 => var.to_string(),
                            _ => format!("{var}^{k}"),
                        };
                        if c == one {
                            pow
                        } else {
                            format!("{cs}{pow}")
                        }
                    })
                    .collect();
                if terms.is_empty() {
                    "0".into()
                } else {
                    terms.join("+")
                }
            }
            Structure::Matrix { base } => {
                let d: Vec<String> = self
                    .digits(idx)
                    .into_iter()
                    .map(|i| base.0.fmt_idx(i))
                    .collect();
                format!("[[{},{}],[{},{}]]", d[0], d[1], d[2], d[3])
            }
            Structure::Product { factors } => {
                let d: Vec<String> = self
                    .digits(idx)
                    .into_iter()
                    .zip(factors)
                    .map(|(i, f)| f.0.fmt_idx(i))
                    .collect();
                format!("({})", d.join(","))
            }
        }
    }
}

impl Ring for FiniteRing {
    type Elem = Elem;

    fn zero(&self) -> Elem {
        FiniteRing::zero(self)
    }

    fn one(&self) -> Elem {
        FiniteRing::one(self)
    }

    fn add(&self, a: &Elem, b: &Elem) -> Elem {
        FiniteRing::add(self, *a, *b)
    }

    fn neg(&self, a: &Elem) -> Elem {
        FiniteRing::neg(self, *a)
    }

    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        FiniteRing::mul(self, *a, *b)
    }

    fn is_unit(&self, a: &Elem) -> bool {
        FiniteRing::is_unit(self, *a)
    }

    fn unit_inverse(&self, a: &Elem) -> Result<Elem> {
        self.check(*a)?;
        self.inverse(*a).ok_or_else(|| {
            Error::Domain(format!(
                "{} is not a unit of {}",
                self.fmt_elem(*a),
                self.name()
            ))
        })
    }

    fn is_commutative(&self) -> bool {
        FiniteRing::is_commutative(self)
    }

    fn contains(&self, a: &Elem) -> bool {
        self.owns(*a)
    }

    fn elements(&self) -> Option<Vec<Elem>> {
        Some(self.elems().collect())
    }

    fn fmt_elem(&self, a: &Elem) -> String {
        FiniteRing::fmt_elem(self, *a)
    }
}
