//! The projective line over a finite ring.
//!
//! A point is the cyclic submodule `R(a,b)` spanned by an admissible pair, i.e.
//! a pair that is the first row of an invertible matrix. Pairs that differ by a
//! left unit factor span the same point; each point is stored by the smallest
//! such pair in index order.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mat2::{gen_e, mat_invertible, shared_row_factor, Mat2};
use crate::ring::{Elem, FiniteRing};

/// A point `R(a,b)` in canonical form.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    a: Elem,
    b: Elem,
}

impl Point {
    pub fn rep(&self) -> (Elem, Elem) {
        (self.a, self.b)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R({:?},{:?})", self.a, self.b)
    }
}

/// A finite sequence of `E(t)` parameters `(t₁, …, tₙ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct EWord {
    pub params: Vec<Elem>,
}

impl EWord {
    pub fn new(params: Vec<Elem>) -> Self {
        EWord { params }
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    /// `E(tₙ)·E(tₙ₋₁)⋯E(t₁)`.
    pub fn matrix(&self, r: &FiniteRing) -> Mat2<Elem> {
        self.params
            .iter()
            .fold(Mat2::identity(r), |acc, t| gen_e(r, t).mul(r, &acc))
    }
}

/// Result of evaluating an [`EWord`] from `R(1,0)`.
#[derive(Debug, Clone)]
pub struct WordTrace {
    /// `R(xₙ, yₙ)`.
    pub point: Point,
    /// `p₀ = R(1,0), p₁, …, pₙ`.
    pub trace: Vec<Point>,
    /// The normalized pairs `(xᵢ, yᵢ)` for `i = 0..=n`.
    pub rows: Vec<(Elem, Elem)>,
}

/// True iff `(a, b)` is the first row of some invertible matrix.
///
/// Rings flagged for it (commutative rings, matrix rings over fields) use the
/// equivalent unimodularity test; other rings search all completions.
pub fn is_admissible(r: &FiniteRing, a: Elem, b: Elem) -> Result<bool> {
    r.check(a)?;
    r.check(b)?;
    if r.unimodular_shortcut() {
        Ok(is_unimodular(r, a, b))
    } else {
        is_admissible_exhaustive(r, a, b)
    }
}

/// Admissibility by searching every second row `(c, d)`.
pub fn is_admissible_exhaustive(r: &FiniteRing, a: Elem, b: Elem) -> Result<bool> {
    for c in r.elems() {
        for d in r.elems() {
            if mat_invertible(r, &Mat2::new(a, b, c, d))? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// True iff `a·x + b·y = 1` for some `x, y`.
pub fn is_unimodular(r: &FiniteRing, a: Elem, b: Elem) -> bool {
    let one = r.one();
    r.elems()
        .any(|x| r.elems().any(|y| r.add(r.mul(a, x), r.mul(b, y)) == one))
}

/// All points of the projective line, canonical and sorted.
pub fn enumerate_points(r: &FiniteRing) -> Result<Vec<Point>> {
    let units = r.units();
    let mut points = Vec::new();
    for a in r.elems() {
        for b in r.elems() {
            let canon = canonical(r, &units, a, b);
            if canon.rep() == (a, b) && is_admissible(r, a, b)? {
                points.push(canon);
            }
        }
    }
    Ok(points)
}

fn canonical(r: &FiniteRing, units: &[Elem], a: Elem, b: Elem) -> Point {
    units
        .iter()
        .map(|&u| Point {
            a: r.mul(u, a),
            b: r.mul(u, b),
        })
        .min()
        .expect("every ring has at least one unit")
}

/// The projective line `ℙ(R)` of a finite ring with its points indexed.
#[derive(Debug, Clone)]
pub struct ProjectiveLine {
    ring: FiniteRing,
    units: Vec<Elem>,
    points: Vec<Point>,
    index: HashMap<Point, usize>,
}

impl ProjectiveLine {
    pub fn new(ring: &FiniteRing) -> Result<Self> {
        let points = enumerate_points(ring)?;
        let index = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        Ok(ProjectiveLine {
            ring: ring.clone(),
            units: ring.units(),
            points,
            index,
        })
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> Point {
        self.points[i]
    }

    pub fn index_of(&self, p: Point) -> Option<usize> {
        self.index.get(&p).copied()
    }

    /// `R(a, b)` for an admissible pair.
    pub fn make(&self, a: Elem, b: Elem) -> Result<Point> {
        if !is_admissible(&self.ring, a, b)? {
            return Err(Error::Domain(format!(
                "({}, {}) is not admissible",
                self.ring.fmt_elem(a),
                self.ring.fmt_elem(b)
            )));
        }
        Ok(self.canonical(a, b))
    }

    /// Canonical representative without an admissibility check.
    pub(crate) fn canonical(&self, a: Elem, b: Elem) -> Point {
        canonical(&self.ring, &self.units, a, b)
    }

    /// `R(1,0)`.
    pub fn base_point(&self) -> Point {
        self.canonical(self.ring.one(), self.ring.zero())
    }

    /// `R(0,1)`.
    pub fn opposite_point(&self) -> Point {
        self.canonical(self.ring.zero(), self.ring.one())
    }

    /// Whether the stacked matrix of representatives is invertible.
    pub fn distant(&self, p: Point, q: Point) -> Result<bool> {
        for e in [p.a, p.b, q.a, q.b] {
            self.ring.check(e)?;
        }
        mat_invertible(&self.ring, &Mat2::new(p.a, p.b, q.a, q.b))
    }

    /// The image `p·G` under an invertible matrix.
    pub fn apply(&self, p: Point, g: &Mat2<Elem>) -> Point {
        let (a, b) = g.act(&self.ring, (&p.a, &p.b));
        self.canonical(a, b)
    }

    /// Reads `R(a,b)`, `(a,b)` or `a,b` with elements in display syntax; the
    /// pair must be admissible.
    pub fn parse_point(&self, s: &str) -> Result<Point> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = t.strip_prefix('R').unwrap_or(&t);
        let inner = inner
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .unwrap_or(inner);
        let mut depth = 0i32;
        let split = inner.char_indices().find(|&(_, c)| {
            match c {
                '(' | '[' => depth += 1,
                ')' | ']' => depth -= 1,
                _ => {}
            }
            c == ',' && depth == 0
        });
        let Some((at, _)) = split else {
            return Err(Error::Parse(format!("`{s}` is not a point R(a,b)")));
        };
        let a = self.ring.parse_elem(&inner[..at])?;
        let b = self.ring.parse_elem(&inner[at + 1..])?;
        self.make(a, b)
    }

    pub fn fmt_point(&self, p: Point) -> String {
        format!("R({},{})", self.ring.fmt_elem(p.a), self.ring.fmt_elem(p.b))
    }

    /// Evaluates `(1,0)·E(tₙ)⋯E(t₁)` through the recursion
    /// `(xᵢ, yᵢ) = tᵢ·(xᵢ₋₁, yᵢ₋₁) − (xᵢ₋₂, yᵢ₋₂)`, seeded with
    /// `(x₋₁, y₋₁) = (0, −1)` and `(x₀, y₀) = (1, 0)`.
    pub fn word_to_point(&self, w: &EWord) -> Result<WordTrace> {
        let r = &self.ring;
        for &t in &w.params {
            r.check(t)?;
        }
        let mut before = (r.zero(), r.neg(r.one()));
        let mut cur = (r.one(), r.zero());
        let mut rows = vec![cur];
        for &t in &w.params {
            let next = (
                r.sub(r.mul(t, cur.0), before.0),
                r.sub(r.mul(t, cur.1), before.1),
            );
            before = cur;
            cur = next;
            rows.push(cur);
        }
        let trace: Vec<Point> = rows.iter().map(|&(x, y)| self.canonical(x, y)).collect();
        Ok(WordTrace {
            point: *trace.last().unwrap(),
            trace,
            rows,
        })
    }

    /// Recovers the `E`-word of a chain `R(1,0) = p₀ dis p₁ dis … dis pₙ` by
    /// normalizing representatives step by step with [`shared_row_factor`].
    pub fn chain_to_word(&self, chain: &[Point]) -> Result<EWord> {
        let r = &self.ring;
        let Some(&first) = chain.first() else {
            return Err(Error::Precondition("empty chain".into()));
        };
        if first != self.base_point() {
            return Err(Error::Precondition(format!(
                "chain starts at {}, not at R(1,0)",
                self.fmt_point(first)
            )));
        }
        let mut before = (r.zero(), r.neg(r.one()));
        let mut cur = (r.one(), r.zero());
        let mut params = Vec::with_capacity(chain.len() - 1);
        for (i, pair) in chain.windows(2).enumerate() {
            if !self.distant(pair[0], pair[1])? {
                return Err(Error::Precondition(format!(
                    "chain points {} and {} (positions {i}, {}) are not distant",
                    self.fmt_point(pair[0]),
                    self.fmt_point(pair[1]),
                    i + 1
                )));
            }
            let (a, b) = pair[1].rep();
            let x = Mat2::new(cur.0, cur.1, a, b);
            let xp = Mat2::new(cur.0, cur.1, r.neg(before.0), r.neg(before.1));
            let (s, u) = shared_row_factor(r, &x, &xp)?;
            let u_inv = r.inverse(u).ok_or_else(|| {
                Error::Internal("row factor of a distant pair is not a unit".into())
            })?;
            params.push(r.mul(u_inv, s));
            before = cur;
            cur = (r.mul(u_inv, a), r.mul(u_inv, b));
        }
        Ok(EWord::new(params))
    }
}

/// Exhaustive comparison of unimodular and admissible pairs.
#[derive(Debug, Clone, Serialize)]
pub struct UniAdmissReport {
    pub ring: String,
    pub pairs: usize,
    pub unimodular: usize,
    pub admissible: usize,
    pub unimodular_implies_admissible: bool,
    pub admissible_implies_unimodular: bool,
    /// Up to ten pairs where the two notions differ.
    pub counterexamples: Vec<String>,
}

impl UniAdmissReport {
    pub fn equivalent(&self) -> bool {
        self.unimodular_implies_admissible && self.admissible_implies_unimodular
    }
}

/// Classifies every pair of `R²` as unimodular and/or admissible. Admissibility
/// is decided by completion search, never by the unimodular shortcut.
pub fn unimodular_vs_admissible_report(r: &FiniteRing) -> Result<UniAdmissReport> {
    let mut report = UniAdmissReport {
        ring: r.name().to_string(),
        pairs: r.size() * r.size(),
        unimodular: 0,
        admissible: 0,
        unimodular_implies_admissible: true,
        admissible_implies_unimodular: true,
        counterexamples: Vec::new(),
    };
    for a in r.elems() {
        for b in r.elems() {
            let uni = is_unimodular(r, a, b);
            let adm = is_admissible_exhaustive(r, a, b)?;
            report.unimodular += uni as usize;
            report.admissible += adm as usize;
            if uni != adm {
                if uni {
                    report.unimodular_implies_admissible = false;
                } else {
                    report.admissible_implies_unimodular = false;
                }
                if report.counterexamples.len() < 10 {
                    report.counterexamples.push(format!(
                        "({}, {}) unimodular={uni} admissible={adm}",
                        r.fmt_elem(a),
                        r.fmt_elem(b)
                    ));
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingSpec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ring(s: &str) -> FiniteRing {
        FiniteRing::from_spec(&RingSpec::parse(s).unwrap()).unwrap()
    }

    fn line(s: &str) -> ProjectiveLine {
        ProjectiveLine::new(&ring(s)).unwrap()
    }

    /// Points by brute force: admissible pairs up to unit multiples, found by
    /// completion search and orbit collection.
    fn brute_force_point_count(r: &FiniteRing) -> usize {
        let units = r.units();
        let mut seen = std::collections::HashSet::new();
        let mut count = 0;
        for a in r.elems() {
            for b in r.elems() {
                if !is_admissible_exhaustive(r, a, b).unwrap() || seen.contains(&(a, b)) {
                    continue;
                }
                count += 1;
                for &u in &units {
                    seen.insert((r.mul(u, a), r.mul(u, b)));
                }
            }
        }
        count
    }

    #[test]
    fn admissibility_examples() {
        let r = ring("Z/4");
        let e = |i| r.elem(i);
        assert!(is_admissible(&r, e(1), e(0)).unwrap());
        assert!(!is_admissible(&r, e(2), e(2)).unwrap());
        assert!(!is_admissible_exhaustive(&r, e(2), e(2)).unwrap());
        assert!(is_admissible(&r, e(2), e(3)).unwrap());
        for name in ["Z/1", "F2", "M2(F2)", "F2[e]"] {
            let r = ring(name);
            assert!(is_admissible(&r, r.one(), r.zero()).unwrap());
        }
    }

    #[test]
    fn point_make_examples() {
        let l = line("Z/4");
        let r = l.ring().clone();
        assert_eq!(
            l.make(r.elem(3), r.elem(0)).unwrap(),
            l.make(r.elem(1), r.elem(0)).unwrap()
        );
        assert_ne!(l.base_point(), l.opposite_point());
        assert!(matches!(
            l.make(r.elem(2), r.elem(2)),
            Err(Error::Domain(_))
        ));

        let t = line("Z/1");
        assert_eq!(t.len(), 1);
        assert_eq!(t.base_point(), t.opposite_point());
    }

    #[test]
    fn point_counts() {
        for (name, n) in [
            ("F2", 3),
            ("F3", 4),
            ("GF4", 5),
            ("Z/4", 6),
            ("F2[e]", 6),
            ("Z/1", 1),
        ] {
            let r = ring(name);
            let l = ProjectiveLine::new(&r).unwrap();
            assert_eq!(l.len(), n, "{name}");
            assert_eq!(brute_force_point_count(&r), n, "{name}");
        }
        // Grassmannian of 2-spaces in F2^4
        assert_eq!(line("M2(F2)").len(), 35);
    }

    #[test]
    fn f2_points_are_the_three_lines() {
        let l = line("F2");
        let names: Vec<String> = l.points().iter().map(|&p| l.fmt_point(p)).collect();
        assert_eq!(names, ["R(0,1)", "R(1,0)", "R(1,1)"]);
    }

    #[test]
    fn distant_examples() {
        let l = line("Z/4");
        let r = l.ring().clone();
        assert!(l.distant(l.base_point(), l.opposite_point()).unwrap());
        let p12 = l.make(r.elem(1), r.elem(2)).unwrap();
        assert!(!l.distant(l.base_point(), p12).unwrap());
        for &p in l.points() {
            assert!(!l.distant(p, p).unwrap());
        }
        let t = line("Z/1");
        assert!(t.distant(t.base_point(), t.base_point()).unwrap());
    }

    #[test]
    fn distant_rejects_mixed_rings() {
        let a = line("Z/4");
        let b = line("Z/4");
        assert!(matches!(
            a.distant(a.base_point(), b.base_point()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn representative_independence_z4() {
        let l = line("Z/4");
        let r = l.ring().clone();
        let units = r.units();
        for &p in l.points() {
            for &q in l.points() {
                let expected = l.distant(p, q).unwrap();
                for &u in &units {
                    for &v in &units {
                        let (a, b) = p.rep();
                        let (c, d) = q.rep();
                        let m = Mat2::new(r.mul(u, a), r.mul(u, b), r.mul(v, c), r.mul(v, d));
                        assert_eq!(mat_invertible(&r, &m).unwrap(), expected);
                    }
                }
            }
        }
    }

    #[test]
    fn distant_is_symmetric() {
        for name in ["F3", "Z/4", "F2[e]", "F2xF2", "M2(F2)"] {
            let l = line(name);
            for &p in l.points() {
                for &q in l.points() {
                    assert_eq!(l.distant(p, q).unwrap(), l.distant(q, p).unwrap());
                }
            }
        }
    }

    #[test]
    fn word_to_point_examples() {
        let l = line("Z/4");
        let r = l.ring().clone();
        let empty = l.word_to_point(&EWord::default()).unwrap();
        assert_eq!(empty.point, l.base_point());
        for t in r.elems() {
            let w = l.word_to_point(&EWord::new(vec![t])).unwrap();
            assert_eq!(w.point, l.make(t, r.one()).unwrap());
        }
        let w = l
            .word_to_point(&EWord::new(vec![r.zero(), r.zero()]))
            .unwrap();
        assert_eq!(w.point, l.base_point());
    }

    #[test]
    fn recursion_matches_matrix_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for name in ["Z/4", "F2[e]", "M2(F2)"] {
            let l = line(name);
            let r = l.ring().clone();
            for _ in 0..200 {
                let n = rng.random_range(0..6);
                let w = EWord::new(
                    (0..n)
                        .map(|_| r.elem(rng.random_range(0..r.size())))
                        .collect(),
                );
                let trace = l.word_to_point(&w).unwrap();
                let m = w.matrix(&r);
                assert_eq!(*trace.rows.last().unwrap(), m.first_row());
            }
        }
    }

    #[test]
    fn prefix_traces_are_distant_chains() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for name in ["F2", "F3", "Z/4", "F2[e]", "F3[e]", "M2(F2)"] {
            let l = line(name);
            let r = l.ring().clone();
            for _ in 0..500 {
                let n = rng.random_range(0..8);
                let w = EWord::new(
                    (0..n)
                        .map(|_| r.elem(rng.random_range(0..r.size())))
                        .collect(),
                );
                let trace = l.word_to_point(&w).unwrap().trace;
                for pair in trace.windows(2) {
                    assert!(l.distant(pair[0], pair[1]).unwrap(), "{name}");
                }
            }
        }
    }

    #[test]
    fn parse_points() {
        let l = line("Z/4");
        assert_eq!(l.fmt_point(l.parse_point("R(2,1)").unwrap()), "R(2,1)");
        assert_eq!(l.parse_point("(3, 0)").unwrap(), l.base_point());
        assert!(matches!(l.parse_point("2,2"), Err(Error::Domain(_))));
        assert!(l.parse_point("R(1)").is_err());
        let m = line("M2(F2)");
        let p = m.parse_point("R([[1,0],[0,1]],[[0,0],[0,0]])").unwrap();
        assert_eq!(p, m.base_point());
    }

    #[test]
    fn chain_to_word_examples() {
        let l = line("Z/4");
        let r = l.ring().clone();
        assert!(l.chain_to_word(&[l.base_point()]).unwrap().is_empty());
        let w = l
            .chain_to_word(&[l.base_point(), l.opposite_point()])
            .unwrap();
        assert_eq!(w.params, vec![r.zero()]);

        assert!(matches!(
            l.chain_to_word(&[l.opposite_point()]),
            Err(Error::Precondition(_))
        ));
        let p12 = l.make(r.elem(1), r.elem(2)).unwrap();
        assert!(matches!(
            l.chain_to_word(&[l.base_point(), p12]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn chain_round_trip_noncommutative() {
        let l = line("M2(F2)");
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let mut chain = vec![l.base_point()];
            for _ in 0..rng.random_range(0..5) {
                let last = *chain.last().unwrap();
                let nbrs: Vec<Point> = l
                    .points()
                    .iter()
                    .copied()
                    .filter(|&q| l.distant(last, q).unwrap())
                    .collect();
                chain.push(nbrs[rng.random_range(0..nbrs.len())]);
            }
            let w = l.chain_to_word(&chain).unwrap();
            assert_eq!(l.word_to_point(&w).unwrap().trace, chain);
        }
    }

    #[test]
    fn unimodular_report_examples() {
        let rep = unimodular_vs_admissible_report(&ring("Z/4")).unwrap();
        assert!(rep.equivalent());
        assert_eq!(rep.admissible, 12);
        assert!(unimodular_vs_admissible_report(&ring("F2[e]"))
            .unwrap()
            .equivalent());
        let m = unimodular_vs_admissible_report(&ring("M2(F2)")).unwrap();
        assert_eq!(m.pairs, 256);
        assert!(m.equivalent());
    }
}
