//! Standard forms `diag(u,v)·E(tₙ)⋯E(t₁)` of invertible matrices over
//! `F_p[X]`, distance certificates built on their uniqueness, and the power
//! identity for a matrix over `F_p[X₁,X₂]`.
//!
//! A standard form has `u, v ∈ F_p*`, arbitrary `t₁` and `tₙ`, middle
//! parameters `t₂, …, tₙ₋₁` of degree at least one, and `(t₁, t₂) ≠ (0, 0)`
//! when `n = 2`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mat2::{gen_e, Mat2};
use crate::ring::{fp_inv, BiPoly, BiPolyRing, Poly, Ring, UniPolyRing};

pub type PolyMatrix = Mat2<Poly>;

/// `diag(u, v)·E(tₙ)⋯E(t₁)`; `params` holds `t₁, …, tₙ` in that order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StandardForm {
    pub u: u32,
    pub v: u32,
    pub params: Vec<Poly>,
}

impl StandardForm {
    pub fn new(u: u32, v: u32, params: Vec<Poly>) -> Self {
        StandardForm { u, v, params }
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    /// Checks the side conditions of a standard form over `ring`.
    pub fn validate(&self, ring: &UniPolyRing) -> Result<()> {
        let p = ring.characteristic();
        if self.u.is_multiple_of(p) || self.v.is_multiple_of(p) {
            return Err(Error::Domain("u and v must be nonzero scalars".into()));
        }
        if self.u >= p || self.v >= p {
            return Err(Error::Domain(format!("u and v must be reduced mod {p}")));
        }
        if let Some(t) = self.params.iter().find(|t| !ring.contains(t)) {
            return Err(Error::Domain(format!("parameter {t} is not over F{p}")));
        }
        let n = self.params.len();
        if n >= 3 {
            if let Some((i, t)) = self.params[1..n - 1]
                .iter()
                .enumerate()
                .find(|(_, t)| t.is_constant())
            {
                return Err(Error::Domain(format!(
                    "middle parameter t{} = {t} is zero or a unit",
                    i + 2
                )));
            }
        }
        if n == 2 && self.params.iter().all(Poly::is_zero) {
            return Err(Error::Domain(
                "t1 = t2 = 0 is not a standard form (that is diag(-u,-v))".into(),
            ));
        }
        Ok(())
    }

    /// The modified normalization: a diagonal matrix `A` becomes
    /// `−A·E(0)·E(0)`; non-diagonal forms are unchanged.
    pub fn to_modified(&self, ring: &UniPolyRing) -> StandardForm {
        if !self.params.is_empty() {
            return self.clone();
        }
        let p = ring.characteristic();
        StandardForm {
            u: (p - self.u) % p,
            v: (p - self.v) % p,
            params: vec![ring.zero(), ring.zero()],
        }
    }

    /// Human-readable product, leftmost factor first.
    pub fn display(&self) -> String {
        let mut out = format!("diag({},{})", self.u, self.v);
        for t in self.params.iter().rev() {
            out.push_str(&format!("·E({t})"));
        }
        out
    }
}

impl fmt::Display for StandardForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

/// The literal product `diag(u,v)·E(tₙ)⋯E(t₁)`.
pub fn compose(ring: &UniPolyRing, sf: &StandardForm) -> PolyMatrix {
    let diag = Mat2::new(
        ring.constant(sf.u as i64),
        ring.zero(),
        ring.zero(),
        ring.constant(sf.v as i64),
    );
    let word = sf.params.iter().fold(Mat2::identity(ring), |acc, t| {
        gen_e(ring, t).mul(ring, &acc)
    });
    diag.mul(ring, &word)
}

/// A decomposition together with the degree of the `(2,2)` entry before each
/// division step; the degrees strictly decrease.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub form: StandardForm,
    pub working_degrees: Vec<usize>,
}

/// The standard form of an invertible matrix over `F_p[X]`.
pub fn decompose(ring: &UniPolyRing, a: &PolyMatrix) -> Result<StandardForm> {
    decompose_traced(ring, a).map(|d| d.form)
}

/// Peels `E(s)` factors off the left by Euclidean division of the second
/// column, writing `A = E(sₙ)⋯E(s₁)·diag(d₁,d₂)`, then moves the diagonal
/// back to the front.
pub fn decompose_traced(ring: &UniPolyRing, a: &PolyMatrix) -> Result<Decomposition> {
    if !a.belongs_to(ring) {
        return Err(Error::Domain(format!("matrix entries are not in {ring}")));
    }
    let det = a.det(ring)?;
    if !ring.is_unit(&det) {
        return Err(Error::Domain(format!(
            "matrix is not invertible over {ring}: det = {det}"
        )));
    }
    let p = ring.characteristic();
    let scalar_inv = |c: &Poly| fp_inv(c.leading(), p);

    let mut w = a.clone();
    // s in peel order: sₙ first
    let mut peeled: Vec<Poly> = Vec::new();
    let mut working_degrees = Vec::new();
    while let Some(deg) = w.m22.degree().filter(|&d| d >= 1) {
        working_degrees.push(deg);
        let (q, _) = w.m12.divmod(&w.m22)?;
        let s = q.neg();
        // E(s)⁻¹ = [[0, −1], [1, s]]
        let inv = Mat2::new(ring.zero(), ring.constant(-1), ring.one(), s.clone());
        w = inv.mul(ring, &w);
        peeled.push(s);
    }

    let (d1, d2);
    if w.m22.is_zero() {
        // W = E(s₁)·diag(d₁,d₂) = [[s₁d₁, d₂], [−d₁, 0]]
        d2 = w.m12.leading();
        d1 = w.m21.neg().leading();
        peeled.push(w.m11.scale(fp_inv(d1, p)));
    } else if w.is_diagonal(ring) {
        d1 = w.m11.leading();
        d2 = w.m22.leading();
    } else {
        // W = E(s₂)·E(s₁)·diag(d₁,d₂) = [[(s₂s₁−1)d₁, s₂d₂], [−s₁d₁, −d₂]]
        d2 = w.m22.neg().leading();
        let s2 = w.m12.scale(fp_inv(d2, p));
        let d1_poly = w.m11.neg().sub(&s2.mul(&w.m21));
        if !d1_poly.is_constant() || d1_poly.is_zero() {
            return Err(Error::Internal(format!(
                "expected a unit for d1, got {d1_poly}"
            )));
        }
        d1 = d1_poly.leading();
        let s1 = w.m21.neg().scale(scalar_inv(&d1_poly));
        peeled.push(s2);
        peeled.push(s1);
    }

    // diag(u,v)·E(t) = E(u·t·v⁻¹)·diag(v,u), so the scalars alternate
    let n = peeled.len();
    let (u, v) = if n.is_multiple_of(2) {
        (d1, d2)
    } else {
        (d2, d1)
    };
    let params: Vec<Poly> = peeled
        .iter()
        .enumerate()
        .map(|(steps, s)| {
            // steps = n − k for the factor E(t_k)
            let (left, right) = if steps % 2 == 0 { (u, v) } else { (v, u) };
            s.scale(fp_inv(left, p)).scale(right)
        })
        .rev()
        .collect();
    let form = StandardForm::new(u, v, params);
    if compose(ring, &form) != *a {
        return Err(Error::Internal(format!(
            "decomposition {form} does not recompose to the input"
        )));
    }
    form.validate(ring)
        .map_err(|e| Error::Internal(format!("decomposition {form} is malformed: {e}")))?;
    Ok(Decomposition {
        form,
        working_degrees,
    })
}

/// Reads a matrix from four polynomial strings in row order.
pub fn parse_matrix(ring: &UniPolyRing, entries: &[String]) -> Result<PolyMatrix> {
    if entries.len() != 4 {
        return Err(Error::Parse(format!(
            "a 2x2 matrix needs 4 entries, got {}",
            entries.len()
        )));
    }
    let e: Vec<Poly> = entries
        .iter()
        .map(|s| ring.parse(s))
        .collect::<Result<_>>()?;
    Ok(Mat2::new(
        e[0].clone(),
        e[1].clone(),
        e[2].clone(),
        e[3].clone(),
    ))
}

/// Certificate that `dist(q₀, q_m) = m` for `q_m = R((1,0)·E(t)^m)`.
#[derive(Debug, Clone, Serialize)]
pub struct DistanceCertificate {
    pub t: String,
    pub m: u32,
    /// `R(c_m, d_m)`.
    pub point: String,
    /// Length of the standard form of `E(t)^m`.
    pub word_length: usize,
    pub verified: bool,
}

/// Decomposes `E(t)^m` and checks that its standard form is exactly
/// `E(t)⋯E(t)` (m factors, `u = v = 1`). Uniqueness of the standard form
/// makes every shorter path impossible, hence `dist(q₀, q_m) = m`.
pub fn distance_certificate(ring: &UniPolyRing, t: &Poly, m: u32) -> Result<DistanceCertificate> {
    if !ring.contains(t) {
        return Err(Error::Domain(format!("{t} is not in {ring}")));
    }
    if t.is_constant() {
        return Err(Error::Precondition(format!(
            "t = {t} must be a nonzero non-unit"
        )));
    }
    let expected = StandardForm::new(1, 1, vec![t.clone(); m as usize]);
    let power = compose(ring, &expected);
    let form = decompose(ring, &power)?;
    Ok(DistanceCertificate {
        t: t.to_string(),
        m,
        point: format!("R({},{})", power.m11, power.m12),
        word_length: form.len(),
        verified: form == expected,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DiameterReport {
    pub ring: String,
    pub t: String,
    pub certificates: Vec<DistanceCertificate>,
    /// All certificates in `1..=mmax` succeeded, so the component of `R(1,0)`
    /// has distances of every size up to `mmax`.
    pub unbounded: bool,
}

pub fn certify_diameter(ring: &UniPolyRing, t: &Poly, mmax: u32) -> Result<DiameterReport> {
    let certificates = (1..=mmax)
        .map(|m| distance_certificate(ring, t, m))
        .collect::<Result<Vec<_>>>()?;
    Ok(DiameterReport {
        ring: ring.to_string(),
        t: t.to_string(),
        unbounded: !certificates.is_empty() && certificates.iter().all(|c| c.verified),
        certificates,
    })
}

/// `[[1+X₁X₂, X₁²], [−X₂², 1−X₁X₂]]`.
pub fn xy_matrix(ring: &BiPolyRing) -> Mat2<BiPoly> {
    xy_closed_form(ring, 1)
}

/// `[[1+nX₁X₂, nX₁²], [−nX₂², 1−nX₁X₂]]`.
pub fn xy_closed_form(ring: &BiPolyRing, n: u64) -> Mat2<BiPoly> {
    let n = n as i64;
    let xy = ring.term(n, 1, 1);
    Mat2::new(
        ring.add(&ring.one(), &xy),
        ring.term(n, 2, 0),
        ring.term(-n, 0, 2),
        ring.sub(&ring.one(), &xy),
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct XyRow {
    pub n: u64,
    /// `A₁ⁿ` equals the closed form.
    pub power_identity: bool,
    pub is_identity: bool,
    pub char_divides_n: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct XyReport {
    pub ring: String,
    pub det_is_one: bool,
    pub rows: Vec<XyRow>,
    pub all_hold: bool,
}

/// Verifies the power identity for `n = 0..=nmax` by repeated exact
/// multiplication, `det A₁ = 1`, and that `Aₙ = I` exactly when the
/// characteristic divides `n`.
pub fn xy_matrix_check(ring: &BiPolyRing, nmax: u64) -> XyReport {
    let a1 = xy_matrix(ring);
    let det_is_one = a1.det(ring).map(|d| d == ring.one()).unwrap_or(false);
    let p = ring.characteristic() as u64;
    let mut power = Mat2::identity(ring);
    let mut rows = Vec::new();
    for n in 0..=nmax {
        if n > 0 {
            power = power.mul(ring, &a1);
        }
        let is_identity = power.is_identity(ring);
        let char_divides_n = n % p == 0;
        rows.push(XyRow {
            n,
            power_identity: power == xy_closed_form(ring, n),
            is_identity,
            char_divides_n,
        });
    }
    let all_hold = det_is_one
        && rows
            .iter()
            .all(|r| r.power_identity && r.is_identity == r.char_divides_n);
    XyReport {
        ring: ring.to_string(),
        det_is_one,
        rows,
        all_hold,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat2::{gen_b12, gen_b21, gen_diag};
    use proptest::prelude::*;

    fn f(p: u32) -> UniPolyRing {
        UniPolyRing::new(p).unwrap()
    }

    fn poly(r: &UniPolyRing, s: &str) -> Poly {
        r.parse(s).unwrap()
    }

    #[test]
    fn compose_examples() {
        let r = f(3);
        assert!(compose(&r, &StandardForm::new(1, 1, vec![])).is_identity(&r));
        let m1 = r.constant(-1);
        assert_eq!(
            compose(&r, &StandardForm::new(1, 1, vec![r.zero(), r.zero()])),
            gen_diag(&r, &m1, &m1).unwrap()
        );
        let t = poly(&r, "X^2+2");
        assert_eq!(
            compose(&r, &StandardForm::new(1, 1, vec![t.clone()])),
            Mat2::new(t, r.one(), m1, r.zero())
        );
    }

    #[test]
    fn decompose_ex_ex() {
        let r = f(2);
        let x = r.x();
        let a = gen_e(&r, &x).mul(&r, &gen_e(&r, &x));
        let sf = decompose(&r, &a).unwrap();
        assert_eq!(sf, StandardForm::new(1, 1, vec![x.clone(), x]));
    }

    #[test]
    fn decompose_three_factors() {
        let r = f(3);
        let (t3, t2, t1) = (poly(&r, "X^2+1"), poly(&r, "X"), poly(&r, "X^3"));
        let a = gen_e(&r, &t3)
            .mul(&r, &gen_e(&r, &t2))
            .mul(&r, &gen_e(&r, &t1));
        let sf = decompose(&r, &a).unwrap();
        assert_eq!(sf, StandardForm::new(1, 1, vec![t1, t2, t3]));
        assert_eq!(sf.display(), "diag(1,1)·E(X^2+1)·E(X)·E(X^3)");
    }

    #[test]
    fn diagonal_and_modified_forms() {
        let r = f(5);
        let d = gen_diag(&r, &r.constant(2), &r.constant(3)).unwrap();
        let sf = decompose(&r, &d).unwrap();
        assert_eq!(sf, StandardForm::new(2, 3, vec![]));
        let modified = sf.to_modified(&r);
        assert_eq!(modified, StandardForm::new(3, 2, vec![r.zero(), r.zero()]));
        assert_eq!(compose(&r, &modified), d);
        // non-diagonal forms are their own modified form
        let e = StandardForm::new(1, 1, vec![r.x()]);
        assert_eq!(e.to_modified(&r), e);
    }

    #[test]
    fn elementary_matrices_decompose() {
        // B12(1) = diag(-1,-1)·E(-1)·E(0)
        let r = f(3);
        let sf = decompose(&r, &gen_b12(&r, &r.one())).unwrap();
        assert_eq!(sf, StandardForm::new(2, 2, vec![r.zero(), r.constant(-1)]));
        let sf = decompose(&r, &gen_b21(&r, &r.x())).unwrap();
        assert_eq!(compose(&r, &sf), gen_b21(&r, &r.x()));
    }

    #[test]
    fn rejects_singular() {
        let r = f(2);
        let a = Mat2::new(r.x(), r.zero(), r.zero(), r.one());
        assert!(matches!(decompose(&r, &a), Err(Error::Domain(_))));
    }

    #[test]
    fn validate_side_conditions() {
        let r = f(3);
        assert!(StandardForm::new(1, 1, vec![r.x(), r.one(), r.x()])
            .validate(&r)
            .is_err());
        assert!(StandardForm::new(1, 1, vec![r.zero(), r.zero()])
            .validate(&r)
            .is_err());
        assert!(StandardForm::new(0, 1, vec![]).validate(&r).is_err());
        assert!(StandardForm::new(1, 2, vec![r.zero(), r.x(), r.one()])
            .validate(&r)
            .is_ok());
    }

    #[test]
    fn certificates() {
        let r = f(2);
        let c = distance_certificate(&r, &r.x(), 1).unwrap();
        assert!(c.verified);
        assert_eq!(c.word_length, 1);
        assert_eq!(c.point, "R(X,1)");
        let c = distance_certificate(&r, &r.x(), 5).unwrap();
        assert!(c.verified);
        assert_eq!(c.word_length, 5);
        let r3 = f(3);
        let c = distance_certificate(&r3, &poly(&r3, "X^2+X"), 3).unwrap();
        assert!(c.verified);
        assert_eq!(c.word_length, 3);
        assert!(matches!(
            distance_certificate(&r, &r.one(), 2),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            distance_certificate(&r, &r.zero(), 2),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn xy_identity() {
        let f5 = BiPolyRing::new(5).unwrap();
        let rep = xy_matrix_check(&f5, 10);
        assert!(rep.all_hold);
        assert!(rep.rows[5].is_identity);
        assert!(rep.rows[0].is_identity);
        assert!(!rep.rows[3].is_identity);
        let f2 = BiPolyRing::new(2).unwrap();
        let rep = xy_matrix_check(&f2, 2);
        assert!(rep.all_hold && rep.det_is_one && rep.rows[2].is_identity);
    }

    #[test]
    fn parse_matrix_entries() {
        let r = f(2);
        let m = parse_matrix(&r, &["X^2+1".into(), "X".into(), "X".into(), "1".into()]).unwrap();
        assert_eq!(m, gen_e(&r, &r.x()).mul(&r, &gen_e(&r, &r.x())));
        assert!(parse_matrix(&r, &["1".into()]).is_err());
    }

    fn arb_poly(p: u32, min_deg: usize, max_deg: usize) -> impl Strategy<Value = Poly> {
        (
            min_deg..=max_deg,
            prop::collection::vec(0..p as i64, max_deg + 1),
            1..p as i64,
        )
            .prop_map(move |(deg, mut coeffs, lead)| {
                coeffs.truncate(deg + 1);
                coeffs[deg] = lead;
                Poly::new(p, coeffs)
            })
    }

    /// Outer parameters are arbitrary: zero, a unit, or degree ≤ 3.
    fn arb_outer(p: u32) -> impl Strategy<Value = Poly> {
        prop_oneof![
            Just(Poly::zero(p)),
            (1..p as i64).prop_map(move |c| Poly::constant(p, c)),
            arb_poly(p, 1, 3),
        ]
    }

    fn arb_form(p: u32) -> impl Strategy<Value = StandardForm> {
        (
            1..p,
            1..p,
            1usize..=6,
            arb_outer(p),
            arb_outer(p),
            prop::collection::vec(arb_poly(p, 1, 3), 4),
        )
            .prop_filter_map(
                "n = 2 needs (t1,t2) != (0,0)",
                move |(u, v, n, t1, tn, mid)| {
                    let params = match n {
                        1 => vec![t1],
                        _ => {
                            let mut ps = vec![t1];
                            ps.extend(mid.into_iter().take(n - 2));
                            ps.push(tn);
                            ps
                        }
                    };
                    let sf = StandardForm::new(u, v, params);
                    sf.validate(&UniPolyRing::new(p).unwrap()).ok().map(|_| sf)
                },
            )
    }

    fn arb_b_product() -> impl Strategy<Value = Vec<(u8, Poly)>> {
        prop::collection::vec((0u8..3, arb_poly(2, 0, 4)), 0..8)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn round_trip_f2(sf in arb_form(2)) {
            let r = f(2);
            prop_assert_eq!(decompose(&r, &compose(&r, &sf)).unwrap(), sf);
        }

        #[test]
        fn round_trip_f3(sf in arb_form(3)) {
            let r = f(3);
            prop_assert_eq!(decompose(&r, &compose(&r, &sf)).unwrap(), sf);
        }

        #[test]
        fn working_degree_decreases(sf in arb_form(3)) {
            let r = f(3);
            let d = decompose_traced(&r, &compose(&r, &sf)).unwrap();
            prop_assert!(d.working_degrees.windows(2).all(|w| w[0] > w[1]));
        }

        #[test]
        fn modified_form_agrees_off_diagonal(sf in arb_form(3)) {
            let r = f(3);
            let a = compose(&r, &sf);
            let m = sf.to_modified(&r);
            prop_assert_eq!(compose(&r, &m), a.clone());
            prop_assert!(!m.params.is_empty());
            prop_assert_eq!(m == sf, !a.is_diagonal(&r));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        // B12(t), B21(t) and diagonal factors with degree ≤ 4 parameters
        #[test]
        fn decompose_recomposes(factors in arb_b_product()) {
            let r = f(2);
            let a = factors.iter().fold(Mat2::identity(&r), |acc, (kind, t)| {
                let g = match kind {
                    0 => gen_b12(&r, t),
                    1 => gen_b21(&r, t),
                    _ => gen_diag(&r, &r.one(), &r.one()).unwrap(),
                };
                acc.mul(&r, &g)
            });
            let sf = decompose(&r, &a).unwrap();
            prop_assert_eq!(compose(&r, &sf), a);
        }
    }
}
