//! 2×2 matrices over an arbitrary [`Ring`].

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::Ring;

/// A 2×2 matrix `[[m11, m12], [m21, m22]]`; row vectors act from the left.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Mat2<E> {
    pub m11: E,
    pub m12: E,
    pub m21: E,
    pub m22: E,
}

impl<E: fmt::Debug> fmt::Debug for Mat2<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{:?}, {:?}], [{:?}, {:?}]]",
            self.m11, self.m12, self.m21, self.m22
        )
    }
}

impl<E: Clone + Eq> Mat2<E> {
    pub fn new(m11: E, m12: E, m21: E, m22: E) -> Self {
        Mat2 { m11, m12, m21, m22 }
    }

    pub fn from_rows(first: (E, E), second: (E, E)) -> Self {
        Mat2::new(first.0, first.1, second.0, second.1)
    }

    pub fn first_row(&self) -> (E, E) {
        (self.m11.clone(), self.m12.clone())
    }

    pub fn second_row(&self) -> (E, E) {
        (self.m21.clone(), self.m22.clone())
    }

    pub fn entries(&self) -> [&E; 4] {
        [&self.m11, &self.m12, &self.m21, &self.m22]
    }

    pub fn map<F, T>(&self, mut f: F) -> Mat2<T>
    where
        F: FnMut(&E) -> T,
    {
        Mat2 {
            m11: f(&self.m11),
            m12: f(&self.m12),
            m21: f(&self.m21),
            m22: f(&self.m22),
        }
    }

    pub fn identity<R: Ring<Elem = E>>(r: &R) -> Self {
        Mat2::new(r.one(), r.zero(), r.zero(), r.one())
    }

    pub fn is_identity<R: Ring<Elem = E>>(&self, r: &R) -> bool {
        *self == Self::identity(r)
    }

    pub fn is_diagonal<R: Ring<Elem = E>>(&self, r: &R) -> bool {
        r.is_zero(&self.m12) && r.is_zero(&self.m21)
    }

    pub fn belongs_to<R: Ring<Elem = E>>(&self, r: &R) -> bool {
        self.entries().into_iter().all(|e| r.contains(e))
    }

    pub fn mul<R: Ring<Elem = E>>(&self, r: &R, o: &Self) -> Self {
        let dot = |a: &E, b: &E, c: &E, d: &E| r.add(&r.mul(a, b), &r.mul(c, d));
        Mat2 {
            m11: dot(&self.m11, &o.m11, &self.m12, &o.m21),
            m12: dot(&self.m11, &o.m12, &self.m12, &o.m22),
            m21: dot(&self.m21, &o.m11, &self.m22, &o.m21),
            m22: dot(&self.m21, &o.m12, &self.m22, &o.m22),
        }
    }

    pub fn neg<R: Ring<Elem = E>>(&self, r: &R) -> Self {
        self.map(|e| r.neg(e))
    }

    /// `s·M` for a scalar acting from the left.
    pub fn scale_left<R: Ring<Elem = E>>(&self, r: &R, s: &E) -> Self {
        self.map(|e| r.mul(s, e))
    }

    pub fn pow<R: Ring<Elem = E>>(&self, r: &R, n: u32) -> Self {
        (0..n).fold(Self::identity(r), |acc, _| acc.mul(r, self))
    }

    /// Row vector action `(x, y) ↦ (x, y)·M`.
    pub fn act<R: Ring<Elem = E>>(&self, r: &R, row: (&E, &E)) -> (E, E) {
        let (x, y) = row;
        (
            r.add(&r.mul(x, &self.m11), &r.mul(y, &self.m21)),
            r.add(&r.mul(x, &self.m12), &r.mul(y, &self.m22)),
        )
    }

    /// `m11·m22 − m12·m21`; only meaningful over commutative rings.
    pub fn det<R: Ring<Elem = E>>(&self, r: &R) -> Result<E> {
        if !r.is_commutative() {
            return Err(Error::Capability(
                "determinants are only defined over commutative rings".into(),
            ));
        }
        Ok(r.sub(&r.mul(&self.m11, &self.m22), &r.mul(&self.m12, &self.m21)))
    }

    pub fn fmt_with<R: Ring<Elem = E>>(&self, r: &R) -> String {
        format!(
            "[[{}, {}], [{}, {}]]",
            r.fmt_elem(&self.m11),
            r.fmt_elem(&self.m12),
            r.fmt_elem(&self.m21),
            r.fmt_elem(&self.m22)
        )
    }
}

fn check_membership<R: Ring>(r: &R, m: &Mat2<R::Elem>) -> Result<()> {
    if m.belongs_to(r) {
        Ok(())
    } else {
        Err(Error::Domain(
            "matrix entries are not all in the ring".into(),
        ))
    }
}

/// Invertibility in `M₂(R)`.
///
/// Commutative rings test `det ∈ R*`; other rings need enumeration and use
/// [`mat_invertible_exhaustive`].
pub fn mat_invertible<R: Ring>(r: &R, m: &Mat2<R::Elem>) -> Result<bool> {
    check_membership(r, m)?;
    if r.is_commutative() {
        Ok(r.is_unit(&m.det(r)?))
    } else {
        mat_invertible_exhaustive(r, m)
    }
}

/// Decides invertibility by checking that `v ↦ v·M` is injective on `R²`.
///
/// For finite `R` the map is an endomorphism of the left module `R²`, so
/// injective, bijective and invertible in `M₂(R)` coincide. Injectivity of
/// an additive map is the same as a trivial kernel.
pub fn mat_invertible_exhaustive<R: Ring>(r: &R, m: &Mat2<R::Elem>) -> Result<bool> {
    check_membership(r, m)?;
    let elems = r.elements().ok_or_else(|| {
        Error::Capability("exhaustive invertibility needs an enumerable ring".into())
    })?;
    let zero = r.zero();
    for x in &elems {
        for y in &elems {
            if r.is_zero(x) && r.is_zero(y) {
                continue;
            }
            let (a, b) = m.act(r, (x, y));
            if a == zero && b == zero {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The two-sided inverse of `m`.
pub fn mat_inverse<R: Ring>(r: &R, m: &Mat2<R::Elem>) -> Result<Mat2<R::Elem>> {
    check_membership(r, m)?;
    let singular = || Error::Domain(format!("{} is not invertible", m.fmt_with(r)));
    if r.is_commutative() {
        let det = m.det(r)?;
        let d = r.unit_inverse(&det).map_err(|_| singular())?;
        return Ok(Mat2::new(
            r.mul(&d, &m.m22),
            r.neg(&r.mul(&d, &m.m12)),
            r.neg(&r.mul(&d, &m.m21)),
            r.mul(&d, &m.m11),
        ));
    }
    let elems = r.elements().ok_or_else(|| {
        Error::Capability("noncommutative inverse needs an enumerable ring".into())
    })?;
    // rows of the inverse solve v·M = e1 and v·M = e2
    let (one, zero) = (r.one(), r.zero());
    let mut first = None;
    let mut second = None;
    for x in &elems {
        for y in &elems {
            let img = m.act(r, (x, y));
            if first.is_none() && img == (one.clone(), zero.clone()) {
                first = Some((x.clone(), y.clone()));
            }
            if second.is_none() && img == (zero.clone(), one.clone()) {
                second = Some((x.clone(), y.clone()));
            }
        }
    }
    match (first, second) {
        (Some(a), Some(b)) => {
            let inv = Mat2::from_rows(a, b);
            // a left inverse of a bijective action is two-sided; check anyway
            if inv.mul(r, m).is_identity(r) && m.mul(r, &inv).is_identity(r) {
                Ok(inv)
            } else {
                Err(singular())
            }
        }
        _ => Err(singular()),
    }
}

/// `E(t) = [[t, 1], [−1, 0]]`.
pub fn gen_e<R: Ring>(r: &R, t: &R::Elem) -> Mat2<R::Elem> {
    Mat2::new(t.clone(), r.one(), r.neg(&r.one()), r.zero())
}

/// `B₁₂(t) = [[1, t], [0, 1]]`.
pub fn gen_b12<R: Ring>(r: &R, t: &R::Elem) -> Mat2<R::Elem> {
    Mat2::new(r.one(), t.clone(), r.zero(), r.one())
}

/// `B₂₁(t) = [[1, 0], [t, 1]]`.
pub fn gen_b21<R: Ring>(r: &R, t: &R::Elem) -> Mat2<R::Elem> {
    Mat2::new(r.one(), r.zero(), t.clone(), r.one())
}

/// `diag(u, v)` for units `u`, `v`.
pub fn gen_diag<R: Ring>(r: &R, u: &R::Elem, v: &R::Elem) -> Result<Mat2<R::Elem>> {
    for w in [u, v] {
        if !r.is_unit(w) {
            return Err(Error::Domain(format!(
                "diag entries must be units, {} is not",
                r.fmt_elem(w)
            )));
        }
    }
    Ok(Mat2::new(u.clone(), r.zero(), r.zero(), v.clone()))
}

/// Writes `x = M·xp` with `M = [[1, 0], [s, u]]` and returns `(s, u)`.
///
/// `x` and `xp` must share their first row and `xp` must be invertible.
/// Then `x` is invertible exactly when `u` is a unit.
pub fn shared_row_factor<R: Ring>(
    r: &R,
    x: &Mat2<R::Elem>,
    xp: &Mat2<R::Elem>,
) -> Result<(R::Elem, R::Elem)> {
    if x.first_row() != xp.first_row() {
        return Err(Error::Precondition(
            "shared_row_factor needs matrices with equal first rows".into(),
        ));
    }
    let xp_inv = mat_inverse(r, xp)
        .map_err(|_| Error::Precondition("shared_row_factor needs an invertible X'".into()))?;
    let m = x.mul(r, &xp_inv);
    if m.m11 != r.one() || !r.is_zero(&m.m12) {
        return Err(Error::Internal(format!(
            "X·X'^-1 = {} is not of the form [[1, 0], [s, u]]",
            m.fmt_with(r)
        )));
    }
    Ok((m.m21, m.m22))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{FiniteRing, RingSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ring(s: &str) -> FiniteRing {
        FiniteRing::from_spec(&RingSpec::parse(s).unwrap()).unwrap()
    }

    fn all_matrices(r: &FiniteRing) -> Vec<Mat2<crate::ring::Elem>> {
        let e: Vec<_> = r.elems().collect();
        let mut out = Vec::new();
        for &a in &e {
            for &b in &e {
                for &c in &e {
                    for &d in &e {
                        out.push(Mat2::new(a, b, c, d));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn identity_is_its_own_inverse() {
        for name in ["Z/1", "F2", "Z/4", "M2(F2)"] {
            let r = ring(name);
            let id = Mat2::identity(&r);
            assert!(mat_invertible(&r, &id).unwrap());
            assert_eq!(mat_inverse(&r, &id).unwrap(), id);
        }
    }

    #[test]
    fn singular_over_z4() {
        let r = ring("Z/4");
        let m = Mat2::new(r.elem(1), r.elem(0), r.elem(1), r.elem(2));
        assert_eq!(m.det(&r).unwrap(), r.elem(2));
        assert!(!mat_invertible(&r, &m).unwrap());
        assert!(!mat_invertible_exhaustive(&r, &m).unwrap());
        assert!(matches!(mat_inverse(&r, &m), Err(Error::Domain(_))));
    }

    #[test]
    fn e_inverse_identity() {
        for name in ["F3", "Z/4", "F2[e]", "M2(F2)"] {
            let r = ring(name);
            let e0 = gen_e(&r, &r.zero());
            for t in r.elems() {
                let et = gen_e(&r, &t);
                let expected = e0.mul(&r, &gen_e(&r, &r.neg(t))).mul(&r, &e0);
                assert_eq!(mat_inverse(&r, &et).unwrap(), expected, "{name}");
            }
        }
    }

    #[test]
    fn e_as_product_of_elementary_matrices() {
        let r = ring("Z/4");
        let one = r.one();
        let m1 = r.neg(one);
        for t in r.elems() {
            let prod = gen_b12(&r, &one)
                .mul(&r, &gen_b21(&r, &m1))
                .mul(&r, &gen_b12(&r, &one))
                .mul(&r, &gen_b21(&r, &t));
            assert_eq!(prod, gen_e(&r, &t));
        }
    }

    #[test]
    fn elementary_matrices_from_e() {
        let r = ring("F3");
        let e0_inv = mat_inverse(&r, &gen_e(&r, &r.zero())).unwrap();
        for t in r.elems() {
            assert_eq!(gen_b12(&r, &t), gen_e(&r, &r.neg(t)).mul(&r, &e0_inv));
            assert_eq!(gen_b21(&r, &t), e0_inv.mul(&r, &gen_e(&r, &t)));
        }
    }

    #[test]
    fn e0_squared() {
        for name in ["F5", "Z/4", "M2(F2)"] {
            let r = ring(name);
            let e0 = gen_e(&r, &r.zero());
            let m1 = r.neg(r.one());
            assert_eq!(e0.mul(&r, &e0), gen_diag(&r, &m1, &m1).unwrap());
        }
    }

    #[test]
    fn diag_rejects_non_units() {
        let r = ring("Z/4");
        assert!(matches!(
            gen_diag(&r, &r.elem(2), &r.one()),
            Err(Error::Domain(_))
        ));
        assert!(gen_diag(&r, &r.elem(3), &r.one()).is_ok());
    }

    #[test]
    fn determinant_needs_commutativity() {
        let r = ring("M2(F2)");
        assert!(matches!(
            Mat2::identity(&r).det(&r),
            Err(Error::Capability(_))
        ));
    }

    #[test]
    fn fast_and_exhaustive_paths_agree() {
        for name in ["Z/4", "F2[e]"] {
            let r = ring(name);
            let all = all_matrices(&r);
            assert_eq!(all.len(), 256);
            for m in &all {
                assert_eq!(
                    mat_invertible(&r, m).unwrap(),
                    mat_invertible_exhaustive(&r, m).unwrap(),
                    "{name} {}",
                    m.fmt_with(&r)
                );
            }
        }
    }

    #[test]
    fn noncommutative_inverse() {
        let r = ring("M2(F2)");
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut found = 0;
        while found < 50 {
            let m = Mat2::new(
                r.elem(rng.random_range(0..16)),
                r.elem(rng.random_range(0..16)),
                r.elem(rng.random_range(0..16)),
                r.elem(rng.random_range(0..16)),
            );
            if mat_invertible(&r, &m).unwrap() {
                let inv = mat_inverse(&r, &m).unwrap();
                assert!(inv.mul(&r, &m).is_identity(&r));
                assert!(m.mul(&r, &inv).is_identity(&r));
                found += 1;
            } else {
                assert!(mat_inverse(&r, &m).is_err());
            }
        }
    }

    #[test]
    fn group_closure_and_inverse_of_product() {
        for name in ["F3", "Z/4", "F2[e]", "F2xF2", "M2(F2)"] {
            let r = ring(name);
            let n = r.size();
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            let rand_mat = |rng: &mut ChaCha8Rng| {
                Mat2::new(
                    r.elem(rng.random_range(0..n)),
                    r.elem(rng.random_range(0..n)),
                    r.elem(rng.random_range(0..n)),
                    r.elem(rng.random_range(0..n)),
                )
            };
            for _ in 0..500 {
                let a = rand_mat(&mut rng);
                let b = rand_mat(&mut rng);
                let ab = a.mul(&r, &b);
                let (ia, ib) = (
                    mat_invertible(&r, &a).unwrap(),
                    mat_invertible(&r, &b).unwrap(),
                );
                if ia && ib {
                    assert!(mat_invertible(&r, &ab).unwrap());
                    let lhs = mat_inverse(&r, &ab).unwrap();
                    let rhs = mat_inverse(&r, &b)
                        .unwrap()
                        .mul(&r, &mat_inverse(&r, &a).unwrap());
                    assert_eq!(lhs, rhs, "{name}");
                }
            }
        }
    }

    #[test]
    fn row_action_is_left_linear() {
        let r = ring("M2(F2)");
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let mut pick = || r.elem(rng.random_range(0..16));
            let m = Mat2::new(pick(), pick(), pick(), pick());
            let (s, x, y, x2, y2) = (pick(), pick(), pick(), pick(), pick());
            let (a, b) = m.act(&r, (&r.mul(s, x), &r.mul(s, y)));
            let (c, d) = m.act(&r, (&x, &y));
            assert_eq!((a, b), (r.mul(s, c), r.mul(s, d)));
            let (p, q) = m.act(&r, (&r.add(x, x2), &r.add(y, y2)));
            let (p2, q2) = m.act(&r, (&x2, &y2));
            assert_eq!((p, q), (r.add(c, p2), r.add(d, q2)));
        }
    }

    #[test]
    fn shared_row_factor_examples() {
        let r = ring("Z/4");
        let id = Mat2::identity(&r);
        let (s, u) = shared_row_factor(&r, &id, &id).unwrap();
        assert_eq!((s, u), (r.zero(), r.one()));

        let x = Mat2::new(r.elem(1), r.elem(0), r.elem(1), r.elem(1));
        assert_eq!(
            shared_row_factor(&r, &x, &id).unwrap(),
            (r.elem(1), r.elem(1))
        );
        assert!(mat_invertible(&r, &x).unwrap());

        let x = Mat2::new(r.elem(1), r.elem(0), r.elem(0), r.elem(2));
        let (s, u) = shared_row_factor(&r, &x, &id).unwrap();
        assert_eq!((s, u), (r.elem(0), r.elem(2)));
        assert!(!r.is_unit(u));
        assert!(!mat_invertible(&r, &x).unwrap());

        let other = Mat2::new(r.elem(0), r.elem(1), r.elem(1), r.elem(0));
        assert!(matches!(
            shared_row_factor(&r, &x, &other),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn shared_row_factor_exhaustive_z4() {
        let r = ring("Z/4");
        let all = all_matrices(&r);
        let gl: Vec<_> = all
            .iter()
            .filter(|m| mat_invertible(&r, m).unwrap())
            .collect();
        assert_eq!(gl.len(), 96);
        for xp in &gl {
            for c in r.elems() {
                for d in r.elems() {
                    let x = Mat2::new(xp.m11, xp.m12, c, d);
                    let (_, u) = shared_row_factor(&r, &x, xp).unwrap();
                    assert_eq!(mat_invertible_exhaustive(&r, &x).unwrap(), r.is_unit(u));
                }
            }
        }
    }
}
