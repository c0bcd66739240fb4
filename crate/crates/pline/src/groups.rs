//! Subgroups of `GL₂(R)` for finite rings: closure under generators, full
//! `GL₂` enumeration, the `E₂`-orbit of `R(1,0)`, the stabilizer of its
//! component, and the `GE₂`-ring decision.

use std::collections::{HashSet, VecDeque};

use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::DistantGraph;
use crate::mat2::{gen_diag, gen_e, mat_inverse, mat_invertible, Mat2};
use crate::projective::{Point, ProjectiveLine};
use crate::ring::{Elem, FiniteRing};

pub type Matrix = Mat2<Elem>;

/// A finite subgroup of `GL₂(R)`.
#[derive(Debug, Clone)]
pub struct MatrixGroup {
    elements: Vec<Matrix>,
    set: HashSet<Matrix>,
    generators: Vec<Matrix>,
}

impl MatrixGroup {
    fn from_set(set: HashSet<Matrix>, generators: Vec<Matrix>) -> Self {
        let mut elements: Vec<Matrix> = set.iter().cloned().collect();
        elements.sort();
        MatrixGroup {
            elements,
            set,
            generators,
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Elements sorted by entry indices.
    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.set.contains(m)
    }

    pub fn same_elements(&self, other: &MatrixGroup) -> bool {
        self.set == other.set
    }

    /// Checks identity, `g·s ∈ G` for every element and generator, and that
    /// generator inverses lie in `G`. For a group produced by closure this is
    /// closure under products and inverses.
    pub fn check_closed(&self, r: &FiniteRing) -> Result<()> {
        if !self.contains(&Mat2::identity(r)) {
            return Err(Error::Internal("group lacks the identity".into()));
        }
        for s in &self.generators {
            if !self.contains(&mat_inverse(r, s)?) {
                return Err(Error::Internal(format!(
                    "inverse of generator {} missing",
                    s.fmt_with(r)
                )));
            }
            for g in &self.elements {
                if !self.contains(&g.mul(r, s)) {
                    return Err(Error::Internal("group is not closed".into()));
                }
            }
        }
        Ok(())
    }
}

/// Closure of `{I}` under right multiplication by the generators.
///
/// In a finite group the monoid generated by a set is already a group, so no
/// inverses are needed.
pub fn generate_group(
    r: &FiniteRing,
    generators: &[Matrix],
    budget: &Budget,
) -> Result<MatrixGroup> {
    for g in generators {
        if !mat_invertible(r, g)? {
            return Err(Error::Precondition(format!(
                "generator {} is not invertible",
                g.fmt_with(r)
            )));
        }
    }
    let id = Mat2::identity(r);
    let mut set = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in generators {
            let h = g.mul(r, s);
            if !set.contains(&h) {
                budget.check_group(set.len() + 1)?;
                set.insert(h.clone());
                queue.push_back(h);
            }
        }
    }
    let group = MatrixGroup::from_set(set, generators.to_vec());
    group.check_closed(r)?;
    Ok(group)
}

/// `{E(t) : t ∈ R}`.
pub fn e2_generators(r: &FiniteRing) -> Vec<Matrix> {
    r.elems().map(|t| gen_e(r, &t)).collect()
}

/// `E(t)` for all `t` together with `diag(u, v)` for all units `u, v`.
pub fn ge2_generators(r: &FiniteRing) -> Vec<Matrix> {
    let units = r.units();
    let mut gens = e2_generators(r);
    for u in &units {
        for v in &units {
            gens.push(gen_diag(r, u, v).expect("units"));
        }
    }
    gens
}

pub fn e2_group(r: &FiniteRing, budget: &Budget) -> Result<MatrixGroup> {
    generate_group(r, &e2_generators(r), budget)
}

pub fn ge2_group(r: &FiniteRing, budget: &Budget) -> Result<MatrixGroup> {
    generate_group(r, &ge2_generators(r), budget)
}

/// Every invertible 2×2 matrix, by scanning all `|R|⁴` candidates.
pub fn gl2_enumerate(r: &FiniteRing, budget: &Budget) -> Result<Vec<Matrix>> {
    budget.check_ring(r.size())?;
    let mut out = Vec::new();
    for a in r.elems() {
        for b in r.elems() {
            for c in r.elems() {
                for d in r.elems() {
                    let m = Mat2::new(a, b, c, d);
                    if mat_invertible(r, &m)? {
                        budget.check_group(out.len() + 1)?;
                        out.push(m);
                    }
                }
            }
        }
    }
    Ok(out)
}

pub fn gl2_group(r: &FiniteRing, budget: &Budget) -> Result<MatrixGroup> {
    let set = gl2_enumerate(r, budget)?.into_iter().collect();
    Ok(MatrixGroup::from_set(set, Vec::new()))
}

/// Closure of `{R(1,0)}` under `p ↦ p·E(t)`, sorted by point index.
pub fn e2_point_orbit(line: &ProjectiveLine) -> Vec<Point> {
    let r = line.ring();
    let gens = e2_generators(r);
    let start = line.base_point();
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(p) = queue.pop_front() {
        for g in &gens {
            let q = line.apply(p, g);
            if seen.insert(q) {
                queue.push_back(q);
            }
        }
    }
    let mut orbit: Vec<Point> = seen.into_iter().collect();
    orbit.sort_by_key(|&p| line.index_of(p));
    orbit
}

/// `{G ∈ GL₂(R) : C_∞·G = C_∞}` where `C_∞` is the component of `R(1,0)`.
pub fn stabilizer_of_component(
    line: &ProjectiveLine,
    graph: &DistantGraph,
    budget: &Budget,
) -> Result<MatrixGroup> {
    let r = line.ring();
    let base = line
        .index_of(line.base_point())
        .ok_or_else(|| Error::Internal("R(1,0) missing from the point list".into()))?;
    let component: HashSet<usize> = graph.components()[graph.component_of(base)]
        .iter()
        .copied()
        .collect();
    let mut set = HashSet::new();
    for g in gl2_enumerate(r, budget)? {
        let stable = component.iter().all(|&i| {
            line.index_of(line.apply(line.point(i), &g))
                .is_some_and(|j| component.contains(&j))
        });
        if stable {
            set.insert(g);
        }
    }
    Ok(MatrixGroup::from_set(set, Vec::new()))
}

/// Number of right cosets `H·g` of `sub` inside the group `whole`.
pub fn right_coset_count(r: &FiniteRing, sub: &MatrixGroup, whole: &MatrixGroup) -> usize {
    let mut covered: HashSet<&Matrix> = HashSet::new();
    let mut count = 0;
    for g in whole.elements() {
        if covered.contains(g) {
            continue;
        }
        count += 1;
        for h in sub.elements() {
            let hg = h.mul(r, g);
            if let Some(m) = whole.set.get(&hg) {
                covered.insert(m);
            }
        }
    }
    count
}

/// Outcome of comparing `GE₂(R)` with `GL₂(R)`.
#[derive(Debug, Clone, Serialize)]
pub struct Ge2Report {
    pub ring: String,
    pub gl2_order: usize,
    pub e2_order: usize,
    pub ge2_order: usize,
    pub is_ge2_ring: bool,
    pub right_cosets: usize,
    /// A matrix of `GL₂(R) ∖ GE₂(R)` when the ring is not a `GE₂`-ring.
    pub witness: Option<String>,
}

/// Decides `GE₂(R) = GL₂(R)` by comparing the generated group with the full
/// enumeration.
pub fn is_ge2_ring(r: &FiniteRing, budget: &Budget) -> Result<Ge2Report> {
    let gl2 = gl2_group(r, budget)?;
    let e2 = e2_group(r, budget)?;
    let ge2 = ge2_group(r, budget)?;
    let witness = gl2
        .elements()
        .iter()
        .find(|m| !ge2.contains(m))
        .map(|m| m.fmt_with(r));
    Ok(Ge2Report {
        ring: r.name().to_string(),
        gl2_order: gl2.order(),
        e2_order: e2.order(),
        ge2_order: ge2.order(),
        is_ge2_ring: witness.is_none(),
        right_cosets: right_coset_count(r, &ge2, &gl2),
        witness,
    })
}
