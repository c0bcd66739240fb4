//! `K`-chains of a finite projective line: the images of the subline
//! `{R(1,x) : x ∈ K} ∪ {R(0,1)}` under `GL₂(R)`, with exhaustive checks of
//! the incidence axioms.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::DistantGraph;
use crate::groups::{gl2_enumerate, Matrix};
use crate::projective::{Point, ProjectiveLine};
use crate::ring::{Elem, FiniteRing};

/// A subfield `K ⊆ R`, elements sorted by index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subfield {
    elements: Vec<Elem>,
}

impl Subfield {
    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, a: Elem) -> bool {
        self.elements.binary_search(&a).is_ok()
    }

    pub fn display(&self, r: &FiniteRing) -> String {
        let items: Vec<String> = self.elements.iter().map(|&a| r.fmt_elem(a)).collect();
        format!("{{{}}}", items.join("; "))
    }
}

fn violation(axiom: &str, detail: String) -> Error {
    Error::Domain(format!("not a subfield ({axiom}): {detail}"))
}

/// Validates that `subset` is a subfield of `r`.
pub fn subfield_check(r: &FiniteRing, subset: &[Elem]) -> Result<Subfield> {
    for &a in subset {
        r.check(a)?;
    }
    let mut elements = subset.to_vec();
    elements.sort();
    elements.dedup();
    let k = Subfield { elements };
    let show = |a: Elem| r.fmt_elem(a);
    if !k.contains(r.zero()) {
        return Err(violation("contains 0", "0 is missing".into()));
    }
    if !k.contains(r.one()) {
        return Err(violation("contains 1", "1 is missing".into()));
    }
    if r.is_trivial() {
        return Err(violation("0 != 1", "the ring is trivial".into()));
    }
    for &a in k.elements() {
        for &b in k.elements() {
            let s = r.add(a, b);
            if !k.contains(s) {
                return Err(violation(
                    "closed under addition",
                    format!("{} + {} = {} is missing", show(a), show(b), show(s)),
                ));
            }
            let p = r.mul(a, b);
            if !k.contains(p) {
                return Err(violation(
                    "closed under multiplication",
                    format!("{} * {} = {} is missing", show(a), show(b), show(p)),
                ));
            }
        }
        let n = r.neg(a);
        if !k.contains(n) {
            return Err(violation(
                "closed under negation",
                format!("-({}) = {} is missing", show(a), show(n)),
            ));
        }
        if a != r.zero() {
            match r.inverse(a) {
                None => {
                    return Err(violation(
                        "nonzero elements are units",
                        format!("{} has no inverse", show(a)),
                    ))
                }
                Some(inv) if !k.contains(inv) => {
                    return Err(violation(
                        "closed under inversion",
                        format!("{}^-1 = {} is missing", show(a), show(inv)),
                    ))
                }
                Some(_) => {}
            }
        }
    }
    Ok(k)
}

/// A chain as a sorted set of point indices together with a matrix carrying
/// the base chain onto it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub points: Vec<usize>,
    pub witness: Matrix,
}

impl Chain {
    pub fn contains(&self, i: usize) -> bool {
        self.points.binary_search(&i).is_ok()
    }
}

/// `{R(1,x) : x ∈ K} ∪ {R(0,1)}` as sorted point indices.
pub fn base_chain(line: &ProjectiveLine, k: &Subfield) -> Vec<usize> {
    let r = line.ring();
    let mut pts: Vec<Point> = k
        .elements()
        .iter()
        .map(|&x| line.canonical(r.one(), x))
        .collect();
    pts.push(line.opposite_point());
    let mut idx: Vec<usize> = pts.into_iter().filter_map(|p| line.index_of(p)).collect();
    idx.sort_unstable();
    idx.dedup();
    idx
}

/// All distinct images of the base chain under `GL₂(R)`, sorted by point
/// sets. Each chain keeps the smallest witness in matrix order.
pub fn enumerate_chains(
    line: &ProjectiveLine,
    k: &Subfield,
    budget: &Budget,
    threads: usize,
) -> Result<Vec<Chain>> {
    let r = line.ring();
    let base: Vec<Point> = base_chain(line, k)
        .into_iter()
        .map(|i| line.point(i))
        .collect();
    let gl2 = gl2_enumerate(r, budget)?;
    let image = |g: &Matrix| -> Vec<usize> {
        let mut pts: Vec<usize> = base
            .iter()
            .map(|&p| {
                line.index_of(line.apply(p, g))
                    .expect("GL2 maps points to points")
            })
            .collect();
        pts.sort_unstable();
        pts
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    let images: Vec<Vec<usize>> = pool.install(|| gl2.par_iter().map(image).collect());

    let mut first: HashMap<Vec<usize>, usize> = HashMap::new();
    for (i, pts) in images.into_iter().enumerate() {
        first.entry(pts).or_insert(i);
    }
    let mut chains: Vec<Chain> = first
        .into_iter()
        .map(|(points, i)| Chain {
            points,
            witness: gl2[i].clone(),
        })
        .collect();
    chains.sort_by(|a, b| a.points.cmp(&b.points));
    Ok(chains)
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainAxiomReport {
    pub ring: String,
    pub subfield: String,
    pub points: usize,
    pub chains: usize,
    /// Every chain has `|K| + 1` points.
    pub chain_sizes_ok: bool,
    /// Distinct points on a common chain are always distant.
    pub chains_mutually_distant: bool,
    pub triples_checked: u64,
    /// Mutually distant triples on no common chain.
    pub triple_counterexamples: Vec<[String; 3]>,
    pub pairs_checked: u64,
    /// Distinct pairs where "distant" and "on a common chain" disagree.
    pub pair_counterexamples: Vec<[String; 2]>,
    pub passed: bool,
}

const MAX_REPORTED: usize = 20;

/// Checks that any three mutually distant points lie on a chain and that two
/// distinct points are distant exactly when some chain joins them.
pub fn verify_chain_axioms(
    line: &ProjectiveLine,
    graph: &DistantGraph,
    k: &Subfield,
    chains: &[Chain],
) -> ChainAxiomReport {
    let n = line.len();
    let words = chains.len().div_ceil(64);
    // chains through each point, as bitsets over chain indices
    let mut through = vec![vec![0u64; words]; n];
    for (c, chain) in chains.iter().enumerate() {
        for &i in &chain.points {
            through[i][c / 64] |= 1 << (c % 64);
        }
    }
    let joined = |i: usize, j: usize| -> Vec<u64> {
        through[i]
            .iter()
            .zip(&through[j])
            .map(|(a, b)| a & b)
            .collect()
    };
    let fmt = |i: usize| line.fmt_point(line.point(i));

    let chain_sizes_ok = chains.iter().all(|c| c.points.len() == k.len() + 1);
    let chains_mutually_distant = chains.iter().all(|c| {
        c.points
            .iter()
            .enumerate()
            .all(|(a, &i)| c.points[a + 1..].iter().all(|&j| graph.adjacent(i, j)))
    });

    let mut pairs_checked = 0;
    let mut pair_counterexamples = Vec::new();
    let mut pair_bad = 0usize;
    let mut triples_checked = 0;
    let mut triple_counterexamples = Vec::new();
    let mut triple_bad = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            pairs_checked += 1;
            let common = joined(i, j);
            let on_chain = common.iter().any(|&w| w != 0);
            if on_chain != graph.adjacent(i, j) {
                pair_bad += 1;
                if pair_counterexamples.len() < MAX_REPORTED {
                    pair_counterexamples.push([fmt(i), fmt(j)]);
                }
            }
            if !graph.adjacent(i, j) {
                continue;
            }
            for (l, chains_l) in through.iter().enumerate().skip(j + 1) {
                if !(graph.adjacent(i, l) && graph.adjacent(j, l)) {
                    continue;
                }
                triples_checked += 1;
                let hit = common.iter().zip(chains_l).any(|(a, b)| a & b != 0);
                if !hit {
                    triple_bad += 1;
                    if triple_counterexamples.len() < MAX_REPORTED {
                        triple_counterexamples.push([fmt(i), fmt(j), fmt(l)]);
                    }
                }
            }
        }
    }
    ChainAxiomReport {
        ring: line.ring().name().to_string(),
        subfield: k.display(line.ring()),
        points: n,
        chains: chains.len(),
        chain_sizes_ok,
        chains_mutually_distant,
        triples_checked,
        triple_counterexamples,
        pairs_checked,
        pair_counterexamples,
        passed: chain_sizes_ok && chains_mutually_distant && pair_bad == 0 && triple_bad == 0,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ContainmentReport {
    pub chains: usize,
    pub components: usize,
    /// Component index of each chain, or `None` if it straddles components.
    pub chain_components: Vec<Option<usize>>,
    pub all_contained: bool,
}

/// Checks that every chain lies inside a single connected component.
pub fn chain_component_containment(graph: &DistantGraph, chains: &[Chain]) -> ContainmentReport {
    let chain_components: Vec<Option<usize>> = chains
        .iter()
        .map(|c| {
            let first = graph.component_of(*c.points.first()?);
            c.points
                .iter()
                .all(|&i| graph.component_of(i) == first)
                .then_some(first)
        })
        .collect();
    ContainmentReport {
        chains: chains.len(),
        components: graph.components().len(),
        all_contained: chain_components.iter().all(Option::is_some),
        chain_components,
    }
}
