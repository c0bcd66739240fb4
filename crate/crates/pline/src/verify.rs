//! The theorem suite behind `pline verify`: every check is exact and
//! exhaustive except the seeded random samples.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::budget::Budget;
use crate::chains::{
    chain_component_containment, enumerate_chains, subfield_check, verify_chain_axioms,
};
use crate::error::{Error, Result};
use crate::graph::{Distance, DistantGraph};
use crate::groups::{e2_generators, e2_point_orbit, ge2_group, gl2_group, stabilizer_of_component};
use crate::projective::{unimodular_vs_admissible_report, ProjectiveLine};
use crate::ring::{BiPolyRing, FiniteRing, Poly, RingSpec, UniPolyRing};
use crate::standard_form::{certify_diameter, compose, decompose, xy_matrix_check, StandardForm};

/// One suite entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    FieldDiameters = 1,
    StableRankTwo = 2,
    OrbitIsComponent = 3,
    StabilizerIsGe2 = 4,
    NormalizationRoundTrip = 5,
    WordLengthIsDistance = 6,
    StandardFormUnique = 7,
    DiameterCertificates = 8,
    XyMatrix = 9,
    ChainAxioms = 10,
    UnimodularAdmissible = 11,
}

impl Check {
    pub const ALL: [Check; 11] = [
        Check::FieldDiameters,
        Check::StableRankTwo,
        Check::OrbitIsComponent,
        Check::StabilizerIsGe2,
        Check::NormalizationRoundTrip,
        Check::WordLengthIsDistance,
        Check::StandardFormUnique,
        Check::DiameterCertificates,
        Check::XyMatrix,
        Check::ChainAxioms,
        Check::UnimodularAdmissible,
    ];

    pub fn number(self) -> u32 {
        self as u32
    }

    pub fn name(self) -> &'static str {
        match self {
            Check::FieldDiameters => "field-diameters",
            Check::StableRankTwo => "stable-rank-2",
            Check::OrbitIsComponent => "orbit-is-component",
            Check::StabilizerIsGe2 => "stabilizer-is-ge2",
            Check::NormalizationRoundTrip => "normalization",
            Check::WordLengthIsDistance => "word-length",
            Check::StandardFormUnique => "standard-form",
            Check::DiameterCertificates => "certificates",
            Check::XyMatrix => "xy-matrix",
            Check::ChainAxioms => "chain-axioms",
            Check::UnimodularAdmissible => "unimodular",
        }
    }

    /// Accepts a name or a number.
    pub fn parse(s: &str) -> Result<Check> {
        let s = s.trim();
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s || c.number().to_string() == s)
            .ok_or_else(|| Error::Parse(format!("unknown check `{s}`")))
    }

    /// `all`, or a comma-separated list of names and numbers.
    pub fn parse_suite(s: &str) -> Result<Vec<Check>> {
        if s.trim() == "all" {
            return Ok(Check::ALL.to_vec());
        }
        let mut checks = s.split(',').map(Check::parse).collect::<Result<Vec<_>>>()?;
        checks.sort();
        checks.dedup();
        Ok(checks)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    pub threads: usize,
    pub budget: Budget,
    pub samples: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            threads: 1,
            budget: Budget::default(),
            samples: 500,
        }
    }
}

pub const FIELDS: [&str; 4] = ["F2", "F3", "GF4", "F5"];
pub const STABLE_RANK_TWO: [&str; 4] = ["Z/4", "F2[e]", "F3[e]", "M2(F2)"];

pub(crate) fn finite(spec: &str) -> Result<FiniteRing> {
    FiniteRing::from_spec(&RingSpec::parse(spec)?)
}

struct Geometry {
    line: ProjectiveLine,
    graph: DistantGraph,
}

fn geometry(spec: &str, threads: usize) -> Result<Geometry> {
    let r = finite(spec)?;
    let line = ProjectiveLine::new(&r)?;
    let graph = DistantGraph::build_with_threads(&line, threads)?;
    Ok(Geometry { line, graph })
}

/// Outcome of a check body: pass flag and a one-line summary.
type Outcome = Result<(bool, String)>;

pub fn run_check(check: Check, cfg: &SuiteConfig) -> CheckResult {
    let start = Instant::now();
    let outcome = match check {
        Check::FieldDiameters => field_diameters(cfg),
        Check::StableRankTwo => stable_rank_two(cfg),
        Check::OrbitIsComponent => orbit_is_component(cfg),
        Check::StabilizerIsGe2 => stabilizer_is_ge2(cfg),
        Check::NormalizationRoundTrip => normalization(cfg),
        Check::WordLengthIsDistance => word_length(cfg),
        Check::StandardFormUnique => standard_form_unique(cfg),
        Check::DiameterCertificates => certificates(),
        Check::XyMatrix => xy(),
        Check::ChainAxioms => chain_axioms(cfg),
        Check::UnimodularAdmissible => unimodular(),
    };
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    CheckResult {
        id: check.number(),
        name: check.name(),
        passed,
        detail,
        millis: start.elapsed().as_millis(),
    }
}

pub fn run_suite(checks: &[Check], cfg: &SuiteConfig) -> Vec<CheckResult> {
    checks.iter().map(|&c| run_check(c, cfg)).collect()
}

fn field_diameters(cfg: &SuiteConfig) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (spec, q) in FIELDS.iter().zip([2usize, 3, 4, 5]) {
        let g = geometry(spec, cfg.threads)?;
        let good = g.line.len() == q + 1
            && g.graph.is_complete()
            && g.graph.diameters() == vec![Distance::Finite(1)];
        ok &= good;
        parts.push(format!("{spec}: {} points", g.line.len()));
    }
    Ok((ok, parts.join(", ")))
}

fn stable_rank_two(cfg: &SuiteConfig) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for spec in STABLE_RANK_TWO {
        let g = geometry(spec, cfg.threads)?;
        let good = g.graph.is_connected() && g.graph.diameters() == vec![Distance::Finite(2)];
        ok &= good;
        parts.push(format!(
            "{spec}: diameter {}",
            g.graph
                .diameters()
                .first()
                .copied()
                .unwrap_or(Distance::Infinite)
        ));
    }
    Ok((ok, parts.join(", ")))
}

fn orbit_is_component(cfg: &SuiteConfig) -> Outcome {
    let mut ok = true;
    for spec in FIELDS.iter().chain(STABLE_RANK_TWO.iter()) {
        let g = geometry(spec, cfg.threads)?;
        let base = g.line.index_of(g.line.base_point()).unwrap();
        let mut component = g.graph.components()[g.graph.component_of(base)].clone();
        component.sort_unstable();
        let orbit: Vec<usize> = e2_point_orbit(&g.line)
            .into_iter()
            .filter_map(|p| g.line.index_of(p))
            .collect();
        ok &= orbit == component;
    }
    Ok((ok, "8 rings, orbit = component of R(1,0)".into()))
}

fn stabilizer_is_ge2(cfg: &SuiteConfig) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for spec in ["Z/4", "F2[e]"] {
        let g = geometry(spec, cfg.threads)?;
        let r = g.line.ring();
        let stab = stabilizer_of_component(&g.line, &g.graph, &cfg.budget)?;
        let ge2 = ge2_group(r, &cfg.budget)?;
        let gl2 = gl2_group(r, &cfg.budget)?;
        ok &= stab.same_elements(&ge2) && ge2.same_elements(&gl2);
        parts.push(format!("{spec}: |GL2| = {}", gl2.order()));
    }
    Ok((ok, parts.join(", ")))
}

fn normalization(cfg: &SuiteConfig) -> Outcome {
    let g = geometry("Z/4", cfg.threads)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let base = g.line.index_of(g.line.base_point()).unwrap();
    let mut failures = 0;
    for _ in 0..cfg.samples {
        let len = rng.random_range(0..=4);
        let mut chain = vec![base];
        for _ in 0..len {
            let nbrs: Vec<usize> = g.graph.neighbors(*chain.last().unwrap()).collect();
            chain.push(nbrs[rng.random_range(0..nbrs.len())]);
        }
        let points: Vec<_> = chain.iter().map(|&i| g.line.point(i)).collect();
        let word = g.line.chain_to_word(&points)?;
        let trace = g.line.word_to_point(&word)?;
        if trace.trace != points {
            failures += 1;
        }
    }
    Ok((
        failures == 0,
        format!("{} chains in P(Z/4), {failures} failures", cfg.samples),
    ))
}

/// Shortest `E`-word lengths from `R(1,0)` by breadth-first search over words.
pub fn word_lengths(line: &ProjectiveLine) -> HashMap<usize, u32> {
    let gens = e2_generators(line.ring());
    let base = line.index_of(line.base_point()).unwrap();
    let mut len = HashMap::from([(base, 0)]);
    let mut queue = VecDeque::from([base]);
    while let Some(i) = queue.pop_front() {
        let d = len[&i];
        for g in &gens {
            let j = line.index_of(line.apply(line.point(i), g)).unwrap();
            if let std::collections::hash_map::Entry::Vacant(e) = len.entry(j) {
                e.insert(d + 1);
                queue.push_back(j);
            }
        }
    }
    len
}

fn word_length(cfg: &SuiteConfig) -> Outcome {
    let mut ok = true;
    for spec in ["Z/4", "F2[e]"] {
        let g = geometry(spec, cfg.threads)?;
        let base = g.line.index_of(g.line.base_point()).unwrap();
        let lengths = word_lengths(&g.line);
        for i in 0..g.line.len() {
            let by_words = lengths
                .get(&i)
                .map_or(Distance::Infinite, |&n| Distance::Finite(n));
            ok &= by_words == g.graph.dist(base, i);
        }
    }
    Ok((ok, "Z/4, F2[e]: every point".into()))
}

/// A random standard form over `F_p[X]`: `1..=6` factors, middle degrees
/// `1..=3`, outer parameters arbitrary of degree at most 3.
pub fn random_standard_form(rng: &mut impl Rng, p: u32) -> StandardForm {
    let poly = |rng: &mut dyn rand::RngCore, min_deg: usize| -> Poly {
        let deg = rng.random_range(min_deg..=3);
        let mut coeffs: Vec<i64> = (0..=deg).map(|_| rng.random_range(0..p as i64)).collect();
        if min_deg > 0 {
            coeffs[deg] = rng.random_range(1..p as i64);
        }
        Poly::new(p, coeffs)
    };
    loop {
        let n = rng.random_range(1..=6);
        let params: Vec<Poly> = (0..n)
            .map(|i| poly(rng, if i == 0 || i == n - 1 { 0 } else { 1 }))
            .collect();
        let sf = StandardForm::new(rng.random_range(1..p), rng.random_range(1..p), params);
        if sf.validate(&UniPolyRing::new(p).unwrap()).is_ok() {
            return sf;
        }
    }
}

fn standard_form_unique(cfg: &SuiteConfig) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut failures = 0;
    for p in [2, 3] {
        let r = UniPolyRing::new(p)?;
        for _ in 0..cfg.samples {
            let sf = random_standard_form(&mut rng, p);
            if decompose(&r, &compose(&r, &sf)).ok() != Some(sf) {
                failures += 1;
            }
        }
    }
    Ok((
        failures == 0,
        format!(
            "{} round trips over F2[X] and F3[X], {failures} failures",
            2 * cfg.samples
        ),
    ))
}

fn certificates() -> Outcome {
    let r = UniPolyRing::new(2)?;
    let report = certify_diameter(&r, &r.x(), 8)?;
    Ok((report.unbounded, "F2[X], t = X, m = 1..8".into()))
}

fn xy() -> Outcome {
    let mut ok = true;
    for p in [5, 2] {
        let report = xy_matrix_check(&BiPolyRing::new(p)?, 10);
        ok &= report.all_hold && report.rows[p as usize].is_identity;
    }
    Ok((ok, "F5[X,Y], F2[X,Y], n = 0..10".into()))
}

fn chain_axioms(cfg: &SuiteConfig) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (spec, p) in [("F2[e]", 2), ("F3[e]", 3), ("M2(F2)", 2)] {
        let g = geometry(spec, cfg.threads)?;
        let r = g.line.ring();
        let mut k = vec![r.zero()];
        for _ in 1..p {
            k.push(r.add(*k.last().unwrap(), r.one()));
        }
        let k = subfield_check(r, &k)?;
        let chains = enumerate_chains(&g.line, &k, &cfg.budget, cfg.threads)?;
        let report = verify_chain_axioms(&g.line, &g.graph, &k, &chains);
        let contained = chain_component_containment(&g.graph, &chains).all_contained;
        ok &= report.passed && contained;
        parts.push(format!("{spec}: {} chains", chains.len()));
    }
    Ok((ok, parts.join(", ")))
}

fn unimodular() -> Outcome {
    let mut ok = true;
    for spec in FIELDS.iter().chain(STABLE_RANK_TWO.iter()) {
        ok &= unimodular_vs_admissible_report(&finite(spec)?)?.equivalent();
    }
    Ok((ok, "8 rings, every pair".into()))
}

/// The per-check table printed by `pline verify`.
pub fn format_table(results: &[CheckResult]) -> String {
    let mut out = String::new();
    for r in results {
        out.push_str(&format!(
            "{:>2}  {:<20} {}  {}\n",
            r.id,
            r.name,
            if r.passed { "PASS" } else { "FAIL" },
            r.detail
        ));
    }
    let passed = results.iter().filter(|r| r.passed).count();
    out.push_str(&format!("{passed}/{} checks passed\n", results.len()));
    out
}
