//! Command-line front end.

use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::budget::Budget;
use crate::chains::{
    chain_component_containment, enumerate_chains, subfield_check, verify_chain_axioms,
};
use crate::error::{Error, Result};
use crate::graph::DistantGraph;
use crate::groups::{e2_point_orbit, is_ge2_ring};
use crate::projective::{unimodular_vs_admissible_report, ProjectiveLine};
use crate::ring::{ring_create, AnyRing, Elem, FiniteRing, RingSpec};
use crate::standard_form::{
    certify_diameter, compose, decompose_traced, parse_matrix, xy_matrix_check, StandardForm,
};
use crate::verify::{format_table, run_suite, Check, SuiteConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Parser)]
#[command(
    name = "pline",
    version,
    about = "Projective lines over rings: distant graphs, elementary groups, standard forms"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Seed for every sampled check.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads for graph building and chain enumeration.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the points of P(R).
    Points {
        #[arg(long)]
        ring: String,
    },
    /// Distant graph: components and diameters.
    Graph {
        #[arg(long)]
        ring: String,
    },
    /// Graph distance between two points, e.g. --from 'R(1,0)' --to 'R(2,1)'.
    Distance {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Orbit of R(1,0) under E2(R).
    Orbit {
        #[arg(long)]
        ring: String,
    },
    /// Compare GE2(R) with GL2(R).
    Ge2 {
        #[arg(long)]
        ring: String,
    },
    /// Enumerate K-chains and check the incidence axioms.
    Chains {
        #[arg(long)]
        ring: String,
        /// Elements of K separated by ';', e.g. '0;1'.
        #[arg(long)]
        subfield: String,
    },
    /// Standard form of an invertible matrix over F_p[X].
    Decompose {
        #[arg(long)]
        ring: String,
        /// Entries a,b,c,d of [[a,b],[c,d]].
        #[arg(long, conflicts_with = "word", required_unless_present = "word")]
        matrix: Option<String>,
        /// Parameters t1,...,tn of E(tn)...E(t1).
        #[arg(long)]
        word: Option<String>,
    },
    /// Certify dist(q0, q_m) = m for m = 1..max via standard forms.
    CertifyDiameter {
        #[arg(long)]
        ring: String,
        #[arg(long, default_value = "X")]
        t: String,
        #[arg(long, default_value_t = 8)]
        max: u32,
    },
    /// Check the power identity of [[1+XY, X^2], [-Y^2, 1-XY]].
    Xy {
        #[arg(long)]
        ring: String,
        #[arg(long, default_value_t = 10)]
        nmax: u64,
    },
    /// Run the theorem suite; exits nonzero if any check fails.
    Verify {
        /// `all` or a comma-separated list of check names or numbers.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 500)]
        samples: usize,
    },
    /// Compare unimodular and admissible pairs exhaustively.
    Unimodular {
        #[arg(long)]
        ring: String,
    },
}

/// Rendered output and process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

/// Reads a ring spec inline (JSON or shorthand) or from a file.
pub fn load_ring(arg: &str) -> Result<AnyRing> {
    let text = if !arg.trim_start().starts_with('{') && Path::new(arg).is_file() {
        std::fs::read_to_string(arg).map_err(|e| Error::Parse(format!("cannot read {arg}: {e}")))?
    } else {
        arg.to_string()
    };
    ring_create(&RingSpec::parse(text.trim())?)
}

fn finite_line(arg: &str) -> Result<ProjectiveLine> {
    let ring = load_ring(arg)?;
    ProjectiveLine::new(ring.as_finite()?)
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Error::Internal(e.to_string()))
}

fn no_dot(format: Format, command: &str) -> Result<()> {
    if format == Format::Dot {
        return Err(Error::Capability(format!(
            "dot output is only available for `graph`, not `{command}`"
        )));
    }
    Ok(())
}

fn parse_subfield(r: &FiniteRing, list: &str) -> Result<Vec<Elem>> {
    list.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|s| r.parse_elem(s))
        .collect()
}

pub fn run(cli: &Cli) -> Result<Output> {
    let format = cli.format;
    let budget = Budget::from_env()?;
    match &cli.command {
        Command::Points { ring } => {
            no_dot(format, "points")?;
            let line = finite_line(ring)?;
            let points: Vec<String> = line.points().iter().map(|&p| line.fmt_point(p)).collect();
            Ok(Output::ok(match format {
                Format::Json => to_json(&json!({
                    "ring": line.ring().name(),
                    "count": points.len(),
                    "points": points,
                }))?,
                _ => {
                    let mut out = format!("{}: {} points\n", line.ring().name(), points.len());
                    for (i, p) in points.iter().enumerate() {
                        out.push_str(&format!("{i:>4}  {p}\n"));
                    }
                    out
                }
            }))
        }
        Command::Graph { ring } => {
            let line = finite_line(ring)?;
            let graph = DistantGraph::build_with_threads(&line, cli.threads)?;
            Ok(Output::ok(match format {
                Format::Json => to_json(&graph.export(&line))?,
                Format::Dot => graph.to_dot(&line),
                Format::Text => {
                    let diameters: Vec<String> =
                        graph.diameters().iter().map(|d| d.to_string()).collect();
                    format!(
                        "ring: {}\npoints: {}\nedges: {}\ncomponents: {}\ndiameters: {}\ncomplete: {}\n",
                        line.ring().name(),
                        line.len(),
                        graph.edges().len(),
                        graph.components().len(),
                        diameters.join(" "),
                        graph.is_complete()
                    )
                }
            }))
        }
        Command::Distance { ring, from, to } => {
            no_dot(format, "distance")?;
            let line = finite_line(ring)?;
            let (p, q) = (line.parse_point(from)?, line.parse_point(to)?);
            let graph = DistantGraph::build_with_threads(&line, cli.threads)?;
            let (i, j) = graph.index_pair(&line, p, q)?;
            let d = graph.dist(i, j);
            let (p, q) = (line.fmt_point(p), line.fmt_point(q));
            Ok(Output::ok(match format {
                Format::Json => to_json(&json!({ "from": p, "to": q, "distance": d }))?,
                _ => format!("dist({p}, {q}) = {d}\n"),
            }))
        }
        Command::Orbit { ring } => {
            no_dot(format, "orbit")?;
            let line = finite_line(ring)?;
            let graph = DistantGraph::build_with_threads(&line, cli.threads)?;
            let orbit: Vec<usize> = e2_point_orbit(&line)
                .into_iter()
                .filter_map(|p| line.index_of(p))
                .collect();
            let base = line.index_of(line.base_point()).unwrap_or(0);
            let mut component = graph.components()[graph.component_of(base)].clone();
            component.sort_unstable();
            let names: Vec<String> = orbit
                .iter()
                .map(|&i| line.fmt_point(line.point(i)))
                .collect();
            let equal = orbit == component;
            Ok(Output::ok(match format {
                Format::Json => to_json(&json!({
                    "ring": line.ring().name(),
                    "orbit": names,
                    "size": orbit.len(),
                    "equals_component": equal,
                }))?,
                _ => format!(
                    "orbit of R(1,0) under E2({}): {} points\n{}\nequals component of R(1,0): {equal}\n",
                    line.ring().name(),
                    orbit.len(),
                    names.join(" ")
                ),
            }))
        }
        Command::Ge2 { ring } => {
            no_dot(format, "ge2")?;
            let ring = load_ring(ring)?;
            let report = is_ge2_ring(ring.as_finite()?, &budget)?;
            Ok(Output::ok(match format {
                Format::Json => to_json(&report)?,
                _ => format!(
                    "ring: {}\n|GL2| = {}\n|E2| = {}\n|GE2| = {}\nGE2-ring: {}\nright cosets of GE2: {}\n{}",
                    report.ring,
                    report.gl2_order,
                    report.e2_order,
                    report.ge2_order,
                    report.is_ge2_ring,
                    report.right_cosets,
                    report
                        .witness
                        .as_ref()
                        .map(|w| format!("witness: {w}\n"))
                        .unwrap_or_default()
                ),
            }))
        }
        Command::Chains { ring, subfield } => {
            no_dot(format, "chains")?;
            let line = finite_line(ring)?;
            let r = line.ring();
            let k = subfield_check(r, &parse_subfield(r, subfield)?)?;
            let graph = DistantGraph::build_with_threads(&line, cli.threads)?;
            let chains = enumerate_chains(&line, &k, &budget, cli.threads)?;
            let axioms = verify_chain_axioms(&line, &graph, &k, &chains);
            let containment = chain_component_containment(&graph, &chains);
            let code = if axioms.passed && containment.all_contained {
                0
            } else {
                1
            };
            let text = match format {
                Format::Json => to_json(&json!({
                    "ring": r.name(),
                    "subfield": k.display(r),
                    "chain_count": chains.len(),
                    "axioms": axioms,
                    "contained_in_components": containment.all_contained,
                }))?,
                _ => format!(
                    "ring: {}\nsubfield: {}\nchains: {} (each with {} points: {})\nmutually distant triples checked: {} ({} uncovered)\npairs checked: {} ({} mismatches)\nchains inside one component: {}\naxioms: {}\n",
                    r.name(),
                    k.display(r),
                    chains.len(),
                    k.len() + 1,
                    axioms.chain_sizes_ok,
                    axioms.triples_checked,
                    axioms.triple_counterexamples.len(),
                    axioms.pairs_checked,
                    axioms.pair_counterexamples.len(),
                    containment.all_contained,
                    if axioms.passed { "pass" } else { "FAIL" }
                ),
            };
            Ok(Output { text, code })
        }
        Command::Decompose { ring, matrix, word } => {
            no_dot(format, "decompose")?;
            let ring = load_ring(ring)?;
            let r = ring.as_unipoly()?;
            let split = |s: &str| {
                s.split(',')
                    .map(|x| x.trim().to_string())
                    .collect::<Vec<_>>()
            };
            let a = match (matrix, word) {
                (Some(m), _) => parse_matrix(r, &split(m))?,
                (None, Some(w)) => {
                    let params = split(w)
                        .iter()
                        .filter(|s| !s.is_empty())
                        .map(|s| r.parse(s))
                        .collect::<Result<Vec<_>>>()?;
                    compose(r, &StandardForm::new(1, 1, params))
                }
                (None, None) => return Err(Error::Parse("give --matrix or --word".into())),
            };
            let traced = decompose_traced(r, &a)?;
            let form = &traced.form;
            let modified = form.to_modified(r);
            let params: Vec<String> = form.params.iter().map(|t| t.to_string()).collect();
            Ok(Output::ok(match format {
                Format::Json => to_json(&json!({
                    "ring": r.to_string(),
                    "matrix": a.fmt_with(r),
                    "u": form.u,
                    "v": form.v,
                    "params": params,
                    "length": form.len(),
                    "form": form.display(),
                    "modified": modified.display(),
                    "working_degrees": traced.working_degrees,
                }))?,
                _ => format!(
                    "matrix: {}\nstandard form: {}\nu = {}, v = {}\nparams (t1 first): {}\nmodified form: {}\n",
                    a.fmt_with(r),
                    form,
                    form.u,
                    form.v,
                    if params.is_empty() { "()".to_string() } else { params.join(", ") },
                    modified
                ),
            }))
        }
        Command::CertifyDiameter { ring, t, max } => {
            no_dot(format, "certify-diameter")?;
            let ring = load_ring(ring)?;
            let r = ring.as_unipoly()?;
            let report = certify_diameter(r, &r.parse(t)?, *max)?;
            let code = if report.unbounded { 0 } else { 1 };
            let text = match format {
                Format::Json => to_json(&report)?,
                _ => {
                    let mut out = format!("ring: {}\nt = {}\n", report.ring, report.t);
                    for c in &report.certificates {
                        out.push_str(&format!(
                            "m = {:>3}  q_m = {}  standard form length {}  {}\n",
                            c.m,
                            c.point,
                            c.word_length,
                            if c.verified { "certified" } else { "FAILED" }
                        ));
                    }
                    if report.unbounded {
                        out.push_str(&format!(
                            "diameter unbounded: distances 1..{max} all realized\n"
                        ));
                    }
                    out
                }
            };
            Ok(Output { text, code })
        }
        Command::Xy { ring, nmax } => {
            no_dot(format, "xy")?;
            let ring = load_ring(ring)?;
            let report = xy_matrix_check(ring.as_bipoly()?, *nmax);
            let code = if report.all_hold { 0 } else { 1 };
            let text = match format {
                Format::Json => to_json(&report)?,
                _ => {
                    let mut out =
                        format!("ring: {}\ndet A1 = 1: {}\n", report.ring, report.det_is_one);
                    for row in &report.rows {
                        out.push_str(&format!(
                            "n = {:>3}  closed form {}  A_n = I: {}\n",
                            row.n,
                            if row.power_identity { "holds" } else { "FAILS" },
                            row.is_identity
                        ));
                    }
                    out.push_str(&format!("all hold: {}\n", report.all_hold));
                    out
                }
            };
            Ok(Output { text, code })
        }
        Command::Verify { suite, samples } => {
            no_dot(format, "verify")?;
            let checks = Check::parse_suite(suite)?;
            let cfg = SuiteConfig {
                seed: cli.seed,
                threads: cli.threads,
                budget,
                samples: *samples,
            };
            let results = run_suite(&checks, &cfg);
            let code = if results.iter().all(|r| r.passed) {
                0
            } else {
                1
            };
            let text = match format {
                Format::Json => {
                    // timings vary between runs, so they stay out of JSON
                    let rows: Vec<_> = results
                        .iter()
                        .map(|r| json!({"id": r.id, "name": r.name, "passed": r.passed, "detail": r.detail}))
                        .collect();
                    to_json(&json!({ "seed": cli.seed, "checks": rows }))?
                }
                _ => format_table(&results),
            };
            Ok(Output { text, code })
        }
        Command::Unimodular { ring } => {
            no_dot(format, "unimodular")?;
            let ring = load_ring(ring)?;
            let report = unimodular_vs_admissible_report(ring.as_finite()?)?;
            Ok(Output::ok(match format {
                Format::Json => to_json(&report)?,
                _ => format!(
                    "ring: {}\npairs: {}\nunimodular: {}\nadmissible: {}\nequivalent: {}\n",
                    report.ring,
                    report.pairs,
                    report.unimodular,
                    report.admissible,
                    report.equivalent()
                ),
            }))
        }
    }
}
