//! Suite catalog and dispatch.

use crate::config::RunConfig;
use crate::graphs::{run_coneoff, run_hyperbolicity};
use crate::quasi_lab::run_quasi_lab;
use crate::report::Report;
use crate::CliError;
use nlkit::cantor::{Arity, ClopenSet};
use nlkit::criterion::{
    build_cover_a, decompose_a, extremely_proximal_witness, run_bounded_generation, run_clopen_algebra,
    run_criterion_suite, run_extreme_proximality, run_group_laws, run_property_chains, ConditionResult, CriterionError,
    Evidence, Family, SuiteReport,
};
use nlkit::elements::{CantorGroup, VElement};
use serde::Serialize;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SuiteInfo {
    pub id: &'static str,
    pub default_budget: usize,
    pub description: &'static str,
}

pub const CATALOG: &[SuiteInfo] = &[
    SuiteInfo {
        id: "criterion",
        default_budget: 100,
        description: "conditions (C), (2T), (3T), (L) with constructed witnesses; (6T) for T",
    },
    SuiteInfo {
        id: "bounded-generation",
        default_budget: 200,
        description: "Property (1): every element is a product of at most 3 elements fixing a cover member",
    },
    SuiteInfo {
        id: "property-chains",
        default_budget: 50,
        description: "Properties (2) and (3): commuting conjugators and B-membership witness chains",
    },
    SuiteInfo {
        id: "extreme-proximality",
        default_budget: 100,
        description: "for proper clopen U, V an element f with fU inside V",
    },
    SuiteInfo {
        id: "clopen-algebra",
        default_budget: 100,
        description: "complement, De Morgan and absorption laws on clopen sets against a cell oracle",
    },
    SuiteInfo {
        id: "group-laws",
        default_budget: 1000,
        description: "associativity, inverses, identity and canonical forms per element family",
    },
    SuiteInfo {
        id: "quasi-lab",
        default_budget: 100,
        description:
            "quasimorphism defects, homogenization, quasi-lines, quasicocycles, wreath lifts, Busemann estimates",
    },
    SuiteInfo {
        id: "coneoff",
        default_budget: 2000,
        description:
            "cone-off sweep over R: shortcut edges, 1-Lipschitz projection, (K,K) embedding, geodesic tracking",
    },
    SuiteInfo {
        id: "hyperbolicity",
        default_budget: 50,
        description: "four-point delta on random trees, cycles and an optional input graph",
    },
];

pub fn lookup(id: &str) -> Result<&'static SuiteInfo, CliError> {
    CATALOG.iter().find(|s| s.id == id).ok_or_else(|| {
        let ids: Vec<&str> = CATALOG.iter().map(|s| s.id).collect();
        CliError::Usage(format!("unknown suite `{id}`; available suites: {}", ids.join(", ")))
    })
}

pub fn catalog_text() -> String {
    CATALOG.iter().map(|s| format!("{:<20} {}\n", s.id, s.description)).collect()
}

pub fn catalog_json() -> String {
    let mut s = serde_json::to_string_pretty(CATALOG).expect("catalog serializes");
    s.push('\n');
    s
}

/// Verdict of one sample, for conditions assembled outside the core runners.
pub enum Outcome {
    Pass(String),
    Fail(String),
    Inconclusive(String),
}

const EVIDENCE_KEPT: usize = 3;
const FAILURES_KEPT: usize = 20;

pub fn condition(id: &str, outcomes: Vec<Outcome>, exhaustive: bool) -> ConditionResult {
    let mut c = ConditionResult {
        id: id.to_string(),
        samples: outcomes.len(),
        passed: 0,
        failed: 0,
        inconclusive: 0,
        failures: Vec::new(),
        evidence: Vec::new(),
        exhaustive,
    };
    for (sample, o) in outcomes.into_iter().enumerate() {
        match o {
            Outcome::Pass(detail) => {
                c.passed += 1;
                if c.evidence.len() < EVIDENCE_KEPT {
                    c.evidence.push(Evidence { sample, detail });
                }
            }
            Outcome::Fail(msg) => {
                c.failed += 1;
                if c.failures.len() < FAILURES_KEPT {
                    c.failures.push(format!("sample {sample}: {msg}"));
                }
            }
            Outcome::Inconclusive(msg) => {
                c.inconclusive += 1;
                if c.failures.len() < FAILURES_KEPT {
                    c.failures.push(format!("sample {sample}: inconclusive: {msg}"));
                }
            }
        }
    }
    c
}

pub fn outcome_of<T>(r: Result<T, impl std::fmt::Display>, pass: impl FnOnce(T) -> String) -> Outcome {
    match r {
        Ok(x) => Outcome::Pass(pass(x)),
        Err(e) => Outcome::Fail(e.to_string()),
    }
}

pub struct RunOutput {
    pub report: Report,
    /// Artifacts to write: path and contents.
    pub files: Vec<(PathBuf, String)>,
}

fn usage(e: CriterionError) -> CliError {
    CliError::Usage(e.to_string())
}

fn v_arity(family: &Family, what: &str) -> Result<Arity, CliError> {
    match family {
        Family::V { n, r } => Arity::new(*n, *r).map_err(|e| CliError::Usage(e.to_string())),
        _ => Err(CliError::Usage(format!("{what} are only supported for V_n(r) families, not {family}"))),
    }
}

/// Runs one configured suite. Deterministic in the configuration apart
/// from the report timestamp.
pub fn run(config: &RunConfig) -> Result<RunOutput, CliError> {
    let info = lookup(&config.suite)?;
    let budget = config.budget.unwrap_or(info.default_budget);
    let family = config.family()?;
    let seed = config.seed;
    let mut files = Vec::new();
    let mut report = match info.id {
        "criterion" => from_core(run_criterion_suite(&family, budget, seed))?,
        "bounded-generation" => {
            let mut r = from_core(run_bounded_generation(&family, budget, seed))?;
            if !config.elements.is_empty() && budget > 0 {
                let arity = v_arity(&family, "configured elements")?;
                r.conditions.push(configured_decompositions(arity, &config.elements)?);
            }
            r
        }
        "property-chains" => from_core(run_property_chains(&family, budget, seed))?,
        "extreme-proximality" => {
            let mut r = from_core(run_extreme_proximality(&family, budget, seed))?;
            if !config.set_pairs.is_empty() && budget > 0 {
                let arity = v_arity(&family, "configured set pairs")?;
                r.conditions.push(configured_proximality(arity, &config.set_pairs)?);
            }
            r
        }
        "clopen-algebra" => {
            let cfg = config.clopen.unwrap_or_default();
            from_core(run_clopen_algebra(&cfg, budget, seed))?
        }
        "group-laws" => {
            let mut r = from_core(run_group_laws(&family, budget, seed))?;
            if !config.elements.is_empty() && budget > 0 {
                let arity = v_arity(&family, "configured elements")?;
                r.conditions.push(configured_laws(arity, &config.elements)?);
            }
            r
        }
        "quasi-lab" => run_quasi_lab(config, budget)?,
        "coneoff" => run_coneoff(config, budget, &mut files)?,
        "hyperbolicity" => run_hyperbolicity(config, budget)?,
        other => unreachable!("catalogued suite {other} has no runner"),
    };
    if budget == 0 {
        report.conditions.clear();
        report.data.clear();
        files.clear();
    }
    report.summary = crate::report::Summary::of(&report.conditions);
    report.artifacts = files.iter().map(|(p, _)| p.display().to_string()).collect();
    Ok(RunOutput { report, files })
}

fn from_core(r: Result<SuiteReport, CriterionError>) -> Result<Report, CliError> {
    r.map(Report::from_suite).map_err(usage)
}

fn parse_elements(arity: Arity, texts: &[String]) -> Result<Vec<VElement>, CliError> {
    texts
        .iter()
        .map(|t| VElement::parse(arity, t).map_err(|e| CliError::Usage(format!("element `{t}`: {e}"))))
        .collect()
}

fn configured_decompositions(arity: Arity, texts: &[String]) -> Result<ConditionResult, CliError> {
    let cover = build_cover_a(arity);
    let outcomes = parse_elements(arity, texts)?
        .iter()
        .map(|g| {
            outcome_of(decompose_a(g, &cover), |d| {
                let factors: Vec<String> = d.factors.iter().map(|f| f.to_string()).collect();
                format!("{g} = {}", factors.join(", "))
            })
        })
        .collect();
    Ok(condition("P1 (configured)", outcomes, false))
}

fn configured_laws(arity: Arity, texts: &[String]) -> Result<ConditionResult, CliError> {
    let outcomes = parse_elements(arity, texts)?
        .iter()
        .map(|g| {
            let e = VElement::identity(&arity);
            let inv = g.inverse();
            let ok = g.compose(&inv).map(|x| x.is_identity()).unwrap_or(false)
                && g.compose(&e).map(|x| x == *g).unwrap_or(false)
                && inv.inverse() == *g;
            if ok {
                Outcome::Pass(format!("({g})^-1 = {inv}"))
            } else {
                Outcome::Fail(format!("group laws fail for {g}"))
            }
        })
        .collect();
    Ok(condition("laws (configured)", outcomes, false))
}

fn configured_proximality(arity: Arity, pairs: &[(String, String)]) -> Result<ConditionResult, CliError> {
    let parse = |t: &str| ClopenSet::parse(arity, t).map_err(|e| CliError::Usage(format!("clopen set `{t}`: {e}")));
    let mut outcomes = Vec::new();
    for (u, v) in pairs {
        let (u, v) = (parse(u)?, parse(v)?);
        let f: Result<VElement, _> = extremely_proximal_witness(&arity, &u, &v);
        outcomes.push(outcome_of(f, |f| format!("U = {u}, V = {v}: f = {f}")));
    }
    Ok(condition("EP (configured)", outcomes, false))
}
