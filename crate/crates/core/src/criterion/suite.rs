//! Seeded sample sweeps over the criterion conditions.

use super::cantor_witness::{
    build_cover_a, decompose_a, extremely_proximal_witness, glue, property2_witness, property3_witness,
    transitivity_witness, weak_triple_witness,
};
use super::circle::{circle_glue, circle_ordered_witness, circle_weak_triple, verify_circle_condition_c, DyadicArc};
use super::sampling::{cells, fit_residue, random_admissible_tuple, random_supported_in, residue};
use super::{check, CriterionError, Result};
use crate::cantor::{Arity, ClopenSet};
use crate::elements::{CantorGroup, CircleMap, Dyadic, Perm, PermGroup, TwistSpace, TwistedElement, VElement};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Element families the suites can run on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum Family {
    /// Higman–Thompson `V_n(r)`.
    V { n: u32, r: u32 },
    /// Brin–Thompson `sV` with `s = dims`.
    Brin { dims: usize },
    /// `SV_Γ` with `Γ` generated by the given permutations of `0..dims`.
    Twisted { dims: usize, generators: Vec<Vec<u8>> },
    /// Thompson's `T`.
    T,
}

impl Family {
    /// `SV_Γ` with `|S| = 3` and `Γ` the full symmetric group.
    pub fn sym3() -> Family {
        Family::Twisted { dims: 3, generators: vec![vec![1, 2, 0], vec![1, 0, 2]] }
    }

    pub(super) fn space(&self) -> Result<Space> {
        Ok(match self {
            Family::V { n, r } => Space::V(Arity::new(*n, *r)?),
            Family::Brin { dims } => {
                if *dims == 0 {
                    return Err(CriterionError::NotAdmissible("dims must be positive".into()));
                }
                Space::Twisted(TwistSpace::brin(*dims))
            }
            Family::Twisted { dims, generators } => {
                if *dims == 0 {
                    return Err(CriterionError::NotAdmissible("dims must be positive".into()));
                }
                let gens = generators.iter().map(|g| Perm::new(g.clone())).collect::<Result<Vec<_>, _>>()?;
                Space::Twisted(TwistSpace::new(PermGroup::generated_by(*dims, gens)?))
            }
            Family::T => Space::Circle,
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::V { n, r } => write!(f, "V({n},{r})"),
            Family::Brin { dims } => write!(f, "{dims}V"),
            Family::Twisted { dims, generators } => {
                write!(f, "SV[{dims};")?;
                for (i, g) in generators.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    let s: Vec<String> = g.iter().map(|d| d.to_string()).collect();
                    write!(f, "{}", s.join(","))?;
                }
                write!(f, "]")
            }
            Family::T => write!(f, "T"),
        }
    }
}

/// Accepts `V`, `V(n,r)`, `sV`, `<s>V`, `SVG` (symmetric twists on three
/// coordinates) and `T`.
impl FromStr for Family {
    type Err = CriterionError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || CriterionError::NotAdmissible(format!("unknown family `{s}`"));
        match s {
            "V" => return Ok(Family::V { n: 2, r: 1 }),
            "sV" => return Ok(Family::Brin { dims: 2 }),
            "SVG" => return Ok(Family::sym3()),
            "T" => return Ok(Family::T),
            _ => {}
        }
        if let Some(inner) = s.strip_prefix("V(").and_then(|t| t.strip_suffix(')')) {
            let (n, r) = inner.split_once(',').ok_or_else(bad)?;
            let n = n.trim().parse().map_err(|_| bad())?;
            let r = r.trim().parse().map_err(|_| bad())?;
            return Ok(Family::V { n, r });
        }
        if let Some(d) = s.strip_suffix('V') {
            let dims = d.parse().map_err(|_| bad())?;
            return Ok(Family::Brin { dims });
        }
        Err(bad())
    }
}

pub(super) enum Space {
    V(Arity),
    Twisted(TwistSpace),
    Circle,
}

/// A short human-readable record of one verified sample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub sample: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionResult {
    pub id: String,
    pub samples: usize,
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
    pub failures: Vec<String>,
    pub evidence: Vec<Evidence>,
    /// The samples cover the whole finite domain of the condition.
    #[serde(default)]
    pub exhaustive: bool,
}

impl ConditionResult {
    pub fn is_clean(&self) -> bool {
        self.failed == 0 && self.inconclusive == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub family: String,
    pub seed: u64,
    pub budget: usize,
    pub conditions: Vec<ConditionResult>,
}

impl SuiteReport {
    pub fn is_clean(&self) -> bool {
        self.conditions.iter().all(ConditionResult::is_clean)
    }
}

const EVIDENCE_KEPT: usize = 3;
const FAILURES_KEPT: usize = 20;

fn sample_seed(seed: u64, id: &str, index: usize) -> u64 {
    let tag = id.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ tag ^ (index as u64).wrapping_mul(0xbf58_476d_1ce4_e5b9)
}

/// Runs `f` on `budget` independently seeded samples in parallel and
/// collects the outcomes in sample order.
pub(super) fn run_condition<F>(id: &str, budget: usize, seed: u64, f: F) -> ConditionResult
where
    F: Fn(&mut ChaCha8Rng) -> Result<String> + Sync,
{
    let outcomes: Vec<Result<String>> =
        (0..budget).into_par_iter().map(|i| f(&mut ChaCha8Rng::seed_from_u64(sample_seed(seed, id, i)))).collect();
    collect(id, outcomes)
}

pub(super) fn collect(id: &str, outcomes: Vec<Result<String>>) -> ConditionResult {
    let mut r = ConditionResult {
        id: id.to_string(),
        samples: outcomes.len(),
        passed: 0,
        failed: 0,
        inconclusive: 0,
        failures: Vec::new(),
        evidence: Vec::new(),
        exhaustive: false,
    };
    for (sample, o) in outcomes.into_iter().enumerate() {
        match o {
            Ok(detail) => {
                r.passed += 1;
                if r.evidence.len() < EVIDENCE_KEPT {
                    r.evidence.push(Evidence { sample, detail });
                }
            }
            Err(CriterionError::Inconclusive(msg)) => {
                r.inconclusive += 1;
                if r.failures.len() < FAILURES_KEPT {
                    r.failures.push(format!("sample {sample}: inconclusive: {msg}"));
                }
            }
            Err(e) => {
                r.failed += 1;
                if r.failures.len() < FAILURES_KEPT {
                    r.failures.push(format!("sample {sample}: {e}"));
                }
            }
        }
    }
    r
}

pub(super) fn report(
    suite: &str,
    family: &Family,
    seed: u64,
    budget: usize,
    conditions: Vec<ConditionResult>,
) -> SuiteReport {
    SuiteReport { suite: suite.to_string(), family: family.to_string(), seed, budget, conditions }
}

fn no_cantor_model(family: &Family) -> CriterionError {
    CriterionError::NotAdmissible(format!("{family} does not act on a Cantor space"))
}

pub(super) const ELEMENT_SIZE: usize = 8;

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

/// Conditions (C), (2T), (3T), (L); for `T` additionally transitivity on
/// positively ordered 6-tuples. A zero budget gives an empty report.
pub fn run_criterion_suite(family: &Family, budget: usize, seed: u64) -> Result<SuiteReport> {
    let space = family.space()?;
    let conditions = if budget == 0 {
        Vec::new()
    } else {
        match &space {
            Space::V(a) => cantor_conditions::<VElement>(a, budget, seed),
            Space::Twisted(s) => cantor_conditions::<TwistedElement>(s, budget, seed),
            Space::Circle => circle_conditions(budget, seed),
        }
    };
    Ok(report("criterion", family, seed, budget, conditions))
}

/// A random proper nonempty clopen set.
fn random_proper(arity: Arity, rng: &mut ChaCha8Rng) -> ClopenSet {
    random_admissible_tuple(arity, 1, rng).remove(0)
}

fn cantor_conditions<G: CantorGroup>(space: &G::Space, budget: usize, seed: u64) -> Vec<ConditionResult> {
    let arity = G::clopen_arity(space);
    vec![
        condition_c(arity),
        run_condition("2T", budget, seed, |rng| {
            let src = random_admissible_tuple(arity, 2, rng);
            let dst: Vec<ClopenSet> = random_admissible_tuple(arity, 2, rng)
                .iter()
                .zip(&src)
                .map(|(d, s)| fit_residue(d, residue(s)))
                .collect();
            let g: G = transitivity_witness(space, &src, &dst)?;
            Ok(format!("({}) -> ({}) by {g}", join(&src), join(&dst)))
        }),
        run_condition("3T", budget, seed, |rng| {
            let g = G::random(space, rng, ELEMENT_SIZE);
            let h = G::random(space, rng, ELEMENT_SIZE);
            let t = weak_triple_witness(&g, &h, 6)?;
            Ok(format!("g = {g}, h = {h}: M = {}, N = {}, P = {}, b = {}", t.m, t.n, t.p, t.b))
        }),
        run_condition("L", budget, seed, |rng| {
            let t = random_admissible_tuple(arity, 3, rng);
            let g: G = random_supported_in(space, &t[0], rng, ELEMENT_SIZE);
            let h: G = random_supported_in(space, &t[1], rng, ELEMENT_SIZE);
            let b = glue(space, &[(t[0].clone(), g), (t[1].clone(), h)])?;
            check(t[2].is_subset(&b.fixed_clopen())?, || "b moves points of K".into())?;
            Ok(format!("I = {}, J = {}, K = {}: b = {b}", t[0], t[1], t[2]))
        }),
    ]
}

/// Exhaustive over unions of cells at the deepest level with at most 12
/// cells (capped at depth 3): each proper `I` has the proper clopen set
/// `I^c` containing the closure of its complement.
fn condition_c(arity: Arity) -> ConditionResult {
    let mut depth = 0;
    while depth < 3 && cells(arity, depth + 1).len() <= 12 {
        depth += 1;
    }
    let cs = cells(arity, depth);
    let outcomes: Vec<Result<String>> = (1u32..(1 << cs.len()) - 1)
        .map(|mask| {
            let chosen = cs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, c)| c.clone());
            let i = ClopenSet::from_cylinders(arity, chosen)?;
            let j = i.complement();
            check(j.is_proper_nonempty(), || format!("complement of {i} is not proper"))?;
            check(i.complement().is_subset(&j)?, || format!("{j} does not contain the complement of {i}"))?;
            Ok(format!("I = {i}, J = {j}"))
        })
        .collect();
    ConditionResult { exhaustive: true, ..collect("C", outcomes) }
}

/// `count` distinct multiples of `2^-exp` in `[0, 1)`, increasing.
fn random_sorted(rng: &mut ChaCha8Rng, count: usize, exp: u32) -> Vec<Dyadic> {
    let mut v: Vec<i64> = Vec::with_capacity(count);
    while v.len() < count {
        let x = rng.gen_range(0..1i64 << exp);
        if !v.contains(&x) {
            v.push(x);
        }
    }
    v.sort_unstable();
    v.into_iter().map(|x| Dyadic::new(x, exp)).collect()
}

/// A random positively ordered tuple, rotated so it need not start at its
/// minimum.
fn random_ordered(rng: &mut ChaCha8Rng, count: usize) -> Vec<Dyadic> {
    let mut v = random_sorted(rng, count, 6);
    let k = rng.gen_range(0..count);
    v.rotate_left(k);
    v
}

/// A map fixing the endpoints of `[a, b]` and moving an interior point.
fn random_fixing(rng: &mut ChaCha8Rng, arc: &DyadicArc) -> Result<CircleMap> {
    let len = arc.length();
    let pick = |rng: &mut ChaCha8Rng| {
        let k = rng.gen_range(1..16i64);
        (&arc.a + &(&len * &Dyadic::new(k, 4))).frac()
    };
    let (p, q) = (pick(rng), pick(rng));
    circle_ordered_witness(&[arc.a.clone(), p, arc.b.clone()], &[arc.a.clone(), q, arc.b.clone()])
}

fn circle_conditions(budget: usize, seed: u64) -> Vec<ConditionResult> {
    let c = verify_circle_condition_c(3).map(|n| format!("{n} arcs with endpoints in 2^-3 Z"));
    vec![
        ConditionResult { exhaustive: true, ..collect("C", vec![c]) },
        run_condition("2T", budget, seed, |rng| {
            let src = random_ordered(rng, 4);
            let dst = random_ordered(rng, 4);
            let f = circle_ordered_witness(&src, &dst)?;
            Ok(format!("({}) -> ({}) by {f}", join(&src), join(&dst)))
        }),
        run_condition("3T", budget, seed, |rng| {
            let g = CircleMap::random(rng, ELEMENT_SIZE);
            let h = CircleMap::random(rng, ELEMENT_SIZE);
            let (m, n, p, b) = circle_weak_triple(&g, &h, 7)?;
            Ok(format!("g = {g}, h = {h}: M = {m}, N = {n}, P = {p}, b = {b}"))
        }),
        run_condition("L", budget, seed, |rng| {
            let o = random_sorted(rng, 6, 6);
            let i = DyadicArc::new(o[0].clone(), o[1].clone())?;
            let j = DyadicArc::new(o[2].clone(), o[3].clone())?;
            let k = DyadicArc::new(o[4].clone(), o[5].clone())?;
            let g = random_fixing(rng, &i)?;
            let h = random_fixing(rng, &j)?;
            let id = CircleMap::identity();
            let b =
                circle_glue(&[(o[0].clone(), g), (o[1].clone(), id.clone()), (o[2].clone(), h), (o[3].clone(), id)])?;
            for x in [&k.a, &k.b, &k.midpoint()] {
                check(b.eval(x) == *x, || format!("b moves {x} in K"))?;
            }
            Ok(format!("I = {i}, J = {j}, K = {k}: b = {b}"))
        }),
        run_condition("6T", budget, seed, |rng| {
            let src = random_ordered(rng, 6);
            let dst = random_ordered(rng, 6);
            let f = circle_ordered_witness(&src, &dst)?;
            Ok(format!("({}) -> ({}) by {f}", join(&src), join(&dst)))
        }),
    ]
}

/// Property (1): random elements factor through at most three elements
/// fixing a member of the cover.
pub fn run_bounded_generation(family: &Family, budget: usize, seed: u64) -> Result<SuiteReport> {
    let conditions = match family.space()? {
        Space::V(a) => vec![bounded_generation::<VElement>(&a, budget, seed)],
        Space::Twisted(s) => vec![bounded_generation::<TwistedElement>(&s, budget, seed)],
        Space::Circle => return Err(no_cantor_model(family)),
    };
    Ok(report("bounded-generation", family, seed, budget, conditions))
}

fn bounded_generation<G: CantorGroup>(space: &G::Space, budget: usize, seed: u64) -> ConditionResult {
    let cover = build_cover_a(G::clopen_arity(space));
    run_condition("P1", budget, seed, |rng| {
        let g = G::random(space, rng, 2 * ELEMENT_SIZE);
        let d = decompose_a(&g, &cover)?;
        Ok(format!("{g} = {}", join(&d.factors)))
    })
}

/// Property (2) on `budget` pairs from `B`, Property (3) on
/// `ceil(2 budget / 5)` pairs `(g, h)` with ten sampled `a` each.
pub fn run_property_chains(family: &Family, budget: usize, seed: u64) -> Result<SuiteReport> {
    let conditions = match family.space()? {
        Space::V(a) => property_chains::<VElement>(&a, budget, seed),
        Space::Twisted(s) => property_chains::<TwistedElement>(&s, budget, seed),
        Space::Circle => return Err(no_cantor_model(family)),
    };
    Ok(report("property-chains", family, seed, budget, conditions))
}

/// A random element of `B`: supported off a random proper clopen set.
fn random_in_b<G: CantorGroup>(space: &G::Space, rng: &mut ChaCha8Rng) -> G {
    let fixed = random_proper(G::clopen_arity(space), rng);
    random_supported_in(space, &fixed.complement(), rng, ELEMENT_SIZE)
}

fn property_chains<G: CantorGroup>(space: &G::Space, budget: usize, seed: u64) -> Vec<ConditionResult> {
    let cover = build_cover_a(G::clopen_arity(space));
    let p2 = run_condition("P2", budget, seed, |rng| {
        let b1: G = random_in_b(space, rng);
        let b2: G = random_in_b(space, rng);
        let w = property2_witness(&b1, &b2)?;
        Ok(format!("b1 = {b1}, b2 = {b2}: g = {}, h = {}", w.g, w.h))
    });
    let p3 = run_condition("P3", (2 * budget).div_ceil(5), seed, |rng| {
        let g = G::random(space, rng, ELEMENT_SIZE);
        let h = G::random(space, rng, ELEMENT_SIZE);
        let sample_a: Vec<G> = (0..10)
            .map(|_| {
                let m = rng.gen_range(0..cover.sets.len());
                random_supported_in(space, &cover.sets[m].complement(), rng, ELEMENT_SIZE)
            })
            .collect();
        let rep = property3_witness(&g, &h, &cover, &sample_a)?;
        check(rep.failures.is_empty(), || rep.failures.join("; "))?;
        Ok(format!("g = {g}, h = {h}: b = {}, {} checks", rep.b, rep.checks))
    });
    vec![p2, p3]
}

/// Random proper pairs `(U, V)` and verified `f` with `fU ⊆ V`.
pub fn run_extreme_proximality(family: &Family, budget: usize, seed: u64) -> Result<SuiteReport> {
    let conditions = match family.space()? {
        Space::V(a) => vec![extreme_proximality::<VElement>(&a, budget, seed)],
        Space::Twisted(s) => vec![extreme_proximality::<TwistedElement>(&s, budget, seed)],
        Space::Circle => return Err(no_cantor_model(family)),
    };
    Ok(report("extreme-proximality", family, seed, budget, conditions))
}

fn extreme_proximality<G: CantorGroup>(space: &G::Space, budget: usize, seed: u64) -> ConditionResult {
    let arity = G::clopen_arity(space);
    run_condition("EP", budget, seed, |rng| {
        let u = random_proper(arity, rng);
        let v = random_proper(arity, rng);
        let f: G = extremely_proximal_witness(space, &u, &v)?;
        Ok(format!("U = {u}, V = {v}: f = {f}"))
    })
}
