//! Exhaustive Boolean-algebra checks on clopen sets and sampled group laws.

use super::sampling::cells;
use super::suite::{collect, report, run_condition, Space, ELEMENT_SIZE};
use super::{check, ConditionResult, Family, Result, SuiteReport};
use crate::cantor::{Arity, ClopenSet, Cylinder};
use crate::elements::{sample_points, CantorGroup, CircleMap, Dyadic, TwistedElement, VElement};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClopenAlgebraConfig {
    /// Sets are unions of cylinders of depth at most this.
    pub depth: usize,
    /// Largest set count enumerated exhaustively for one-set identities.
    pub max_sets: u64,
    /// Largest pair count enumerated exhaustively for two-set identities.
    pub max_pairs: u64,
}

impl Default for ClopenAlgebraConfig {
    fn default() -> Self {
        ClopenAlgebraConfig { depth: 3, max_sets: 1 << 16, max_pairs: 1 << 20 }
    }
}

pub const CLOPEN_ARITIES: [(u32, u32); 4] = [(2, 1), (2, 2), (3, 1), (3, 2)];

/// Cells of one depth with bitmask conversions; the depth-truncation oracle.
struct CellIndex {
    arity: Arity,
    cells: Vec<Cylinder>,
}

impl CellIndex {
    fn full(&self) -> u64 {
        if self.cells.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.cells.len()) - 1
        }
    }

    fn set(&self, mask: u64) -> Result<ClopenSet> {
        let chosen = self.cells.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, c)| c.clone());
        Ok(ClopenSet::from_cylinders(self.arity, chosen)?)
    }

    fn mask(&self, s: &ClopenSet) -> u64 {
        self.cells.iter().enumerate().filter(|(_, c)| s.covers_cylinder(c)).fold(0, |m, (i, _)| m | 1 << i)
    }

    fn expect(&self, s: &ClopenSet, mask: u64, what: &str) -> Result<()> {
        check(self.mask(s) == mask, || format!("{what} = {s} disagrees with the cell oracle"))
    }
}

fn unary(ix: &CellIndex, a: u64) -> Result<String> {
    let x = ix.set(a)?;
    check(ix.mask(&x) == a, || format!("{x} does not round-trip through cells"))?;
    let xc = x.complement();
    ix.expect(&xc, !a & ix.full(), "complement")?;
    check(xc.complement() == x, || format!("complement of {x} is not an involution"))?;
    check(x.intersect(&xc)?.is_empty(), || format!("{x} meets its complement"))?;
    check(x.union(&xc)?.is_full(), || format!("{x} and its complement do not cover"))?;
    Ok(format!("{x}"))
}

fn de_morgan(ix: &CellIndex, a: u64, b: u64) -> Result<String> {
    let (x, y) = (ix.set(a)?, ix.set(b)?);
    let (u, i) = (x.union(&y)?, x.intersect(&y)?);
    ix.expect(&u, a | b, "union")?;
    ix.expect(&i, a & b, "intersection")?;
    ix.expect(&x.minus(&y)?, a & !b, "difference")?;
    let (xc, yc) = (x.complement(), y.complement());
    check(u.complement() == xc.intersect(&yc)?, || format!("(X ∪ Y)^c ≠ X^c ∩ Y^c for X = {x}, Y = {y}"))?;
    check(i.complement() == xc.union(&yc)?, || format!("(X ∩ Y)^c ≠ X^c ∪ Y^c for X = {x}, Y = {y}"))?;
    Ok(format!("X = {x}, Y = {y}"))
}

fn absorption(ix: &CellIndex, a: u64, b: u64) -> Result<String> {
    let (x, y) = (ix.set(a)?, ix.set(b)?);
    check(x.union(&x.intersect(&y)?)? == x, || format!("X ∪ (X ∩ Y) ≠ X for X = {x}, Y = {y}"))?;
    check(x.intersect(&x.union(&y)?)? == x, || format!("X ∩ (X ∪ Y) ≠ X for X = {x}, Y = {y}"))?;
    Ok(format!("X = {x}, Y = {y}"))
}

fn random_mask(ix: &CellIndex, rng: &mut ChaCha8Rng) -> u64 {
    rng.gen::<u64>() & ix.full()
}

fn one_set(id: String, ix: &CellIndex, budget: usize, seed: u64, max_sets: u64) -> ConditionResult {
    let count = 1u64.checked_shl(ix.cells.len() as u32).filter(|&c| c <= max_sets);
    match count {
        Some(count) => {
            let outcomes = (0..count).into_par_iter().map(|a| unary(ix, a)).collect();
            ConditionResult { exhaustive: true, ..collect(&id, outcomes) }
        }
        None => run_condition(&id, budget, seed, |rng| unary(ix, random_mask(ix, rng))),
    }
}

fn two_sets<F>(id: String, ix: &CellIndex, budget: usize, seed: u64, max_pairs: u64, f: F) -> ConditionResult
where
    F: Fn(&CellIndex, u64, u64) -> Result<String> + Sync,
{
    let count = 1u64.checked_shl(2 * ix.cells.len() as u32).filter(|&c| c <= max_pairs);
    match count {
        Some(_) => {
            let sets = 1u64 << ix.cells.len();
            let outcomes = (0..sets)
                .into_par_iter()
                .flat_map_iter(|a| (0..sets).map(move |b| (a, b)))
                .map(|(a, b)| f(ix, a, b))
                .collect();
            ConditionResult { exhaustive: true, ..collect(&id, outcomes) }
        }
        None => run_condition(&id, budget, seed, |rng| {
            let a = random_mask(ix, rng);
            f(ix, a, random_mask(ix, rng))
        }),
    }
}

/// Complement, De Morgan and absorption laws for every `V_n(r)` forest
/// with `n ∈ {2, 3}`, `r ∈ {1, 2}`, cross-checked against cell bitmasks at
/// the configured depth. Enumeration is exhaustive within the configured
/// caps and seeded sampling with `budget` samples beyond them; each
/// condition records which.
pub fn run_clopen_algebra(config: &ClopenAlgebraConfig, budget: usize, seed: u64) -> Result<SuiteReport> {
    let mut conditions = Vec::new();
    for (n, r) in CLOPEN_ARITIES {
        let arity = Arity::new(n, r)?;
        let ix = CellIndex { arity, cells: cells(arity, config.depth) };
        if ix.cells.len() > 64 {
            return Err(super::CriterionError::NotAdmissible(format!(
                "{} cells at depth {} exceed the 64-cell oracle",
                ix.cells.len(),
                config.depth
            )));
        }
        let tag = format!("({n},{r})");
        conditions.push(one_set(format!("complement {tag}"), &ix, budget, seed, config.max_sets));
        conditions.push(two_sets(format!("de-morgan {tag}"), &ix, budget, seed, config.max_pairs, de_morgan));
        conditions.push(two_sets(format!("absorption {tag}"), &ix, budget, seed, config.max_pairs, absorption));
    }
    let family = Family::V { n: 2, r: 1 };
    let mut rep = report("clopen-algebra", &family, seed, budget, conditions);
    rep.family = format!("V_n(r), n in {{2,3}}, r in {{1,2}}, depth {}", config.depth);
    Ok(rep)
}

/// Associativity, inverses, identity and canonical-form checks on random
/// elements, each cross-checked pointwise.
pub fn run_group_laws(family: &Family, budget: usize, seed: u64) -> Result<SuiteReport> {
    let conditions = match family.space()? {
        Space::V(a) => cantor_laws::<VElement>(&a, budget, seed, |g| {
            let back = VElement::parse(g.arity(), &g.to_string())?;
            check(back == *g, || format!("{g} does not survive a text round trip"))
        }),
        Space::Twisted(s) => cantor_laws::<TwistedElement>(&s, budget, seed, |_| Ok(())),
        Space::Circle => circle_laws(budget, seed),
    };
    Ok(report("group-laws", family, seed, budget, conditions))
}

fn pointwise<G: CantorGroup>(lhs: &G, g: &G, h: &G, rng: &mut ChaCha8Rng) -> Result<()> {
    let space = g.space();
    let full = ClopenSet::full(G::clopen_arity(&space));
    for p in sample_points(&full, G::point_dims(&space), rng, 12) {
        let direct = g.apply_point(&h.apply_point(&p)?)?;
        check(lhs.apply_point(&p)? == direct, || format!("composite disagrees with g(h(p)) at {p}"))?;
    }
    Ok(())
}

fn cantor_laws<G: CantorGroup>(
    space: &G::Space,
    budget: usize,
    seed: u64,
    round_trip: impl Fn(&G) -> Result<()> + Sync,
) -> Vec<ConditionResult> {
    let draw = |rng: &mut ChaCha8Rng| G::random(space, rng, ELEMENT_SIZE);
    vec![
        run_condition("associativity", budget, seed, |rng| {
            let (g, h, k) = (draw(rng), draw(rng), draw(rng));
            let left = g.compose(&h)?.compose(&k)?;
            check(left == g.compose(&h.compose(&k)?)?, || format!("(gh)k ≠ g(hk) for {g}, {h}, {k}"))?;
            pointwise(&left, &g.compose(&h)?, &k, rng)?;
            Ok(format!("({g})({h})({k}) = {left}"))
        }),
        run_condition("inverse", budget, seed, |rng| {
            let g = draw(rng);
            let inv = g.inverse();
            check(g.compose(&inv)?.is_identity(), || format!("g g^-1 ≠ 1 for {g}"))?;
            check(inv.compose(&g)?.is_identity(), || format!("g^-1 g ≠ 1 for {g}"))?;
            check(inv.inverse() == g, || format!("(g^-1)^-1 ≠ g for {g}"))?;
            Ok(format!("({g})^-1 = {inv}"))
        }),
        run_condition("identity", budget, seed, |rng| {
            let g = draw(rng);
            let e = G::identity(space);
            check(g.compose(&e)? == g && e.compose(&g)? == g, || format!("identity law fails for {g}"))?;
            Ok(format!("{g}"))
        }),
        run_condition("canonical-form", budget, seed, |rng| {
            let (g, h) = (draw(rng), draw(rng));
            let detour = g.compose(&h)?.compose(&h.inverse())?;
            check(detour == g, || format!("g h h^-1 ≠ g for {g}, {h}"))?;
            pointwise(&g.compose(&h)?, &g, &h, rng)?;
            round_trip(&g)?;
            Ok(format!("{g}"))
        }),
    ]
}

fn random_point(rng: &mut ChaCha8Rng) -> Dyadic {
    Dyadic::new(rng.gen_range(0..1i64 << 12), 12)
}

fn circle_pointwise(lhs: &CircleMap, g: &CircleMap, h: &CircleMap, rng: &mut ChaCha8Rng) -> Result<()> {
    for _ in 0..12 {
        let x = random_point(rng);
        check(lhs.eval(&x) == g.eval(&h.eval(&x)), || format!("composite disagrees with g(h(x)) at {x}"))?;
    }
    Ok(())
}

fn circle_laws(budget: usize, seed: u64) -> Vec<ConditionResult> {
    let draw = |rng: &mut ChaCha8Rng| CircleMap::random(rng, ELEMENT_SIZE);
    vec![
        run_condition("associativity", budget, seed, |rng| {
            let (g, h, k) = (draw(rng), draw(rng), draw(rng));
            let left = g.compose(&h).compose(&k);
            check(left == g.compose(&h.compose(&k)), || format!("(gh)k ≠ g(hk) for {g}, {h}, {k}"))?;
            circle_pointwise(&left, &g.compose(&h), &k, rng)?;
            Ok(format!("({g})({h})({k}) = {left}"))
        }),
        run_condition("inverse", budget, seed, |rng| {
            let g = draw(rng);
            let inv = g.inverse();
            check(g.compose(&inv).is_identity() && inv.compose(&g).is_identity(), || {
                format!("inverse law fails for {g}")
            })?;
            check(inv.inverse() == g, || format!("(g^-1)^-1 ≠ g for {g}"))?;
            Ok(format!("({g})^-1 = {inv}"))
        }),
        run_condition("identity", budget, seed, |rng| {
            let g = draw(rng);
            let e = CircleMap::identity();
            check(g.compose(&e) == g && e.compose(&g) == g, || format!("identity law fails for {g}"))?;
            Ok(format!("{g}"))
        }),
        run_condition("canonical-form", budget, seed, |rng| {
            let (g, h) = (draw(rng), draw(rng));
            check(g.compose(&h).compose(&h.inverse()) == g, || format!("g h h^-1 ≠ g for {g}, {h}"))?;
            circle_pointwise(&g.compose(&h), &g, &h, rng)?;
            let rebuilt = CircleMap::from_points(g.knots().to_vec())?;
            check(rebuilt == g, || format!("{g} is not rebuilt from its knots"))?;
            Ok(format!("{g}"))
        }),
    ]
}
