//! Witnesses for groups of homeomorphisms of Cantor spaces.

use super::sampling::{cells, fit_residue, min_depth_for, residue};
use super::{check, CriterionError, Result};
use crate::cantor::{refine_to_count, tuple_admissible, Arity, ClopenSet, Cylinder};
use crate::elements::{agree_on, CantorGroup, CantorPoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn union_all(arity: Arity, sets: &[ClopenSet]) -> ClopenSet {
    sets.iter().fold(ClopenSet::empty(arity), |acc, s| acc.union(s).expect("same arity"))
}

fn singleton(arity: Arity, c: Cylinder) -> ClopenSet {
    ClopenSet::cylinder(arity, c).expect("valid cylinder")
}

/// An element `g` with `g src_i = dst_i` for every `i`.
///
/// Both tuples, together with the complements of their unions, are refined
/// to equal cylinder counts and matched piece by piece.
pub fn transitivity_witness<G: CantorGroup>(space: &G::Space, src: &[ClopenSet], dst: &[ClopenSet]) -> Result<G> {
    let arity = G::clopen_arity(space);
    if src.len() != dst.len() {
        return Err(CriterionError::LengthMismatch);
    }
    for (name, t) in [("source", src), ("target", dst)] {
        if t.iter().any(|s| s.arity() != arity) || !tuple_admissible(t) {
            return Err(CriterionError::NotAdmissible(format!("{name} tuple")));
        }
    }
    let mut src_groups = src.to_vec();
    src_groups.push(union_all(arity, src).complement());
    let mut dst_groups = dst.to_vec();
    dst_groups.push(union_all(arity, dst).complement());
    let step = arity.step();
    let mut pairs = Vec::new();
    for (index, (a, b)) in src_groups.iter().zip(&dst_groups).enumerate() {
        let (la, lb) = (a.len(), b.len());
        if la % step != lb % step {
            return Err(CriterionError::ResidueMismatch { index, src: la, dst: lb, step });
        }
        let k = la.max(lb);
        let pa = refine_to_count(arity, a.cylinders(), k)?;
        let pb = refine_to_count(arity, b.cylinders(), k)?;
        pairs.extend(pa.into_iter().zip(pb));
    }
    let g = G::from_cylinder_bijection(space, &pairs)?;
    for (i, (a, b)) in src.iter().zip(dst).enumerate() {
        check(g.image_clopen(a)? == *b, || format!("entry {i} not mapped onto its target"))?;
    }
    Ok(g)
}

/// Glue and verify: `b` agrees with `g_i` on `S_i` and is the identity
/// elsewhere.
pub fn glue<G: CantorGroup>(space: &G::Space, pieces: &[(ClopenSet, G)]) -> Result<G> {
    let b = G::glue(space, pieces)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    verify_glue(space, &b, pieces, &mut rng, 30)?;
    Ok(b)
}

/// Pointwise agreement on `points` samples per piece, identity off the
/// pieces, and agreement of images of every subcylinder of relative depth
/// at most 2 inside each piece.
pub fn verify_glue<G: CantorGroup, R: Rng>(
    space: &G::Space,
    b: &G,
    pieces: &[(ClopenSet, G)],
    rng: &mut R,
    points: usize,
) -> Result<()> {
    let arity = G::clopen_arity(space);
    let n = arity.n();
    let mut covered = ClopenSet::empty(arity);
    for (i, (set, g)) in pieces.iter().enumerate() {
        check(agree_on(b, g, set, rng, points)?, || format!("piece {i}: pointwise mismatch"))?;
        for c in set.cylinders() {
            let mut subs = vec![c.clone()];
            for d in 0..n {
                subs.push(c.child(d));
                subs.extend((0..n).map(|e| c.child(d).child(e)));
            }
            for s in subs {
                let one = singleton(arity, s);
                check(b.image_clopen(&one)? == g.image_clopen(&one)?, || {
                    format!("piece {i}: image mismatch on a subcylinder")
                })?;
            }
        }
        covered = covered.union(set)?;
    }
    let id = G::identity(space);
    check(agree_on(b, &id, &covered.complement(), rng, points)?, || "not the identity off the pieces".into())
}

/// A finite cover by proper clopen sets in which any two members have a
/// third member disjoint from both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverA {
    pub sets: Vec<ClopenSet>,
    third: Vec<Vec<usize>>,
}

impl CoverA {
    /// Designated `K` disjoint from members `i` and `j`.
    pub fn third(&self, i: usize, j: usize) -> usize {
        self.third[i][j]
    }

    pub fn member_containing(&self, p: &CantorPoint) -> Option<usize> {
        self.sets.iter().position(|s| crate::elements::point_in(s, p))
    }

    /// First member contained in `set`.
    pub fn member_inside(&self, set: &ClopenSet) -> Option<usize> {
        self.sets.iter().position(|s| s.is_subset(set).unwrap_or(false))
    }

    /// Exhaustive check of the cover invariants.
    pub fn verify(&self) -> Result<()> {
        let Some(first) = self.sets.first() else {
            return Err(CriterionError::InvalidCover("empty".into()));
        };
        let arity = first.arity();
        if !union_all(arity, &self.sets).is_full() {
            return Err(CriterionError::InvalidCover("union is not the whole space".into()));
        }
        if self.sets.iter().any(|s| !s.is_proper_nonempty()) {
            return Err(CriterionError::InvalidCover("member not proper nonempty".into()));
        }
        for i in 0..self.sets.len() {
            for j in 0..self.sets.len() {
                let k = self.third(i, j);
                let ij = self.sets[i].union(&self.sets[j])?;
                if !self.sets[k].is_disjoint(&ij)? {
                    return Err(CriterionError::InvalidCover(format!("third of ({i},{j}) meets them")));
                }
            }
        }
        Ok(())
    }
}

/// Seeds are the cylinders of the least depth with at least three of them;
/// they partition the space, so any third seed works as `K`.
pub fn build_cover_a(arity: Arity) -> CoverA {
    let depth = min_depth_for(arity, 3);
    let sets: Vec<ClopenSet> = cells(arity, depth).into_iter().map(|c| singleton(arity, c)).collect();
    let m = sets.len();
    let third =
        (0..m).map(|i| (0..m).map(|j| (0..m).find(|k| *k != i && *k != j).expect("m >= 3")).collect()).collect();
    let cover = CoverA { sets, third };
    debug_assert!(cover.verify().is_ok());
    cover
}

/// `g = factors[0] ∘ factors[1] ∘ ...`; factor `i` fixes cover member
/// `fixed_members[i]` pointwise.
#[derive(Debug, Clone)]
pub struct Decomposition<G> {
    pub factors: Vec<G>,
    pub fixed_members: Vec<usize>,
}

/// Write `g` as a product of at most three elements each fixing a member
/// of the cover pointwise, following the bounded generation argument.
pub fn decompose_a<G: CantorGroup>(g: &G, cover: &CoverA) -> Result<Decomposition<G>> {
    let space = g.space();
    let arity = G::clopen_arity(&space);
    let id = G::identity(&space);
    let dec = if g.is_identity() {
        Decomposition { factors: vec![id], fixed_members: vec![0] }
    } else {
        let x = CantorPoint::from_interleaved(0, &[], &[0], G::point_dims(&space));
        let y = g.apply_point(&x)?;
        let missing = || CriterionError::InvalidCover("point outside the cover".into());
        let i = cover.member_containing(&x).ok_or_else(missing)?;
        let j = cover.member_containing(&y).ok_or_else(missing)?;
        let k = cover.third(i, j);
        let (set_i, set_j, set_k) = (&cover.sets[i], &cover.sets[j], &cover.sets[k]);

        // A small neighbourhood of x inside I that g moves into J.
        let mut depth = 0;
        let parent = loop {
            let p = singleton(arity, Cylinder::new(0, vec![0; depth]));
            if p.is_subset(set_i)? && g.image_clopen(&p)?.is_subset(set_j)? {
                break p;
            }
            depth += 1;
        };
        let i_small = fit_residue(&parent, residue(set_j));

        let a0: G = transitivity_witness(&space, &[set_j.clone(), set_k.clone()], &[i_small.clone(), set_k.clone()])?;
        let b = G::glue(&space, &[(set_k.clone(), a0.clone())])?;
        let a = a0.compose(&b.inverse())?;

        let j_small = g.image_clopen(&i_small)?;
        let c0: G = transitivity_witness(&space, &[j_small, set_k.clone()], &[set_j.clone(), set_k.clone()])?;
        let c = c0.compose(&G::glue(&space, &[(set_k.clone(), c0.clone())])?.inverse())?;
        let cga = c.compose(g)?.compose(&a)?;
        let d = G::glue(&space, &[(set_j.clone(), cga)])?;
        let e = d.inverse().compose(&c)?;
        let ega = e.compose(g)?.compose(&a)?;
        Decomposition { factors: vec![e.inverse(), ega, a.inverse()], fixed_members: vec![k, j, k] }
    };
    check(dec.factors.len() <= 3, || "more than three factors".into())?;
    check(G::compose_all(&space, &dec.factors)? == *g, || "factors do not recompose".into())?;
    for (f, &m) in dec.factors.iter().zip(&dec.fixed_members) {
        check(cover.sets[m].is_subset(&f.fixed_clopen())?, || format!("factor does not fix cover member {m}"))?;
    }
    Ok(dec)
}

#[derive(Debug, Clone)]
pub struct Property2Witness<G> {
    pub g: G,
    pub h: G,
}

/// `g, h` such that `b1` commutes with `b1^g`, which commutes with `b1^h`,
/// which commutes with `b2`.
pub fn property2_witness<G: CantorGroup>(b1: &G, b2: &G) -> Result<Property2Witness<G>> {
    let space = b1.space();
    let arity = G::clopen_arity(&space);
    let f1 = b1.fixed_clopen();
    let f2 = b2.fixed_clopen();
    if f1.is_empty() {
        return Err(CriterionError::NotInB("b1"));
    }
    if f2.is_empty() {
        return Err(CriterionError::NotInB("b2"));
    }
    let id = G::identity(&space);
    let wit = if b1.is_identity() {
        Property2Witness { g: id.clone(), h: id }
    } else {
        let set_i = f1;
        let set_j = if f2.is_full() { singleton(arity, cells(arity, min_depth_for(arity, 2))[0].clone()) } else { f2 };
        let i_prime = set_i.complement();
        let mut p = set_i.cylinders()[0].clone();
        while set_j.is_subset(&singleton(arity, p.clone()))? {
            p = p.child(0);
        }
        let set_k = fit_residue(&singleton(arity, p), residue(&i_prime));
        let g: G = transitivity_witness(&space, std::slice::from_ref(&i_prime), std::slice::from_ref(&set_k))?;
        let set_l = fit_residue(&set_j.minus(&set_k)?, residue(&i_prime));
        let h: G = transitivity_witness(&space, &[i_prime], &[set_l])?;
        Property2Witness { g, h }
    };
    let bg = b1.conjugate_by(&wit.g)?;
    let bh = b1.conjugate_by(&wit.h)?;
    check(b1.commutes_with(&bg)?, || "b1 and b1^g do not commute".into())?;
    check(bg.commutes_with(&bh)?, || "b1^g and b1^h do not commute".into())?;
    check(bh.commutes_with(b2)?, || "b1^h and b2 do not commute".into())?;
    Ok(wit)
}

#[derive(Debug, Clone)]
pub struct WeakTriple<G> {
    pub m: ClopenSet,
    pub n: ClopenSet,
    pub p: ClopenSet,
    pub b: G,
}

/// `(M, N, P)` with `(gM, hN, P)` admissible and `b` sending the latter back
/// to the former. Searches cylinders up to `max_depth`.
pub fn weak_triple_witness<G: CantorGroup>(g: &G, h: &G, max_depth: usize) -> Result<WeakTriple<G>> {
    let space = g.space();
    let arity = G::clopen_arity(&space);
    for depth in min_depth_for(arity, 4)..=max_depth {
        let sets: Vec<ClopenSet> = cells(arity, depth).into_iter().map(|c| singleton(arity, c)).collect();
        let gi: Vec<ClopenSet> = sets.iter().map(|s| g.image_clopen(s)).collect::<Result<_, _>>()?;
        let hi: Vec<ClopenSet> = sets.iter().map(|s| h.image_clopen(s)).collect::<Result<_, _>>()?;
        for i in 0..sets.len() {
            for j in (0..sets.len()).filter(|&j| j != i) {
                if !gi[i].is_disjoint(&hi[j])? {
                    continue;
                }
                for k in (0..sets.len()).filter(|&k| k != i && k != j) {
                    let moved = [gi[i].clone(), hi[j].clone(), sets[k].clone()];
                    if !tuple_admissible(&moved) {
                        continue;
                    }
                    let home = [sets[i].clone(), sets[j].clone(), sets[k].clone()];
                    let b: G = transitivity_witness(&space, &moved, &home)?;
                    check(b.compose(g)?.image_clopen(&home[0])? == home[0], || "bgM != M".into())?;
                    check(b.compose(h)?.image_clopen(&home[1])? == home[1], || "bhN != N".into())?;
                    check(b.image_clopen(&home[2])? == home[2], || "bP != P".into())?;
                    let [m, n, p] = home;
                    return Ok(WeakTriple { m, n, p, b });
                }
            }
        }
    }
    Err(CriterionError::Inconclusive(format!("no triple among cylinders of depth <= {max_depth}")))
}

#[derive(Debug, Clone)]
pub struct Property3Report<G> {
    pub triple: WeakTriple<G>,
    pub b: G,
    /// `f(g, h, I)` per cover member.
    pub conjugators: Vec<G>,
    /// Factor counts of each conjugator through elements fixing a cover
    /// member; each `f` lies in a product of at most three cyclic groups.
    pub conjugator_factors: Vec<usize>,
    pub checks: usize,
    pub failures: Vec<String>,
}

/// Builds `b` and the conjugators `f`, then checks that `a^f b`, `a^f b g`
/// and `a^f b h` fix a nonempty clopen set for every sampled `a`.
pub fn property3_witness<G: CantorGroup>(g: &G, h: &G, cover: &CoverA, sample_a: &[G]) -> Result<Property3Report<G>> {
    let space = g.space();
    let arity = G::clopen_arity(&space);
    let triple = weak_triple_witness(g, h, 6)?;
    let (m, n, p, b0) = (&triple.m, &triple.n, &triple.p, &triple.b);
    let c0 = G::glue(&space, &[(p.clone(), b0.clone()), (m.clone(), b0.compose(g)?)])?;
    let c1 = G::glue(&space, &[(n.clone(), b0.compose(h)?)])?;
    let b = c1.inverse().compose(&c0.inverse())?.compose(b0)?;
    check(p.is_subset(&b.fixed_clopen())?, || "b is not the identity on P".into())?;
    check(m.is_subset(&b.compose(g)?.fixed_clopen())?, || "bg is not the identity on M".into())?;
    check(n.is_subset(&b.compose(h)?.fixed_clopen())?, || "bh is not the identity on N".into())?;

    let j_base = union_all(arity, &[m.clone(), n.clone(), p.clone()]);
    let y = j_base.complement();
    let mut conjugators = Vec::new();
    let mut conjugator_factors = Vec::new();
    for set_i in &cover.sets {
        let target = residue(set_i);
        let set_j = if residue(&j_base) == target % arity.step() {
            j_base.clone()
        } else {
            let need = (target + arity.step() - residue(&j_base)) % arity.step();
            let extra = fit_residue(&singleton(arity, y.cylinders()[0].clone()), need);
            j_base.union(&extra)?
        };
        let f: G = transitivity_witness(&space, std::slice::from_ref(set_i), &[set_j])?;
        conjugator_factors.push(decompose_a(&f, cover)?.factors.len());
        conjugators.push(f);
    }

    let mut checks = 0;
    let mut failures = Vec::new();
    for (idx, a) in sample_a.iter().enumerate() {
        let member = cover.member_inside(&a.fixed_clopen()).ok_or(CriterionError::NotInB("a"))?;
        let af = a.conjugate_by(&conjugators[member])?;
        let afb = af.compose(&b)?;
        for (label, prod) in [("a^f b", afb.clone()), ("a^f b g", afb.compose(g)?), ("a^f b h", afb.compose(h)?)] {
            checks += 1;
            if prod.fixed_clopen().is_empty() {
                failures.push(format!("sample {idx}: {label} fixes no clopen set"));
            }
        }
    }
    Ok(Property3Report { triple, b, conjugators, conjugator_factors, checks, failures })
}

/// `f` with `f u ⊆ v`: `u` itself encloses `u`, a residue-compatible
/// `J ⊆ v` is enclosed by `v`, and transitivity sends one to the other.
pub fn extremely_proximal_witness<G: CantorGroup>(space: &G::Space, u: &ClopenSet, v: &ClopenSet) -> Result<G> {
    if !u.is_proper_nonempty() || !v.is_proper_nonempty() {
        return Err(CriterionError::NotAdmissible("U and V must be proper and nonempty".into()));
    }
    if u.is_subset(v)? {
        return Ok(G::identity(space));
    }
    let j = fit_residue(v, residue(u));
    let f: G = transitivity_witness(space, std::slice::from_ref(u), &[j])?;
    check(f.image_clopen(u)?.is_subset(v)?, || "fU is not inside V".into())?;
    Ok(f)
}
