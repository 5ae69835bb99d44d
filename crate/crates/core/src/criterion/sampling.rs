//! Random inputs for the sweeps.

use crate::cantor::{Arity, ClopenSet, Cylinder};
use crate::elements::CantorGroup;
use rand::seq::SliceRandom;
use rand::Rng;

/// Number of cylinders mod `n - 1`; preserved by every element of `V_n(r)`.
pub fn residue(set: &ClopenSet) -> usize {
    set.len() % set.arity().step()
}

/// A nonempty subset of `set` with the given residue.
pub(crate) fn fit_residue(set: &ClopenSet, target: usize) -> ClopenSet {
    let a = set.arity();
    let step = a.step();
    if set.len() % step == target % step {
        return set.clone();
    }
    let t = if target.is_multiple_of(step) { step } else { target % step };
    let c = &set.cylinders()[0];
    ClopenSet::from_cylinders(a, (0..t as u8).map(|d| c.child(d))).expect("valid children")
}

pub(crate) fn cells(arity: Arity, depth: usize) -> Vec<Cylinder> {
    ClopenSet::full(arity).refine_to_depth(depth)
}

pub(crate) fn min_depth_for(arity: Arity, count: usize) -> usize {
    let mut d = 0;
    while (arity.r() as usize) * (arity.n() as usize).pow(d as u32) < count {
        d += 1;
    }
    d
}

/// A random member of `I^(m)` built from cells of a random small depth.
pub fn random_admissible_tuple<R: Rng>(arity: Arity, m: usize, rng: &mut R) -> Vec<ClopenSet> {
    let depth = min_depth_for(arity, m + 1) + rng.gen_range(0..=2);
    let mut cs = cells(arity, depth);
    cs.shuffle(rng);
    let mut owner: Vec<usize> = (0..=m).collect();
    owner.extend((m + 1..cs.len()).map(|_| rng.gen_range(0..=m)));
    (0..m)
        .map(|i| {
            let mine = cs.iter().zip(&owner).filter(|(_, o)| **o == i).map(|(c, _)| c.clone());
            ClopenSet::from_cylinders(arity, mine).expect("valid cells")
        })
        .collect()
}

fn random_refinement<R: Rng>(arity: Arity, cylinders: &[Cylinder], k: usize, rng: &mut R) -> Vec<Cylinder> {
    let mut pieces = cylinders.to_vec();
    while pieces.len() < k {
        let i = rng.gen_range(0..pieces.len());
        let c = pieces.swap_remove(i);
        pieces.extend(c.children(arity.n()));
    }
    pieces.sort();
    pieces
}

/// A random element acting as the identity off `set`.
pub fn random_supported_in<G: CantorGroup, R: Rng>(space: &G::Space, set: &ClopenSet, rng: &mut R, size: usize) -> G {
    let arity = G::clopen_arity(space);
    if set.is_empty() {
        return G::identity(space);
    }
    let base = set.len();
    let step = arity.step();
    let k = base + step * rng.gen_range(0..=size.saturating_sub(base) / step);
    let dom = random_refinement(arity, set.cylinders(), k, rng);
    let mut cod = random_refinement(arity, set.cylinders(), k, rng);
    cod.shuffle(rng);
    let mut pairs: Vec<(Cylinder, Cylinder)> = dom.into_iter().zip(cod).collect();
    pairs.extend(set.complement().cylinders().iter().map(|c| (c.clone(), c.clone())));
    G::from_cylinder_bijection(space, &pairs).expect("refinements of one set")
}
