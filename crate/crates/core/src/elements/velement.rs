//! Tree-pair diagrams for the Higman–Thompson groups `V_n(r)`.

use super::{CantorGroup, CantorPoint, ElementError, Result};
use crate::cantor::{normalize, Arity, ClopenSet, Cylinder, Pattern};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::fmt;

/// A bijection between two cylinder partitions, each domain cylinder mapped
/// onto its partner by prefix replacement.
///
/// Canonical form: pairs sorted by domain and no complete sibling family of
/// domains mapped in order onto a complete sibling family of codomains.
/// Reduced diagrams are unique, so `==` is equality of homeomorphisms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "VElementText", into = "VElementText")]
pub struct VElement {
    arity: Arity,
    pairs: Vec<(Cylinder, Cylinder)>,
}

impl VElement {
    /// Build from a domain/codomain pairing; both sides must be partitions.
    pub fn from_pairs(arity: Arity, pairs: Vec<(Cylinder, Cylinder)>) -> Result<Self> {
        let dom: Vec<Cylinder> = pairs.iter().map(|p| p.0.clone()).collect();
        let cod: Vec<Cylinder> = pairs.iter().map(|p| p.1.clone()).collect();
        Pattern::new(arity, dom)?;
        Pattern::new(arity, cod)?;
        Ok(VElement { arity, pairs: reduce(arity, pairs) })
    }

    /// Parse `0:00->0:0, 0:01->0:10, 0:1->0:11`.
    pub fn parse(arity: Arity, s: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for item in s.trim().trim_start_matches('{').trim_end_matches('}').split(',') {
            if item.trim().is_empty() {
                continue;
            }
            let (a, b) =
                item.split_once("->").ok_or_else(|| ElementError::Parse(format!("expected d->c, got {item:?}")))?;
            pairs.push((a.parse()?, b.parse()?));
        }
        VElement::from_pairs(arity, pairs)
    }

    pub fn arity(&self) -> Arity {
        self.arity
    }

    pub fn pairs(&self) -> &[(Cylinder, Cylinder)] {
        &self.pairs
    }

    pub fn domain(&self) -> Vec<Cylinder> {
        self.pairs.iter().map(|p| p.0.clone()).collect()
    }

    pub fn codomain(&self) -> Vec<Cylinder> {
        let mut c: Vec<Cylinder> = self.pairs.iter().map(|p| p.1.clone()).collect();
        c.sort();
        c
    }

    fn check_arity(&self, arity: Arity) -> Result<()> {
        if self.arity != arity {
            return Err(ElementError::SpaceMismatch);
        }
        Ok(())
    }

    /// Pairs of `self` restricted to the cylinder `x`.
    fn restrict_to(&self, x: &Cylinder, out: &mut Vec<(Cylinder, Cylinder)>) {
        let idx = self.pairs.partition_point(|p| p.0 <= *x);
        if idx > 0 {
            let (d, c) = &self.pairs[idx - 1];
            if d.contains(x) {
                out.push((x.clone(), c.extend(&x.word[d.depth()..])));
                return;
            }
        }
        let start = self.pairs.partition_point(|p| p.0 < *x);
        out.extend(self.pairs[start..].iter().take_while(|p| x.contains(&p.0)).cloned());
    }
}

/// Sort by domain and merge sibling blocks until none remain.
fn reduce(arity: Arity, mut pairs: Vec<(Cylinder, Cylinder)>) -> Vec<(Cylinder, Cylinder)> {
    pairs.sort();
    let n = arity.n() as usize;
    let mut stack: Vec<(Cylinder, Cylinder)> = Vec::with_capacity(pairs.len());
    for p in pairs {
        stack.push(p);
        loop {
            let len = stack.len();
            if len < n {
                break;
            }
            let family = &stack[len - n..];
            let (d0, c0) = &family[0];
            if d0.word.last() != Some(&0) || c0.word.last() != Some(&0) {
                break;
            }
            let (dl, cl) = (d0.depth() - 1, c0.depth() - 1);
            let ok = family.iter().enumerate().all(|(i, (d, c))| {
                d.root == d0.root
                    && c.root == c0.root
                    && d.depth() == dl + 1
                    && c.depth() == cl + 1
                    && d.word[..dl] == d0.word[..dl]
                    && c.word[..cl] == c0.word[..cl]
                    && d.word[dl] as usize == i
                    && c.word[cl] as usize == i
            });
            if !ok {
                break;
            }
            let d = Cylinder::new(d0.root, d0.word[..dl].to_vec());
            let c = Cylinder::new(c0.root, c0.word[..cl].to_vec());
            stack.truncate(len - n);
            stack.push((d, c));
        }
    }
    stack
}

fn random_partition<R: Rng>(arity: Arity, k: usize, rng: &mut R) -> Vec<Cylinder> {
    let mut leaves: Vec<Cylinder> = (0..arity.r()).map(Cylinder::root).collect();
    while leaves.len() < k {
        let i = rng.gen_range(0..leaves.len());
        let leaf = leaves.swap_remove(i);
        leaves.extend(leaf.children(arity.n()));
    }
    leaves.sort();
    leaves
}

impl CantorGroup for VElement {
    type Space = Arity;

    fn space(&self) -> Arity {
        self.arity
    }

    fn clopen_arity(space: &Arity) -> Arity {
        *space
    }

    fn point_dims(_: &Arity) -> usize {
        1
    }

    fn identity(space: &Arity) -> Self {
        let pairs = (0..space.r()).map(|i| (Cylinder::root(i), Cylinder::root(i))).collect();
        VElement { arity: *space, pairs }
    }

    fn compose(&self, h: &Self) -> Result<Self> {
        self.check_arity(h.arity)?;
        let inv = h.inverse();
        let mut out = Vec::with_capacity(self.pairs.len() + h.pairs.len());
        let mut scratch = Vec::new();
        for (dg, cg) in &self.pairs {
            // Pieces of h^{-1} on dg, i.e. the part of h landing in dg.
            scratch.clear();
            inv.restrict_to(dg, &mut scratch);
            for (c, d) in scratch.drain(..) {
                out.push((d, cg.extend(&c.word[dg.depth()..])));
            }
        }
        Ok(VElement { arity: self.arity, pairs: reduce(self.arity, out) })
    }

    fn inverse(&self) -> Self {
        let pairs = self.pairs.iter().map(|(d, c)| (c.clone(), d.clone())).collect();
        VElement { arity: self.arity, pairs: reduce(self.arity, pairs) }
    }

    fn image_clopen(&self, set: &ClopenSet) -> Result<ClopenSet> {
        self.check_arity(set.arity())?;
        let mut pieces = Vec::new();
        for x in set.cylinders() {
            self.restrict_to(x, &mut pieces);
        }
        let image = pieces.into_iter().map(|p| p.1).collect();
        Ok(ClopenSet::from_valid(self.arity, normalize(self.arity, image)))
    }

    fn fixed_clopen(&self) -> ClopenSet {
        let fixed = self.pairs.iter().filter(|(d, c)| d == c).map(|p| p.0.clone()).collect();
        ClopenSet::from_valid(self.arity, normalize(self.arity, fixed))
    }

    fn apply_point(&self, p: &CantorPoint) -> Result<CantorPoint> {
        if p.coords.len() != 1 || p.root >= self.arity.r() {
            return Err(ElementError::PointOutsideSpace);
        }
        let w = &p.coords[0];
        let (d, c) = self
            .pairs
            .iter()
            .find(|(d, _)| d.root == p.root && w.starts_with(&d.word))
            .ok_or(ElementError::PointOutsideSpace)?;
        Ok(CantorPoint::tree(c.root, w.shift(d.depth()).prepend(&c.word)))
    }

    fn from_cylinder_bijection(space: &Arity, pairs: &[(Cylinder, Cylinder)]) -> Result<Self> {
        VElement::from_pairs(*space, pairs.to_vec())
    }

    fn glue(space: &Arity, pieces: &[(ClopenSet, Self)]) -> Result<Self> {
        let mut covered = ClopenSet::empty(*space);
        let mut pairs = Vec::new();
        for (i, (set, g)) in pieces.iter().enumerate() {
            g.check_arity(*space)?;
            if !covered.is_disjoint(set)? {
                return Err(ElementError::Overlap);
            }
            if g.image_clopen(set)? != *set {
                return Err(ElementError::NotInvariant(i));
            }
            covered = covered.union(set)?;
            for x in set.cylinders() {
                g.restrict_to(x, &mut pairs);
            }
        }
        for c in covered.complement().cylinders() {
            pairs.push((c.clone(), c.clone()));
        }
        VElement::from_pairs(*space, pairs)
    }

    fn random<R: Rng>(space: &Arity, rng: &mut R, size: usize) -> Self {
        let r = space.r() as usize;
        let step = space.step();
        if size <= r {
            return VElement::identity(space);
        }
        let j = rng.gen_range(0..=(size - r) / step);
        let k = r + j * step;
        let dom = random_partition(*space, k, rng);
        let mut cod = random_partition(*space, k, rng);
        cod.shuffle(rng);
        let pairs = dom.into_iter().zip(cod).collect();
        VElement::from_pairs(*space, pairs).expect("random partitions are valid")
    }

    fn piece_count(&self) -> usize {
        self.pairs.len()
    }
}

impl fmt::Display for VElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (d, c)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{d}->{c}")?;
        }
        write!(f, "}}")
    }
}

/// Serialized form: sorted domain and codomain lists plus `sigma`, where
/// domain `i` maps to codomain `sigma[i]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VElementText {
    n: u32,
    r: u32,
    domain: Vec<String>,
    codomain: Vec<String>,
    sigma: Vec<usize>,
}

impl From<VElement> for VElementText {
    fn from(g: VElement) -> Self {
        let codomain = g.codomain();
        let sigma = g.pairs.iter().map(|(_, c)| codomain.binary_search(c).expect("codomain member")).collect();
        VElementText {
            n: g.arity.n() as u32,
            r: g.arity.r(),
            domain: g.pairs.iter().map(|p| p.0.to_string()).collect(),
            codomain: codomain.iter().map(Cylinder::to_string).collect(),
            sigma,
        }
    }
}

impl TryFrom<VElementText> for VElement {
    type Error = ElementError;

    fn try_from(t: VElementText) -> Result<Self> {
        let arity = Arity::new(t.n, t.r)?;
        if t.domain.len() != t.codomain.len() || t.sigma.len() != t.domain.len() {
            return Err(ElementError::NotABijection);
        }
        let cod: Vec<Cylinder> = t.codomain.iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
        let mut seen = vec![false; cod.len()];
        let mut pairs = Vec::with_capacity(cod.len());
        for (d, &j) in t.domain.iter().zip(&t.sigma) {
            if j >= cod.len() || std::mem::replace(&mut seen[j], true) {
                return Err(ElementError::NotABijection);
            }
            pairs.push((d.parse()?, cod[j].clone()));
        }
        VElement::from_pairs(arity, pairs)
    }
}
