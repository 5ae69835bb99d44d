//! Twisted pattern pairs for `SV_Γ` with a finite index set `S`; `Γ = 1`
//! gives the Brin–Thompson groups `sV`.
//!
//! Clopen sets of `C^S` are represented through the interleaving of
//! [`crate::cantor::Brick`], so they are ordinary binary [`ClopenSet`]s.

use super::{CantorGroup, CantorPoint, ElementError, Result};
use crate::cantor::{normalize, Arity, Brick, BrickPattern, ClopenSet, Cylinder};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

/// A permutation of `{0, .., d-1}`, stored as its list of images.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct Perm(Vec<u8>);

impl Perm {
    pub fn identity(d: usize) -> Self {
        Perm((0..d as u8).collect())
    }

    pub fn new(images: Vec<u8>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i as usize >= images.len() || std::mem::replace(&mut seen[i as usize], true) {
                return Err(ElementError::BadPermutation(format!("{images:?}")));
            }
        }
        Ok(Perm(images))
    }

    /// The cycle `0 -> 1 -> ... -> d-1 -> 0`.
    pub fn cycle(d: usize) -> Self {
        Perm((0..d).map(|i| ((i + 1) % d) as u8).collect())
    }

    pub fn transposition(d: usize, a: usize, b: usize) -> Self {
        let mut p = Perm::identity(d);
        p.0.swap(a, b);
        p
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, s: usize) -> usize {
        self.0[s] as usize
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u8;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    pub fn images(&self) -> &[u8] {
        &self.0
    }
}

impl TryFrom<Vec<u8>> for Perm {
    type Error = ElementError;
    fn try_from(v: Vec<u8>) -> Result<Self> {
        Perm::new(v)
    }
}

impl From<Perm> for Vec<u8> {
    fn from(p: Perm) -> Self {
        p.0
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

/// A finite permutation group given by generators, with its elements listed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGroup {
    dims: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
}

impl PermGroup {
    pub fn generated_by(dims: usize, generators: Vec<Perm>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.len() != dims) {
            return Err(ElementError::BadPermutation(format!("{g} has wrong degree")));
        }
        let mut seen: BTreeSet<Perm> = BTreeSet::new();
        let mut queue = VecDeque::from([Perm::identity(dims)]);
        while let Some(p) = queue.pop_front() {
            if !seen.insert(p.clone()) {
                continue;
            }
            for g in &generators {
                let q = g.compose(&p);
                if !seen.contains(&q) {
                    queue.push_back(q);
                }
            }
        }
        Ok(PermGroup { dims, generators, elements: seen.into_iter().collect() })
    }

    pub fn trivial(dims: usize) -> Self {
        PermGroup::generated_by(dims, Vec::new()).expect("no generators")
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.elements.binary_search(p).is_ok()
    }
}

/// The space `C^S`, `S = {0, .., dims-1}`, with the twist group `Γ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistSpace {
    group: Arc<PermGroup>,
}

impl TwistSpace {
    pub fn new(group: PermGroup) -> Self {
        assert!(group.dims >= 1, "need at least one coordinate");
        TwistSpace { group: Arc::new(group) }
    }

    /// `sV`: no twists.
    pub fn brin(dims: usize) -> Self {
        TwistSpace::new(PermGroup::trivial(dims))
    }

    pub fn dims(&self) -> usize {
        self.group.dims
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }
}

/// `B(ψ) → B(φ)`, `ψ(t)κ(t) ↦ φ(s)κ(γ⁻¹s)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwistPiece {
    pub domain: Brick,
    pub codomain: Brick,
    pub twist: Perm,
}

impl TwistPiece {
    /// Image of a sub-brick `χ ⊆ domain`.
    fn map_brick(&self, chi: &Brick) -> Brick {
        let d = chi.dims();
        let words = (0..d)
            .map(|s| {
                let t = self.twist.inverse().apply(s);
                let mut w = self.codomain.word(s).to_vec();
                w.extend_from_slice(&chi.word(t)[self.domain.word(t).len()..]);
                w
            })
            .collect();
        Brick::new(words).expect("binary words")
    }

    fn restrict(&self, chi: &Brick) -> Option<TwistPiece> {
        let sub = self.domain.intersect(chi)?;
        Some(TwistPiece { codomain: self.map_brick(&sub), domain: sub, twist: self.twist.clone() })
    }

    fn is_identity(&self) -> bool {
        self.domain == self.codomain && self.twist.is_identity()
    }
}

/// An element of `SV_Γ`: a bijection between two brick patterns with a twist
/// per piece. Equality is decided exactly (`g h⁻¹` reduces to identity
/// pieces), not syntactically.
#[derive(Debug, Clone)]
pub struct TwistedElement {
    space: TwistSpace,
    pieces: Vec<TwistPiece>,
}

impl TwistedElement {
    pub fn from_pieces(space: &TwistSpace, pieces: Vec<TwistPiece>) -> Result<Self> {
        let d = space.dims();
        for p in &pieces {
            if p.domain.dims() != d || p.codomain.dims() != d || p.twist.len() != d {
                return Err(ElementError::SpaceMismatch);
            }
            if !space.group.contains(&p.twist) {
                return Err(ElementError::BadPermutation(format!("{} not in the group", p.twist)));
            }
        }
        BrickPattern::new(d, pieces.iter().map(|p| p.domain.clone()).collect())?;
        BrickPattern::new(d, pieces.iter().map(|p| p.codomain.clone()).collect())?;
        Ok(TwistedElement { space: space.clone(), pieces: reduce(pieces) })
    }

    pub fn pieces(&self) -> &[TwistPiece] {
        &self.pieces
    }

    fn check_space(&self, other: &TwistSpace) -> Result<()> {
        if self.space != *other {
            return Err(ElementError::SpaceMismatch);
        }
        Ok(())
    }

    fn restrict_into(&self, set: &ClopenSet, out: &mut Vec<TwistPiece>) {
        let d = self.space.dims();
        for x in set.cylinders() {
            let bx = Brick::from_interleaved(x, d);
            out.extend(self.pieces.iter().filter_map(|p| p.restrict(&bx)));
        }
    }
}

/// Merge `ψ·(s:0), ψ·(s:1)` onto `φ·(γs:0), φ·(γs:1)` with equal twists,
/// until nothing merges.
fn reduce(pieces: Vec<TwistPiece>) -> Vec<TwistPiece> {
    let mut live: HashMap<Brick, TwistPiece> = pieces.into_iter().map(|p| (p.domain.clone(), p)).collect();
    let mut work: Vec<Brick> = live.keys().cloned().collect();
    work.sort();
    while let Some(key) = work.pop() {
        let Some(p) = live.get(&key) else { continue };
        let d = key.dims();
        let mut merged = None;
        for s in 0..d {
            let w = key.word(s);
            let Some(&last) = w.last() else { continue };
            let mut sib_words = key.words().to_vec();
            *sib_words[s].last_mut().expect("nonempty") = 1 - last;
            let sib_key = Brick::new(sib_words).expect("binary");
            let Some(q) = live.get(&sib_key) else { continue };
            if q.twist != p.twist {
                continue;
            }
            let gs = p.twist.apply(s);
            let (pc, qc) = (p.codomain.word(gs), q.codomain.word(gs));
            if pc.last() != Some(&last) || qc.last() != Some(&(1 - last)) {
                continue;
            }
            let mut pc_words = p.codomain.words().to_vec();
            *pc_words[gs].last_mut().expect("nonempty") = 1 - last;
            if pc_words != q.codomain.words() {
                continue;
            }
            let mut dom = key.words().to_vec();
            dom[s].pop();
            let mut cod = p.codomain.words().to_vec();
            cod[gs].pop();
            merged = Some((
                sib_key,
                TwistPiece {
                    domain: Brick::new(dom).expect("binary"),
                    codomain: Brick::new(cod).expect("binary"),
                    twist: p.twist.clone(),
                },
            ));
            break;
        }
        if let Some((sib, piece)) = merged {
            live.remove(&key);
            live.remove(&sib);
            work.push(piece.domain.clone());
            live.insert(piece.domain.clone(), piece);
        }
    }
    let mut out: Vec<TwistPiece> = live.into_values().collect();
    out.sort();
    out
}

fn random_bricks<R: Rng>(dims: usize, k: usize, rng: &mut R) -> Vec<Brick> {
    let mut bricks = vec![Brick::whole(dims)];
    while bricks.len() < k {
        let i = rng.gen_range(0..bricks.len());
        let s = rng.gen_range(0..dims);
        let b = bricks.swap_remove(i);
        bricks.push(b.extended(s, 0));
        bricks.push(b.extended(s, 1));
    }
    bricks.sort();
    bricks
}

impl PartialEq for TwistedElement {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space
            && self.compose(&other.inverse()).map(|e| e.pieces.iter().all(TwistPiece::is_identity)).unwrap_or(false)
    }
}

impl CantorGroup for TwistedElement {
    type Space = TwistSpace;

    fn space(&self) -> TwistSpace {
        self.space.clone()
    }

    fn clopen_arity(_: &TwistSpace) -> Arity {
        Arity::BINARY
    }

    fn point_dims(space: &TwistSpace) -> usize {
        space.dims()
    }

    fn identity(space: &TwistSpace) -> Self {
        let d = space.dims();
        let whole = Brick::whole(d);
        TwistedElement {
            space: space.clone(),
            pieces: vec![TwistPiece { domain: whole.clone(), codomain: whole, twist: Perm::identity(d) }],
        }
    }

    fn compose(&self, h: &Self) -> Result<Self> {
        self.check_space(&h.space)?;
        let d = self.space.dims();
        let mut out = Vec::new();
        for hp in &h.pieces {
            for gp in &self.pieces {
                let Some(chi) = hp.codomain.intersect(&gp.domain) else { continue };
                let gamma = &hp.twist;
                let delta_inv = gp.twist.inverse();
                let psi: Vec<Vec<u8>> = (0..d)
                    .map(|t| {
                        let gt = gamma.apply(t);
                        let mut w = hp.domain.word(t).to_vec();
                        w.extend_from_slice(&chi.word(gt)[hp.codomain.word(gt).len()..]);
                        w
                    })
                    .collect();
                let beta: Vec<Vec<u8>> = (0..d)
                    .map(|s| {
                        let u = delta_inv.apply(s);
                        let mut w = gp.codomain.word(s).to_vec();
                        w.extend_from_slice(&chi.word(u)[gp.domain.word(u).len()..]);
                        w
                    })
                    .collect();
                out.push(TwistPiece {
                    domain: Brick::new(psi).expect("binary"),
                    codomain: Brick::new(beta).expect("binary"),
                    twist: gp.twist.compose(gamma),
                });
            }
        }
        Ok(TwistedElement { space: self.space.clone(), pieces: reduce(out) })
    }

    fn inverse(&self) -> Self {
        let pieces = self
            .pieces
            .iter()
            .map(|p| TwistPiece { domain: p.codomain.clone(), codomain: p.domain.clone(), twist: p.twist.inverse() })
            .collect();
        TwistedElement { space: self.space.clone(), pieces: reduce(pieces) }
    }

    fn image_clopen(&self, set: &ClopenSet) -> Result<ClopenSet> {
        if set.arity() != Arity::BINARY {
            return Err(ElementError::SpaceMismatch);
        }
        let mut sub = Vec::new();
        self.restrict_into(set, &mut sub);
        let cyls = sub.iter().flat_map(|p| p.codomain.to_clopen().cylinders().to_vec()).collect();
        Ok(ClopenSet::from_valid(Arity::BINARY, normalize(Arity::BINARY, cyls)))
    }

    fn fixed_clopen(&self) -> ClopenSet {
        let cyls = self
            .pieces
            .iter()
            .filter(|p| p.is_identity())
            .flat_map(|p| p.domain.to_clopen().cylinders().to_vec())
            .collect();
        ClopenSet::from_valid(Arity::BINARY, normalize(Arity::BINARY, cyls))
    }

    fn apply_point(&self, p: &CantorPoint) -> Result<CantorPoint> {
        let d = self.space.dims();
        if p.coords.len() != d || p.root != 0 {
            return Err(ElementError::PointOutsideSpace);
        }
        let piece = self
            .pieces
            .iter()
            .find(|q| (0..d).all(|s| p.coords[s].starts_with(q.domain.word(s))))
            .ok_or(ElementError::PointOutsideSpace)?;
        let inv = piece.twist.inverse();
        let coords = (0..d)
            .map(|s| {
                let t = inv.apply(s);
                p.coords[t].shift(piece.domain.word(t).len()).prepend(piece.codomain.word(s))
            })
            .collect();
        Ok(CantorPoint::product(coords))
    }

    fn from_cylinder_bijection(space: &TwistSpace, pairs: &[(Cylinder, Cylinder)]) -> Result<Self> {
        let d = space.dims();
        let pieces = pairs
            .iter()
            .map(|(a, b)| TwistPiece {
                domain: Brick::from_interleaved(a, d),
                codomain: Brick::from_interleaved(b, d),
                twist: Perm::identity(d),
            })
            .collect();
        TwistedElement::from_pieces(space, pieces)
    }

    fn glue(space: &TwistSpace, pieces: &[(ClopenSet, Self)]) -> Result<Self> {
        let d = space.dims();
        let mut covered = ClopenSet::empty(Arity::BINARY);
        let mut out = Vec::new();
        for (i, (set, g)) in pieces.iter().enumerate() {
            g.check_space(space)?;
            if !covered.is_disjoint(set)? {
                return Err(ElementError::Overlap);
            }
            if g.image_clopen(set)? != *set {
                return Err(ElementError::NotInvariant(i));
            }
            covered = covered.union(set)?;
            g.restrict_into(set, &mut out);
        }
        for c in covered.complement().cylinders() {
            let b = Brick::from_interleaved(c, d);
            out.push(TwistPiece { domain: b.clone(), codomain: b, twist: Perm::identity(d) });
        }
        TwistedElement::from_pieces(space, out)
    }

    fn random<R: Rng>(space: &TwistSpace, rng: &mut R, size: usize) -> Self {
        if size <= 1 {
            return TwistedElement::identity(space);
        }
        let d = space.dims();
        let k = rng.gen_range(1..=size);
        let dom = random_bricks(d, k, rng);
        let mut cod = random_bricks(d, k, rng);
        cod.shuffle(rng);
        let elems = space.group.elements();
        let pieces = dom
            .into_iter()
            .zip(cod)
            .map(|(a, b)| TwistPiece { domain: a, codomain: b, twist: elems[rng.gen_range(0..elems.len())].clone() })
            .collect();
        TwistedElement { space: space.clone(), pieces: reduce(pieces) }
    }

    fn piece_count(&self) -> usize {
        self.pieces.len()
    }
}

impl fmt::Display for TwistedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.pieces.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}->{}", p.domain, p.codomain)?;
            if !p.twist.is_identity() {
                write!(f, "@{}", p.twist)?;
            }
        }
        write!(f, "}}")
    }
}

/// Serialized form: generators of `Γ`, domain bricks, codomain bricks in the
/// order of `sigma`, and one twist label per domain brick.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistedText {
    pub dims: usize,
    pub generators: Vec<Perm>,
    pub domain: Vec<String>,
    pub codomain: Vec<String>,
    pub sigma: Vec<usize>,
    pub twists: Vec<Perm>,
}

impl From<&TwistedElement> for TwistedText {
    fn from(g: &TwistedElement) -> Self {
        let mut codomain: Vec<Brick> = g.pieces.iter().map(|p| p.codomain.clone()).collect();
        codomain.sort();
        TwistedText {
            dims: g.space.dims(),
            generators: g.space.group.generators.clone(),
            domain: g.pieces.iter().map(|p| p.domain.to_string()).collect(),
            sigma: g.pieces.iter().map(|p| codomain.binary_search(&p.codomain).expect("member")).collect(),
            codomain: codomain.iter().map(Brick::to_string).collect(),
            twists: g.pieces.iter().map(|p| p.twist.clone()).collect(),
        }
    }
}

impl TryFrom<TwistedText> for TwistedElement {
    type Error = ElementError;

    fn try_from(t: TwistedText) -> Result<Self> {
        let space = TwistSpace::new(PermGroup::generated_by(t.dims, t.generators)?);
        let n = t.domain.len();
        if t.codomain.len() != n || t.sigma.len() != n || t.twists.len() != n {
            return Err(ElementError::NotABijection);
        }
        let cod: Vec<Brick> = t.codomain.iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
        let mut pieces = Vec::with_capacity(n);
        for ((dom, &j), twist) in t.domain.iter().zip(&t.sigma).zip(t.twists) {
            let codomain = cod.get(j).cloned().ok_or(ElementError::NotABijection)?;
            pieces.push(TwistPiece { domain: dom.parse()?, codomain, twist });
        }
        TwistedElement::from_pieces(&space, pieces)
    }
}

impl Serialize for TwistedElement {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        TwistedText::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TwistedElement {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let t = TwistedText::deserialize(deserializer)?;
        TwistedElement::try_from(t).map_err(serde::de::Error::custom)
    }
}
