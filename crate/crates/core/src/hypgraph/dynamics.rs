//! Finite-scale dynamics of graph maps: translation lengths and orbits of
//! commuting elliptic families.

use super::metric::DistanceMatrix;
use super::{HypError, Result};
use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// A partial vertex map, the finite stand-in for an isometry.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GraphMap {
    images: Vec<Option<usize>>,
}

impl GraphMap {
    pub fn new(images: Vec<Option<usize>>) -> Self {
        GraphMap { images }
    }

    pub fn total(images: Vec<usize>) -> Self {
        GraphMap { images: images.into_iter().map(Some).collect() }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> Option<usize>) -> Self {
        GraphMap { images: (0..n).map(f).collect() }
    }

    pub fn identity(n: usize) -> Self {
        GraphMap::from_fn(n, Some)
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, v: usize) -> Option<usize> {
        self.images.get(v).copied().flatten()
    }

    /// `self ∘ other`, defined where both steps are.
    pub fn compose(&self, other: &GraphMap) -> GraphMap {
        GraphMap::from_fn(other.n(), |v| other.apply(v).and_then(|w| self.apply(w)))
    }

    /// `self^k` for `k >= 0`.
    pub fn pow(&self, k: u32) -> GraphMap {
        (0..k).fold(GraphMap::identity(self.n()), |acc, _| self.compose(&acc))
    }

    /// `d(f u, f v) = d(u, v)` wherever both images are defined.
    pub fn is_isometric(&self, dm: &DistanceMatrix) -> bool {
        let defined: Vec<(usize, usize)> = (0..self.n()).filter_map(|v| self.apply(v).map(|w| (v, w))).collect();
        defined
            .iter()
            .all(|&(u, fu)| fu < dm.n() && defined.iter().all(|&(v, fv)| fv < dm.n() && dm.get(fu, fv) == dm.get(u, v)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    EllipticCandidate,
    LoxodromicCandidate,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranslationReport {
    /// `max_n d(x, g^n x) / n`.
    pub ell: Rational64,
    /// `d(x, g^n x) / n` at the last computed `n`.
    pub ell_last: Rational64,
    /// `d(x, g^n x)` for `n = 1, 2, ...`.
    pub distances: Vec<u32>,
    /// The orbit left the domain of the map before `n_max`.
    pub truncated: bool,
    pub classification: Classification,
}

/// Iterates `g` at `x` up to `n_max` times.
///
/// Elliptic when the orbit returns to `x` or its diameter over the second
/// half of the window does not exceed that over the first half;
/// loxodromic when the displacement grows at a rate of at least half of
/// `ℓ̂` throughout the second half.
pub fn translation_length_estimate(
    dm: &DistanceMatrix,
    g: &GraphMap,
    x: usize,
    n_max: u32,
) -> Result<TranslationReport> {
    if x >= dm.n() {
        return Err(HypError::VertexOutOfRange(x));
    }
    let mut distances = Vec::new();
    let mut cur = x;
    let mut returned = false;
    let mut truncated = false;
    for _ in 0..n_max {
        match g.apply(cur).filter(|&w| w < dm.n()) {
            Some(w) => cur = w,
            None => {
                truncated = true;
                break;
            }
        }
        distances.push(dm.get(x, cur));
        returned |= cur == x;
    }
    let ratio = |i: usize| Rational64::new(distances[i] as i64, i as i64 + 1);
    let ell = (0..distances.len()).map(ratio).max().unwrap_or_default();
    let ell_last = distances.len().checked_sub(1).map(ratio).unwrap_or_default();
    let len = distances.len();
    let classification = if returned {
        Classification::EllipticCandidate
    } else if len < 2 {
        Classification::Inconclusive
    } else {
        let half = len / 2;
        let head = distances[..half].iter().max().copied().unwrap_or(0);
        let tail = distances[half..].iter().max().copied().unwrap_or(0);
        let rate = (half..len).map(ratio).min().unwrap_or_default();
        if tail <= head {
            Classification::EllipticCandidate
        } else if rate > Rational64::default() && rate * 2 >= ell {
            Classification::LoxodromicCandidate
        } else {
            Classification::Inconclusive
        }
    };
    Ok(TranslationReport { ell, ell_last, distances, truncated, classification })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticBound {
    /// Diameter of the orbit of `x` under words in `A`.
    pub m: u32,
    /// Same for `B`.
    pub n: u32,
    /// Same for words in `A ∪ B`.
    pub diam: u32,
    pub holds: bool,
}

/// Orbit of `x` under words of length at most `word_len` in `maps`.
fn orbit(maps: &[GraphMap], x: usize, word_len: u32) -> BTreeSet<usize> {
    let mut seen = BTreeSet::from([x]);
    let mut frontier = vec![x];
    for _ in 0..word_len {
        let mut next = Vec::new();
        for &v in &frontier {
            for m in maps {
                if let Some(w) = m.apply(v) {
                    if seen.insert(w) {
                        next.push(w);
                    }
                }
            }
        }
        frontier = next;
    }
    seen
}

fn diameter(dm: &DistanceMatrix, set: &BTreeSet<usize>) -> u32 {
    set.iter().flat_map(|&u| set.iter().map(move |&v| dm.get(u, v))).max().unwrap_or(0)
}

/// Checks that every `a` commutes with every `b` where both composites are
/// defined, then compares `diam(⟨A, B⟩ x)` with `diam(A x) + diam(B x)`.
pub fn commuting_elliptic_bound(
    dm: &DistanceMatrix,
    a_maps: &[GraphMap],
    b_maps: &[GraphMap],
    x: usize,
    word_len: u32,
) -> Result<EllipticBound> {
    if x >= dm.n() {
        return Err(HypError::VertexOutOfRange(x));
    }
    for (i, a) in a_maps.iter().enumerate() {
        for (j, b) in b_maps.iter().enumerate() {
            let ab = a.compose(b);
            let ba = b.compose(a);
            for v in 0..ab.n().min(ba.n()) {
                if let (Some(p), Some(q)) = (ab.apply(v), ba.apply(v)) {
                    if p != q {
                        return Err(HypError::NotCommuting { a: i, b: j, vertex: v });
                    }
                }
            }
        }
    }
    let m = diameter(dm, &orbit(a_maps, x, word_len));
    let n = diameter(dm, &orbit(b_maps, x, word_len));
    let both: Vec<GraphMap> = a_maps.iter().chain(b_maps).cloned().collect();
    let diam = diameter(dm, &orbit(&both, x, word_len));
    Ok(EllipticBound { m, n, diam, holds: diam <= m + n })
}
