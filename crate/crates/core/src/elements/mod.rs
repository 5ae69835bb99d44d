//! Group elements: tree pairs for `V_n(r)`, twisted pattern pairs for `sV`
//! and `SV_Γ` (finite `S`), and dyadic piecewise-linear circle maps for `T`.
//!
//! Composition `g.compose(h)` is `g ∘ h`: apply `h` first.

mod circle;
mod dyadic;
mod point;
mod twisted;
mod velement;

pub use circle::{interval_map_points, CircleMap};
pub use dyadic::Dyadic;
pub use point::{CantorPoint, EpWord};
pub use twisted::{Perm, PermGroup, TwistPiece, TwistSpace, TwistedElement};
pub use velement::VElement;

use crate::cantor::{Arity, CantorError, ClopenSet, Cylinder};
use rand::Rng;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElementError {
    #[error(transparent)]
    Cantor(#[from] CantorError),
    #[error("elements live on different spaces")]
    SpaceMismatch,
    #[error("point does not lie in the space")]
    PointOutsideSpace,
    #[error("pieces overlap")]
    Overlap,
    #[error("piece {0} is not invariant under its element")]
    NotInvariant(usize),
    #[error("pieces do not form a bijection between partitions")]
    NotABijection,
    #[error("slope {0} is not an integer power of 2")]
    BadSlope(String),
    #[error("map is not an orientation-preserving circle homeomorphism")]
    NotMonotone,
    #[error("tuple is not positively cyclically ordered")]
    NotCyclicallyOrdered,
    #[error("arc endpoint {0} is not fixed by its map")]
    EndpointNotFixed(String),
    #[error("invalid permutation: {0}")]
    BadPermutation(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = ElementError> = std::result::Result<T, E>;

/// A group of homeomorphisms of a Cantor space whose clopen sets are handled
/// by [`ClopenSet`] over [`CantorGroup::clopen_arity`].
pub trait CantorGroup: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + Sized {
    type Space: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn space(&self) -> Self::Space;
    fn clopen_arity(space: &Self::Space) -> Arity;
    /// Number of coordinates of a point (1 for forests).
    fn point_dims(space: &Self::Space) -> usize;
    fn identity(space: &Self::Space) -> Self;
    /// `self ∘ h`.
    fn compose(&self, h: &Self) -> Result<Self>;
    fn inverse(&self) -> Self;
    fn image_clopen(&self, c: &ClopenSet) -> Result<ClopenSet>;
    /// Union of the maximal pieces on which the element is the identity.
    fn fixed_clopen(&self) -> ClopenSet;
    fn apply_point(&self, p: &CantorPoint) -> Result<CantorPoint>;
    /// The element sending each domain cylinder onto its paired cylinder by
    /// the canonical (untwisted) map.
    fn from_cylinder_bijection(space: &Self::Space, pairs: &[(Cylinder, Cylinder)]) -> Result<Self>;
    /// Acts as `g_i` on `S_i` and as the identity off `∪ S_i`. Every `S_i`
    /// must be `g_i`-invariant and the `S_i` pairwise disjoint.
    fn glue(space: &Self::Space, pieces: &[(ClopenSet, Self)]) -> Result<Self>;
    /// A random element whose domain has at most `size` pieces.
    fn random<R: Rng>(space: &Self::Space, rng: &mut R, size: usize) -> Self;
    /// Number of pieces of the (reduced) domain pattern.
    fn piece_count(&self) -> usize;

    fn is_identity(&self) -> bool {
        self.fixed_clopen().is_full()
    }

    fn compose_all(space: &Self::Space, factors: &[Self]) -> Result<Self> {
        factors.iter().try_fold(Self::identity(space), |acc, f| acc.compose(f))
    }

    /// `self^g = g ∘ self ∘ g^{-1}`.
    fn conjugate_by(&self, g: &Self) -> Result<Self> {
        g.compose(self)?.compose(&g.inverse())
    }

    fn commutes_with(&self, other: &Self) -> Result<bool> {
        Ok(self.compose(other)? == other.compose(self)?)
    }
}

/// Whether `p` lies in `set`.
pub fn point_in(set: &ClopenSet, p: &CantorPoint) -> bool {
    set.contains_point_with(p.root, |i| p.interleaved_digit(i))
}

/// Deterministic sample points inside `set`: the first is the least point
/// `w·0^∞` of the first cylinder, later ones add random digits and a random
/// periodic tail.
pub fn sample_points<R: Rng>(set: &ClopenSet, dims: usize, rng: &mut R, count: usize) -> Vec<CantorPoint> {
    let cyls = set.cylinders();
    if cyls.is_empty() {
        return Vec::new();
    }
    let n = set.arity().n();
    (0..count)
        .map(|i| {
            let c = &cyls[i % cyls.len()];
            if i < cyls.len() {
                return CantorPoint::from_interleaved(c.root, &c.word, &[0], dims);
            }
            let mut pre = c.word.clone();
            let extra = rng.gen_range(0..6);
            pre.extend((0..extra).map(|_| rng.gen_range(0..n)));
            let plen = rng.gen_range(1..4);
            let period: Vec<u8> = (0..plen).map(|_| rng.gen_range(0..n)).collect();
            CantorPoint::from_interleaved(c.root, &pre, &period, dims)
        })
        .collect()
}

/// Pointwise agreement of two elements on sample points of `set`.
pub fn agree_on<G: CantorGroup, R: Rng>(g: &G, h: &G, set: &ClopenSet, rng: &mut R, count: usize) -> Result<bool> {
    let dims = G::point_dims(&g.space());
    for p in sample_points(set, dims, rng, count) {
        if g.apply_point(&p)? != h.apply_point(&p)? {
            return Ok(false);
        }
    }
    Ok(true)
}
