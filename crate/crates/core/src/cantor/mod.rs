//! Clopen subsets of the boundary of a rooted n-ary forest.
//!
//! A clopen set is stored as a canonical antichain of cylinders: no cylinder
//! is a prefix of another, no complete family of n siblings survives (they
//! are merged into their parent), and the list is sorted by `(root, word)`.
//! Two sets are equal as subsets of the boundary exactly when their
//! representations are equal.
//!
//! Product Cantor sets `C^S` with finite `S` are handled through the
//! interleaving in [`brick`]: a binary forest with one root whose i-th digit
//! is digit `i / |S|` of coordinate `i % |S|`.

mod brick;
mod text;

pub use brick::{brick_split, Brick, BrickPattern};
pub use text::parse_cylinder_list;

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CantorError {
    #[error("arity requires n >= 2 and r >= 1 (got n = {n}, r = {r})")]
    InvalidArity { n: u32, r: u32 },
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: Arity, right: Arity },
    #[error("cylinder {cylinder} is not valid for arity {arity}")]
    OutOfRange { cylinder: Cylinder, arity: Arity },
    #[error("sets are not pairwise disjoint")]
    NotDisjoint,
    #[error("requested {requested} pieces but at least {minimum} are needed")]
    BelowMinimum { requested: usize, minimum: usize },
    #[error("{requested} pieces unreachable: counts are {minimum} + j*{step}")]
    Unreachable { requested: usize, minimum: usize, step: usize },
    #[error("not an exact partition of the space")]
    NotAPartition,
    #[error("coordinate {dim} outside brick dimensions 0..{dims}")]
    DimOutOfRange { dim: usize, dims: usize },
    #[error("brick dimension mismatch: {left} vs {right}")]
    DimsMismatch { left: usize, right: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

/// Branching `n` and number of roots `r` of the forest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Arity {
    n: u8,
    r: u32,
}

impl Arity {
    pub const BINARY: Arity = Arity { n: 2, r: 1 };

    pub fn new(n: u32, r: u32) -> Result<Self, CantorError> {
        if !(2..=36).contains(&n) || r == 0 {
            return Err(CantorError::InvalidArity { n, r });
        }
        Ok(Arity { n: n as u8, r })
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Splitting one cylinder changes the piece count by this much.
    pub fn step(&self) -> usize {
        self.n as usize - 1
    }
}

impl fmt::Display for Arity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.n, self.r)
    }
}

/// The set of boundary points under `root` that extend `word`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cylinder {
    pub root: u32,
    pub word: Vec<u8>,
}

impl Cylinder {
    pub fn new(root: u32, word: Vec<u8>) -> Self {
        Cylinder { root, word }
    }

    pub fn root(root: u32) -> Self {
        Cylinder { root, word: Vec::new() }
    }

    pub fn depth(&self) -> usize {
        self.word.len()
    }

    /// `self` contains `other` (i.e. `self.word` is a prefix of `other.word`).
    pub fn contains(&self, other: &Cylinder) -> bool {
        self.root == other.root && other.word.starts_with(&self.word)
    }

    pub fn comparable(&self, other: &Cylinder) -> bool {
        self.contains(other) || other.contains(self)
    }

    pub fn child(&self, digit: u8) -> Cylinder {
        let mut word = self.word.clone();
        word.push(digit);
        Cylinder { root: self.root, word }
    }

    pub fn children(&self, n: u8) -> impl Iterator<Item = Cylinder> + '_ {
        (0..n).map(move |d| self.child(d))
    }

    pub fn extend(&self, suffix: &[u8]) -> Cylinder {
        let mut word = self.word.clone();
        word.extend_from_slice(suffix);
        Cylinder { root: self.root, word }
    }

    pub fn is_valid_for(&self, arity: Arity) -> bool {
        self.root < arity.r && self.word.iter().all(|&d| d < arity.n)
    }

    /// The smaller of two comparable cylinders, or `None` when disjoint.
    pub fn meet(&self, other: &Cylinder) -> Option<Cylinder> {
        if self.contains(other) {
            Some(other.clone())
        } else if other.contains(self) {
            Some(self.clone())
        } else {
            None
        }
    }
}

/// Three-way classification used for membership in the basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Extent {
    Empty,
    Full,
    ProperNonempty,
}

/// A clopen subset in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClopenSet {
    arity: Arity,
    cylinders: Vec<Cylinder>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoolOp {
    Union,
    Intersect,
    Minus,
}

impl ClopenSet {
    pub fn empty(arity: Arity) -> Self {
        ClopenSet { arity, cylinders: Vec::new() }
    }

    pub fn full(arity: Arity) -> Self {
        ClopenSet { arity, cylinders: (0..arity.r).map(Cylinder::root).collect() }
    }

    pub fn cylinder(arity: Arity, c: Cylinder) -> Result<Self, CantorError> {
        Self::from_cylinders(arity, vec![c])
    }

    /// Canonical form of an arbitrary (possibly overlapping) union of cylinders.
    pub fn from_cylinders(arity: Arity, cylinders: impl IntoIterator<Item = Cylinder>) -> Result<Self, CantorError> {
        let cylinders: Vec<Cylinder> = cylinders.into_iter().collect();
        if let Some(bad) = cylinders.iter().find(|c| !c.is_valid_for(arity)) {
            return Err(CantorError::OutOfRange { cylinder: bad.clone(), arity });
        }
        Ok(ClopenSet { arity, cylinders: normalize(arity, cylinders) })
    }

    /// Trusted constructor for cylinders already checked against `arity`.
    pub(crate) fn from_valid(arity: Arity, cylinders: Vec<Cylinder>) -> Self {
        debug_assert!(cylinders.iter().all(|c| c.is_valid_for(arity)));
        ClopenSet { arity, cylinders: normalize(arity, cylinders) }
    }

    pub fn arity(&self) -> Arity {
        self.arity
    }

    pub fn cylinders(&self) -> &[Cylinder] {
        &self.cylinders
    }

    pub fn len(&self) -> usize {
        self.cylinders.len()
    }

    pub fn max_depth(&self) -> usize {
        self.cylinders.iter().map(Cylinder::depth).max().unwrap_or(0)
    }

    pub fn extent(&self) -> Extent {
        if self.cylinders.is_empty() {
            Extent::Empty
        } else if self.cylinders.len() == self.arity.r as usize && self.cylinders.iter().all(|c| c.word.is_empty()) {
            Extent::Full
        } else {
            Extent::ProperNonempty
        }
    }

    pub fn is_empty(&self) -> bool {
        self.extent() == Extent::Empty
    }

    pub fn is_full(&self) -> bool {
        self.extent() == Extent::Full
    }

    /// Eligible as a member of the basis: proper and nonempty.
    pub fn is_proper_nonempty(&self) -> bool {
        self.extent() == Extent::ProperNonempty
    }

    fn check_arity(&self, other: &ClopenSet) -> Result<(), CantorError> {
        if self.arity != other.arity {
            return Err(CantorError::ArityMismatch { left: self.arity, right: other.arity });
        }
        Ok(())
    }

    pub fn complement(&self) -> ClopenSet {
        let mut out = Vec::new();
        let mut start = 0;
        for root in 0..self.arity.r {
            let end = start + self.cylinders[start..].partition_point(|c| c.root == root);
            let mut prefix = Vec::new();
            complement_within(self.arity.n, root, &mut prefix, &self.cylinders[start..end], &mut out);
            start = end;
        }
        ClopenSet { arity: self.arity, cylinders: normalize(self.arity, out) }
    }

    pub fn boolean(&self, other: &ClopenSet, op: BoolOp) -> Result<ClopenSet, CantorError> {
        self.check_arity(other)?;
        Ok(match op {
            BoolOp::Union => self.union_unchecked(other),
            BoolOp::Intersect => self.intersect_unchecked(other),
            BoolOp::Minus => self.intersect_unchecked(&other.complement()),
        })
    }

    pub fn union(&self, other: &ClopenSet) -> Result<ClopenSet, CantorError> {
        self.boolean(other, BoolOp::Union)
    }

    pub fn intersect(&self, other: &ClopenSet) -> Result<ClopenSet, CantorError> {
        self.boolean(other, BoolOp::Intersect)
    }

    pub fn minus(&self, other: &ClopenSet) -> Result<ClopenSet, CantorError> {
        self.boolean(other, BoolOp::Minus)
    }

    pub fn is_subset(&self, other: &ClopenSet) -> Result<bool, CantorError> {
        self.check_arity(other)?;
        Ok(self.cylinders.iter().all(|c| other.covers_cylinder(c)))
    }

    pub fn is_disjoint(&self, other: &ClopenSet) -> Result<bool, CantorError> {
        self.check_arity(other)?;
        Ok(self.cylinders.iter().all(|c| !other.meets_cylinder(c)))
    }

    /// Some member cylinder contains `c`.
    pub fn covers_cylinder(&self, c: &Cylinder) -> bool {
        self.container_of(c).is_some()
    }

    /// `c` intersects the set.
    pub fn meets_cylinder(&self, c: &Cylinder) -> bool {
        self.container_of(c).is_some() || !self.extensions_of(c).is_empty()
    }

    /// The unique member containing `c`, if any.
    pub fn container_of(&self, c: &Cylinder) -> Option<&Cylinder> {
        // Any member that is a prefix of `c` sorts at or before `c`; by the
        // antichain property it is the immediate predecessor.
        let idx = self.cylinders.partition_point(|x| x <= c);
        if idx == 0 {
            return None;
        }
        let cand = &self.cylinders[idx - 1];
        cand.contains(c).then_some(cand)
    }

    /// Members strictly or non-strictly inside `c` (a contiguous run).
    pub fn extensions_of(&self, c: &Cylinder) -> &[Cylinder] {
        let start = self.cylinders.partition_point(|x| x < c);
        let len = self.cylinders[start..].partition_point(|x| c.contains(x));
        &self.cylinders[start..start + len]
    }

    /// Whether the boundary point whose first digits are given by `digit_at`
    /// lies in the set. `digit_at(i)` must return the i-th digit under `root`.
    pub fn contains_point_with(&self, root: u32, digit_at: impl Fn(usize) -> u8) -> bool {
        let depth = self.max_depth();
        let word: Vec<u8> = (0..depth).map(digit_at).collect();
        let probe = Cylinder { root, word };
        self.container_of(&probe).is_some()
    }

    fn union_unchecked(&self, other: &ClopenSet) -> ClopenSet {
        let mut all = self.cylinders.clone();
        all.extend(other.cylinders.iter().cloned());
        ClopenSet { arity: self.arity, cylinders: normalize(self.arity, all) }
    }

    fn intersect_unchecked(&self, other: &ClopenSet) -> ClopenSet {
        let mut out = Vec::new();
        for c in &self.cylinders {
            if other.covers_cylinder(c) {
                out.push(c.clone());
            } else {
                out.extend(other.extensions_of(c).iter().cloned());
            }
        }
        ClopenSet { arity: self.arity, cylinders: normalize(self.arity, out) }
    }

    /// Every member cylinder refined to exactly `depth` (members deeper than
    /// `depth` are kept as they are).
    pub fn refine_to_depth(&self, depth: usize) -> Vec<Cylinder> {
        let mut out = Vec::new();
        for c in &self.cylinders {
            expand_to_depth(self.arity.n, c.clone(), depth, &mut out);
        }
        out
    }
}

fn expand_to_depth(n: u8, c: Cylinder, depth: usize, out: &mut Vec<Cylinder>) {
    if c.depth() >= depth {
        out.push(c);
        return;
    }
    for d in 0..n {
        expand_to_depth(n, c.child(d), depth, out);
    }
}

/// `words` are sorted, share `root`, and all extend `prefix`.
fn complement_within(n: u8, root: u32, prefix: &mut Vec<u8>, words: &[Cylinder], out: &mut Vec<Cylinder>) {
    if words.is_empty() {
        out.push(Cylinder { root, word: prefix.clone() });
        return;
    }
    if words[0].word.len() == prefix.len() {
        return;
    }
    let depth = prefix.len();
    let mut start = 0;
    for d in 0..n {
        let end = start + words[start..].partition_point(|c| c.word[depth] == d);
        prefix.push(d);
        complement_within(n, root, prefix, &words[start..end], out);
        prefix.pop();
        start = end;
    }
}

/// Sort, drop covered cylinders, merge complete sibling families.
pub(crate) fn normalize(arity: Arity, mut cylinders: Vec<Cylinder>) -> Vec<Cylinder> {
    cylinders.sort();
    cylinders.dedup();
    let n = arity.n as usize;
    let mut stack: Vec<Cylinder> = Vec::with_capacity(cylinders.len());
    for c in cylinders {
        if let Some(top) = stack.last() {
            if top.contains(&c) {
                continue;
            }
        }
        stack.push(c);
        // A freshly completed sibling family sits on top of the stack.
        loop {
            let len = stack.len();
            let Some(last) = stack.last() else { break };
            let Some(&digit) = last.word.last() else { break };
            if digit as usize != n - 1 || len < n {
                break;
            }
            let parent_len = last.word.len() - 1;
            let family = &stack[len - n..];
            let complete = family.iter().enumerate().all(|(i, x)| {
                x.root == last.root
                    && x.word.len() == parent_len + 1
                    && x.word[..parent_len] == last.word[..parent_len]
                    && x.word[parent_len] as usize == i
            });
            if !complete {
                break;
            }
            let mut parent = stack[len - 1].clone();
            parent.word.pop();
            stack.truncate(len - n);
            stack.push(parent);
        }
    }
    stack
}

/// Membership test for `I^(m)`: entries proper nonempty, pairwise disjoint,
/// union proper.
pub fn tuple_admissible(ts: &[ClopenSet]) -> bool {
    let Some(first) = ts.first() else {
        return false;
    };
    let arity = first.arity;
    if ts.iter().any(|t| t.arity != arity || !t.is_proper_nonempty()) {
        return false;
    }
    for (i, a) in ts.iter().enumerate() {
        for b in &ts[i + 1..] {
            if !a.is_disjoint(b).unwrap_or(false) {
                return false;
            }
        }
    }
    let union = ts.iter().fold(ClopenSet::empty(arity), |acc, t| acc.union_unchecked(t));
    !union.is_full()
}

/// A partition of the whole space into cylinders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    arity: Arity,
    pieces: Vec<Cylinder>,
}

impl Pattern {
    pub fn new(arity: Arity, mut pieces: Vec<Cylinder>) -> Result<Self, CantorError> {
        if let Some(bad) = pieces.iter().find(|c| !c.is_valid_for(arity)) {
            return Err(CantorError::OutOfRange { cylinder: bad.clone(), arity });
        }
        pieces.sort();
        if !is_exact_partition(arity, &pieces) {
            return Err(CantorError::NotAPartition);
        }
        Ok(Pattern { arity, pieces })
    }

    pub fn arity(&self) -> Arity {
        self.arity
    }

    pub fn pieces(&self) -> &[Cylinder] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }
}

/// `pieces` must be sorted.
pub(crate) fn is_exact_partition(arity: Arity, pieces: &[Cylinder]) -> bool {
    if pieces.windows(2).any(|w| w[0].comparable(&w[1])) {
        return false;
    }
    normalize(arity, pieces.to_vec()) == ClopenSet::full(arity).cylinders
}

/// A pattern together with the index of the input set each piece refines
/// (`None` for pieces of the complement).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Completion {
    pub pattern: Pattern,
    pub owners: Vec<Option<usize>>,
}

impl Completion {
    pub fn pieces_of(&self, owner: Option<usize>) -> Vec<Cylinder> {
        self.pattern.pieces.iter().zip(&self.owners).filter(|(_, o)| **o == owner).map(|(c, _)| c.clone()).collect()
    }
}

/// Complete a family of disjoint sets to a pattern of exactly `k` cylinders.
///
/// Pieces are split one at a time, always the lexicographically first piece
/// among the shallowest ones, so the output is deterministic.
pub fn complete_to_partition(ts: &[ClopenSet], k: usize) -> Result<Completion, CantorError> {
    let Some(first) = ts.first() else {
        return Err(CantorError::Parse("empty family".into()));
    };
    let arity = first.arity;
    for t in ts {
        first.check_arity(t)?;
    }
    let mut union = ClopenSet::empty(arity);
    for t in ts {
        if !union.is_disjoint(t)? {
            return Err(CantorError::NotDisjoint);
        }
        union = union.union_unchecked(t);
    }
    let mut pieces: BTreeMap<Cylinder, Option<usize>> = BTreeMap::new();
    for (i, t) in ts.iter().enumerate() {
        for c in &t.cylinders {
            pieces.insert(c.clone(), Some(i));
        }
    }
    for c in union.complement().cylinders {
        pieces.insert(c, None);
    }
    let minimum = pieces.len();
    check_reachable(arity, minimum, k)?;
    while pieces.len() < k {
        split_first_shallowest(arity.n, &mut pieces);
    }
    let (cyls, owners): (Vec<_>, Vec<_>) = pieces.into_iter().unzip();
    Ok(Completion { pattern: Pattern { arity, pieces: cyls }, owners })
}

pub(crate) fn check_reachable(arity: Arity, minimum: usize, k: usize) -> Result<(), CantorError> {
    if k < minimum {
        return Err(CantorError::BelowMinimum { requested: k, minimum });
    }
    if !(k - minimum).is_multiple_of(arity.step()) {
        return Err(CantorError::Unreachable { requested: k, minimum, step: arity.step() });
    }
    Ok(())
}

fn split_first_shallowest<V: Clone>(n: u8, pieces: &mut BTreeMap<Cylinder, V>) {
    let Some(target) = pieces.keys().min_by(|a, b| a.depth().cmp(&b.depth()).then_with(|| a.cmp(b))).cloned() else {
        return;
    };
    let label = pieces.remove(&target).expect("key present");
    for child in target.children(n) {
        pieces.insert(child, label.clone());
    }
}

/// Refine the cylinders of one set (sorted antichain) into exactly `k` pieces.
pub fn refine_to_count(arity: Arity, cylinders: &[Cylinder], k: usize) -> Result<Vec<Cylinder>, CantorError> {
    check_reachable(arity, cylinders.len(), k)?;
    let mut pieces: BTreeMap<Cylinder, ()> = cylinders.iter().map(|c| (c.clone(), ())).collect();
    while pieces.len() < k {
        split_first_shallowest(arity.n, &mut pieces);
    }
    Ok(pieces.into_keys().collect())
}
