//! Concrete groups with enumerable balls.

use crate::elements::CantorGroup;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt::Debug;
use std::hash::Hash;

/// A finitely generated group with exact multiplication.
pub trait GroupOracle: Send + Sync {
    type Elem: Clone + Eq + Hash + Debug + Send + Sync;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn generators(&self) -> Vec<Self::Elem>;

    fn pow(&self, g: &Self::Elem, n: i64) -> Self::Elem {
        let base = if n < 0 { self.inv(g) } else { g.clone() };
        let mut acc = self.identity();
        let mut sq = base;
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            sq = self.mul(&sq, &sq);
            k >>= 1;
        }
        acc
    }

    /// Value of a word whose letters are `(generator index, ±1)`.
    fn eval_word(&self, word: &[(usize, i8)]) -> Self::Elem {
        let gens = self.generators();
        word.iter().fold(self.identity(), |acc, &(i, e)| {
            let g = if e < 0 { self.inv(&gens[i]) } else { gens[i].clone() };
            self.mul(&acc, &g)
        })
    }

    /// Elements of word length at most `radius`, in BFS order.
    fn ball(&self, radius: u32) -> Vec<Self::Elem> {
        let mut letters = self.generators();
        letters.extend(self.generators().iter().map(|g| self.inv(g)));
        let mut out = vec![self.identity()];
        let mut seen: HashSet<Self::Elem> = out.iter().cloned().collect();
        let mut start = 0;
        for _ in 0..radius {
            let end = out.len();
            for i in start..end {
                for s in &letters {
                    let w = self.mul(&out[i], s);
                    if seen.insert(w.clone()) {
                        out.push(w);
                    }
                }
            }
            start = end;
        }
        out
    }
}

/// `(ℤ, +)` generated by 1.
#[derive(Debug, Clone, Copy, Default)]
pub struct Integers;

impl GroupOracle for Integers {
    type Elem = i64;

    fn identity(&self) -> i64 {
        0
    }
    fn mul(&self, a: &i64, b: &i64) -> i64 {
        a + b
    }
    fn inv(&self, a: &i64) -> i64 {
        -a
    }
    fn generators(&self) -> Vec<i64> {
        vec![1]
    }
    fn pow(&self, g: &i64, n: i64) -> i64 {
        g * n
    }
}

/// `x ↦ ±x + t` on `ℤ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dihedral {
    pub t: i64,
    pub flip: bool,
}

impl Dihedral {
    pub fn translation(t: i64) -> Self {
        Dihedral { t, flip: false }
    }

    pub fn reflection(t: i64) -> Self {
        Dihedral { t, flip: true }
    }

    /// The sign character, with kernel the translations.
    pub fn eps(&self) -> i8 {
        if self.flip {
            -1
        } else {
            1
        }
    }

    pub fn apply(&self, x: i64) -> i64 {
        if self.flip {
            self.t - x
        } else {
            self.t + x
        }
    }
}

/// The infinite dihedral group `ℤ ⋊ {±1}`, generated by `x ↦ x + 1` and
/// `x ↦ -x`. Multiplication is composition, right factor first.
#[derive(Debug, Clone, Copy, Default)]
pub struct InfiniteDihedral;

impl GroupOracle for InfiniteDihedral {
    type Elem = Dihedral;

    fn identity(&self) -> Dihedral {
        Dihedral::translation(0)
    }
    fn mul(&self, a: &Dihedral, b: &Dihedral) -> Dihedral {
        Dihedral { t: a.apply(b.t), flip: a.flip != b.flip }
    }
    fn inv(&self, a: &Dihedral) -> Dihedral {
        if a.flip {
            *a
        } else {
            Dihedral::translation(-a.t)
        }
    }
    fn generators(&self) -> Vec<Dihedral> {
        vec![Dihedral::translation(1), Dihedral::reflection(0)]
    }
}

/// `(a, t)`: a lamp configuration `a ∈ ℤ^m` and a rotation `t` of `ℤ/m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WreathElem {
    pub lamps: Vec<i64>,
    pub rot: usize,
}

/// `ℤ ≀ B`, where `B = ⟨step⟩ ≤ ℤ/m` permutes the `m` lamp positions by
/// rotation; `(a, t)(b, u) = (a + t·b, t + u)` with `(t·b)_s = b_{s - t}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicWreath {
    pub m: usize,
    pub step: usize,
}

impl CyclicWreath {
    pub fn new(m: usize, step: usize) -> Self {
        assert!(m >= 1, "need at least one lamp");
        CyclicWreath { m, step: step % m }
    }

    /// The `B`-orbit of position `r`.
    pub fn orbit(&self, r: usize) -> Vec<usize> {
        let mut out = vec![r % self.m];
        loop {
            let next = (out.last().expect("nonempty") + self.step) % self.m;
            if next == out[0] {
                break;
            }
            out.push(next);
        }
        out.sort_unstable();
        out
    }

    pub fn lamp(&self, pos: usize, value: i64) -> WreathElem {
        let mut lamps = vec![0; self.m];
        lamps[pos % self.m] = value;
        WreathElem { lamps, rot: 0 }
    }

    pub fn rotation(&self, k: usize) -> WreathElem {
        WreathElem { lamps: vec![0; self.m], rot: (k * self.step) % self.m }
    }

    pub fn element(&self, lamps: Vec<i64>, k: usize) -> WreathElem {
        assert_eq!(lamps.len(), self.m);
        WreathElem { lamps, rot: (k * self.step) % self.m }
    }
}

impl GroupOracle for CyclicWreath {
    type Elem = WreathElem;

    fn identity(&self) -> WreathElem {
        self.lamp(0, 0)
    }
    fn mul(&self, a: &WreathElem, b: &WreathElem) -> WreathElem {
        let m = self.m;
        let lamps = (0..m).map(|s| a.lamps[s] + b.lamps[(s + m - a.rot) % m]).collect();
        WreathElem { lamps, rot: (a.rot + b.rot) % m }
    }
    fn inv(&self, a: &WreathElem) -> WreathElem {
        let m = self.m;
        let lamps = (0..m).map(|s| -a.lamps[(s + a.rot) % m]).collect();
        WreathElem { lamps, rot: (m - a.rot) % m }
    }
    fn generators(&self) -> Vec<WreathElem> {
        vec![self.lamp(0, 1), self.rotation(1)]
    }
}

/// A subgroup of one of the `elements` families, given by generators.
#[derive(Debug, Clone)]
pub struct CantorOracle<G: CantorGroup> {
    space: G::Space,
    generators: Vec<G>,
}

impl<G: CantorGroup> CantorOracle<G> {
    pub fn new(space: G::Space, generators: Vec<G>) -> Self {
        CantorOracle { space, generators }
    }
}

impl<G: CantorGroup + Eq + Hash> GroupOracle for CantorOracle<G> {
    type Elem = G;

    fn identity(&self) -> G {
        G::identity(&self.space)
    }
    fn mul(&self, a: &G, b: &G) -> G {
        a.compose(b).expect("elements of one space compose")
    }
    fn inv(&self, a: &G) -> G {
        a.inverse()
    }
    fn generators(&self) -> Vec<G> {
        self.generators.clone()
    }
}
