//! Dyadic bricks in `C^S` for a finite index set `S = {0, .., dims-1}`.

use super::{normalize, Arity, CantorError, ClopenSet, Cylinder};
use serde::{Deserialize, Serialize};
use std::fmt;

/// `B(psi)`: points whose coordinate `s` extends the binary word `psi[s]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Brick {
    psi: Vec<Vec<u8>>,
}

impl Brick {
    pub fn whole(dims: usize) -> Self {
        Brick { psi: vec![Vec::new(); dims] }
    }

    pub fn new(psi: Vec<Vec<u8>>) -> Result<Self, CantorError> {
        if psi.iter().flatten().any(|&d| d > 1) {
            return Err(CantorError::Parse("brick words must be binary".into()));
        }
        Ok(Brick { psi })
    }

    pub fn dims(&self) -> usize {
        self.psi.len()
    }

    pub fn word(&self, s: usize) -> &[u8] {
        &self.psi[s]
    }

    pub fn words(&self) -> &[Vec<u8>] {
        &self.psi
    }

    /// Coordinates with a nonempty prefix constraint.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.psi.iter().enumerate().filter(|(_, w)| !w.is_empty()).map(|(s, _)| s)
    }

    pub fn contains(&self, other: &Brick) -> bool {
        self.psi.iter().zip(&other.psi).all(|(a, b)| b.starts_with(a))
    }

    pub fn intersect(&self, other: &Brick) -> Option<Brick> {
        let mut psi = Vec::with_capacity(self.psi.len());
        for (a, b) in self.psi.iter().zip(&other.psi) {
            if b.starts_with(a) {
                psi.push(b.clone());
            } else if a.starts_with(b) {
                psi.push(a.clone());
            } else {
                return None;
            }
        }
        Some(Brick { psi })
    }

    pub fn is_disjoint(&self, other: &Brick) -> bool {
        self.intersect(other).is_none()
    }

    /// Append `bit` to coordinate `s`.
    pub fn extended(&self, s: usize, bit: u8) -> Brick {
        let mut psi = self.psi.clone();
        psi[s].push(bit);
        Brick { psi }
    }

    /// Interleaved binary cylinder set (arity `(2, 1)`) with the same points.
    pub fn to_clopen(&self) -> ClopenSet {
        let dims = self.dims();
        let len = self
            .psi
            .iter()
            .enumerate()
            .filter(|(_, w)| !w.is_empty())
            .map(|(s, w)| (w.len() - 1) * dims + s + 1)
            .max()
            .unwrap_or(0);
        let mut out = Vec::new();
        let mut word = Vec::with_capacity(len);
        self.fill_interleaved(&mut word, len, &mut out);
        ClopenSet::from_valid(Arity::BINARY, out)
    }

    fn fill_interleaved(&self, word: &mut Vec<u8>, len: usize, out: &mut Vec<Cylinder>) {
        let pos = word.len();
        if pos == len {
            out.push(Cylinder::new(0, word.clone()));
            return;
        }
        let dims = self.dims();
        let (s, j) = (pos % dims, pos / dims);
        match self.psi[s].get(j) {
            Some(&bit) => {
                word.push(bit);
                self.fill_interleaved(word, len, out);
                word.pop();
            }
            None => {
                for bit in 0..2 {
                    word.push(bit);
                    self.fill_interleaved(word, len, out);
                    word.pop();
                }
            }
        }
    }

    /// The brick described by an interleaved binary cylinder.
    pub fn from_interleaved(c: &Cylinder, dims: usize) -> Brick {
        let mut psi = vec![Vec::new(); dims];
        for (pos, &bit) in c.word.iter().enumerate() {
            psi[pos % dims].push(bit);
        }
        Brick { psi }
    }
}

impl fmt::Display for Brick {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, w) in self.psi.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            for d in w {
                write!(f, "{d}")?;
            }
        }
        write!(f, ")")
    }
}

/// Split `b` in half along coordinate `s`.
pub fn brick_split(b: &Brick, s: usize) -> Result<(Brick, Brick), CantorError> {
    if s >= b.dims() {
        return Err(CantorError::DimOutOfRange { dim: s, dims: b.dims() });
    }
    Ok((b.extended(s, 0), b.extended(s, 1)))
}

/// A partition of `C^S` into finitely many bricks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrickPattern {
    dims: usize,
    bricks: Vec<Brick>,
}

impl BrickPattern {
    pub fn new(dims: usize, bricks: Vec<Brick>) -> Result<Self, CantorError> {
        if let Some(b) = bricks.iter().find(|b| b.dims() != dims) {
            return Err(CantorError::DimsMismatch { left: dims, right: b.dims() });
        }
        for (i, a) in bricks.iter().enumerate() {
            if bricks[i + 1..].iter().any(|b| !a.is_disjoint(b)) {
                return Err(CantorError::NotAPartition);
            }
        }
        let cover: Vec<Cylinder> = bricks.iter().flat_map(|b| b.to_clopen().cylinders().to_vec()).collect();
        if normalize(Arity::BINARY, cover) != vec![Cylinder::root(0)] {
            return Err(CantorError::NotAPartition);
        }
        Ok(BrickPattern { dims, bricks })
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn bricks(&self) -> &[Brick] {
        &self.bricks
    }
}
