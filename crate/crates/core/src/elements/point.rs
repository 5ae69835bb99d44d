//! Eventually periodic boundary points.

use serde::{Deserialize, Serialize};
use std::fmt;

/// An infinite word `pre · period^∞`.
///
/// Normalized: the period is primitive and rotated so that `pre` is as short
/// as possible, hence equal words have equal representations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EpWord {
    pre: Vec<u8>,
    period: Vec<u8>,
}

impl EpWord {
    /// Panics if `period` is empty.
    pub fn new(mut pre: Vec<u8>, mut period: Vec<u8>) -> Self {
        assert!(!period.is_empty(), "period must be nonempty");
        let p = primitive_len(&period);
        period.truncate(p);
        while let (Some(&a), Some(&b)) = (pre.last(), period.last()) {
            if a != b {
                break;
            }
            pre.pop();
            period.rotate_right(1);
        }
        EpWord { pre, period }
    }

    pub fn constant(d: u8) -> Self {
        EpWord { pre: Vec::new(), period: vec![d] }
    }

    pub fn pre(&self) -> &[u8] {
        &self.pre
    }

    pub fn period(&self) -> &[u8] {
        &self.period
    }

    pub fn digit_at(&self, i: usize) -> u8 {
        if i < self.pre.len() {
            self.pre[i]
        } else {
            self.period[(i - self.pre.len()) % self.period.len()]
        }
    }

    pub fn prefix(&self, len: usize) -> Vec<u8> {
        (0..len).map(|i| self.digit_at(i)).collect()
    }

    pub fn starts_with(&self, word: &[u8]) -> bool {
        word.iter().enumerate().all(|(i, &d)| self.digit_at(i) == d)
    }

    /// Drop the first `k` digits.
    pub fn shift(&self, k: usize) -> EpWord {
        if k <= self.pre.len() {
            return EpWord { pre: self.pre[k..].to_vec(), period: self.period.clone() };
        }
        let mut period = self.period.clone();
        period.rotate_left((k - self.pre.len()) % self.period.len());
        EpWord { pre: Vec::new(), period }
    }

    /// `word · self`.
    pub fn prepend(&self, word: &[u8]) -> EpWord {
        let mut pre = word.to_vec();
        pre.extend_from_slice(&self.pre);
        EpWord::new(pre, self.period.clone())
    }
}

fn primitive_len(w: &[u8]) -> usize {
    (1..=w.len())
        .find(|&p| w.len().is_multiple_of(p) && w.iter().enumerate().all(|(i, &d)| d == w[i % p]))
        .unwrap_or(w.len())
}

impl fmt::Display for EpWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.pre {
            write!(f, "{}", char::from_digit(*d as u32, 36).unwrap_or('?'))?;
        }
        write!(f, "(")?;
        for d in &self.period {
            write!(f, "{}", char::from_digit(*d as u32, 36).unwrap_or('?'))?;
        }
        write!(f, ")")
    }
}

/// A point of `∂T_n(r)` (one coordinate) or of `C^S` (one coordinate per
/// element of `S`, root always 0).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CantorPoint {
    pub root: u32,
    pub coords: Vec<EpWord>,
}

impl CantorPoint {
    pub fn tree(root: u32, word: EpWord) -> Self {
        CantorPoint { root, coords: vec![word] }
    }

    pub fn product(coords: Vec<EpWord>) -> Self {
        CantorPoint { root: 0, coords }
    }

    pub fn dims(&self) -> usize {
        self.coords.len()
    }

    /// Digit `pos` of the interleaved word (digit `pos / d` of coordinate
    /// `pos % d`). For a single coordinate this is the word itself.
    pub fn interleaved_digit(&self, pos: usize) -> u8 {
        let d = self.coords.len();
        self.coords[pos % d].digit_at(pos / d)
    }

    /// Split an interleaved word `pre · period^∞` into `dims` coordinates.
    pub fn from_interleaved(root: u32, pre: &[u8], period: &[u8], dims: usize) -> Self {
        assert!(dims >= 1 && !period.is_empty());
        let mut pre = pre.to_vec();
        let mut period = period.to_vec();
        while !pre.len().is_multiple_of(dims) {
            pre.push(period[0]);
            period.rotate_left(1);
        }
        let plen = period.len();
        let long: Vec<u8> = period.iter().cycle().take(plen * dims).copied().collect();
        let coords = (0..dims)
            .map(|s| {
                let cp: Vec<u8> = pre.iter().skip(s).step_by(dims).copied().collect();
                let cq: Vec<u8> = long.iter().skip(s).step_by(dims).copied().collect();
                EpWord::new(cp, cq)
            })
            .collect();
        CantorPoint { root, coords }
    }
}

impl fmt::Display for CantorPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.len() == 1 {
            return write!(f, "{}:{}", self.root, self.coords[0]);
        }
        write!(f, "<")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ">")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_absorbs_preperiod() {
        let w = EpWord::new(vec![1, 0, 1], vec![0, 1, 0, 1]);
        assert!(w.pre().is_empty());
        assert_eq!(w.period(), &[1, 0]);
        assert_eq!(w, EpWord::new(vec![], vec![1, 0]));
        assert_eq!(EpWord::new(vec![0, 0], vec![0]), EpWord::constant(0));
    }

    #[test]
    fn shift_and_prepend_are_inverse() {
        let w = EpWord::new(vec![2, 1], vec![0, 1, 1]);
        for k in 0..7 {
            let head = w.prefix(k);
            assert_eq!(w.shift(k).prepend(&head), w);
            for i in 0..20 {
                assert_eq!(w.shift(k).digit_at(i), w.digit_at(i + k));
            }
        }
    }

    #[test]
    fn deinterleave_matches_digits() {
        let pre = [1, 0, 1];
        let period = [0, 1, 1];
        for dims in 1..4 {
            let p = CantorPoint::from_interleaved(0, &pre, &period, dims);
            let flat = EpWord::new(pre.to_vec(), period.to_vec());
            for pos in 0..60 {
                assert_eq!(p.interleaved_digit(pos), flat.digit_at(pos));
            }
        }
    }
}
