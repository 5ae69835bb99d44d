//! Text grammar: a cylinder is `root:word` (digits `0-9a-z`), a clopen set
//! is a bracketed comma list such as `[0:010, 0:11]`, a brick is a
//! parenthesized comma list of binary words such as `(01,,1)`.

use super::{Arity, Brick, CantorError, ClopenSet, Cylinder};
use std::fmt;
use std::str::FromStr;

fn digit_char(d: u8) -> char {
    char::from_digit(d as u32, 36).expect("digit below 36")
}

fn parse_digits(s: &str) -> Result<Vec<u8>, CantorError> {
    s.chars()
        .map(|ch| {
            ch.to_digit(36).map(|d| d as u8).ok_or_else(|| CantorError::Parse(format!("bad digit {ch:?} in {s:?}")))
        })
        .collect()
}

impl fmt::Display for Cylinder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.root)?;
        for &d in &self.word {
            write!(f, "{}", digit_char(d))?;
        }
        Ok(())
    }
}

impl FromStr for Cylinder {
    type Err = CantorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (root, word) =
            s.split_once(':').ok_or_else(|| CantorError::Parse(format!("expected root:word, got {s:?}")))?;
        let root = root.trim().parse::<u32>().map_err(|e| CantorError::Parse(format!("bad root in {s:?}: {e}")))?;
        Ok(Cylinder::new(root, parse_digits(word.trim())?))
    }
}

impl fmt::Display for ClopenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.cylinders.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

fn strip_delims(s: &str, open: char, close: char) -> Result<&str, CantorError> {
    let t = s.trim();
    t.strip_prefix(open)
        .and_then(|t| t.strip_suffix(close))
        .ok_or_else(|| CantorError::Parse(format!("expected {open}...{close}, got {s:?}")))
}

/// Parse a bracketed list of cylinders without normalizing.
pub fn parse_cylinder_list(s: &str) -> Result<Vec<Cylinder>, CantorError> {
    let inner = strip_delims(s, '[', ']')?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner.split(',').map(str::parse).collect()
}

impl ClopenSet {
    pub fn parse(arity: Arity, s: &str) -> Result<Self, CantorError> {
        ClopenSet::from_cylinders(arity, parse_cylinder_list(s)?)
    }
}

impl FromStr for Brick {
    type Err = CantorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = strip_delims(s, '(', ')')?;
        let words = inner.split(',').map(|w| parse_digits(w.trim())).collect::<Result<Vec<_>, _>>()?;
        Brick::new(words)
    }
}
