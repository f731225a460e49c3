use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Address `ω = (ω₁, …, ω_m)` of the cell `F_ω(K)`; symbols are contraction
/// indices. The empty word addresses `K` itself and prints as `-`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Word {
    symbols: Vec<u8>,
}

impl Word {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(symbols: Vec<u8>) -> Self {
        Self { symbols }
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn child(&self, symbol: u8) -> Self {
        let mut symbols = self.symbols.clone();
        symbols.push(symbol);
        Self { symbols }
    }

    pub fn concat(&self, tail: &Word) -> Self {
        let mut symbols = self.symbols.clone();
        symbols.extend_from_slice(&tail.symbols);
        Self { symbols }
    }

    pub fn prefix(&self, len: usize) -> Self {
        Self { symbols: self.symbols[..len].to_vec() }
    }

    pub fn starts_with(&self, other: &Word) -> bool {
        self.symbols.starts_with(&other.symbols)
    }

    pub fn check_arity(&self, arity: usize) -> Result<()> {
        match self.symbols.iter().find(|&&s| usize::from(s) >= arity) {
            Some(s) => Err(Error::InvalidInput(format!("word symbol {s} out of range 0..{arity}"))),
            None => Ok(()),
        }
    }

    /// Position in the lexicographic order of words of the same length.
    pub fn index(&self, arity: usize) -> usize {
        self.symbols.iter().fold(0, |acc, &s| acc * arity + usize::from(s))
    }

    pub fn from_index(len: usize, mut index: usize, arity: usize) -> Self {
        let mut symbols = vec![0u8; len];
        for slot in symbols.iter_mut().rev() {
            *slot = (index % arity) as u8;
            index /= arity;
        }
        Self { symbols }
    }

    /// All words of length `len` in lexicographic order.
    pub fn all(len: usize, arity: usize) -> impl Iterator<Item = Word> {
        let count = arity.pow(len as u32);
        (0..count).map(move |i| Word::from_index(len, i, arity))
    }

    /// All words of length `0..=max_len`, shorter first, each length in
    /// lexicographic order.
    pub fn up_to(max_len: usize, arity: usize) -> Vec<Word> {
        (0..=max_len).flat_map(|l| Word::all(l, arity)).collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.symbols.is_empty() {
            return f.write_str("-");
        }
        for s in &self.symbols {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "-" {
            return Ok(Word::empty());
        }
        s.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::InvalidInput(format!("bad word symbol `{c}` in `{s}`")))
            })
            .collect::<Result<Vec<u8>>>()
            .map(Word::new)
    }
}

impl From<Word> for String {
    fn from(w: Word) -> String {
        w.to_string()
    }
}

impl TryFrom<String> for Word {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}
