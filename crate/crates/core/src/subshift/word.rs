use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::families::WindowSet;

/// A finite word over `{0, 1}`. Symbols are stored one per byte.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(symbols: Vec<u8>) -> Result<Self> {
        if let Some(&bad) = symbols.iter().find(|&&s| s > 1) {
            return Err(Error::InvalidSymbol(char::from(bad.saturating_add(b'0'))));
        }
        Ok(Word(symbols))
    }

    pub fn zeros(len: usize) -> Self {
        Word(vec![0; len])
    }

    pub fn ones(len: usize) -> Self {
        Word(vec![1; len])
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Word(bits.iter().map(|&b| b as u8).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<u8> {
        self.0
    }

    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    pub fn prefix(&self, len: usize) -> Word {
        self.slice(0, len)
    }

    pub fn push_word(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn push_zeros(&mut self, n: usize) {
        self.0.resize(self.0.len() + n, 0);
    }

    pub fn repeat(&self, n: usize) -> Word {
        Word(self.0.repeat(n))
    }

    /// Positions of `1`s.
    pub fn ones_positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &s)| s == 1).map(|(i, _)| i)
    }

    /// Pointwise `self <= other` on a window of `other` starting at `at`.
    pub fn dominated_at(&self, other: &[u8], at: usize) -> bool {
        at + self.len() <= other.len()
            && self.0.iter().zip(&other[at..]).all(|(&a, &b)| a <= b)
    }

    /// Bits packed most-significant first, hex encoded.
    pub fn to_hex(&self) -> String {
        let bytes: Vec<u8> = self
            .0
            .chunks(8)
            .map(|c| {
                c.iter()
                    .enumerate()
                    .fold(0u8, |acc, (i, &b)| acc | (b << (7 - i)))
            })
            .collect();
        hex::encode(bytes)
    }

    pub fn from_hex(len: usize, s: &str) -> Result<Self> {
        let bytes = hex::decode(s.trim()).map_err(|e| Error::parse(0, format!("hex: {e}")))?;
        if bytes.len() != len.div_ceil(8) {
            return Err(Error::parse(0, "hex length does not match word length"));
        }
        let symbols = (0..len).map(|i| bytes[i / 8] >> (7 - i % 8) & 1).collect();
        Ok(Word(symbols))
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidSymbol(other)),
            })
            .collect::<Result<Vec<u8>>>()
            .map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.0.iter().map(|&b| if b == 1 { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

/// The initial segment of a point of a subshift, with a free-form tag
/// recording where it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointPrefix {
    word: Word,
    label: String,
}

impl PointPrefix {
    pub fn new(word: Word, label: impl Into<String>) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::EmptyHorizon);
        }
        Ok(PointPrefix {
            word,
            label: label.into(),
        })
    }

    /// Indicator `1_S` of a window set.
    pub fn indicator(set: &WindowSet, label: impl Into<String>) -> Self {
        PointPrefix {
            word: Word::from_bools(&set.indicator()),
            label: label.into(),
        }
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn symbols(&self) -> &[u8] {
        self.word.symbols()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn horizon(&self) -> usize {
        self.word.len()
    }

    pub fn at(&self, i: usize) -> u8 {
        self.word.symbols()[i]
    }

    /// Positions of `1`s as a set on `[0, H)`.
    pub fn support(&self) -> WindowSet {
        WindowSet::new(self.horizon(), self.word.ones_positions().collect())
            .expect("positions are increasing and in range")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let w: Word = "0110".parse().unwrap();
        assert_eq!(w.symbols(), &[0, 1, 1, 0]);
        assert_eq!(w.to_string(), "0110");
        assert!(matches!("012".parse::<Word>(), Err(Error::InvalidSymbol('2'))));
        assert!(Word::new(vec![0, 2]).is_err());
    }

    #[test]
    fn hex_packing() {
        let w: Word = "1000100011".parse().unwrap();
        assert_eq!(w.to_hex(), "88c0");
        assert_eq!(Word::from_hex(10, "88c0").unwrap(), w);
        assert!(Word::from_hex(20, "88c0").is_err());
    }

    #[test]
    fn domination() {
        let a: Word = "101".parse().unwrap();
        assert!(a.dominated_at(&[0, 1, 1, 1], 1));
        assert!(!a.dominated_at(&[1, 0, 0, 1], 0));
        assert!(!a.dominated_at(&[1, 1], 0));
    }
}
