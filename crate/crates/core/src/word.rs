use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite word over the digits {1, 2}.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(digits: Vec<u8>) -> Result<Self> {
        if let Some(&d) = digits.iter().find(|&&d| d != 1 && d != 2) {
            return Err(Error::InvalidDigit(char::from(b'0' + d.min(9))));
        }
        Ok(Word(digits))
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Builds a word from digits already known to lie in {1, 2}.
    pub(crate) fn from_raw(digits: Vec<u8>) -> Self {
        debug_assert!(digits.iter().all(|&d| d == 1 || d == 2));
        Word(digits)
    }

    pub fn repeat_digit(d: u8, n: usize) -> Self {
        assert!(d == 1 || d == 2);
        Word(vec![d; n])
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&mut self, d: u8) {
        assert!(d == 1 || d == 2);
        self.0.push(d);
    }

    /// The transposed word a_n … a_1.
    pub fn transpose(&self) -> Word {
        let mut v = self.0.clone();
        v.reverse();
        Word(v)
    }

    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    /// Whether `needle` occurs as a factor.
    pub fn contains(&self, needle: &Word) -> bool {
        needle.is_empty()
            || self
                .0
                .windows(needle.len())
                .any(|w| w == needle.0.as_slice())
    }

    pub fn starts_with(&self, prefix: &Word) -> bool {
        self.0.starts_with(&prefix.0)
    }

    pub fn ends_with(&self, suffix: &Word) -> bool {
        self.0.ends_with(&suffix.0)
    }

    pub fn into_vec(self) -> Vec<u8> {
        self.0
    }
}

impl Index<usize> for Word {
    type Output = u8;

    fn index(&self, i: usize) -> &u8 {
        &self.0[i]
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &d in &self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                '1' => Ok(1),
                '2' => Ok(2),
                other => Err(Error::InvalidDigit(other)),
            })
            .collect::<Result<Vec<u8>>>()
            .map(Word)
    }
}

impl TryFrom<String> for Word {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Word> for String {
    fn from(w: Word) -> String {
        w.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        let w: Word = "2211".parse().unwrap();
        assert_eq!(w.digits(), &[2, 2, 1, 1]);
        assert_eq!(w.to_string(), "2211");
        assert!("2131".parse::<Word>().is_err());
    }

    #[test]
    fn transpose_is_an_involution() {
        let w: Word = "22121".parse().unwrap();
        assert_eq!(w.transpose().to_string(), "12122");
        assert_eq!(w.transpose().transpose(), w);
    }

    #[test]
    fn factor_search() {
        let w: Word = "221122".parse().unwrap();
        assert!(w.contains(&"1122".parse().unwrap()));
        assert!(!w.contains(&"121".parse().unwrap()));
    }
}
