//! Letters and words over the symmetric alphabet `x1..xm, X1..Xm`.
//!
//! A letter is a nonzero signed index: `i` stands for the generator `x_i`
//! and `-i` for its inverse. Words are finite letter sequences; the empty
//! word is ε.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GroupError;

/// A signed generator index; `-i` denotes the inverse of generator `i`.
pub type Letter = i32;

/// Inverse of a single letter.
#[inline]
pub fn letter_inverse(letter: Letter) -> Letter {
    -letter
}

/// The generating alphabet `x1..xm` together with their formal inverses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GeneratorAlphabet {
    rank: usize,
}

impl GeneratorAlphabet {
    pub fn new(rank: usize) -> Result<Self, GroupError> {
        if rank == 0 {
            return Err(GroupError::ZeroRank);
        }
        Ok(Self { rank })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn contains(&self, letter: Letter) -> bool {
        letter != 0 && (letter.unsigned_abs() as usize) <= self.rank
    }

    /// All `2m` letters in ascending signed order (`-m, .., -1, 1, .., m`).
    pub fn letters(&self) -> Vec<Letter> {
        let m = self.rank as Letter;
        (-m..=m).filter(|&l| l != 0).collect()
    }

    pub fn check_word(&self, word: &Word) -> Result<(), GroupError> {
        match word.letters().iter().find(|&&l| !self.contains(l)) {
            Some(&letter) => Err(GroupError::LetterOutOfRange {
                letter,
                rank: self.rank,
            }),
            None => Ok(()),
        }
    }
}

/// A word over the symmetric alphabet.
///
/// Words are ordered shortlex: shorter words first, then lexicographically
/// by signed letter value. This is the order used everywhere a single
/// witness has to be picked deterministically.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: impl Into<Vec<Letter>>) -> Self {
        Word(letters.into())
    }

    pub fn single(letter: Letter) -> Self {
        Word(vec![letter])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Reverses the word and inverts every letter.
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&l| letter_inverse(l)).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// Concatenation of several words, left to right.
    pub fn concat_all<'a>(parts: impl IntoIterator<Item = &'a Word>) -> Word {
        let mut letters = Vec::new();
        for part in parts {
            letters.extend_from_slice(&part.0);
        }
        Word(letters)
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    /// Space-separated token form, `x1` for a generator and `X1` for its
    /// inverse. The empty word renders as an empty string.
    pub fn to_tokens(&self) -> String {
        self.0
            .iter()
            .map(|&l| letter_token(l))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parses the token form produced by [`Word::to_tokens`]. `(eps)` and
    /// the empty string both denote ε.
    pub fn parse_tokens(text: &str) -> Result<Word, GroupError> {
        let text = text.trim();
        if text.is_empty() || text == "(eps)" {
            return Ok(Word::empty());
        }
        text.split_whitespace()
            .map(parse_token)
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

fn letter_token(letter: Letter) -> String {
    if letter > 0 {
        format!("x{letter}")
    } else {
        format!("X{}", -letter)
    }
}

fn parse_token(token: &str) -> Result<Letter, GroupError> {
    let bad = || GroupError::BadToken(token.to_string());
    let (sign, digits) = match token.as_bytes().first() {
        Some(b'x') => (1, &token[1..]),
        Some(b'X') => (-1, &token[1..]),
        _ => return Err(bad()),
    };
    let index: Letter = digits.parse().map_err(|_| bad())?;
    if index <= 0 {
        return Err(bad());
    }
    Ok(sign * index)
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<Letter>> for Word {
    fn from(letters: Vec<Letter>) -> Self {
        Word(letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            f.write_str("(eps)")
        } else {
            f.write_str(&self.to_tokens())
        }
    }
}
