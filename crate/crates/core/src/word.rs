//! Letters, words and alphabets.
//!
//! A [`Word`] is a plain sequence of signed generator letters. Generators are
//! referred to by their index in some [`Alphabet`]; the alphabet is only needed
//! to parse and print words.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn pos(gen: usize) -> Self {
        Letter {
            gen,
            inverse: false,
        }
    }

    pub fn neg(gen: usize) -> Self {
        Letter { gen, inverse: true }
    }

    /// Dense index `2 * gen + inverse`; orders letters as `x, x^-1, y, y^-1, ...`.
    #[inline]
    pub fn index(self) -> usize {
        2 * self.gen + self.inverse as usize
    }

    #[inline]
    pub fn from_index(index: usize) -> Self {
        Letter {
            gen: index / 2,
            inverse: index % 2 == 1,
        }
    }

    #[inline]
    pub fn inv(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    /// Same letter with the generator index moved by `offset`.
    pub fn shifted(self, offset: usize) -> Self {
        Letter {
            gen: self.gen + offset,
            inverse: self.inverse,
        }
    }
}

/// An ordered list of generator names.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Alphabet {
    names: Vec<String>,
    lookup: HashMap<String, usize>,
}

impl Alphabet {
    /// Builds an alphabet, rejecting repeated names.
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut alphabet = Alphabet::default();
        for name in names {
            let name = name.into();
            if alphabet.lookup.contains_key(&name) {
                return Err(Error::AlphabetClash(name));
            }
            alphabet.lookup.insert(name.clone(), alphabet.names.len());
            alphabet.names.push(name);
        }
        Ok(alphabet)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, gen: usize) -> &str {
        &self.names[gen]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.lookup.get(name).copied()
    }
}

/// A word over an alphabet, possibly empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    /// `gen^exp`, expanded.
    pub fn power(gen: usize, exp: i64) -> Self {
        let letter = if exp < 0 {
            Letter::neg(gen)
        } else {
            Letter::pos(gen)
        };
        Word {
            letters: vec![letter; exp.unsigned_abs() as usize],
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn push(&mut self, letter: Letter) {
        self.letters.push(letter);
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    /// `self^k`, with negative `k` meaning powers of the inverse.
    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        Word { letters }
    }

    /// Every letter's generator index moved by `offset`.
    pub fn shifted(&self, offset: usize) -> Word {
        Word {
            letters: self.letters.iter().map(|l| l.shifted(offset)).collect(),
        }
    }

    /// Cancels adjacent `x x^-1` pairs until none remain.
    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.len());
        for &l in &self.letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    /// Free reduction followed by removal of matching first/last letters.
    pub fn cyclic_reduce(&self) -> Word {
        let reduced = self.free_reduce();
        let l = &reduced.letters;
        let (mut i, mut j) = (0, l.len());
        while j - i >= 2 && l[i] == l[j - 1].inv() {
            i += 1;
            j -= 1;
        }
        Word {
            letters: l[i..j].to_vec(),
        }
    }

    /// Rotation starting at position `k`.
    pub fn rotate(&self, k: usize) -> Word {
        if self.is_empty() {
            return Word::empty();
        }
        let k = k % self.len();
        let mut letters = self.letters[k..].to_vec();
        letters.extend_from_slice(&self.letters[..k]);
        Word { letters }
    }

    /// Least word among all rotations of the cyclic reduction and of its
    /// inverse. Two relators generate the same normal closure summand exactly
    /// when they share this form up to conjugacy.
    pub fn cyclic_canonical(&self) -> Word {
        let w = self.cyclic_reduce();
        let inv = w.inverse();
        (0..w.len().max(1))
            .flat_map(|k| [w.rotate(k), inv.rotate(k)])
            .min()
            .unwrap_or_default()
    }

    /// Number of occurrences of `gen` or its inverse.
    pub fn occurrences(&self, gen: usize) -> usize {
        self.letters.iter().filter(|l| l.gen == gen).count()
    }

    /// Splits into maximal runs on which `class` is constant.
    pub fn runs_by<K: PartialEq, F: Fn(Letter) -> K>(&self, class: F) -> Vec<(K, Word)> {
        let mut out: Vec<(K, Word)> = Vec::new();
        for &l in &self.letters {
            let k = class(l);
            match out.last_mut() {
                Some((last, w)) if *last == k => w.push(l),
                _ => out.push((k, Word::from_letters(vec![l]))),
            }
        }
        out
    }

    /// Renders with run-length exponents, e.g. `x^2 y^-1`; the empty word
    /// renders as `1`.
    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> WordDisplay<'a> {
        WordDisplay {
            word: self,
            names: alphabet.names(),
        }
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

impl From<Vec<Letter>> for Word {
    fn from(letters: Vec<Letter>) -> Self {
        Word { letters }
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        let mut i = 0;
        let letters = self.word.letters();
        while i < letters.len() {
            let l = letters[i];
            let mut j = i;
            while j < letters.len() && letters[j] == l {
                j += 1;
            }
            let run = (j - i) as i64;
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            let name = self
                .names
                .get(l.gen)
                .map(String::as_str)
                .unwrap_or("?");
            let exp = if l.inverse { -run } else { run };
            if exp == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{exp}")?;
            }
            i = j;
        }
        Ok(())
    }
}

/// Parses whitespace-separated tokens `name`, `name^k` or `name^-k`.
/// The token `1` stands for the empty word.
pub fn parse_word(text: &str, alphabet: &Alphabet) -> Result<Word> {
    let mut word = Word::empty();
    for token in text.split_whitespace() {
        if token == "1" {
            continue;
        }
        let (name, exp) = match token.split_once('^') {
            None => (token, 1i64),
            Some((name, exp)) => {
                let exp: i64 = exp
                    .parse()
                    .map_err(|_| Error::MalformedExponent(token.to_string()))?;
                (name, exp)
            }
        };
        let gen = alphabet
            .index_of(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        word.letters
            .extend(Word::power(gen, exp).letters.iter().copied());
    }
    Ok(word)
}

/// True for ASCII identifiers: a letter or `_` followed by letters, digits or `_`.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Alphabet {
        Alphabet::new(["x", "y"]).unwrap()
    }

    #[test]
    fn parses_tokens_and_powers() {
        let a = xy();
        let w = parse_word("x y^-1", &a).unwrap();
        assert_eq!(w.letters(), &[Letter::pos(0), Letter::neg(1)]);
        let w = parse_word("x^4", &Alphabet::new(["x"]).unwrap()).unwrap();
        assert_eq!(w.letters(), &[Letter::pos(0); 4]);
        let w = parse_word("x^-2", &a).unwrap();
        assert_eq!(w.letters(), &[Letter::neg(0); 2]);
        assert!(parse_word("", &a).unwrap().is_empty());
        assert!(parse_word("1", &a).unwrap().is_empty());
    }

    #[test]
    fn rejects_unknown_generator_and_bad_exponent() {
        let a = xy();
        assert_eq!(
            parse_word("z", &a),
            Err(Error::UnknownGenerator("z".into()))
        );
        assert!(matches!(
            parse_word("x^a", &a),
            Err(Error::MalformedExponent(_))
        ));
        assert!(matches!(
            parse_word("x^", &a),
            Err(Error::MalformedExponent(_))
        ));
    }

    #[test]
    fn free_reduction_examples() {
        let a = xy();
        let p = |s| parse_word(s, &a).unwrap();
        assert_eq!(p("x x^-1 y").free_reduce(), p("y"));
        assert_eq!(Word::empty().free_reduce(), Word::empty());
        assert_eq!(p("x y y^-1 x^-1").free_reduce(), Word::empty());
    }

    #[test]
    fn cyclic_reduction_and_canonical_form() {
        let a = xy();
        let p = |s| parse_word(s, &a).unwrap();
        assert_eq!(p("y x^2 y^-1").cyclic_reduce(), p("x^2"));
        assert_eq!(
            p("x y^-2").cyclic_canonical(),
            p("y^2 x^-1").cyclic_canonical()
        );
        assert_eq!(p("x y").cyclic_canonical(), p("y x").cyclic_canonical());
        assert_ne!(p("x y").cyclic_canonical(), p("x y^-1").cyclic_canonical());
    }

    #[test]
    fn display_compresses_runs() {
        let a = xy();
        let w = parse_word("x x y^-1 y^-1 y^-1 x", &a).unwrap();
        assert_eq!(w.display(&a).to_string(), "x^2 y^-3 x");
        assert_eq!(Word::empty().display(&a).to_string(), "1");
    }

    #[test]
    fn repeated_alphabet_names_clash() {
        assert_eq!(
            Alphabet::new(["x", "x"]),
            Err(Error::AlphabetClash("x".into()))
        );
    }
}
