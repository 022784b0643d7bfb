//! Freely reduced words over the two generators `a`, `b` of the free group.
//!
//! The text format is the compact one: `a`, `b` for the generators and `A`,
//! `B` for their inverses. The parser additionally accepts whitespace
//! separated powers such as `a b^2 a^-1 b^-3`.

use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// One of the two generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    A,
    B,
}

/// A generator or the inverse of one.
///
/// The derived ordering is the canonical letter order `a < A < b < B` used
/// for every enumeration and witness tie-break in the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Letter {
    A = 0,
    AInv = 1,
    B = 2,
    BInv = 3,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::A, Letter::AInv, Letter::B, Letter::BInv];

    pub fn new(generator: Generator, sign: i8) -> Letter {
        match (generator, sign > 0) {
            (Generator::A, true) => Letter::A,
            (Generator::A, false) => Letter::AInv,
            (Generator::B, true) => Letter::B,
            (Generator::B, false) => Letter::BInv,
        }
    }

    #[inline]
    pub fn from_index(i: u8) -> Letter {
        Letter::ALL[i as usize]
    }

    #[inline]
    pub fn index(self) -> u8 {
        self as u8
    }

    #[inline]
    pub fn inverse(self) -> Letter {
        Letter::from_index(self.index() ^ 1)
    }

    #[inline]
    pub fn generator(self) -> Generator {
        if self.index() < 2 {
            Generator::A
        } else {
            Generator::B
        }
    }

    /// `+1` for a generator, `-1` for an inverse.
    #[inline]
    pub fn sign(self) -> i8 {
        if self.index() & 1 == 0 {
            1
        } else {
            -1
        }
    }

    #[inline]
    pub fn is_a(self) -> bool {
        self.index() < 2
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::AInv => 'A',
            Letter::B => 'b',
            Letter::BInv => 'B',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'a' => Some(Letter::A),
            'A' => Some(Letter::AInv),
            'b' => Some(Letter::B),
            'B' => Some(Letter::BInv),
            _ => None,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

/// Freely reduces a letter sequence.
pub fn free_reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
    let mut out: Vec<Letter> = Vec::new();
    for l in letters {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word(out)
}

/// True when no two adjacent letters cancel.
pub fn is_freely_reduced(letters: &[Letter]) -> bool {
    letters.windows(2).all(|p| p[0] != p[1].inverse())
}

/// True when `letters` is freely reduced and its first and last letters do
/// not cancel.
pub fn is_cyclically_reduced(letters: &[Letter]) -> bool {
    is_freely_reduced(letters)
        && match (letters.first(), letters.last()) {
            (Some(&f), Some(&l)) => letters.len() == 1 || f != l.inverse(),
            _ => true,
        }
}

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    /// Wraps letters the caller knows to be freely reduced.
    pub(crate) fn from_reduced(letters: Vec<Letter>) -> Word {
        debug_assert!(is_freely_reduced(&letters));
        Word(letters)
    }

    /// `g^k` for a generator `g` and any integer `k`.
    pub fn power(generator: Generator, k: i64) -> Word {
        let l = Letter::new(generator, if k >= 0 { 1 } else { -1 });
        Word(vec![l; k.unsigned_abs() as usize])
    }

    /// Product of generator powers, freely reduced.
    pub fn from_powers(powers: &[(Generator, i64)]) -> Word {
        free_reduce(powers.iter().flat_map(|&(g, k)| Word::power(g, k).0))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Free product `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        free_reduce(self.0.iter().chain(other.0.iter()).copied())
    }

    /// `self · other · self⁻¹`.
    pub fn conjugate(&self, other: &Word) -> Word {
        self.concat(other).concat(&self.inverse())
    }

    pub fn pow(&self, k: u32) -> Word {
        free_reduce((0..k).flat_map(|_| self.0.iter().copied()))
    }

    /// Sum of the exponents of `a` (the image under `a ↦ 1, b ↦ 0`).
    pub fn a_exponent_sum(&self) -> i64 {
        exponent_sum(&self.0, Generator::A)
    }

    pub fn b_exponent_sum(&self) -> i64 {
        exponent_sum(&self.0, Generator::B)
    }

    /// Splits `self = conjugator · core · conjugator⁻¹` with `core`
    /// cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let w = &self.0;
        let mut i = 0;
        while w.len() >= 2 * (i + 1) && w[i] == w[w.len() - 1 - i].inverse() {
            i += 1;
        }
        (Word(w[i..w.len() - i].to_vec()), Word(w[..i].to_vec()))
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        is_cyclically_reduced(&self.0)
    }

    /// All cyclic permutations of `self` (which must be cyclically reduced
    /// for these to stay reduced).
    pub fn rotations(&self) -> impl Iterator<Item = Word> + '_ {
        (0..self.0.len().max(1)).map(move |i| {
            let mut v = self.0[i..].to_vec();
            v.extend_from_slice(&self.0[..i]);
            Word(v)
        })
    }

    pub fn syllables(&self) -> SyllableDecomposition {
        SyllableDecomposition::of_letters(&self.0)
    }
}

/// `(core, conjugator)` with `w = conjugator · core · conjugator⁻¹`.
pub fn cyclic_reduce(w: &Word) -> (Word, Word) {
    w.cyclic_reduce()
}

pub fn syllables(w: &Word) -> SyllableDecomposition {
    w.syllables()
}

fn exponent_sum(letters: &[Letter], g: Generator) -> i64 {
    letters
        .iter()
        .filter(|l| l.generator() == g)
        .map(|l| l.sign() as i64)
        .sum()
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        free_reduce(iter)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseWordError {
    #[error("unexpected character {found:?} at position {pos}")]
    BadChar { pos: usize, found: char },
    #[error("malformed exponent at position {pos}")]
    BadExponent { pos: usize },
}

impl FromStr for Word {
    type Err = ParseWordError;

    /// Accepts the compact form (`abAB`) or whitespace separated powers
    /// (`a b^2 a^-1`). `""` and `"1"` denote the empty word.
    fn from_str(s: &str) -> Result<Word, ParseWordError> {
        let t = s.trim();
        if t.is_empty() || t == "1" {
            return Ok(Word::empty());
        }
        let mut letters = Vec::new();
        let chars: Vec<(usize, char)> = s.char_indices().collect();
        let mut i = 0;
        while i < chars.len() {
            let (pos, c) = chars[i];
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let letter = Letter::from_char(c).ok_or(ParseWordError::BadChar { pos, found: c })?;
            i += 1;
            let mut k: i64 = 1;
            if i < chars.len() && chars[i].1 == '^' {
                let exp_pos = chars[i].0;
                i += 1;
                let start = i;
                if i < chars.len() && (chars[i].1 == '-' || chars[i].1 == '+') {
                    i += 1;
                }
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().map(|&(_, c)| c).collect();
                k = text
                    .parse()
                    .map_err(|_| ParseWordError::BadExponent { pos: exp_pos })?;
            }
            let l = if k < 0 { letter.inverse() } else { letter };
            letters.extend(std::iter::repeat_n(l, k.unsigned_abs() as usize));
        }
        Ok(free_reduce(letters))
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Word, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `b^{α₀} a^{ε₁} b^{α₁} … a^{ε_k} b^{α_k}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SyllableDecomposition {
    pub alpha: Vec<i64>,
    pub eps: Vec<i8>,
}

impl SyllableDecomposition {
    fn of_letters(letters: &[Letter]) -> SyllableDecomposition {
        let mut alpha = vec![0i64];
        let mut eps = Vec::new();
        for &l in letters {
            if l.is_a() {
                eps.push(l.sign());
                alpha.push(0);
            } else {
                *alpha.last_mut().unwrap() += l.sign() as i64;
            }
        }
        SyllableDecomposition { alpha, eps }
    }

    /// Number of `a`-letters.
    pub fn k(&self) -> usize {
        self.eps.len()
    }

    /// Checks `alpha.len() == eps.len() + 1` and that every empty inner
    /// `b`-syllable sits between equal-sign `a`-letters.
    pub fn is_valid(&self) -> bool {
        self.alpha.len() == self.eps.len() + 1
            && self.eps.iter().all(|&e| e == 1 || e == -1)
            && (1..self.eps.len()).all(|i| self.alpha[i] != 0 || self.eps[i - 1] == self.eps[i])
    }

    pub fn reassemble(&self) -> Word {
        let mut letters = Vec::new();
        for (i, &a) in self.alpha.iter().enumerate() {
            if i > 0 {
                letters.push(Letter::new(Generator::A, self.eps[i - 1]));
            }
            letters.extend(Word::power(Generator::B, a).0);
        }
        free_reduce(letters)
    }

    /// Partial sums `σ₀ = 0, σ_i = ε₁ + … + ε_i`.
    pub fn sigma(&self) -> Vec<i64> {
        let mut s = 0i64;
        std::iter::once(0)
            .chain(self.eps.iter().map(|&e| {
                s += e as i64;
                s
            }))
            .collect()
    }
}

/// Number of freely reduced words of length `len` (`4·3^{len−1}`).
pub fn count_reduced(len: usize) -> u64 {
    if len == 0 {
        1
    } else {
        4 * 3u64.pow(len as u32 - 1)
    }
}

/// Visits, in canonical order, every freely reduced word of length `len`
/// starting with `prefix` (cyclically reduced only, when flagged). The
/// visitor receives a borrowed letter buffer and can stop the walk early.
pub fn walk_reduced<B, F>(prefix: &[Letter], len: usize, cyclic_only: bool, mut visit: F) -> Option<B>
where
    F: FnMut(&[Letter]) -> ControlFlow<B>,
{
    if prefix.len() > len || !is_freely_reduced(prefix) {
        return None;
    }
    let mut buf: Vec<Letter> = Vec::with_capacity(len);
    buf.extend_from_slice(prefix);
    if len == 0 {
        return match visit(&buf) {
            ControlFlow::Break(b) => Some(b),
            ControlFlow::Continue(()) => None,
        };
    }
    // next[i] is the next candidate index to try at depth i.
    let mut next: Vec<u8> = vec![0; len + 1];
    let base = prefix.len();
    let mut depth = base;
    loop {
        if depth == len {
            let accept = !cyclic_only || len == 1 || buf[0] != buf[len - 1].inverse();
            if accept {
                if let ControlFlow::Break(b) = visit(&buf) {
                    return Some(b);
                }
            }
            if depth == base {
                return None;
            }
            depth -= 1;
            buf.pop();
            continue;
        }
        let mut placed = false;
        while next[depth] < 4 {
            let l = Letter::from_index(next[depth]);
            next[depth] += 1;
            if depth > 0 && buf[depth - 1] == l.inverse() {
                continue;
            }
            buf.push(l);
            depth += 1;
            next[depth] = 0;
            placed = true;
            break;
        }
        if !placed {
            if depth == base {
                return None;
            }
            depth -= 1;
            buf.pop();
        }
    }
}

/// Iterator over all reduced words of one length in canonical order.
pub struct ReducedWords {
    words: std::vec::IntoIter<Word>,
}

impl Iterator for ReducedWords {
    type Item = Word;
    fn next(&mut self) -> Option<Word> {
        self.words.next()
    }
}

/// Every freely reduced (optionally cyclically reduced) word of length
/// exactly `len ≥ 1`, in the canonical order.
pub fn enumerate_reduced(len: usize, cyclic_only: bool) -> ReducedWords {
    let mut words = Vec::new();
    walk_reduced::<(), _>(&[], len, cyclic_only, |w| {
        words.push(Word(w.to_vec()));
        ControlFlow::Continue(())
    });
    ReducedWords {
        words: words.into_iter(),
    }
}

/// Reduced prefixes used to shard an enumeration of words of length `len`
/// across workers. Concatenating the shards in the returned order gives
/// the canonical order.
pub fn shard_prefixes(len: usize) -> Vec<Vec<Letter>> {
    let depth = len.min(3);
    let mut out = Vec::new();
    walk_reduced::<(), _>(&[], depth, false, |w| {
        out.push(w.to_vec());
        ControlFlow::Continue(())
    });
    out
}
