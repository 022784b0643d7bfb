//! The space of marked groups on two generators.
//!
//! Two marked groups are at distance `e^{−λ}` where `λ` is the length of a
//! shortest word trivial in exactly one of them. Distances are handled as
//! the integer `λ` throughout.

use std::fmt;
use std::ops::{ControlFlow, RangeInclusive};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bs::{first_trivial_of_length, BsError, BsGroup, SearchMode};
use crate::word::{shard_prefixes, walk_reduced, Letter, Word};
use crate::wreath::Wreath;

/// A group with an ordered pair of generators `(a, b)`, given by its word
/// problem.
pub trait MarkedGroup: Sync {
    fn name(&self) -> String;

    /// Whether the (not necessarily reduced) word is the identity.
    fn is_trivial(&self, letters: &[Letter]) -> bool;

    /// A cheap sufficient test for nontriviality. Must never return `true`
    /// for a trivial word.
    fn certainly_nontrivial(&self, _letters: &[Letter]) -> bool {
        false
    }

    fn decide(&self, w: &Word) -> bool {
        self.is_trivial(w.letters())
    }
}

impl<G: MarkedGroup + ?Sized> MarkedGroup for &G {
    fn name(&self) -> String {
        (**self).name()
    }
    fn is_trivial(&self, letters: &[Letter]) -> bool {
        (**self).is_trivial(letters)
    }
    fn certainly_nontrivial(&self, letters: &[Letter]) -> bool {
        (**self).certainly_nontrivial(letters)
    }
}

/// The free group `F₂` on `a`, `b`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Free;

impl MarkedGroup for Free {
    fn name(&self) -> String {
        "free".into()
    }

    fn is_trivial(&self, letters: &[Letter]) -> bool {
        crate::word::free_reduce(letters.iter().copied()).is_empty()
    }

    fn certainly_nontrivial(&self, letters: &[Letter]) -> bool {
        !letters.is_empty() && crate::word::is_freely_reduced(letters)
    }
}

/// The marked groups reachable from a spec string: `free`, `wreath`,
/// `bs:M,N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MarkedGroupOracle {
    Free,
    Wreath,
    Bs(BsGroup),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleSpecError {
    #[error("unknown group spec {spec:?} at position 0: expected \"free\", \"wreath\" or \"bs:M,N\"")]
    Unknown { spec: String },
    #[error(transparent)]
    Bs(#[from] BsError),
}

impl OracleSpecError {
    /// Byte offset of the problem within the spec string.
    pub fn position(&self) -> usize {
        match self {
            OracleSpecError::Unknown { .. } => 0,
            OracleSpecError::Bs(BsError::Spec { pos, .. }) => *pos,
            OracleSpecError::Bs(_) => 3,
        }
    }
}

pub fn make_oracle(spec: &str) -> Result<MarkedGroupOracle, OracleSpecError> {
    spec.parse()
}

impl FromStr for MarkedGroupOracle {
    type Err = OracleSpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "free" => Ok(MarkedGroupOracle::Free),
            "wreath" => Ok(MarkedGroupOracle::Wreath),
            _ if s.starts_with("bs:") => Ok(MarkedGroupOracle::Bs(s.parse()?)),
            _ => Err(OracleSpecError::Unknown { spec: s.to_string() }),
        }
    }
}

impl fmt::Display for MarkedGroupOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MarkedGroupOracle::Free => write!(f, "free"),
            MarkedGroupOracle::Wreath => write!(f, "wreath"),
            MarkedGroupOracle::Bs(g) => write!(f, "{g}"),
        }
    }
}

impl MarkedGroup for MarkedGroupOracle {
    fn name(&self) -> String {
        self.to_string()
    }

    fn is_trivial(&self, letters: &[Letter]) -> bool {
        match self {
            MarkedGroupOracle::Free => Free.is_trivial(letters),
            MarkedGroupOracle::Wreath => Wreath.is_trivial(letters),
            MarkedGroupOracle::Bs(g) => g.is_trivial(letters),
        }
    }

    fn certainly_nontrivial(&self, letters: &[Letter]) -> bool {
        match self {
            MarkedGroupOracle::Free => Free.certainly_nontrivial(letters),
            MarkedGroupOracle::Wreath => Wreath.certainly_nontrivial(letters),
            MarkedGroupOracle::Bs(g) => g.certainly_nontrivial(letters),
        }
    }
}

/// Outcome of a first-disagreement search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DisagreementResult {
    /// `witness` has length `lambda`, is trivial in exactly one group, and
    /// no shorter word disagrees.
    Found { lambda: u64, witness: Word },
    /// The groups share every relation of length ≤ `L`.
    AgreeUpTo {
        #[serde(rename = "L")]
        searched_up_to: u64,
    },
}

impl DisagreementResult {
    pub fn lambda(&self) -> Option<u64> {
        match self {
            DisagreementResult::Found { lambda, .. } => Some(*lambda),
            DisagreementResult::AgreeUpTo { .. } => None,
        }
    }
}

fn disagree_at<G1, G2>(g1: &G1, g2: &G2, len: usize, mode: SearchMode) -> Option<Word>
where
    G1: MarkedGroup + ?Sized,
    G2: MarkedGroup + ?Sized,
{
    shard_prefixes(len).par_iter().find_map_first(|prefix| {
        walk_reduced(prefix, len, true, |w| {
            if mode == SearchMode::Pruned && g1.certainly_nontrivial(w) && g2.certainly_nontrivial(w) {
                return ControlFlow::Continue(());
            }
            if g1.is_trivial(w) != g2.is_trivial(w) {
                ControlFlow::Break(Word::from_reduced(w.to_vec()))
            } else {
                ControlFlow::Continue(())
            }
        })
    })
}

/// Shortest word (then first in canonical order) trivial in exactly one of
/// the two groups, scanning cyclically reduced words up to `max_len`.
pub fn first_disagreement<G1, G2>(g1: &G1, g2: &G2, max_len: u64) -> DisagreementResult
where
    G1: MarkedGroup + ?Sized,
    G2: MarkedGroup + ?Sized,
{
    first_disagreement_with(g1, g2, max_len, SearchMode::Pruned)
}

pub fn first_disagreement_with<G1, G2>(g1: &G1, g2: &G2, max_len: u64, mode: SearchMode) -> DisagreementResult
where
    G1: MarkedGroup + ?Sized,
    G2: MarkedGroup + ?Sized,
{
    for len in 1..=max_len {
        if let Some(witness) = disagree_at(g1, g2, len as usize, mode) {
            return DisagreementResult::Found { lambda: len, witness };
        }
    }
    DisagreementResult::AgreeUpTo { searched_up_to: max_len }
}

/// `λ` with `d = e^{−λ}`, or the bound `λ ≥ L + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceExponent {
    Exact(u64),
    AtLeast(u64),
}

impl fmt::Display for DistanceExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistanceExponent::Exact(l) => write!(f, "d = e^-{l}"),
            DistanceExponent::AtLeast(l) => write!(f, "d <= e^-{l}"),
        }
    }
}

pub fn distance_exponent<G1, G2>(g1: &G1, g2: &G2, max_len: u64) -> DistanceExponent
where
    G1: MarkedGroup + ?Sized,
    G2: MarkedGroup + ?Sized,
{
    match first_disagreement(g1, g2, max_len) {
        DisagreementResult::Found { lambda, .. } => DistanceExponent::Exact(lambda),
        DisagreementResult::AgreeUpTo { searched_up_to } => DistanceExponent::AtLeast(searched_up_to + 1),
    }
}

/// Every cyclically reduced relation of length ≤ `max_len`, by length then
/// canonical order.
pub fn relations_up_to<G: MarkedGroup + ?Sized>(g: &G, max_len: u64) -> Vec<Word> {
    let mut out = Vec::new();
    for len in 1..=max_len as usize {
        let per_shard: Vec<Vec<Word>> = shard_prefixes(len)
            .par_iter()
            .map(|prefix| {
                let mut found = Vec::new();
                walk_reduced::<(), _>(prefix, len, true, |w| {
                    if !g.certainly_nontrivial(w) && g.is_trivial(w) {
                        found.push(Word::from_reduced(w.to_vec()));
                    }
                    ControlFlow::Continue(())
                });
                found
            })
            .collect();
        out.extend(per_shard.into_iter().flatten());
    }
    out
}

/// First relation found among cyclically reduced words of one length.
pub fn first_relation_of_length<G: MarkedGroup + ?Sized>(g: &G, len: usize) -> Option<Word> {
    first_trivial_of_length(g, len, SearchMode::Pruned)
}

/// Truth values of `w = 1` along an indexed family of marked groups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilizationReport {
    pub indices: Vec<i64>,
    pub truths: Vec<bool>,
    /// Constant over the trailing half of the window.
    pub trailing_constant: bool,
    /// Index at which the value last changed, if it ever did.
    pub last_flip: Option<i64>,
}

pub fn stabilization_check<G, F>(family: F, w: &Word, window: RangeInclusive<i64>) -> StabilizationReport
where
    G: MarkedGroup,
    F: Fn(i64) -> G,
{
    assert!(!window.is_empty(), "window must be nonempty");
    let indices: Vec<i64> = window.collect();
    let truths: Vec<bool> = indices.iter().map(|&j| family(j).decide(w)).collect();
    let half = truths.len() / 2;
    let tail = &truths[half..];
    let trailing_constant = tail.iter().all(|&t| t == tail[0]);
    let last_flip = (1..truths.len())
        .rev()
        .find(|&i| truths[i] != truths[i - 1])
        .map(|i| indices[i]);
    StabilizationReport {
        indices,
        truths,
        trailing_constant,
        last_flip,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::congruence_witness_word;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn bs(m: i64, n: i64) -> MarkedGroupOracle {
        MarkedGroupOracle::Bs(BsGroup::new(m, n).unwrap())
    }

    #[test]
    fn make_oracle_examples() {
        assert!(!make_oracle("free").unwrap().decide(&w("abAB")));
        assert!(make_oracle("bs:1,1").unwrap().decide(&w("abAB")));
        assert!(!make_oracle("wreath").unwrap().decide(&w("b")));
        for g in ["free", "wreath", "bs:2,3"] {
            assert!(make_oracle(g).unwrap().decide(&Word::empty()));
        }
        let e = make_oracle("bs:2,x").unwrap_err();
        assert_eq!(e.position(), 5);
        assert_eq!(make_oracle("lamplighter").unwrap_err().position(), 0);
        assert!(matches!(make_oracle("bs:0,2"), Err(OracleSpecError::Bs(BsError::ZeroParameter { .. }))));
    }

    #[test]
    fn disagreement_examples() {
        let r = first_disagreement(&bs(2, 3), &Free, 8);
        let DisagreementResult::Found { lambda, witness } = r else {
            panic!("expected a disagreement")
        };
        assert_eq!(lambda, 7);
        assert!(bs(2, 3).decide(&witness) && !Free.decide(&witness));
        assert_eq!(
            first_disagreement(&bs(2, 3), &bs(2, 3), 8),
            DisagreementResult::AgreeUpTo { searched_up_to: 8 }
        );
        assert_eq!(
            first_disagreement(&bs(1, 2), &MarkedGroupOracle::Wreath, 4),
            DisagreementResult::AgreeUpTo { searched_up_to: 4 }
        );
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance_exponent(&bs(2, 3), &Free, 8), DistanceExponent::Exact(7));
        assert_eq!(distance_exponent(&Free, &Free, 5), DistanceExponent::AtLeast(6));
        assert_eq!(distance_exponent(&bs(1, 1), &Free, 6), DistanceExponent::Exact(4));
    }

    #[test]
    fn relations_examples() {
        assert!(relations_up_to(&Free, 10).is_empty());
        let rels: Vec<String> = relations_up_to(&bs(1, 1), 4).iter().map(|w| w.to_string()).collect();
        assert_eq!(rels, ["abAB", "aBAb", "AbaB", "ABab", "baBA", "bABa", "BabA", "BAba"]);
        assert!(relations_up_to(&bs(2, 3), 6).is_empty());
    }

    #[test]
    fn stabilization_examples() {
        let wk = congruence_witness_word(2, 3, 2);
        let r = stabilization_check(|j| bs(2, 3 + 4 * j), &wk, 0..=10);
        assert!(r.truths.iter().all(|&t| t));
        assert!(r.trailing_constant);
        assert_eq!(r.last_flip, None);

        let r = stabilization_check(|n| bs(1, n), &w("abAB"), 2..=12);
        assert!(r.truths.iter().all(|&t| !t));
        assert!(r.trailing_constant);

        let r = stabilization_check(|n| bs(2, n), &Word::empty(), 1..=5);
        assert!(r.truths.iter().all(|&t| t));

        // BS(m, 1+m) relation a b^m a^-1 b^-(m+1) only holds at n = 3.
        let r = stabilization_check(|n| bs(2, n), &w("abbABBB"), 1..=9);
        assert_eq!(r.last_flip, Some(4));
        assert!(r.trailing_constant);
    }

    #[test]
    fn json_shapes() {
        let found = DisagreementResult::Found {
            lambda: 7,
            witness: w("abbABBB"),
        };
        assert_eq!(
            serde_json::to_string(&found).unwrap(),
            r#"{"kind":"found","lambda":7,"witness":"abbABBB"}"#
        );
        let agree = DisagreementResult::AgreeUpTo { searched_up_to: 8 };
        assert_eq!(serde_json::to_string(&agree).unwrap(), r#"{"kind":"agree_up_to","L":8}"#);
        let back: DisagreementResult = serde_json::from_str(r#"{"kind":"found","lambda":7,"witness":"abbABBB"}"#).unwrap();
        assert_eq!(back, found);
    }
}
