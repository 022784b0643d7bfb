//! Baumslag–Solitar groups `BS(m,n) = ⟨a, b | a b^m a⁻¹ = b^n⟩`.
//!
//! The word problem is decided by Britton reduction: a pinch `a b^α a⁻¹`
//! with `m | α` is rewritten to `b^{αn/m}`, and `a⁻¹ b^α a` with `n | α` to
//! `b^{αm/n}`. A word is trivial exactly when the pinch-free form is the
//! empty `b`-power.
//!
//! The affine representation `a ↦ (x ↦ (n/m)x)`, `b ↦ (x ↦ x + 1)` and the
//! word polynomial are kept as independent cross-checks of that decision.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::space::MarkedGroup;
use crate::word::{shard_prefixes, walk_reduced, Generator, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BsError {
    #[error("BS(m,n) needs nonzero parameters, got m={m}, n={n}")]
    ZeroParameter { m: i64, n: i64 },
    #[error("malformed group spec {spec:?} at position {pos}: {reason}")]
    Spec {
        spec: String,
        pos: usize,
        reason: &'static str,
    },
    #[error("search cap must be at least 1")]
    ZeroCap,
}

/// The marked group `BS(m,n)` with generators `a`, `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BsGroup {
    m: i64,
    n: i64,
}

impl BsGroup {
    pub fn new(m: i64, n: i64) -> Result<BsGroup, BsError> {
        if m == 0 || n == 0 {
            return Err(BsError::ZeroParameter { m, n });
        }
        Ok(BsGroup { m, n })
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    /// Pinch-free form of `w`, pinching leftmost-first.
    pub fn britton_reduce(&self, w: &Word) -> SyllableForm {
        match reduce_stack::<i64>(self.m, self.n, w.letters()) {
            Some((head, stack)) => SyllableForm::from_stack(
                BigInt::from(head),
                stack.into_iter().map(|(e, a)| (e, BigInt::from(a))),
            ),
            None => {
                let (head, stack) = reduce_stack::<BigInt>(self.m, self.n, w.letters())
                    .expect("unbounded arithmetic cannot overflow");
                SyllableForm::from_stack(head, stack)
            }
        }
    }

    /// Britton reduction that applies pinches one at a time, letting
    /// `choose` pick which of the currently available pinches to apply.
    /// `choose(k)` must return an index below `k`.
    ///
    /// Quadratic; used to check that the outcome does not depend on the
    /// pinch order.
    pub fn britton_reduce_by<F: FnMut(usize) -> usize>(&self, w: &Word, mut choose: F) -> SyllableForm {
        let syl = w.syllables();
        let mut alpha: Vec<BigInt> = syl.alpha.iter().map(|&a| BigInt::from(a)).collect();
        let mut eps = syl.eps;
        let m = BigInt::from(self.m);
        let n = BigInt::from(self.n);
        loop {
            // Pinch i spans a^{eps[i]} b^{alpha[i+1]} a^{eps[i+1]}.
            let pinches: Vec<usize> = (0..eps.len().saturating_sub(1))
                .filter(|&i| {
                    eps[i] == -eps[i + 1] && {
                        let d = if eps[i] > 0 { &m } else { &n };
                        alpha[i + 1].is_multiple_of(d)
                    }
                })
                .collect();
            if pinches.is_empty() {
                return SyllableForm { alpha, eps };
            }
            let i = pinches[choose(pinches.len())];
            let inner = alpha.remove(i + 1);
            let replaced = if eps[i] > 0 {
                inner / &m * &n
            } else {
                inner / &n * &m
            };
            let right = alpha.remove(i + 1);
            alpha[i] += replaced + right;
            eps.drain(i..i + 2);
        }
    }

    pub fn is_identity(&self, w: &Word) -> bool {
        self.is_identity_letters(w.letters())
    }

    /// Word problem on a borrowed letter slice (need not be reduced).
    pub fn is_identity_letters(&self, letters: &[Letter]) -> bool {
        match reduce_stack::<i64>(self.m, self.n, letters) {
            Some((head, stack)) => stack.is_empty() && head == 0,
            None => {
                let (head, stack) = reduce_stack::<BigInt>(self.m, self.n, letters)
                    .expect("unbounded arithmetic cannot overflow");
                stack.is_empty() && head.is_zero()
            }
        }
    }

    /// `Some(λ)` when `w = b^λ` in the group, `None` when `w ∉ ⟨b⟩`.
    pub fn b_exponent(&self, w: &Word) -> Option<BigInt> {
        let form = self.britton_reduce(w);
        if form.eps.is_empty() {
            form.alpha.into_iter().next()
        } else {
            None
        }
    }

    /// `n/m`, the slope of the image of `a`.
    pub fn ratio(&self) -> BigRational {
        BigRational::new(BigInt::from(self.n), BigInt::from(self.m))
    }

    /// Image of `w` in `Aff(ℚ)`, composing letter maps in word order.
    pub fn affine_rep(&self, w: &Word) -> AffineMapQ {
        let up = self.ratio();
        let down = up.recip();
        let mut slope = BigRational::one();
        let mut offset = BigRational::zero();
        for &l in w.letters() {
            match l {
                Letter::A => slope *= &up,
                Letter::AInv => slope *= &down,
                Letter::B => offset += &slope,
                Letter::BInv => offset -= &slope,
            }
        }
        AffineMapQ { slope, offset }
    }

    /// The `ψ_n` criterion: `w ∈ ⟨b⟩` and its affine image is the identity.
    pub fn is_identity_affine_criterion(&self, w: &Word) -> bool {
        self.b_exponent(w).is_some() && self.affine_rep(w).is_identity()
    }

    /// `BS(−m,−n)`, the same marked group.
    pub fn negated(&self) -> BsGroup {
        BsGroup {
            m: -self.m,
            n: -self.n,
        }
    }
}

impl fmt::Display for BsGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "bs:{},{}", self.m, self.n)
    }
}

impl FromStr for BsGroup {
    type Err = BsError;

    /// Parses `bs:M,N`.
    fn from_str(s: &str) -> Result<BsGroup, BsError> {
        let err = |pos, reason| BsError::Spec {
            spec: s.to_string(),
            pos,
            reason,
        };
        let rest = s.strip_prefix("bs:").ok_or_else(|| err(0, "expected prefix \"bs:\""))?;
        let comma = rest.find(',').ok_or_else(|| err(s.len(), "expected ','"))?;
        let m: i64 = rest[..comma]
            .parse()
            .map_err(|_| err(3, "expected a decimal integer"))?;
        let n: i64 = rest[comma + 1..]
            .parse()
            .map_err(|_| err(3 + comma + 1, "expected a decimal integer"))?;
        BsGroup::new(m, n)
    }
}

impl MarkedGroup for BsGroup {
    fn name(&self) -> String {
        self.to_string()
    }

    fn is_trivial(&self, letters: &[Letter]) -> bool {
        self.is_identity_letters(letters)
    }

    /// `a ↦ 1, b ↦ 0` extends to a homomorphism onto ℤ.
    fn certainly_nontrivial(&self, letters: &[Letter]) -> bool {
        a_sum(letters) != 0
    }
}

pub(crate) fn a_sum(letters: &[Letter]) -> i64 {
    letters
        .iter()
        .map(|l| match l {
            Letter::A => 1,
            Letter::AInv => -1,
            _ => 0,
        })
        .sum()
}

/// Exponent arithmetic for Britton reduction: fixed width with overflow
/// detection, or unbounded.
trait Exponent: Clone {
    fn zero() -> Self;
    fn add_small(&self, d: i64) -> Option<Self>;
    fn add(&self, other: &Self) -> Option<Self>;
    /// `Some(Some(self / div * mul))` when `div | self`, `Some(None)` when
    /// not divisible, `None` on overflow.
    fn pinch(&self, div: i64, mul: i64) -> Option<Option<Self>>;
}

impl Exponent for i64 {
    fn zero() -> Self {
        0
    }
    fn add_small(&self, d: i64) -> Option<Self> {
        self.checked_add(d)
    }
    fn add(&self, other: &Self) -> Option<Self> {
        self.checked_add(*other)
    }
    fn pinch(&self, div: i64, mul: i64) -> Option<Option<Self>> {
        // i64::MIN / -1 overflows; route it to the unbounded path.
        if *self == i64::MIN {
            return None;
        }
        if self % div != 0 {
            return Some(None);
        }
        (self / div).checked_mul(mul).map(Some)
    }
}

impl Exponent for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn add_small(&self, d: i64) -> Option<Self> {
        Some(self + d)
    }
    fn add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn pinch(&self, div: i64, mul: i64) -> Option<Option<Self>> {
        let d = BigInt::from(div);
        if !self.is_multiple_of(&d) {
            return Some(None);
        }
        Some(Some(self / d * mul))
    }
}

type Reduced<E> = (E, Vec<(i8, E)>);

/// Single left-to-right pass: the stack holds the surviving `a`-letters,
/// each with the `b`-exponent that follows it. A new `a`-letter pinches
/// against the top of the stack when possible. Since every pinch only
/// creates a candidate at the stack top, this applies pinches in the same
/// order as repeatedly taking the leftmost one.
fn reduce_stack<E: Exponent>(m: i64, n: i64, letters: &[Letter]) -> Option<Reduced<E>> {
    let mut head = E::zero();
    let mut stack: Vec<(i8, E)> = Vec::with_capacity(letters.len());
    for &l in letters {
        match l {
            Letter::B | Letter::BInv => {
                let d = l.sign() as i64;
                let cur = match stack.last_mut() {
                    Some((_, e)) => e,
                    None => &mut head,
                };
                *cur = cur.add_small(d)?;
            }
            Letter::A | Letter::AInv => {
                let sign = l.sign();
                let replacement = match stack.last() {
                    Some((top, alpha)) if *top == -sign => {
                        let (div, mul) = if *top > 0 { (m, n) } else { (n, m) };
                        alpha.pinch(div, mul)?
                    }
                    _ => None,
                };
                match replacement {
                    Some(r) => {
                        stack.pop();
                        let cur = match stack.last_mut() {
                            Some((_, e)) => e,
                            None => &mut head,
                        };
                        *cur = cur.add(&r)?;
                    }
                    None => stack.push((sign, E::zero())),
                }
            }
        }
    }
    Some((head, stack))
}

/// `b^{α₀} a^{ε₁} b^{α₁} … a^{ε_k} b^{α_k}` with unbounded exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SyllableForm {
    pub alpha: Vec<BigInt>,
    pub eps: Vec<i8>,
}

impl SyllableForm {
    fn from_stack<I: IntoIterator<Item = (i8, BigInt)>>(head: BigInt, stack: I) -> SyllableForm {
        let mut alpha = vec![head];
        let mut eps = Vec::new();
        for (e, a) in stack {
            eps.push(e);
            alpha.push(a);
        }
        SyllableForm { alpha, eps }
    }

    /// Number of `a`-letters.
    pub fn a_count(&self) -> usize {
        self.eps.len()
    }

    pub fn is_valid(&self) -> bool {
        self.alpha.len() == self.eps.len() + 1
            && self.eps.iter().all(|&e| e == 1 || e == -1)
            && (1..self.eps.len()).all(|i| !self.alpha[i].is_zero() || self.eps[i - 1] == self.eps[i])
    }

    /// True when no pinch of `g` applies.
    pub fn is_pinch_free(&self, g: &BsGroup) -> bool {
        (0..self.eps.len().saturating_sub(1)).all(|i| {
            self.eps[i] != -self.eps[i + 1] || {
                let d = if self.eps[i] > 0 { g.m } else { g.n };
                !self.alpha[i + 1].is_multiple_of(&BigInt::from(d))
            }
        })
    }

    /// Expands the form back into a word. Exponents must fit in `i64`.
    pub fn to_word(&self) -> Option<Word> {
        let mut powers = Vec::with_capacity(2 * self.alpha.len());
        for (i, a) in self.alpha.iter().enumerate() {
            if i > 0 {
                powers.push((Generator::A, self.eps[i - 1] as i64));
            }
            powers.push((Generator::B, a.to_i64()?));
        }
        Some(Word::from_powers(&powers))
    }
}

impl fmt::Display for SyllableForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (i, a) in self.alpha.iter().enumerate() {
            if i > 0 {
                parts.push(if self.eps[i - 1] > 0 { "a".into() } else { "a^-1".into() });
            }
            if !a.is_zero() {
                parts.push(if a.is_one() { "b".into() } else { format!("b^{a}") });
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// `x ↦ slope·x + offset` over ℚ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMapQ {
    pub slope: BigRational,
    pub offset: BigRational,
}

impl AffineMapQ {
    pub fn identity() -> AffineMapQ {
        AffineMapQ {
            slope: BigRational::one(),
            offset: BigRational::zero(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.slope.is_one() && self.offset.is_zero()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineMapQ) -> AffineMapQ {
        AffineMapQ {
            slope: &self.slope * &other.slope,
            offset: &self.slope * &other.offset + &self.offset,
        }
    }

    pub fn apply(&self, x: &BigRational) -> BigRational {
        &self.slope * x + &self.offset
    }
}

/// Data of `P_w(y) = Σ α_i y^{σ_i − min σ}`, stored by shifted degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordPolynomial {
    pub sigma_total: i64,
    pub min_sigma: i64,
    /// Nonzero coefficients keyed by shifted degree `σ_i − min_sigma`.
    pub coeffs: BTreeMap<u64, i64>,
}

impl WordPolynomial {
    pub fn of(w: &Word) -> WordPolynomial {
        let syl = w.syllables();
        let sigma = syl.sigma();
        let min_sigma = *sigma.iter().min().expect("σ₀ always exists");
        let mut coeffs = BTreeMap::new();
        for (s, a) in sigma.iter().zip(&syl.alpha) {
            *coeffs.entry((s - min_sigma) as u64).or_insert(0i64) += a;
        }
        coeffs.retain(|_, c| *c != 0);
        WordPolynomial {
            sigma_total: *sigma.last().unwrap(),
            min_sigma,
            coeffs,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, y: &BigRational) -> BigRational {
        // Horner over the dense degree range.
        let top = self.coeffs.keys().next_back().copied().unwrap_or(0);
        let mut acc = BigRational::zero();
        for deg in (0..=top).rev() {
            acc *= y;
            if let Some(&c) = self.coeffs.get(&deg) {
                acc += BigRational::from_integer(BigInt::from(c));
            }
        }
        acc
    }

    /// `x ↦ y^{σ_k} x + y^{min σ} P_w(y)`.
    pub fn affine_at(&self, y: &BigRational) -> AffineMapQ {
        AffineMapQ {
            slope: pow_signed(y, self.sigma_total),
            offset: pow_signed(y, self.min_sigma) * self.eval(y),
        }
    }
}

pub fn word_polynomial(w: &Word) -> WordPolynomial {
    WordPolynomial::of(w)
}

fn pow_signed(y: &BigRational, e: i64) -> BigRational {
    let base = if e < 0 { y.recip() } else { y.clone() };
    let mut out = BigRational::one();
    for _ in 0..e.unsigned_abs() {
        out *= &base;
    }
    out
}

/// `min{|m|+|n|+2, 2|m|+6, 2|n|+6}`.
pub fn girth_formula(m: i64, n: i64) -> u64 {
    assert!(m != 0 && n != 0, "BS(m,n) needs nonzero parameters");
    let (m, n) = (m.unsigned_abs(), n.unsigned_abs());
    (m + n + 2).min(2 * m + 6).min(2 * n + 6)
}

/// The three relations realizing the girth: `a b^m a⁻¹ b^{−n}`,
/// `a b^m a⁻¹ b a b^{−m} a⁻¹ b⁻¹` and `a⁻¹ b^n a b a⁻¹ b^{−n} a b⁻¹`.
pub fn girth_witnesses(m: i64, n: i64) -> [Word; 3] {
    use Generator::{A, B};
    [
        Word::from_powers(&[(A, 1), (B, m), (A, -1), (B, -n)]),
        Word::from_powers(&[(A, 1), (B, m), (A, -1), (B, 1), (A, 1), (B, -m), (A, -1), (B, -1)]),
        Word::from_powers(&[(A, -1), (B, n), (A, 1), (B, 1), (A, -1), (B, -n), (A, 1), (B, -1)]),
    ]
}

/// A length that may be infinite. `Finite(_) < Infinite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extended {
    Finite(u64),
    Infinite,
}

impl Extended {
    fn add(self, k: u64) -> Extended {
        match self {
            Extended::Finite(x) => Extended::Finite(x + k),
            Extended::Infinite => Extended::Infinite,
        }
    }

    fn scale(self, k: u64) -> Extended {
        match self {
            Extended::Finite(x) => Extended::Finite(x * k),
            Extended::Infinite => Extended::Infinite,
        }
    }

    fn plus(self, other: Extended) -> Extended {
        match (self, other) {
            (Extended::Finite(x), Extended::Finite(y)) => Extended::Finite(x + y),
            _ => Extended::Infinite,
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(x) => write!(f, "{x}"),
            Extended::Infinite => write!(f, "inf"),
        }
    }
}

/// Inputs of the HNN girth estimate: the girth `g_H` of the base group and
/// the minimal lengths `α`, `β` of nontrivial elements of the two
/// associated subgroups.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HnnBoundInputs {
    pub g_h: Extended,
    pub alpha: Extended,
    pub beta: Extended,
}

/// `(min{g_H, α+β+2, 2α+6, 2β+6}, g_H)`.
pub fn hnn_girth_bounds(inp: HnnBoundInputs) -> (Extended, Extended) {
    let lower = inp
        .g_h
        .min(inp.alpha.plus(inp.beta).add(2))
        .min(inp.alpha.scale(2).add(6))
        .min(inp.beta.scale(2).add(6));
    (lower, inp.g_h)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Girth {
    Finite(u64),
    /// No relation of length ≤ the cap.
    NoneUpTo(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GirthResult {
    pub girth: Girth,
    pub witness: Option<Word>,
}

/// Whether a search may skip words that an oracle certifies nontrivial
/// without running its decider.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SearchMode {
    /// Decide every word.
    Reference,
    #[default]
    Pruned,
}

/// First trivial word (in canonical order) among cyclically reduced words
/// of length `len`.
pub(crate) fn first_trivial_of_length<G: MarkedGroup + ?Sized>(
    g: &G,
    len: usize,
    mode: SearchMode,
) -> Option<Word> {
    shard_prefixes(len).par_iter().find_map_first(|prefix| {
        walk_reduced(prefix, len, true, |w| {
            if mode == SearchMode::Pruned && g.certainly_nontrivial(w) {
                return ControlFlow::Continue(());
            }
            if g.is_trivial(w) {
                ControlFlow::Break(Word::from_reduced(w.to_vec()))
            } else {
                ControlFlow::Continue(())
            }
        })
    })
}

/// Shortest relation up to `cap` by exhaustive search over cyclically
/// reduced words. Triviality is conjugation invariant and cyclic
/// reduction shortens, so no shortest relation is missed.
pub fn girth_bruteforce<G: MarkedGroup + ?Sized>(
    g: &G,
    cap: u64,
    mode: SearchMode,
) -> Result<GirthResult, BsError> {
    if cap < 1 {
        return Err(BsError::ZeroCap);
    }
    for len in 1..=cap {
        if let Some(w) = first_trivial_of_length(g, len as usize, mode) {
            return Ok(GirthResult {
                girth: Girth::Finite(len),
                witness: Some(w),
            });
        }
    }
    Ok(GirthResult {
        girth: Girth::NoneUpTo(cap),
        witness: None,
    })
}
