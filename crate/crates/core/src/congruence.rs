//! Congruence test words for one-parameter families `BS(m, n)`, the
//! continuity modulus, and the paired Euclidean division chains used to
//! compare `BS(m, n)` with `BS(m, n′)` when `n ≡ n′ (mod m^h)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::word::{Generator, Word};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CongruenceError {
    #[error("m must be nonzero")]
    ZeroM,
    #[error("|n| must be at least 2, got n={0}")]
    SmallN(i64),
    #[error("h must be at least 1")]
    ZeroH,
    #[error("division chains need m > 0 (normalize with BS(m,n) = BS(-m,-n)), got m={0}")]
    ChainBase(i64),
    #[error("n={n} and n'={n_prime} differ modulo m^{level} (m={m})")]
    NotCongruent {
        m: i64,
        n: i64,
        n_prime: i64,
        level: u32,
    },
}

/// `d = gcd(m, n)`, `m = d·m₁`, `n = d·n₁`; the congruence test at level
/// `h` works modulo `|m₁|^h·d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceModulus {
    pub m: i64,
    pub n: i64,
    pub d: i64,
    pub m1: i64,
    pub n1: i64,
}

impl CongruenceModulus {
    pub fn new(m: i64, n: i64) -> Result<CongruenceModulus, CongruenceError> {
        if m == 0 {
            return Err(CongruenceError::ZeroM);
        }
        if n == 0 {
            return Err(CongruenceError::SmallN(n));
        }
        let d = m.gcd(&n);
        Ok(CongruenceModulus {
            m,
            n,
            d,
            m1: m / d,
            n1: n / d,
        })
    }

    /// `|m₁|^h · d`.
    pub fn modulus(&self, h: u32) -> BigInt {
        BigInt::from(self.m1).abs().pow(h) * self.d
    }
}

/// `a^{h+1} b^m a⁻¹ b^{−k} a^{−h} b a^{h+1} b^{−m} a⁻¹ b^k a^{−h} b⁻¹`,
/// of length `4h + 2|m| + 2|k| + 6`.
///
/// In `BS(m,n)` this equals `[a^h b^{n−k} a^{−h}, b]`, which is trivial
/// exactly when `n ≡ k (mod |m₁|^h·d)` (for `|n| ≥ 2`).
pub fn congruence_witness_word(m: i64, k: i64, h: u32) -> Word {
    assert!(m != 0, "m must be nonzero");
    assert!(h >= 1, "h must be at least 1");
    use Generator::{A, B};
    let h = h as i64;
    Word::from_powers(&[
        (A, h + 1),
        (B, m),
        (A, -1),
        (B, -k),
        (A, -h),
        (B, 1),
        (A, h + 1),
        (B, -m),
        (A, -1),
        (B, k),
        (A, -h),
        (B, -1),
    ])
}

pub fn witness_length(m: i64, k: i64, h: u32) -> u64 {
    4 * h as u64 + 2 * m.unsigned_abs() + 2 * k.unsigned_abs() + 6
}

/// `n ≡ k (mod |m₁|^h·d)`.
pub fn congruence_predicate(m: i64, n: i64, h: u32, k: i64) -> Result<bool, CongruenceError> {
    if n.unsigned_abs() < 2 {
        return Err(CongruenceError::SmallN(n));
    }
    if h == 0 {
        return Err(CongruenceError::ZeroH);
    }
    let cm = CongruenceModulus::new(m, n)?;
    let diff = BigInt::from(n) - BigInt::from(k);
    Ok(diff.is_multiple_of(&cm.modulus(h)))
}

/// The paired chains `s_{i−1}·n = s_i·m + r_i`, `s′_{i−1}·n′ = s′_i·m + r_i`
/// with `s₀ = s′₀ = 1` and `0 ≤ r_i < m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisionChain {
    pub m: i64,
    pub n: i64,
    pub n_prime: i64,
    pub h: u32,
    pub s: Vec<BigInt>,
    pub s_prime: Vec<BigInt>,
    pub r: Vec<BigInt>,
}

/// Builds the chain by iterated Euclidean division. Requires `m > 0` and
/// `n ≡ n′ (mod m^h)`; the error names the first level at which the
/// congruence fails.
pub fn division_chain(m: i64, n: i64, n_prime: i64, h: u32) -> Result<DivisionChain, CongruenceError> {
    if m < 1 {
        return Err(CongruenceError::ChainBase(m));
    }
    if h == 0 {
        return Err(CongruenceError::ZeroH);
    }
    let mb = BigInt::from(m);
    let diff = BigInt::from(n) - BigInt::from(n_prime);
    for level in 1..=h {
        if !diff.is_multiple_of(&mb.pow(level)) {
            return Err(CongruenceError::NotCongruent { m, n, n_prime, level });
        }
    }
    let (nb, npb) = (BigInt::from(n), BigInt::from(n_prime));
    let mut s = vec![BigInt::one()];
    let mut s_prime = vec![BigInt::one()];
    let mut r = Vec::with_capacity(h as usize);
    for _ in 0..h {
        let (q, rem) = (s.last().unwrap() * &nb).div_mod_floor(&mb);
        let (q2, rem2) = (s_prime.last().unwrap() * &npb).div_mod_floor(&mb);
        debug_assert_eq!(rem, rem2, "remainders agree under the congruence");
        s.push(q);
        s_prime.push(q2);
        r.push(rem);
    }
    Ok(DivisionChain {
        m,
        n,
        n_prime,
        h,
        s,
        s_prime,
        r,
    })
}

impl DivisionChain {
    /// Checks the three defining properties. Returns the first violation.
    pub fn check(&self) -> Result<(), String> {
        let h = self.h as usize;
        let m = BigInt::from(self.m);
        let (n, np) = (BigInt::from(self.n), BigInt::from(self.n_prime));
        if self.s.len() != h + 1 || self.s_prime.len() != h + 1 || self.r.len() != h {
            return Err("wrong lengths".into());
        }
        if !self.s[0].is_one() || !self.s_prime[0].is_one() {
            return Err("s_0 and s'_0 must be 1".into());
        }
        for i in 1..=h {
            let r = &self.r[i - 1];
            if r.is_negative() || r >= &m {
                return Err(format!("r_{i} = {r} outside [0, m)"));
            }
            if &self.s[i - 1] * &n != &self.s[i] * &m + r {
                return Err(format!("s-recurrence fails at i={i}"));
            }
            if &self.s_prime[i - 1] * &np != &self.s_prime[i] * &m + r {
                return Err(format!("s'-recurrence fails at i={i}"));
            }
        }
        for i in 0..=h {
            let md = m.pow((h - i) as u32);
            if !(&self.s[i] - &self.s_prime[i]).is_multiple_of(&md) {
                return Err(format!("s_{i} ≢ s'_{i} mod m^{}", h - i));
            }
        }
        Ok(())
    }

    /// Rebuilds the quotients from the remainders alone by exact division.
    pub fn from_remainders(m: i64, n: i64, n_prime: i64, r: &[BigInt]) -> DivisionChain {
        let mb = BigInt::from(m);
        let step = |prev: &BigInt, factor: i64, ri: &BigInt| (prev * factor - ri) / &mb;
        let mut s = vec![BigInt::one()];
        let mut s_prime = vec![BigInt::one()];
        for ri in r {
            let next = step(s.last().unwrap(), n, ri);
            let next_p = step(s_prime.last().unwrap(), n_prime, ri);
            s.push(next);
            s_prime.push(next_p);
        }
        DivisionChain {
            m,
            n,
            n_prime,
            h: r.len() as u32,
            s,
            s_prime,
            r: r.to_vec(),
        }
    }
}

/// `2m^h + 4h + 2m + 4`: a length bounding every congruence test word
/// `w_k`, `0 ≤ k < m^h`.
pub fn continuity_modulus(m: u64, h: u32) -> BigInt {
    assert!(m >= 2 && h >= 1);
    BigInt::from(m).pow(h) * 2 + 4 * h as u64 + 2 * m + 4
}

/// Normalizes `(m, n)` to `m > 0` using `BS(m,n) = BS(−m,−n)`. The flag
/// reports whether a sign flip was applied.
pub fn normalize_sign(m: i64, n: i64) -> (i64, i64, bool) {
    if m < 0 {
        (-m, -n, true)
    } else {
        (m, n, false)
    }
}
