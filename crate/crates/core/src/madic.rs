//! Truncated `m`-adic integers.
//!
//! `ℤ_m` is the projective limit of `ℤ/m^hℤ`. A [`MadicInt`] keeps one
//! residue modulo `|m|^H`, which determines the whole coherent system of
//! residues at levels `h ≤ H`. Negative bases are supported since
//! `ℤ/m^hℤ = ℤ/|m|^hℤ`. For `m = ±1` the ring is `{0}` and is represented
//! by [`ZERO_RING`] rather than by a `MadicInt`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// The zero ring `ℤ_{±1} = {0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZeroRing;

pub const ZERO_RING: ZeroRing = ZeroRing;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MadicError {
    #[error("base m={m} is degenerate: Z_m is the zero ring")]
    DegenerateBase { m: i64, ring: ZeroRing },
    #[error("precision must be at least 1")]
    ZeroPrecision,
    #[error("base mismatch: {0} vs {1}")]
    BaseMismatch(i64, i64),
    #[error("precision mismatch: {0} vs {1}")]
    PrecisionMismatch(u32, u32),
    #[error("sequence does not stabilize modulo |m|^{level} within {budget} probes")]
    Divergence { level: u32, budget: u64 },
    #[error("malformed sequence spec {spec:?}: {reason}")]
    SequenceSpec { spec: String, reason: String },
}

/// An element of `ℤ_m` known modulo `|m|^H`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MadicInt {
    base: i64,
    precision: u32,
    residue: BigUint,
}

fn check_base(m: i64) -> Result<(), MadicError> {
    if m.unsigned_abs() <= 1 {
        return Err(MadicError::DegenerateBase { m, ring: ZERO_RING });
    }
    Ok(())
}

fn modulus(m: i64, h: u32) -> BigUint {
    BigUint::from(m.unsigned_abs()).pow(h)
}

fn reduce(x: &BigInt, modulus: &BigUint) -> BigUint {
    let md = BigInt::from_biguint(Sign::Plus, modulus.clone());
    x.mod_floor(&md).to_biguint().expect("mod_floor by a positive modulus is nonnegative")
}

impl MadicInt {
    /// Canonical image of the integer `x` at precision `h`.
    pub fn from_integer(m: i64, h: u32, x: impl Into<BigInt>) -> Result<MadicInt, MadicError> {
        check_base(m)?;
        if h == 0 {
            return Err(MadicError::ZeroPrecision);
        }
        let residue = reduce(&x.into(), &modulus(m, h));
        Ok(MadicInt {
            base: m,
            precision: h,
            residue,
        })
    }

    pub fn base(&self) -> i64 {
        self.base
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    pub fn modulus(&self) -> BigUint {
        modulus(self.base, self.precision)
    }

    /// The level-`h` component (residue modulo `|m|^h`), `h ≤ H`.
    pub fn level(&self, h: u32) -> BigUint {
        assert!(h <= self.precision, "level {h} above precision {}", self.precision);
        &self.residue % modulus(self.base, h)
    }

    /// Projection to a lower precision.
    pub fn truncate(&self, h: u32) -> MadicInt {
        assert!(h >= 1 && h <= self.precision);
        MadicInt {
            base: self.base,
            precision: h,
            residue: self.level(h),
        }
    }

    fn common(&self, other: &MadicInt) -> Result<(BigUint, u32), MadicError> {
        if self.base != other.base {
            return Err(MadicError::BaseMismatch(self.base, other.base));
        }
        let h = self.precision.min(other.precision);
        Ok((modulus(self.base, h), h))
    }

    fn with(&self, h: u32, residue: BigUint) -> MadicInt {
        MadicInt {
            base: self.base,
            precision: h,
            residue,
        }
    }

    pub fn add(&self, other: &MadicInt) -> Result<MadicInt, MadicError> {
        let (md, h) = self.common(other)?;
        Ok(self.with(h, (&self.residue + &other.residue) % md))
    }

    pub fn mul(&self, other: &MadicInt) -> Result<MadicInt, MadicError> {
        let (md, h) = self.common(other)?;
        Ok(self.with(h, (&self.residue * &other.residue) % md))
    }

    pub fn neg(&self) -> MadicInt {
        let md = self.modulus();
        self.with(self.precision, (&md - &self.residue) % md)
    }

    pub fn sub(&self, other: &MadicInt) -> Result<MadicInt, MadicError> {
        self.add(&other.neg())
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    /// `|x|_m`: the largest `k < H` with `|m|^k` dividing the residue, or
    /// [`MadicValue::BelowPrecision`] for a zero residue.
    pub fn abs_m(&self) -> MadicValue {
        if self.residue.is_zero() {
            return MadicValue::BelowPrecision;
        }
        let base = BigUint::from(self.base.unsigned_abs());
        let mut r = self.residue.clone();
        let mut k = 0u32;
        while (&r % &base).is_zero() {
            r /= &base;
            k += 1;
        }
        MadicValue::Exact(k)
    }

    /// Unit test: divisible by no prime factor of `m`.
    pub fn is_unit(&self) -> bool {
        prime_factors(self.base.unsigned_abs())
            .into_iter()
            .all(|p| !(&self.residue % p).is_zero())
    }

    /// The residue as `i128` when it fits.
    pub fn residue_i128(&self) -> Option<i128> {
        self.residue.to_i128()
    }
}

impl fmt::Display for MadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod |{}|^{}", self.residue, self.base, self.precision)
    }
}

/// `{"m": m, "H": H, "residue": r}`. The residue is a JSON number while it
/// fits in 128 bits and a decimal string beyond that.
impl Serialize for MadicInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("MadicInt", 3)?;
        st.serialize_field("m", &self.base)?;
        st.serialize_field("H", &self.precision)?;
        match self.residue.to_u128() {
            Some(r) => st.serialize_field("residue", &r)?,
            None => st.serialize_field("residue", &self.residue.to_string())?,
        }
        st.end()
    }
}

/// Distinct primes dividing `m`, by trial division.
pub fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            out.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// `|x|_m = (1/|m|)^k`, or "below precision" when `x ≡ 0` at the known
/// precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "k")]
pub enum MadicValue {
    #[serde(rename = "exact_power")]
    Exact(u32),
    BelowPrecision,
}

impl MadicValue {
    pub fn to_f64(self, m: i64) -> f64 {
        match self {
            MadicValue::Exact(k) => (m.unsigned_abs() as f64).powi(-(k as i32)),
            MadicValue::BelowPrecision => 0.0,
        }
    }
}

/// Orders by magnitude of the absolute value. `BelowPrecision` sits below
/// every exact value.
impl Ord for MadicValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (MadicValue::BelowPrecision, MadicValue::BelowPrecision) => Ordering::Equal,
            (MadicValue::BelowPrecision, _) => Ordering::Less,
            (_, MadicValue::BelowPrecision) => Ordering::Greater,
            (MadicValue::Exact(a), MadicValue::Exact(b)) => b.cmp(a),
        }
    }
}

impl PartialOrd for MadicValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MadicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MadicValue::Exact(0) => write!(f, "1"),
            MadicValue::Exact(k) => write!(f, "(1/|m|)^{k}"),
            MadicValue::BelowPrecision => write!(f, "below precision"),
        }
    }
}

/// Ultrametric distance `|x − y|_m`.
pub fn madic_distance(x: &MadicInt, y: &MadicInt) -> Result<MadicValue, MadicError> {
    if x.base != y.base {
        return Err(MadicError::BaseMismatch(x.base, y.base));
    }
    if x.precision != y.precision {
        return Err(MadicError::PrecisionMismatch(x.precision, y.precision));
    }
    Ok(x.sub(y)?.abs_m())
}

/// Limit in `ℤ_m` of a sequence that is eventually constant modulo every
/// `|m|^h`, `h ≤ H`.
///
/// Eventual constancy cannot be decided from finitely many terms, so this
/// is a heuristic: at each level the residue is accepted once it has been
/// constant over `⌈budget/4⌉` consecutive probes among the first `budget`
/// terms. The sequence returns `None` past its end.
pub fn limit_of_sequence<F>(m: i64, h: u32, seq: F, budget: u64) -> Result<MadicInt, MadicError>
where
    F: Fn(u64) -> Option<BigInt>,
{
    check_base(m)?;
    if h == 0 {
        return Err(MadicError::ZeroPrecision);
    }
    let window = budget.div_ceil(4).max(1);
    let mut accepted: Option<BigUint> = None;
    for level in 1..=h {
        let md = modulus(m, level);
        let mut run: Option<(BigUint, u64)> = None;
        let mut found = None;
        for j in 0..budget {
            let Some(x) = seq(j) else { break };
            let r = reduce(&x, &md);
            run = match run {
                Some((prev, count)) if prev == r => Some((prev, count + 1)),
                _ => Some((r, 1)),
            };
            if let Some((ref r, count)) = run {
                if count >= window {
                    found = Some(r.clone());
                    break;
                }
            }
        }
        let r = found.ok_or(MadicError::Divergence { level, budget })?;
        if let Some(prev) = &accepted {
            // Levels must project onto each other.
            if &(&r % modulus(m, level - 1)) != prev {
                return Err(MadicError::Divergence { level, budget });
            }
        }
        accepted = Some(r);
    }
    Ok(MadicInt {
        base: m,
        precision: h,
        residue: accepted.expect("precision is at least 1"),
    })
}

/// Integer sequences accepted on the command line: `C+S*M^j` (also
/// `C-S*M^j`) for `j = 0, 1, 2, …`, or a finite `list:[v0,v1,…]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SequenceSpec {
    Geometric { c: BigInt, s: BigInt, base: i64 },
    List(Vec<BigInt>),
}

impl SequenceSpec {
    pub fn term(&self, j: u64) -> Option<BigInt> {
        match self {
            SequenceSpec::Geometric { c, s, base } => {
                Some(c + s * BigInt::from(*base).pow(u32::try_from(j).ok()?))
            }
            SequenceSpec::List(v) => v.get(j as usize).cloned(),
        }
    }

    /// Number of terms, `None` when infinite.
    pub fn term_count(&self) -> Option<u64> {
        match self {
            SequenceSpec::Geometric { .. } => None,
            SequenceSpec::List(v) => Some(v.len() as u64),
        }
    }

    /// The `M` of a geometric spec must equal the base of the ring.
    pub fn check_base(&self, m: i64) -> Result<(), MadicError> {
        match self {
            SequenceSpec::Geometric { base, .. } if *base != m => Err(MadicError::SequenceSpec {
                spec: format!("{self}"),
                reason: format!("geometric base {base} differs from m={m}"),
            }),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceSpec::Geometric { c, s, base } => write!(f, "{c}+{s}*{base}^j"),
            SequenceSpec::List(v) => {
                let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "list:[{}]", items.join(","))
            }
        }
    }
}

impl FromStr for SequenceSpec {
    type Err = MadicError;

    fn from_str(spec: &str) -> Result<SequenceSpec, MadicError> {
        let bad = |reason: &str| MadicError::SequenceSpec {
            spec: spec.to_string(),
            reason: reason.to_string(),
        };
        let t: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(body) = t.strip_prefix("list:") {
            let inner = body
                .strip_prefix('[')
                .and_then(|b| b.strip_suffix(']'))
                .ok_or_else(|| bad("expected list:[v0,v1,...]"))?;
            if inner.is_empty() {
                return Err(bad("empty list"));
            }
            let vals = inner
                .split(',')
                .map(|x| x.parse::<BigInt>().map_err(|_| bad("list entries must be integers")))
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(SequenceSpec::List(vals));
        }
        let body = t.strip_suffix("^j").ok_or_else(|| bad("expected C+S*M^j"))?;
        let (lhs, base) = body.rsplit_once('*').ok_or_else(|| bad("expected '*'"))?;
        let base: i64 = base.parse().map_err(|_| bad("M must be an integer"))?;
        // The operator is the first '+' or '-' after the (optionally signed) constant.
        let op_at = lhs
            .char_indices()
            .skip(1)
            .find(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .ok_or_else(|| bad("expected C+S"))?;
        let c: BigInt = lhs[..op_at].parse().map_err(|_| bad("C must be an integer"))?;
        let mut s: BigInt = lhs[op_at + 1..].parse().map_err(|_| bad("S must be an integer"))?;
        if lhs.as_bytes()[op_at] == b'-' {
            s = -s;
        }
        Ok(SequenceSpec::Geometric { c, s, base })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(m: i64, h: u32, x: i64) -> MadicInt {
        MadicInt::from_integer(m, h, x).unwrap()
    }

    #[test]
    fn from_integer_examples() {
        assert_eq!(mi(2, 4, 12).residue(), &BigUint::from(12u32));
        assert_eq!(mi(2, 3, 12).residue(), &BigUint::from(4u32));
        assert_eq!(mi(3, 2, -1).residue(), &BigUint::from(8u32));
        assert_eq!(mi(-3, 2, -1).residue(), &BigUint::from(8u32));
        assert!(matches!(
            MadicInt::from_integer(1, 3, 5),
            Err(MadicError::DegenerateBase { m: 1, ring: ZERO_RING })
        ));
        assert!(matches!(MadicInt::from_integer(-1, 3, 5), Err(MadicError::DegenerateBase { .. })));
        assert_eq!(MadicInt::from_integer(2, 0, 5), Err(MadicError::ZeroPrecision));
    }

    #[test]
    fn ring_examples() {
        assert!(mi(2, 4, 7).add(&mi(2, 4, 9)).unwrap().is_zero());
        assert_eq!(mi(2, 4, 3).mul(&mi(2, 4, 5)).unwrap(), mi(2, 4, 15));
        assert_eq!(mi(6, 2, 2).mul(&mi(6, 2, 3)).unwrap(), mi(6, 2, 6));
        assert!(mi(6, 2, 6).mul(&mi(6, 2, 6)).unwrap().is_zero());
        assert_eq!(mi(2, 4, 1).add(&mi(3, 4, 1)), Err(MadicError::BaseMismatch(2, 3)));
        // Mixed precision falls back to the smaller one.
        assert_eq!(mi(2, 4, 7).add(&mi(2, 2, 1)).unwrap(), mi(2, 2, 0));
    }

    #[test]
    fn abs_examples() {
        assert_eq!(mi(2, 8, 12).abs_m(), MadicValue::Exact(2));
        assert_eq!(mi(2, 8, 12).abs_m().to_f64(2), 0.25);
        assert_eq!(mi(2, 8, 1).abs_m(), MadicValue::Exact(0));
        assert_eq!(mi(2, 5, 0).abs_m(), MadicValue::BelowPrecision);
        assert!(MadicValue::BelowPrecision < MadicValue::Exact(40));
        assert!(MadicValue::Exact(3) < MadicValue::Exact(1));
    }

    #[test]
    fn unit_examples() {
        assert!(mi(2, 4, 3).is_unit());
        assert!(!mi(2, 4, 2).is_unit());
        assert!(mi(6, 3, 5).is_unit());
        assert!(!mi(6, 3, 9).is_unit());
        assert_eq!(prime_factors(60), vec![2, 3, 5]);
    }

    #[test]
    fn distance_examples() {
        assert_eq!(madic_distance(&mi(2, 4, 3), &mi(2, 4, 3)), Ok(MadicValue::BelowPrecision));
        assert_eq!(madic_distance(&mi(2, 4, 1), &mi(2, 4, 3)), Ok(MadicValue::Exact(1)));
        assert_eq!(madic_distance(&mi(2, 4, 1), &mi(2, 4, 9)), Ok(MadicValue::Exact(3)));
        assert_eq!(
            madic_distance(&mi(2, 4, 1), &mi(2, 3, 1)),
            Err(MadicError::PrecisionMismatch(4, 3))
        );
    }

    #[test]
    fn limit_examples() {
        let seq = |j: u64| Some(BigInt::from(3) + BigInt::from(2).pow(j as u32));
        assert_eq!(limit_of_sequence(2, 4, seq, 64).unwrap(), mi(2, 4, 3));
        assert_eq!(limit_of_sequence(3, 3, |_| Some(BigInt::from(7)), 16).unwrap(), mi(3, 3, 7));
        let alt = |j: u64| Some(BigInt::from(if j.is_multiple_of(2) { 1 } else { -1 }));
        assert_eq!(
            limit_of_sequence(2, 2, alt, 64),
            Err(MadicError::Divergence { level: 2, budget: 64 })
        );
    }

    #[test]
    fn sequence_specs() {
        let s: SequenceSpec = "3+1*2^j".parse().unwrap();
        assert_eq!(s.term(0), Some(BigInt::from(4)));
        assert_eq!(s.term(3), Some(BigInt::from(11)));
        let s: SequenceSpec = "-3-2*2^j".parse().unwrap();
        assert_eq!(s.term(1), Some(BigInt::from(-7)));
        assert!(s.check_base(2).is_ok());
        assert!(s.check_base(3).is_err());
        let s: SequenceSpec = "list:[3, 5, 7]".parse().unwrap();
        assert_eq!(s.term(2), Some(BigInt::from(7)));
        assert_eq!(s.term(3), None);
        assert!("3+1*2^k".parse::<SequenceSpec>().is_err());
        assert!("list:[]".parse::<SequenceSpec>().is_err());
    }

    #[test]
    fn json_shape() {
        let v = serde_json::to_value(mi(2, 8, 3)).unwrap();
        assert_eq!(v, serde_json::json!({"m": 2, "H": 8, "residue": 3}));
    }
}
