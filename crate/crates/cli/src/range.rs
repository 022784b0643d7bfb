use std::fmt;
use std::str::FromStr;

/// Inclusive integer range written `lo..hi`, or a single integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntRange {
    pub lo: i64,
    pub hi: i64,
}

impl IntRange {
    pub fn values(self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }

    /// The range with 0 removed, logging the exclusion when it happens.
    pub fn nonzero(self, flag: &str) -> Vec<i64> {
        if self.lo <= 0 && 0 <= self.hi {
            eprintln!("note: excluding 0 from --{flag} {self}");
        }
        self.values().filter(|&v| v != 0).collect()
    }
}

impl fmt::Display for IntRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

impl FromStr for IntRange {
    type Err = String;

    fn from_str(s: &str) -> Result<IntRange, String> {
        let int = |t: &str| t.trim().parse::<i64>().map_err(|_| format!("{t:?} is not an integer"));
        let (lo, hi) = match s.split_once("..") {
            Some((lo, hi)) => (int(lo)?, int(hi)?),
            None => {
                let v = int(s)?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(format!("empty range {lo}..{hi}"));
        }
        Ok(IntRange { lo, hi })
    }
}
