//! The wreath product `ℤ ≀ ℤ = ℤ ⋉ ⊕_{i∈ℤ} ℤ`, marked by `a = (1, 0)` and
//! `b = (0, e₀)`.

use std::collections::BTreeMap;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::space::MarkedGroup;
use crate::word::{Letter, Word};

/// `(shift, Σ coeff·e_pos)`. The support never stores zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WreathElement {
    pub shift: i64,
    pub support: BTreeMap<i64, i64>,
}

impl WreathElement {
    pub fn identity() -> WreathElement {
        WreathElement::default()
    }

    pub fn is_identity(&self) -> bool {
        self.shift == 0 && self.support.is_empty()
    }

    /// Semidirect product: shifts add, the right factor's lamps move by the
    /// left factor's shift.
    pub fn compose(&self, other: &WreathElement) -> WreathElement {
        let mut support = self.support.clone();
        for (&pos, &c) in &other.support {
            add_lamp(&mut support, pos + self.shift, c);
        }
        WreathElement {
            shift: self.shift + other.shift,
            support,
        }
    }
}

fn add_lamp(support: &mut BTreeMap<i64, i64>, pos: i64, c: i64) {
    let e = support.entry(pos).or_insert(0);
    *e += c;
    if *e == 0 {
        support.remove(&pos);
    }
}

impl Serialize for WreathElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[i64; 2]> = self.support.iter().map(|(&p, &c)| [p, c]).collect();
        let mut st = s.serialize_struct("WreathElement", 2)?;
        st.serialize_field("shift", &self.shift)?;
        st.serialize_field("support", &pairs)?;
        st.end()
    }
}

/// Image of a letter sequence in `ℤ ≀ ℤ`.
pub fn eval_wreath_letters(letters: &[Letter]) -> WreathElement {
    let mut shift = 0i64;
    let mut support = BTreeMap::new();
    for &l in letters {
        match l {
            Letter::A => shift += 1,
            Letter::AInv => shift -= 1,
            Letter::B => add_lamp(&mut support, shift, 1),
            Letter::BInv => add_lamp(&mut support, shift, -1),
        }
    }
    WreathElement { shift, support }
}

pub fn eval_wreath(w: &Word) -> WreathElement {
    eval_wreath_letters(w.letters())
}

pub fn wreath_is_identity(w: &Word) -> bool {
    wreath_is_identity_letters(w.letters())
}

/// Allocation-free triviality test: the shift returns to zero and every
/// lamp position carries coefficient sum zero.
pub fn wreath_is_identity_letters(letters: &[Letter]) -> bool {
    // Positions are bounded by the word length.
    let len = letters.len() as i64;
    let mut lamps = vec![0i64; 2 * letters.len() + 1];
    let mut shift = 0i64;
    for &l in letters {
        match l {
            Letter::A => shift += 1,
            Letter::AInv => shift -= 1,
            Letter::B => lamps[(shift + len) as usize] += 1,
            Letter::BInv => lamps[(shift + len) as usize] -= 1,
        }
    }
    shift == 0 && lamps.iter().all(|&c| c == 0)
}

/// `ℤ ≀ ℤ` as a marked group; spec string `wreath`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Wreath;

impl MarkedGroup for Wreath {
    fn name(&self) -> String {
        "wreath".into()
    }

    fn is_trivial(&self, letters: &[Letter]) -> bool {
        wreath_is_identity_letters(letters)
    }

    fn certainly_nontrivial(&self, letters: &[Letter]) -> bool {
        crate::bs::a_sum(letters) != 0
    }
}
