use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::parse::{parse_word, ParseError};
use super::{Abelianization, Group, GroupError, NormValue};

/// Free group on `a, b`; elements are reduced words.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Free2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Letter {
    A,
    AInv,
    B,
    BInv,
}

impl Letter {
    pub fn inverse(self) -> Self {
        match self {
            Letter::A => Letter::AInv,
            Letter::AInv => Letter::A,
            Letter::B => Letter::BInv,
            Letter::BInv => Letter::B,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::AInv => 'A',
            Letter::B => 'b',
            Letter::BInv => 'B',
        }
    }

    pub const ALL: [Letter; 4] = [Letter::A, Letter::AInv, Letter::B, Letter::BInv];
}

/// Appends `w` to `acc` with free cancellation at the junction.
pub(crate) fn push_reduced(acc: &mut Vec<Letter>, w: &[Letter]) {
    for &l in w {
        if acc.last() == Some(&l.inverse()) {
            acc.pop();
        } else {
            acc.push(l);
        }
    }
}

pub fn word_string(w: &[Letter]) -> String {
    if w.is_empty() {
        "e".into()
    } else {
        w.iter().map(|l| l.as_char()).collect()
    }
}

impl Group for Free2 {
    type Elem = Vec<Letter>;

    fn name(&self) -> String {
        "f2".into()
    }

    fn identity(&self) -> Vec<Letter> {
        Vec::new()
    }

    fn multiply(&self, x: &Vec<Letter>, y: &Vec<Letter>) -> Vec<Letter> {
        let mut out = x.clone();
        push_reduced(&mut out, y);
        out
    }

    fn mul_assign(&self, x: &mut Vec<Letter>, y: &Vec<Letter>) {
        push_reduced(x, y);
    }

    fn inverse(&self, x: &Vec<Letter>) -> Vec<Letter> {
        x.iter().rev().map(|l| l.inverse()).collect()
    }

    fn abelianization(&self, x: &Vec<Letter>) -> Abelianization {
        let (mut ea, mut eb) = (0i64, 0i64);
        for l in x {
            match l {
                Letter::A => ea += 1,
                Letter::AInv => ea -= 1,
                Letter::B => eb += 1,
                Letter::BInv => eb -= 1,
            }
        }
        Abelianization::free_only(vec![BigInt::from(ea), BigInt::from(eb)])
    }

    fn validate(&self, x: &Vec<Letter>) -> Result<(), GroupError> {
        if x.windows(2).any(|w| w[1] == w[0].inverse()) {
            return Err(GroupError::NotCanonical(word_string(x)));
        }
        Ok(())
    }

    /// Word over `a, b`; uppercase letters are inverses (`"abA B"`, `"a^2 B"`).
    fn parse_elem(&self, s: &str) -> Result<Vec<Letter>, ParseError> {
        let mut out = Vec::new();
        for (i, e) in parse_word(s, &['a', 'b'])? {
            let l = match (i, e > 0) {
                (0, true) => Letter::A,
                (0, false) => Letter::AInv,
                (_, true) => Letter::B,
                (_, false) => Letter::BInv,
            };
            for _ in 0..e.unsigned_abs() {
                push_reduced(&mut out, &[l]);
            }
        }
        Ok(out)
    }

    fn format(&self, x: &Vec<Letter>) -> String {
        word_string(x)
    }

    fn seminorm(&self, x: &Vec<Letter>) -> u64 {
        x.len() as u64
    }

    fn standard_norm(&self, x: &Vec<Letter>) -> Option<NormValue> {
        Some(NormValue { value: x.len() as u64, lower_bound: false })
    }
}
