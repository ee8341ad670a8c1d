use num_bigint::BigInt;
use num_integer::Integer;

use super::parse::{parse_i64, ParseError};
use super::{Abelianization, Group, GroupError, NormValue};

/// `Z_p = Z / pZ`, residues `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cyclic {
    pub p: u64,
}

impl Cyclic {
    pub fn new(p: u64) -> Self {
        assert!(p >= 1, "Z_p needs p >= 1");
        Self { p }
    }
}

impl Group for Cyclic {
    type Elem = u64;

    fn name(&self) -> String {
        format!("zmod:{}", self.p)
    }

    fn identity(&self) -> u64 {
        0
    }

    fn multiply(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }

    fn inverse(&self, a: &u64) -> u64 {
        (self.p - a % self.p) % self.p
    }

    fn abelianization(&self, a: &u64) -> Abelianization {
        Abelianization { free: Vec::new(), torsion: vec![(BigInt::from(*a), BigInt::from(self.p))] }
    }

    fn is_abelian(&self) -> bool {
        true
    }

    fn validate(&self, a: &u64) -> Result<(), GroupError> {
        if *a >= self.p {
            return Err(GroupError::NotCanonical(format!("{a} mod {}", self.p)));
        }
        Ok(())
    }

    fn parse_elem(&self, s: &str) -> Result<u64, ParseError> {
        let v = parse_i64(s, 0)?;
        Ok(v.rem_euclid(self.p as i64) as u64)
    }

    fn format(&self, a: &u64) -> String {
        a.to_string()
    }

    fn seminorm(&self, a: &u64) -> u64 {
        (*a).min(self.p - a)
    }

    fn standard_norm(&self, a: &u64) -> Option<NormValue> {
        Some(NormValue { value: self.seminorm(a), lower_bound: false })
    }

    fn order(&self, a: &u64) -> Option<u64> {
        Some(self.p / a.gcd(&self.p))
    }
}
