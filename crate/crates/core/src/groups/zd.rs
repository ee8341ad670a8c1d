use num_bigint::BigInt;

use super::parse::{parse_int_tuple, ParseError};
use super::{Abelianization, Group, GroupError, NormValue};

/// The free abelian group `Z^d` with integer vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Zd {
    pub d: usize,
}

impl Zd {
    pub fn new(d: usize) -> Self {
        assert!(d >= 1, "Z^d needs d >= 1");
        Self { d }
    }

    pub fn unit(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0; self.d];
        v[i] = 1;
        v
    }

    /// `e_1, -e_1, ..., e_d, -e_d`.
    pub fn standard_generators(&self) -> Vec<Vec<i64>> {
        (0..self.d).flat_map(|i| [self.unit(i), self.unit(i).iter().map(|x| -x).collect()]).collect()
    }
}

impl Group for Zd {
    type Elem = Vec<i64>;

    fn name(&self) -> String {
        format!("z:{}", self.d)
    }

    fn identity(&self) -> Vec<i64> {
        vec![0; self.d]
    }

    fn multiply(&self, a: &Vec<i64>, b: &Vec<i64>) -> Vec<i64> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn mul_assign(&self, a: &mut Vec<i64>, b: &Vec<i64>) {
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
    }

    fn inverse(&self, a: &Vec<i64>) -> Vec<i64> {
        a.iter().map(|x| -x).collect()
    }

    fn abelianization(&self, a: &Vec<i64>) -> Abelianization {
        Abelianization::free_only(a.iter().map(|&x| BigInt::from(x)).collect())
    }

    fn is_abelian(&self) -> bool {
        true
    }

    fn validate(&self, a: &Vec<i64>) -> Result<(), GroupError> {
        if a.len() != self.d {
            return Err(GroupError::Mismatch { group: self.name(), elem: format!("{a:?}") });
        }
        Ok(())
    }

    fn parse_elem(&self, s: &str) -> Result<Vec<i64>, ParseError> {
        let v = parse_int_tuple(s)?;
        if v.len() != self.d {
            return Err(ParseError::new(0, format!("expected {} coordinates, found {}", self.d, v.len())));
        }
        Ok(v)
    }

    fn format(&self, a: &Vec<i64>) -> String {
        let parts: Vec<String> = a.iter().map(i64::to_string).collect();
        format!("[{}]", parts.join(","))
    }

    fn seminorm(&self, a: &Vec<i64>) -> u64 {
        a.iter().map(|x| x.unsigned_abs()).sum()
    }

    fn standard_norm(&self, a: &Vec<i64>) -> Option<NormValue> {
        Some(NormValue { value: self.seminorm(a), lower_bound: false })
    }
}
