use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::parse::{parse_word, ParseError};
use super::{Abelianization, Group, GroupError};

/// Baumslag–Solitar group `BS(1, q) = ⟨a, b | ab = b^q a⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BaumslagSolitar {
    pub q: u32,
}

/// Normal form `a^{-l} b^m a^{l+k}` with `l >= 0` minimal, i.e. `q ∤ m`
/// whenever `l > 0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BsElem {
    pub l: u64,
    pub m: BigInt,
    pub k: i64,
}

impl BsElem {
    pub fn a() -> Self {
        Self { l: 0, m: BigInt::zero(), k: 1 }
    }

    pub fn b() -> Self {
        Self { l: 0, m: BigInt::one(), k: 0 }
    }
}

impl BaumslagSolitar {
    pub fn new(q: u32) -> Self {
        assert!(q >= 2, "BS(1, q) needs q >= 2");
        Self { q }
    }

    fn qpow(&self, e: u64) -> BigInt {
        num_traits::pow(BigInt::from(self.q), e as usize)
    }

    fn reduce(&self, mut e: BsElem) -> BsElem {
        if e.m.is_zero() {
            e.l = 0;
            return e;
        }
        let q = BigInt::from(self.q);
        while e.l > 0 {
            let (d, r) = e.m.div_rem(&q);
            if !r.is_zero() {
                break;
            }
            e.m = d;
            e.l -= 1;
        }
        e
    }
}

impl Group for BaumslagSolitar {
    type Elem = BsElem;

    fn name(&self) -> String {
        format!("bs:{}", self.q)
    }

    fn identity(&self) -> BsElem {
        BsElem { l: 0, m: BigInt::zero(), k: 0 }
    }

    // a^{-l1} b^{m1} a^{j} b^{m2} a^{l2+k2} with j = l1 + k1 - l2, then move
    // a^j across b^{m2} (j >= 0) or b^{m1} (j < 0) using a^j b^m a^{-j} = b^{m q^j}.
    fn multiply(&self, x: &BsElem, y: &BsElem) -> BsElem {
        let j = x.l as i64 + x.k - y.l as i64;
        let e = if j >= 0 {
            BsElem { l: x.l, m: &x.m + &y.m * self.qpow(j as u64), k: x.k + y.k }
        } else {
            BsElem { l: (y.l as i64 - x.k) as u64, m: &x.m * self.qpow(j.unsigned_abs()) + &y.m, k: x.k + y.k }
        };
        self.reduce(e)
    }

    // (a^{-l} b^m a^{l+k})^{-1} = a^{-(l+k)} b^{-m} a^{l}
    fn inverse(&self, x: &BsElem) -> BsElem {
        let top = x.l as i64 + x.k;
        let e = if top >= 0 {
            BsElem { l: top as u64, m: -&x.m, k: -x.k }
        } else {
            BsElem { l: 0, m: -&x.m * self.qpow(top.unsigned_abs()), k: -x.k }
        };
        self.reduce(e)
    }

    fn abelianization(&self, x: &BsElem) -> Abelianization {
        let mut torsion = Vec::new();
        if self.q > 2 {
            let p = BigInt::from(self.q - 1);
            torsion.push((x.m.mod_floor(&p), p));
        }
        Abelianization { free: vec![BigInt::from(x.k)], torsion }
    }

    fn validate(&self, x: &BsElem) -> Result<(), GroupError> {
        let q = BigInt::from(self.q);
        if x.l > 0 && x.m.is_multiple_of(&q) {
            return Err(GroupError::NotCanonical(self.format(x)));
        }
        Ok(())
    }

    /// Word over `a, b` (uppercase = inverse, `^n` exponents).
    fn parse_elem(&self, s: &str) -> Result<BsElem, ParseError> {
        let mut acc = self.identity();
        for (i, e) in parse_word(s, &['a', 'b'])? {
            let g = if i == 0 { BsElem { l: 0, m: BigInt::zero(), k: e } } else { BsElem { l: 0, m: BigInt::from(e), k: 0 } };
            acc = self.multiply(&acc, &g);
        }
        Ok(acc)
    }

    fn format(&self, x: &BsElem) -> String {
        let mut parts = Vec::new();
        if x.l > 0 {
            parts.push(format!("A^{}", x.l));
        }
        if !x.m.is_zero() {
            parts.push(format!("b^{}", x.m));
        }
        let top = x.l as i64 + x.k;
        if top != 0 {
            parts.push(format!("a^{top}"));
        }
        if parts.is_empty() {
            "e".into()
        } else {
            parts.join(" ")
        }
    }

    fn seminorm(&self, x: &BsElem) -> u64 {
        x.k.unsigned_abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defining_relation_holds() {
        let g = BaumslagSolitar::new(2);
        let (a, b) = (BsElem::a(), BsElem::b());
        let lhs = g.multiply(&a, &b);
        let rhs = g.multiply(&g.multiply(&b, &b), &a);
        assert_eq!(lhs, rhs);
        let g3 = BaumslagSolitar::new(3);
        assert_eq!(g3.parse_elem("ab").unwrap(), g3.parse_elem("b^3 a").unwrap());
    }

    #[test]
    fn normal_form_is_minimal() {
        let g = BaumslagSolitar::new(2);
        // a^{-1} b^2 a = b
        let x = g.parse_elem("A b^2 a").unwrap();
        assert_eq!(x, BsElem::b());
        let y = g.parse_elem("A b a").unwrap();
        assert_eq!((y.l, y.k), (1, 0));
        assert!(g.validate(&y).is_ok());
        assert!(g.validate(&BsElem { l: 1, m: BigInt::from(2), k: 0 }).is_err());
        assert_eq!(g.parse_elem(&g.format(&y)).unwrap(), y);
    }

    #[test]
    fn inverse_both_branches() {
        let g = BaumslagSolitar::new(3);
        for w in ["A^3 b^5 a", "A b^2 a^4", "b^-7 a^-2", "A^2 b a^2"] {
            let x = g.parse_elem(w).unwrap();
            assert!(g.is_identity(&g.multiply(&x, &g.inverse(&x))), "{w}");
            assert!(g.is_identity(&g.multiply(&g.inverse(&x), &x)), "{w}");
        }
    }
}
