use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::parse::{parse_i64, split_top_level, ParseError};
use super::{abs_u64, Abelianization, Group, GroupError, NormValue};

/// Lamplighter-type wreath product `Z ≀ Z`: a shift `ε ∈ Z` and a finitely
/// supported lamp configuration `H: Z → Z`, multiplied as
/// `(s, η)(s', η') = (s + s', η + η'(· − s))`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct WreathZZ;

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WreathElem {
    pub shift: i64,
    /// Nonzero lamp values only.
    pub lamps: BTreeMap<i64, BigInt>,
}

impl WreathElem {
    pub fn new(shift: i64, lamps: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let lamps = lamps.into_iter().filter(|(_, v)| *v != 0).map(|(p, v)| (p, BigInt::from(v))).collect();
        Self { shift, lamps }
    }

    pub fn lamp(&self, p: i64) -> BigInt {
        self.lamps.get(&p).cloned().unwrap_or_default()
    }

    /// `Σ_x |H(x)|`.
    pub fn lamp_mass(&self) -> BigInt {
        self.lamps.values().map(|v| v.abs()).sum()
    }
}

impl Group for WreathZZ {
    type Elem = WreathElem;

    fn name(&self) -> String {
        "wreath".into()
    }

    fn identity(&self) -> WreathElem {
        WreathElem::default()
    }

    fn multiply(&self, x: &WreathElem, y: &WreathElem) -> WreathElem {
        let mut out = x.clone();
        self.mul_assign(&mut out, y);
        out
    }

    fn mul_assign(&self, x: &mut WreathElem, y: &WreathElem) {
        for (p, v) in &y.lamps {
            let key = p + x.shift;
            let slot = x.lamps.entry(key).or_default();
            *slot += v;
            if slot.is_zero() {
                x.lamps.remove(&key);
            }
        }
        x.shift += y.shift;
    }

    fn inverse(&self, x: &WreathElem) -> WreathElem {
        WreathElem { shift: -x.shift, lamps: x.lamps.iter().map(|(p, v)| (p - x.shift, -v)).collect() }
    }

    /// `(ε, Σ_x H(x))`.
    fn abelianization(&self, x: &WreathElem) -> Abelianization {
        Abelianization::free_only(vec![BigInt::from(x.shift), x.lamps.values().sum()])
    }

    fn validate(&self, x: &WreathElem) -> Result<(), GroupError> {
        if x.lamps.values().any(Zero::is_zero) {
            return Err(GroupError::NotCanonical(self.format(x)));
        }
        Ok(())
    }

    /// `(shift, {pos: value, ...})`, e.g. `(2,{1:1})`.
    fn parse_elem(&self, s: &str) -> Result<WreathElem, ParseError> {
        let lead = s.len() - s.trim_start().len();
        let t = s.trim();
        if !(t.starts_with('(') && t.ends_with(')')) {
            return Err(ParseError::new(lead, "expected (shift, {pos:value,...})"));
        }
        let inner = &t[1..t.len() - 1];
        let base = lead + 1;
        let parts = split_top_level(inner).map_err(|e| e.shifted(base))?;
        let [(s_off, shift), (l_off, lamps)] = parts[..] else {
            return Err(ParseError::new(base, "expected exactly two components"));
        };
        let shift = parse_i64(shift, base + s_off)?;
        if !(lamps.starts_with('{') && lamps.ends_with('}')) {
            return Err(ParseError::new(base + l_off, "lamps must be written {pos:value,...}"));
        }
        let body = &lamps[1..lamps.len() - 1];
        let body_at = base + l_off + 1;
        let mut out = WreathElem { shift, lamps: BTreeMap::new() };
        if !body.trim().is_empty() {
            for (off, item) in split_top_level(body).map_err(|e| e.shifted(body_at))? {
                let (p, v) = item
                    .split_once(':')
                    .ok_or_else(|| ParseError::new(body_at + off, format!("expected pos:value, found '{item}'")))?;
                let p = parse_i64(p, body_at + off)?;
                let v = parse_i64(v, body_at + off + item.find(':').unwrap_or(0) + 1)?;
                let slot = out.lamps.entry(p).or_default();
                *slot += v;
                if slot.is_zero() {
                    out.lamps.remove(&p);
                }
            }
        }
        Ok(out)
    }

    fn format(&self, x: &WreathElem) -> String {
        let lamps: Vec<String> = x.lamps.iter().map(|(p, v)| format!("{p}:{v}")).collect();
        format!("({},{{{}}})", x.shift, lamps.join(","))
    }

    fn seminorm(&self, x: &WreathElem) -> u64 {
        x.shift.unsigned_abs().saturating_add(abs_u64(&x.lamp_mass()))
    }

    /// `|ε| + Σ|H|` bounds the word length for the standard generators
    /// (unit shift and unit lamp) from below.
    fn standard_norm(&self, x: &WreathElem) -> Option<NormValue> {
        Some(NormValue { value: self.seminorm(x), lower_bound: true })
    }
}
