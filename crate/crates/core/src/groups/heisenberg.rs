use num_bigint::BigInt;

use super::parse::{parse_int_tuple, parse_word, ParseError};
use super::{Abelianization, Group, GroupError};

/// Integer Heisenberg group, `(a, b, c)` standing for the unitriangular matrix
/// with `a, b` above the diagonal and `c` in the corner:
/// `(a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Heisenberg;

pub const X: [i64; 3] = [1, 0, 0];
pub const Y: [i64; 3] = [0, 1, 0];
pub const Z: [i64; 3] = [0, 0, 1];

impl Group for Heisenberg {
    type Elem = [i64; 3];

    fn name(&self) -> String {
        "heisenberg".into()
    }

    fn identity(&self) -> [i64; 3] {
        [0, 0, 0]
    }

    fn multiply(&self, a: &[i64; 3], b: &[i64; 3]) -> [i64; 3] {
        [a[0] + b[0], a[1] + b[1], a[2] + b[2] + a[0] * b[1]]
    }

    fn inverse(&self, a: &[i64; 3]) -> [i64; 3] {
        [-a[0], -a[1], -a[2] + a[0] * a[1]]
    }

    fn abelianization(&self, a: &[i64; 3]) -> Abelianization {
        Abelianization::free_only(vec![BigInt::from(a[0]), BigInt::from(a[1])])
    }

    fn validate(&self, _a: &[i64; 3]) -> Result<(), GroupError> {
        Ok(())
    }

    /// A triple `(a,b,c)` or a word over `x, y, z` (uppercase = inverse).
    fn parse_elem(&self, s: &str) -> Result<[i64; 3], ParseError> {
        let t = s.trim();
        if t.starts_with('(') || t.starts_with('[') {
            let v = parse_int_tuple(s)?;
            return <[i64; 3]>::try_from(v).map_err(|v| ParseError::new(0, format!("expected 3 coordinates, found {}", v.len())));
        }
        let gens = [X, Y, Z];
        let mut acc = self.identity();
        for (i, e) in parse_word(s, &['x', 'y', 'z'])? {
            let g = if e < 0 { self.inverse(&gens[i]) } else { gens[i] };
            for _ in 0..e.unsigned_abs() {
                acc = self.multiply(&acc, &g);
            }
        }
        Ok(acc)
    }

    fn format(&self, a: &[i64; 3]) -> String {
        format!("({},{},{})", a[0], a[1], a[2])
    }

    fn seminorm(&self, a: &[i64; 3]) -> u64 {
        a[0].unsigned_abs() + a[1].unsigned_abs()
    }
}
