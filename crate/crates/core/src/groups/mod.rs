//! Finitely generated groups in canonical form, generating sequences and the
//! centering conditions on them.

mod bs;
mod cayley;
mod conditions;
mod cyclic;
pub mod f2;
mod free;
mod heisenberg;
mod parse;
mod translate;
mod wreath;
mod zd;

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

pub use bs::{BaumslagSolitar, BsElem};
pub use cayley::{volume_growth, word_distance, word_distance_limited, CayleyWindow, WordBall};
pub use conditions::{abelian_c1, c1_search, c2_check, C1Outcome, C1Witness, C2Report};
pub use cyclic::Cyclic;
pub use free::{Free2, Letter};
pub use heisenberg::Heisenberg;
pub use parse::{split_top_level, ParseError};
pub use translate::{finite_walk_kernel, torsion_decomposition, translated_cycle_decomposition, FiniteGroup};
pub use wreath::{WreathElem, WreathZZ};
pub use zd::Zd;

use crate::markov_graph::GraphError;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum GroupError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("element {elem} does not belong to {group}")]
    Mismatch { group: String, elem: String },
    #[error("element {0} is not in canonical form")]
    NotCanonical(String),
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("{0} is not abelian")]
    NotAbelian(String),
    #[error("element {0} has infinite order")]
    InfiniteOrder(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Image in the abelianization `V/[V, V]`, split into a free part `Z^r` and
/// torsion components `(value, modulus)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Abelianization {
    pub free: Vec<BigInt>,
    pub torsion: Vec<(BigInt, BigInt)>,
}

impl Abelianization {
    pub fn free_only(free: Vec<BigInt>) -> Self {
        Self { free, torsion: Vec::new() }
    }

    /// Componentwise sum (torsion reduced modulo each modulus).
    pub fn add(&self, other: &Self) -> Self {
        let free = self.free.iter().zip(&other.free).map(|(a, b)| a + b).collect();
        let torsion = self
            .torsion
            .iter()
            .zip(&other.torsion)
            .map(|((a, p), (b, _))| (((a + b) % p + p) % p, p.clone()))
            .collect();
        Self { free, torsion }
    }

    pub fn free_is_zero(&self) -> bool {
        self.free.iter().all(Zero::is_zero)
    }
}

/// Norm value with a flag telling whether it is only a lower bound for the
/// word metric of the standard generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormValue {
    pub value: u64,
    pub lower_bound: bool,
}

/// A group with canonical element representations.
///
/// Equal group elements must have equal (`==`) representations, so elements
/// can key hash maps and memo tables directly.
pub trait Group: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + Eq + Ord + Hash + fmt::Debug + Send + Sync;

    fn name(&self) -> String;
    fn identity(&self) -> Self::Elem;
    fn multiply(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inverse(&self, a: &Self::Elem) -> Self::Elem;

    /// `a ← a · b`; groups with large elements override this to work in place.
    fn mul_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.multiply(a, b);
    }

    fn is_identity(&self, a: &Self::Elem) -> bool {
        *a == self.identity()
    }

    fn abelianization(&self, a: &Self::Elem) -> Abelianization;

    fn is_abelian(&self) -> bool {
        false
    }

    /// Checks that `a` is a canonical element of this group (right dimension,
    /// reduced, normalized).
    fn validate(&self, a: &Self::Elem) -> Result<(), GroupError>;

    fn try_multiply(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, GroupError> {
        self.validate(a)?;
        self.validate(b)?;
        Ok(self.multiply(a, b))
    }

    fn parse_elem(&self, s: &str) -> Result<Self::Elem, ParseError>;

    /// Parses a comma-separated generator list; commas inside brackets,
    /// parentheses and braces do not split.
    fn parse_gens(&self, s: &str) -> Result<Vec<Self::Elem>, ParseError> {
        let parts = split_top_level(s)?;
        if parts.is_empty() {
            return Err(ParseError::new(0, "empty generator list"));
        }
        parts
            .into_iter()
            .map(|(off, piece)| self.parse_elem(piece).map_err(|e| e.shifted(off)))
            .collect()
    }

    fn format(&self, a: &Self::Elem) -> String;

    /// Subadditive, inverse-invariant, zero at the identity. Used to prune
    /// searches: a product of seminorm `s` cannot be cancelled by factors whose
    /// seminorms add up to less than `s`.
    fn seminorm(&self, a: &Self::Elem) -> u64;

    /// Word length for the group's standard generators, when known.
    fn standard_norm(&self, _a: &Self::Elem) -> Option<NormValue> {
        None
    }

    /// Order of `a` when finite and known.
    fn order(&self, a: &Self::Elem) -> Option<u64> {
        self.is_identity(a).then_some(1)
    }

    fn product<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        let mut acc = self.identity();
        for x in items {
            self.mul_assign(&mut acc, x);
        }
        acc
    }

    fn power(&self, a: &Self::Elem, n: u64) -> Self::Elem {
        let mut acc = self.identity();
        for _ in 0..n {
            self.mul_assign(&mut acc, a);
        }
        acc
    }
}

/// Group selector used on the command line: `z:d`, `heisenberg`, `bs:q`,
/// `wreath`, `f2`, `zmod:p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum GroupSpec {
    Zd(usize),
    Heisenberg,
    BaumslagSolitar(u32),
    WreathZZ,
    Free2,
    Cyclic(u64),
}

impl FromStr for GroupSpec {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h.trim(), Some(a.trim())),
            None => (s, None),
        };
        let arg_at = s.find(':').map_or(0, |i| i + 1);
        let num = |min: u64| -> Result<u64, ParseError> {
            let a = arg.ok_or_else(|| ParseError::new(s.len(), format!("'{head}' needs a parameter")))?;
            let v: u64 = a.parse().map_err(|_| ParseError::new(arg_at, format!("bad parameter '{a}'")))?;
            if v < min {
                return Err(ParseError::new(arg_at, format!("parameter of '{head}' must be >= {min}")));
            }
            Ok(v)
        };
        let no_arg = |spec: GroupSpec| match arg {
            Some(_) => Err(ParseError::new(arg_at, format!("'{head}' takes no parameter"))),
            None => Ok(spec),
        };
        match head.to_ascii_lowercase().as_str() {
            "z" => Ok(GroupSpec::Zd(num(1)? as usize)),
            "heisenberg" => no_arg(GroupSpec::Heisenberg),
            "bs" => Ok(GroupSpec::BaumslagSolitar(u32::try_from(num(2)?).map_err(|_| ParseError::new(arg_at, "q too large"))?)),
            "wreath" => no_arg(GroupSpec::WreathZZ),
            "f2" => no_arg(GroupSpec::Free2),
            "zmod" => Ok(GroupSpec::Cyclic(num(1)?)),
            other => Err(ParseError::new(0, format!("unknown group '{other}'"))),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Zd(d) => write!(f, "z:{d}"),
            GroupSpec::Heisenberg => f.write_str("heisenberg"),
            GroupSpec::BaumslagSolitar(q) => write!(f, "bs:{q}"),
            GroupSpec::WreathZZ => f.write_str("wreath"),
            GroupSpec::Free2 => f.write_str("f2"),
            GroupSpec::Cyclic(p) => write!(f, "zmod:{p}"),
        }
    }
}

impl TryFrom<String> for GroupSpec {
    type Error = ParseError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<GroupSpec> for String {
    fn from(g: GroupSpec) -> Self {
        g.to_string()
    }
}

/// Runs `$body` with `$g` bound to the concrete group selected by `$spec`.
#[macro_export]
macro_rules! with_group {
    ($spec:expr, $g:ident => $body:expr) => {
        match $spec {
            $crate::groups::GroupSpec::Zd(d) => {
                let $g = $crate::groups::Zd::new(d);
                $body
            }
            $crate::groups::GroupSpec::Heisenberg => {
                let $g = $crate::groups::Heisenberg;
                $body
            }
            $crate::groups::GroupSpec::BaumslagSolitar(q) => {
                let $g = $crate::groups::BaumslagSolitar::new(q);
                $body
            }
            $crate::groups::GroupSpec::WreathZZ => {
                let $g = $crate::groups::WreathZZ;
                $body
            }
            $crate::groups::GroupSpec::Free2 => {
                let $g = $crate::groups::Free2;
                $body
            }
            $crate::groups::GroupSpec::Cyclic(p) => {
                let $g = $crate::groups::Cyclic::new(p);
                $body
            }
        }
    };
}

pub(crate) fn abs_u64(x: &BigInt) -> u64 {
    use num_traits::ToPrimitive;
    x.abs().to_u64().unwrap_or(u64::MAX)
}
