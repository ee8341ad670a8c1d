use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{sample_endpoint, EvolutionError};
use crate::groups::{WreathElem, WreathZZ};

/// `g1 = (+2, +1 at 1)` and `g2 = (-2, -1 at 0)`.
pub fn example_lamp_generators() -> Vec<WreathElem> {
    vec![WreathElem::new(2, [(1, 1)]), WreathElem::new(-2, [(0, -1)])]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LampReport {
    /// `Σ_x H(X_t)(2x+1) - H(X_t)(2x) = t` at every visited time.
    pub holds: bool,
    pub shift_even: bool,
    /// Odd-position lamps are positive, even-position lamps negative.
    pub lamp_signs: bool,
    /// `Σ_x |H(X_t)(x)| = t`.
    pub mass_equals_t: bool,
    pub paths: usize,
    pub t: usize,
    pub first_failure: Option<(usize, usize)>,
}

fn is_odd(p: i64) -> bool {
    p.rem_euclid(2) == 1
}

/// Samples `n_paths` paths of length `t` of the walk driven by `gens` and
/// checks the lamp identities at every step of every path.
pub fn check_lamp_identity(gens: &[WreathElem], t: usize, n_paths: usize, seed: u64) -> Result<LampReport, EvolutionError> {
    let expected = example_lamp_generators();
    let mut sorted = gens.to_vec();
    sorted.sort();
    let mut want = expected.clone();
    want.sort();
    sorted.dedup();
    if sorted != want {
        return Err(EvolutionError::Invalid("lamp identity needs the pair (2,{1:1}), (-2,{0:-1})".into()));
    }
    let group = WreathZZ;
    let mut rep = LampReport {
        holds: true,
        shift_even: true,
        lamp_signs: true,
        mass_equals_t: true,
        paths: n_paths,
        t,
        first_failure: None,
    };
    let every: Vec<usize> = (0..=t).collect();
    for i in 0..n_paths {
        sample_endpoint(&group, gens, t, seed, i as u64, &every, |s, x| {
            if !check_one(x, s, &mut rep) && rep.first_failure.is_none() {
                rep.first_failure = Some((i, s));
            }
        });
    }
    Ok(rep)
}

fn check_one(x: &WreathElem, s: usize, rep: &mut LampReport) -> bool {
    let t = BigInt::from(s);
    let mut signed = BigInt::zero();
    let mut mass = BigInt::zero();
    let mut signs = true;
    for (p, v) in &x.lamps {
        if is_odd(*p) {
            signed += v;
            signs &= v.is_positive();
        } else {
            signed -= v;
            signs &= v.is_negative();
        }
        mass += v.abs();
    }
    let even = x.shift % 2 == 0;
    let id = signed == t;
    let m = mass == t;
    rep.holds &= id;
    rep.shift_even &= even;
    rep.lamp_signs &= signs;
    rep.mass_equals_t &= m;
    id && even && signs && m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_holds_on_short_paths() {
        let rep = check_lamp_identity(&example_lamp_generators(), 50, 20, 3).unwrap();
        assert!(rep.holds && rep.shift_even && rep.lamp_signs && rep.mass_equals_t, "{rep:?}");
        assert_eq!(rep.first_failure, None);
    }

    #[test]
    fn wrong_pair_is_rejected() {
        let gens = vec![WreathElem::new(1, [(0, 1)]), WreathElem::new(-1, [])];
        assert!(check_lamp_identity(&gens, 5, 1, 0).is_err());
    }
}
