use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::EvolutionError;
use crate::groups::Group;
use crate::weight::{ln_ratio, ratio_to_f64, Rational};

/// Atoms below this probability are dropped in pruning mode.
pub const PRUNE_EPS: f64 = 1e-15;

/// Finitely supported probability measure with exact rational masses,
/// stored as integer numerators over one shared denominator.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseDistribution<E> {
    atoms: BTreeMap<E, BigUint>,
    denom: BigUint,
    t: usize,
    approximate: bool,
}

impl<E: Ord + Clone> SparseDistribution<E> {
    pub fn dirac(x: E) -> Self {
        Self { atoms: BTreeMap::from([(x, BigUint::one())]), denom: BigUint::one(), t: 0, approximate: false }
    }

    /// From integer counts; the denominator is their sum.
    pub fn from_counts(counts: BTreeMap<E, BigUint>, t: usize) -> Result<Self, EvolutionError> {
        let counts: BTreeMap<E, BigUint> = counts.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let denom: BigUint = counts.values().sum();
        if denom.is_zero() {
            return Err(EvolutionError::Invalid("empty distribution".into()));
        }
        Ok(Self { atoms: counts, denom, t, approximate: false })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Some atoms were pruned along the way and the rest renormalized.
    pub fn is_approximate(&self) -> bool {
        self.approximate
    }

    pub fn support_len(&self) -> usize {
        self.atoms.len()
    }

    pub fn denominator(&self) -> &BigUint {
        &self.denom
    }

    pub fn numerator(&self, x: &E) -> Option<&BigUint> {
        self.atoms.get(x)
    }

    pub fn contains(&self, x: &E) -> bool {
        self.atoms.contains_key(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&E, &BigUint)> {
        self.atoms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &E> {
        self.atoms.keys()
    }

    pub fn prob(&self, x: &E) -> Rational {
        match self.atoms.get(x) {
            Some(c) => Rational::new(BigInt::from(c.clone()), BigInt::from(self.denom.clone())),
            None => Rational::zero(),
        }
    }

    pub fn prob_f64(&self, x: &E) -> f64 {
        self.atoms.get(x).map_or(0.0, |c| ln_ratio(c, &self.denom).exp())
    }

    /// `ln μ(x)`, `-inf` off the support.
    pub fn ln_prob(&self, x: &E) -> f64 {
        self.atoms.get(x).map_or(f64::NEG_INFINITY, |c| ln_ratio(c, &self.denom))
    }

    /// Exact total mass (one unless something is wrong).
    pub fn total(&self) -> Rational {
        let s: BigUint = self.atoms.values().sum();
        Rational::new(BigInt::from(s), BigInt::from(self.denom.clone()))
    }

    /// Shannon entropy `-Σ μ ln μ`.
    pub fn entropy(&self) -> f64 {
        self.atoms
            .values()
            .map(|c| {
                let l = ln_ratio(c, &self.denom);
                -l.exp() * l
            })
            .sum()
    }

    /// Exact mass of the atoms satisfying `pred`.
    pub fn mass_where(&self, pred: impl Fn(&E) -> bool) -> Rational {
        let s: BigUint = self.atoms.iter().filter(|(x, _)| pred(x)).map(|(_, c)| c).sum();
        Rational::new(BigInt::from(s), BigInt::from(self.denom.clone()))
    }

    /// Drops atoms of probability below `eps` and renormalizes exactly over
    /// the rest; the result is flagged approximate if anything was dropped.
    pub fn pruned(mut self, eps: f64) -> Self {
        let before = self.atoms.len();
        let denom = self.denom.clone();
        self.atoms.retain(|_, c| ln_ratio(c, &denom) >= eps.ln());
        if self.atoms.len() < before {
            self.denom = self.atoms.values().sum();
            self.approximate = true;
        }
        self
    }

    /// Probabilities as floats, for reports.
    pub fn to_f64_map(&self) -> BTreeMap<E, f64> {
        self.atoms.iter().map(|(x, c)| (x.clone(), ratio_f64(c, &self.denom))).collect()
    }

    /// `self * mu`: the law of `X · η` with `X ~ self`, `η ~ mu` independent.
    pub fn evolve<G: Group<Elem = E>>(&self, group: &G, mu: &SparseDistribution<E>) -> Self {
        let mut out: BTreeMap<E, BigUint> = BTreeMap::new();
        for (x, cx) in &self.atoms {
            for (g, cg) in &mu.atoms {
                let mut y = x.clone();
                group.mul_assign(&mut y, g);
                let add = cx * cg;
                match out.get_mut(&y) {
                    Some(c) => *c += add,
                    None => {
                        out.insert(y, add);
                    }
                }
            }
        }
        Self {
            atoms: out,
            denom: &self.denom * &mu.denom,
            t: self.t + mu.t,
            approximate: self.approximate || mu.approximate,
        }
    }
}

fn ratio_f64(c: &BigUint, d: &BigUint) -> f64 {
    ratio_to_f64(&Rational::new(BigInt::from(c.clone()), BigInt::from(d.clone())))
}

/// `μ(x) = #{i : g_i = x} / K`.
pub fn step_measure<G: Group>(group: &G, gens: &[G::Elem]) -> Result<SparseDistribution<G::Elem>, EvolutionError> {
    if gens.is_empty() {
        return Err(EvolutionError::Invalid("empty generating sequence".into()));
    }
    let mut counts: BTreeMap<G::Elem, BigUint> = BTreeMap::new();
    for g in gens {
        group.validate(g)?;
        *counts.entry(g.clone()).or_default() += 1u32;
    }
    SparseDistribution::from_counts(counts, 1)
}

/// `μ^0, μ^1, ..., μ^{t_max}`. With `prune = Some(eps)` each power is pruned
/// after the convolution; `max_support` bounds every intermediate support.
pub fn powers<G: Group>(
    group: &G,
    mu: &SparseDistribution<G::Elem>,
    t_max: usize,
    prune: Option<f64>,
    max_support: Option<usize>,
) -> Result<Vec<SparseDistribution<G::Elem>>, EvolutionError> {
    let mut out = Vec::with_capacity(t_max + 1);
    out.push(SparseDistribution::dirac(group.identity()));
    for t in 1..=t_max {
        let mut next = out[t - 1].evolve(group, mu);
        if let Some(eps) = prune {
            next = next.pruned(eps);
        }
        if let Some(limit) = max_support {
            if next.support_len() > limit {
                return Err(EvolutionError::SupportOverflow { t, size: next.support_len(), limit });
            }
        }
        out.push(next);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{Free2, Zd};
    use crate::weight::Weight;

    fn z_gens(steps: &[i64]) -> Vec<Vec<i64>> {
        steps.iter().map(|s| vec![*s]).collect()
    }

    #[test]
    fn step_measure_merges_duplicates() {
        let z = Zd::new(1);
        let mu = step_measure(&z, &z_gens(&[1, 1, -2])).unwrap();
        assert_eq!(mu.prob(&vec![1]), Rational::from_ratio(2, 3));
        assert_eq!(mu.prob(&vec![-2]), Rational::from_ratio(1, 3));
        assert_eq!(mu.support_len(), 2);
        let f2 = Free2;
        let gens = f2.parse_gens("a,A,b,B,BB,ababAA").unwrap();
        assert_eq!(step_measure(&f2, &gens).unwrap().support_len(), 6);
        let gens = f2.parse_gens("a,A,b,aAb").unwrap();
        assert_eq!(step_measure(&f2, &gens).unwrap().support_len(), 3);
    }

    #[test]
    fn dirac_is_identity_for_convolution() {
        let z = Zd::new(1);
        let mu = step_measure(&z, &z_gens(&[1, 1, -2])).unwrap();
        let d = SparseDistribution::dirac(vec![0]);
        let once = d.evolve(&z, &mu);
        assert_eq!(once.to_f64_map(), mu.to_f64_map());
        assert_eq!(once.t(), 1);
    }

    #[test]
    fn small_powers_match_hand_counts() {
        let z = Zd::new(1);
        let srw = step_measure(&z, &z_gens(&[1, -1])).unwrap();
        let p = powers(&z, &srw, 4, None, None).unwrap();
        assert_eq!(p[4].prob(&vec![0]), Rational::from_ratio(6, 16));
        let skew = step_measure(&z, &z_gens(&[1, 1, -2])).unwrap();
        let p = powers(&z, &skew, 3, None, None).unwrap();
        assert_eq!(p[3].prob(&vec![0]), Rational::from_ratio(4, 9));
        assert!(p.iter().all(|d| d.total() == Rational::from_ratio(1, 1)));
    }

    #[test]
    fn pruning_is_flagged_and_renormalized() {
        let z = Zd::new(1);
        let mu = step_measure(&z, &z_gens(&[1, 1, 1, 1, 1, 1, 1, 1, 1, -1])).unwrap();
        let p = powers(&z, &mu, 20, Some(1e-12), None).unwrap();
        assert!(p[20].is_approximate());
        assert!(!p[20].contains(&vec![-20]));
        assert_eq!(p[20].total(), Rational::from_ratio(1, 1));
        let exact = powers(&z, &mu, 20, None, None).unwrap();
        assert!(!exact[20].is_approximate());
        assert!((exact[20].prob(&vec![-20]).to_f64() - 1e-20).abs() < 1e-30);
    }

    #[test]
    fn support_overflow_is_an_error() {
        let f2 = Free2;
        let gens = f2.parse_gens("a,A,b,B").unwrap();
        let mu = step_measure(&f2, &gens).unwrap();
        let err = powers(&f2, &mu, 6, None, Some(100)).unwrap_err();
        assert!(matches!(err, EvolutionError::SupportOverflow { .. }));
    }
}
