use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{step_measure, DistanceOracle, EvolutionError, SparseDistribution};
use crate::groups::Group;

/// Generator for path `index`: ChaCha8 keyed by `seed`, one stream per path,
/// so paths do not depend on how they are scheduled.
pub fn path_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn check_gens<E>(gens: &[E]) -> Result<(), EvolutionError> {
    if gens.is_empty() {
        Err(EvolutionError::Invalid("empty generating sequence".into()))
    } else {
        Ok(())
    }
}

/// `n_paths` trajectories `(X_0 = id, ..., X_t)` of `X_{s+1} = X_s g_{U_{s+1}}`
/// with `U` uniform on `{0, ..., K-1}`.
pub fn mc_sample<G: Group>(
    group: &G,
    gens: &[G::Elem],
    t: usize,
    n_paths: usize,
    seed: u64,
) -> Result<Vec<Vec<G::Elem>>, EvolutionError> {
    check_gens(gens)?;
    let paths = (0..n_paths)
        .map(|i| {
            let mut rng = path_rng(seed, i as u64);
            let mut x = group.identity();
            let mut path = Vec::with_capacity(t + 1);
            path.push(x.clone());
            for _ in 0..t {
                group.mul_assign(&mut x, &gens[rng.gen_range(0..gens.len())]);
                path.push(x.clone());
            }
            path
        })
        .collect();
    Ok(paths)
}

/// Runs path `index` to time `t` without storing it, calling `visit(s, X_s)`
/// at every `s` in `checkpoints` (sorted).
pub fn sample_endpoint<G: Group>(
    group: &G,
    gens: &[G::Elem],
    t: usize,
    seed: u64,
    index: u64,
    checkpoints: &[usize],
    mut visit: impl FnMut(usize, &G::Elem),
) -> G::Elem {
    let mut rng = path_rng(seed, index);
    let mut x = group.identity();
    let mut next = checkpoints.iter().peekable();
    while next.peek().is_some_and(|c| **c == 0) {
        visit(0, &x);
        next.next();
    }
    for s in 1..=t {
        group.mul_assign(&mut x, &gens[rng.gen_range(0..gens.len())]);
        while next.peek().is_some_and(|c| **c == s) {
            visit(s, &x);
            next.next();
        }
    }
    x
}

/// Total variation between the empirical law of `samples` and `exact`.
pub fn empirical_tv<E: Ord + Clone>(samples: &[E], exact: &SparseDistribution<E>) -> f64 {
    let mut counts: BTreeMap<&E, usize> = BTreeMap::new();
    for x in samples {
        *counts.entry(x).or_default() += 1;
    }
    let n = samples.len() as f64;
    let mut tv = 0.0;
    for (x, _) in exact.iter() {
        let emp = counts.get(x).copied().unwrap_or(0) as f64 / n;
        tv += (emp - exact.prob_f64(x)).abs();
    }
    tv += counts.iter().filter(|(x, _)| !exact.contains(x)).map(|(_, c)| *c as f64 / n).sum::<f64>();
    0.5 * tv
}

fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpeedEstimate {
    /// Mean of `d(id, X_t) / t`.
    pub estimate: f64,
    pub std_error: f64,
    /// `(s, mean of d(id, X_s) / s)` at powers of two and at `t`.
    pub trace: Vec<(usize, f64)>,
    pub samples: usize,
    pub t: usize,
    pub seed: u64,
    /// The metric only bounds the word distance from below.
    pub lower_bound: bool,
}

fn checkpoints(t: usize) -> Vec<usize> {
    let mut c: Vec<usize> = std::iter::successors(Some(1usize), |s| s.checked_mul(2)).take_while(|s| *s < t).collect();
    c.push(t);
    c
}

pub fn speed_estimate<G: Group>(
    group: &G,
    gens: &[G::Elem],
    t: usize,
    n_paths: usize,
    seed: u64,
    oracle: &DistanceOracle<G::Elem>,
) -> Result<SpeedEstimate, EvolutionError> {
    check_gens(gens)?;
    if t == 0 || n_paths == 0 {
        return Err(EvolutionError::Invalid("speed needs t >= 1 and at least one path".into()));
    }
    let cps = checkpoints(t);
    let mut sums = vec![0.0; cps.len()];
    let mut finals = Vec::with_capacity(n_paths);
    let mut lower = false;
    for i in 0..n_paths {
        let mut err = None;
        let mut k = 0;
        sample_endpoint(group, gens, t, seed, i as u64, &cps, |s, x| {
            match oracle.distance(group, x) {
                Ok((d, lb)) => {
                    lower |= lb;
                    let v = d as f64 / s as f64;
                    sums[k] += v;
                    if s == t {
                        finals.push(v);
                    }
                }
                Err(e) => err = Some(e),
            }
            k += 1;
        });
        if let Some(e) = err {
            return Err(e);
        }
    }
    let (estimate, std_error) = mean_and_se(&finals);
    let trace = cps.iter().zip(&sums).map(|(s, v)| (*s, v / n_paths as f64)).collect();
    Ok(SpeedEstimate { estimate, std_error, trace, samples: n_paths, t, seed, lower_bound: lower })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyEstimate {
    /// Mean of `-(1/t) ln μ^t(X_t)` over sampled paths.
    pub estimate: f64,
    pub std_error: f64,
    /// `H(μ^t) / t` from the exact distribution.
    pub exact: f64,
    /// `(s, sampled estimate at time s)` for `s = 1..=t`.
    pub trace: Vec<(usize, f64)>,
    pub samples: usize,
    pub t: usize,
    pub seed: u64,
    pub support: usize,
}

/// Needs the exact `μ^s` for `s <= t`; fails with support overflow beyond
/// `max_support` atoms.
pub fn entropy_estimate<G: Group>(
    group: &G,
    gens: &[G::Elem],
    t: usize,
    n_paths: usize,
    seed: u64,
    max_support: usize,
) -> Result<EntropyEstimate, EvolutionError> {
    let mu = step_measure(group, gens)?;
    if t == 0 || n_paths == 0 {
        return Err(EvolutionError::Invalid("entropy needs t >= 1 and at least one path".into()));
    }
    let paths = mc_sample(group, gens, t, n_paths, seed)?;
    let mut dist = SparseDistribution::dirac(group.identity());
    let mut trace = Vec::with_capacity(t);
    let mut finals = Vec::new();
    for s in 1..=t {
        dist = dist.evolve(group, &mu);
        if dist.support_len() > max_support {
            return Err(EvolutionError::SupportOverflow { t: s, size: dist.support_len(), limit: max_support });
        }
        let vals: Vec<f64> = paths.iter().map(|p| -dist.ln_prob(&p[s]) / s as f64).collect();
        let (mean, _) = mean_and_se(&vals);
        trace.push((s, mean));
        if s == t {
            finals = vals;
        }
    }
    let (estimate, std_error) = mean_and_se(&finals);
    Ok(EntropyEstimate {
        estimate,
        std_error,
        exact: dist.entropy() / t as f64,
        trace,
        samples: n_paths,
        t,
        seed,
        support: dist.support_len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::powers;
    use crate::groups::{Free2, Zd};

    #[test]
    fn zero_steps_give_identity() {
        let z = Zd::new(1);
        let p = mc_sample(&z, &[vec![1]], 0, 1, 3).unwrap();
        assert_eq!(p, vec![vec![vec![0]]]);
    }

    #[test]
    fn same_seed_same_paths() {
        let f = Free2;
        let gens = f.parse_gens("a,A,b,B").unwrap();
        let a = mc_sample(&f, &gens, 20, 5, 11).unwrap();
        assert_eq!(a, mc_sample(&f, &gens, 20, 5, 11).unwrap());
        assert_ne!(a, mc_sample(&f, &gens, 20, 5, 12).unwrap());
    }

    #[test]
    fn empirical_law_is_close_to_exact() {
        let z = Zd::new(1);
        let gens = vec![vec![1], vec![1], vec![-2]];
        let mu = step_measure(&z, &gens).unwrap();
        let exact = powers(&z, &mu, 6, None, None).unwrap();
        let ends: Vec<_> = mc_sample(&z, &gens, 6, 20_000, 5).unwrap().into_iter().map(|p| p[6].clone()).collect();
        let tv = empirical_tv(&ends, &exact[6]);
        assert!(tv <= 3.0 * (exact[6].support_len() as f64 / 20_000.0).sqrt(), "tv = {tv}");
    }

    #[test]
    fn trivial_walk_has_zero_entropy_and_speed() {
        let z = Zd::new(1);
        let e = entropy_estimate(&z, &[vec![0]], 5, 10, 1, 10).unwrap();
        assert_eq!(e.estimate, 0.0);
        assert_eq!(e.exact, 0.0);
        let s = speed_estimate(&z, &[vec![0]], 5, 10, 1, &DistanceOracle::standard()).unwrap();
        assert_eq!(s.estimate, 0.0);
        assert_eq!(s.trace.iter().map(|p| p.0).collect::<Vec<_>>(), vec![1, 2, 4, 5]);
    }

    #[test]
    fn drifted_speed_is_one_third() {
        let z = Zd::new(1);
        let gens = vec![vec![1], vec![1], vec![-1]];
        let s = speed_estimate(&z, &gens, 2000, 400, 9, &DistanceOracle::standard()).unwrap();
        assert!((s.estimate - 1.0 / 3.0).abs() < 0.02, "{s:?}");
    }

    #[test]
    fn distance_beyond_table_is_an_error() {
        let z = Zd::new(1);
        let gens = vec![vec![1]];
        let oracle = DistanceOracle::table(&z, &gens, 3);
        assert!(matches!(speed_estimate(&z, &gens, 10, 1, 0, &oracle), Err(EvolutionError::UnknownDistance(_))));
    }
}
