use std::collections::HashMap;

use super::EvolutionError;
use crate::groups::{Group, WordBall};

/// Distance from the identity, either from a BFS table of the word metric of
/// `G ∪ G⁻¹` or from the group's standard-generator norm (which may be a
/// lower bound, e.g. on the lamplighter group).
#[derive(Clone, Debug)]
pub enum DistanceOracle<E> {
    Table { dist: HashMap<E, usize>, radius: usize },
    StandardNorm,
}

impl<E: Clone + Eq + std::hash::Hash> DistanceOracle<E> {
    pub fn table<G: Group<Elem = E>>(group: &G, gens: &[E], radius: usize) -> Self {
        let ball = WordBall::new(group, gens, radius);
        DistanceOracle::Table { dist: ball.into_distances(), radius }
    }

    /// A table of radius `radius`, or `SupportOverflow` when the ball has more than `max_size` elements.
    pub fn table_limited<G: Group<Elem = E>>(group: &G, gens: &[E], radius: usize, max_size: usize) -> Result<Self, EvolutionError> {
        let ball = WordBall::new_limited(group, gens, radius, max_size)
            .ok_or(EvolutionError::SupportOverflow { t: radius, size: max_size + 1, limit: max_size })?;
        Ok(DistanceOracle::Table { dist: ball.into_distances(), radius })
    }

    pub fn standard() -> Self {
        DistanceOracle::StandardNorm
    }

    /// `(distance, is_lower_bound)`.
    pub fn distance<G: Group<Elem = E>>(&self, group: &G, x: &E) -> Result<(u64, bool), EvolutionError> {
        match self {
            DistanceOracle::Table { dist, radius } => dist.get(x).map(|d| (*d as u64, false)).ok_or_else(|| {
                EvolutionError::UnknownDistance(format!("{} (beyond BFS radius {radius})", group.format(x)))
            }),
            DistanceOracle::StandardNorm => group
                .standard_norm(x)
                .map(|n| (n.value, n.lower_bound))
                .ok_or_else(|| EvolutionError::UnknownDistance(format!("{} (no standard norm)", group.format(x)))),
        }
    }

    pub fn is_lower_bound(&self) -> bool {
        matches!(self, DistanceOracle::StandardNorm)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{WreathElem, WreathZZ, Zd};

    #[test]
    fn table_and_norm_agree_on_standard_z2() {
        let z = Zd::new(2);
        let gens = z.standard_generators();
        let t = DistanceOracle::table(&z, &gens, 6);
        let n = DistanceOracle::standard();
        for x in [vec![0, 0], vec![3, -2], vec![-1, 5]] {
            assert_eq!(t.distance(&z, &x).unwrap().0, n.distance(&z, &x).unwrap().0);
        }
        assert!(t.distance(&z, &vec![7, 0]).is_err());
    }

    #[test]
    fn limited_table_overflows() {
        let z = Zd::new(2);
        let gens = z.standard_generators();
        assert!(DistanceOracle::table_limited(&z, &gens, 3, 25).is_ok());
        assert!(matches!(
            DistanceOracle::table_limited(&z, &gens, 4, 40),
            Err(EvolutionError::SupportOverflow { .. })
        ));
    }

    #[test]
    fn wreath_norm_is_flagged() {
        let w = WreathZZ;
        let d = DistanceOracle::standard();
        let x = WreathElem::new(2, [(0, -1), (1, 1)]);
        assert_eq!(d.distance(&w, &x).unwrap(), (4, true));
    }
}
