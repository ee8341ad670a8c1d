use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::GraphError;
use crate::weight::Weight;

/// Closed path `(x_0, ..., x_k)` with `x_k = x_0`, `k >= 1`.
///
/// Plain cycles never repeat an oriented edge. Generalized cycles may, and
/// edges are then counted with multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cycle<V> {
    vertices: Vec<V>,
    generalized: bool,
}

impl<V: Ord + Clone + fmt::Debug> Cycle<V> {
    pub fn new(vertices: Vec<V>) -> Result<Self, GraphError> {
        let c = Self::generalized(vertices)?;
        if !c.is_edge_self_avoiding() {
            return Err(GraphError::InvalidCycle(format!("repeated oriented edge in {:?}", c.vertices)));
        }
        Ok(Self { generalized: false, ..c })
    }

    pub fn generalized(vertices: Vec<V>) -> Result<Self, GraphError> {
        if vertices.len() < 2 {
            return Err(GraphError::InvalidCycle("a cycle needs at least one edge".into()));
        }
        if vertices.first() != vertices.last() {
            return Err(GraphError::InvalidCycle(format!("cycle {vertices:?} is not closed")));
        }
        Ok(Self { vertices, generalized: true })
    }

    /// The closed vertex sequence, first vertex repeated at the end.
    pub fn vertices(&self) -> &[V] {
        &self.vertices
    }

    /// Distinct positions `x_0, ..., x_{k-1}`.
    pub fn points(&self) -> &[V] {
        &self.vertices[..self.vertices.len() - 1]
    }

    /// Number of edges `|γ|`.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_generalized(&self) -> bool {
        self.generalized
    }

    pub fn edges(&self) -> impl Iterator<Item = (&V, &V)> {
        self.vertices.windows(2).map(|w| (&w[0], &w[1]))
    }

    /// `N((x, y), γ)`.
    pub fn multiplicity(&self, x: &V, y: &V) -> usize {
        self.edges().filter(|(a, b)| *a == x && *b == y).count()
    }

    pub fn is_edge_self_avoiding(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.edges().all(|e| seen.insert(e))
    }

    /// The same cycle traversed backwards.
    pub fn reversed(&self) -> Self {
        let mut v = self.vertices.clone();
        v.reverse();
        Self { vertices: v, generalized: self.generalized }
    }

    /// Maps every vertex through `f` (e.g. left translation in a group).
    pub fn map<U: Ord + Clone + fmt::Debug>(&self, f: impl Fn(&V) -> U) -> Cycle<U> {
        Cycle { vertices: self.vertices.iter().map(f).collect(), generalized: self.generalized }
    }

    /// Splits a generalized cycle into edge self-avoiding cycles whose edge
    /// multisets add up to the original one.
    pub fn split_simple(&self) -> Vec<Cycle<V>> {
        let mut out = Vec::new();
        let mut stack = vec![self.vertices.clone()];
        while let Some(walk) = stack.pop() {
            match first_repeated_edge(&walk) {
                None => out.push(Cycle { vertices: walk, generalized: false }),
                Some((i, j)) => {
                    // walk[i] == walk[j]: peel the closed sub-walk i..=j.
                    let inner = walk[i..=j].to_vec();
                    let mut outer = walk[..i].to_vec();
                    outer.extend_from_slice(&walk[j..]);
                    stack.push(outer);
                    stack.push(inner);
                }
            }
        }
        out.reverse();
        out
    }

    /// Path from `y` to `x` along the cycle, entering right after edge `(x, y)`.
    /// Returns `None` when `(x, y)` is not an edge of this cycle.
    pub fn complement_of_edge(&self, x: &V, y: &V) -> Option<Vec<V>> {
        let k = self.len();
        let pos = self.edges().position(|(a, b)| a == x && b == y)?;
        let mut path = Vec::with_capacity(k);
        for step in 0..k {
            path.push(self.vertices[(pos + 1 + step) % k].clone());
        }
        Some(path)
    }
}

fn first_repeated_edge<V: Ord>(walk: &[V]) -> Option<(usize, usize)> {
    let mut seen: BTreeMap<(&V, &V), usize> = BTreeMap::new();
    for (j, w) in walk.windows(2).enumerate() {
        if let Some(&i) = seen.get(&(&w[0], &w[1])) {
            return Some((i, j));
        }
        seen.insert((&w[0], &w[1]), j);
    }
    None
}

/// Weighted cycle family `(γ_i, q_i)`, all `q_i > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleDecomposition<V, W> {
    entries: Vec<(Cycle<V>, W)>,
}

impl<V: Ord + Clone + fmt::Debug, W: Weight> CycleDecomposition<V, W> {
    pub fn new(entries: Vec<(Cycle<V>, W)>) -> Result<Self, GraphError> {
        if let Some(i) = entries.iter().position(|(_, w)| !w.is_positive()) {
            return Err(GraphError::NonPositiveCycleWeight { index: i, weight: entries[i].1.to_string() });
        }
        Ok(Self { entries })
    }

    pub fn empty() -> Self {
        Self { entries: Vec::new() }
    }

    pub fn entries(&self) -> &[(Cycle<V>, W)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `C0 = sup_i |γ_i|` (zero for the empty family).
    pub fn c0(&self) -> usize {
        self.entries.iter().map(|(c, _)| c.len()).max().unwrap_or(0)
    }

    /// `Σ_i q_i N((x, y), γ_i)` for every covered edge.
    pub fn coverage(&self) -> BTreeMap<(V, V), W> {
        let mut cov: BTreeMap<(V, V), W> = BTreeMap::new();
        for (c, w) in &self.entries {
            for (x, y) in c.edges() {
                let slot = cov.entry((x.clone(), y.clone())).or_insert_with(W::zero);
                *slot = slot.clone() + w.clone();
            }
        }
        cov
    }

    /// Cycles traversed backwards, same weights: the decomposition of the time reversal.
    pub fn reversed(&self) -> Self {
        Self { entries: self.entries.iter().map(|(c, w)| (c.reversed(), w.clone())).collect() }
    }

    /// Every vertex visited by some cycle.
    pub fn vertices(&self) -> BTreeSet<V> {
        self.entries.iter().flat_map(|(c, _)| c.points().iter().cloned()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::Rational;

    #[test]
    fn rejects_open_and_repeating_paths() {
        assert!(Cycle::new(vec![0, 1, 2]).is_err());
        assert!(Cycle::new(vec![0]).is_err());
        assert!(Cycle::new(vec![0, 1, 0, 1, 0]).is_err());
        assert!(Cycle::generalized(vec![0, 1, 0, 1, 0]).is_ok());
        assert_eq!(Cycle::new(vec![3, 3]).unwrap().len(), 1);
    }

    #[test]
    fn split_preserves_edge_multiset() {
        let g = Cycle::generalized(vec![0, 1, 0, 1, 2, 0, 1, 0]).unwrap();
        let parts = g.split_simple();
        assert!(parts.iter().all(|c| c.is_edge_self_avoiding()));
        let total: usize = parts.iter().map(Cycle::len).sum();
        assert_eq!(total, g.len());
        for (x, y) in g.edges() {
            let n: usize = parts.iter().map(|c| c.multiplicity(x, y)).sum();
            assert_eq!(n, g.multiplicity(x, y));
        }
    }

    #[test]
    fn complement_walks_the_rest_of_the_cycle() {
        let c = Cycle::new(vec![0, 1, 2, 0]).unwrap();
        assert_eq!(c.complement_of_edge(&2, &0), Some(vec![0, 1, 2]));
        assert_eq!(c.complement_of_edge(&0, &2), None);
    }

    #[test]
    fn nonpositive_weight_rejected() {
        let c = Cycle::new(vec![0, 1, 0]).unwrap();
        let err = CycleDecomposition::new(vec![(c, Rational::from_ratio(0, 1))]).unwrap_err();
        assert!(matches!(err, GraphError::NonPositiveCycleWeight { index: 0, .. }));
    }
}
