use std::collections::{BTreeSet, HashMap};

use super::Group;
use crate::markov_graph::{GraphError, Kernel};
use crate::weight::{Rational, Weight};

/// `G ∪ G⁻¹` without the identity and without repeats, in first-seen order.
pub(crate) fn symmetric_generators<G: Group>(group: &G, gens: &[G::Elem]) -> Vec<G::Elem> {
    let mut out: Vec<G::Elem> = Vec::new();
    for g in gens {
        for h in [g.clone(), group.inverse(g)] {
            if !group.is_identity(&h) && !out.contains(&h) {
                out.push(h);
            }
        }
    }
    out
}

/// Ball of the word metric of `G ∪ G⁻¹` around the identity, by BFS layers.
#[derive(Clone, Debug)]
pub struct WordBall<G: Group> {
    layers: Vec<Vec<G::Elem>>,
    dist: HashMap<G::Elem, usize>,
}

impl<G: Group> WordBall<G> {
    pub fn new(group: &G, gens: &[G::Elem], radius: usize) -> Self {
        Self::grow(group, gens, radius, usize::MAX, |_| false).0
    }

    /// Like [`WordBall::new`], but `None` once the ball would exceed `max_size` elements.
    pub fn new_limited(group: &G, gens: &[G::Elem], radius: usize, max_size: usize) -> Option<Self> {
        let (ball, overflow) = Self::grow(group, gens, radius, max_size, |_| false);
        (!overflow).then_some(ball)
    }

    /// BFS that stops after the layer in which `stop` first returns true, or
    /// as soon as more than `max_size` elements are seen (flagged).
    fn grow(
        group: &G,
        gens: &[G::Elem],
        radius: usize,
        max_size: usize,
        stop: impl Fn(&G::Elem) -> bool,
    ) -> (Self, bool) {
        let s = symmetric_generators(group, gens);
        let id = group.identity();
        let found = stop(&id);
        let mut dist = HashMap::from([(id.clone(), 0)]);
        let mut layers = vec![vec![id]];
        if found {
            return (Self { layers, dist }, false);
        }
        for r in 1..=radius {
            let mut next = Vec::new();
            let mut hit = false;
            for x in &layers[r - 1] {
                for g in &s {
                    let y = group.multiply(x, g);
                    if !dist.contains_key(&y) {
                        hit |= stop(&y);
                        dist.insert(y.clone(), r);
                        next.push(y);
                        if dist.len() > max_size && !hit {
                            return (Self { layers, dist }, true);
                        }
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            next.sort();
            layers.push(next);
            if hit {
                break;
            }
        }
        (Self { layers, dist }, false)
    }

    pub fn radius(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn distance(&self, x: &G::Elem) -> Option<usize> {
        self.dist.get(x).copied()
    }

    /// Layer `r` (the sphere of radius `r`), sorted.
    pub fn layers(&self) -> &[Vec<G::Elem>] {
        &self.layers
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn elements(&self) -> impl Iterator<Item = &G::Elem> {
        self.layers.iter().flatten()
    }

    pub fn into_distances(self) -> HashMap<G::Elem, usize> {
        self.dist
    }
}

/// Word length `|x|` for `G ∪ G⁻¹`, or `None` when it exceeds `radius`.
pub fn word_distance<G: Group>(group: &G, gens: &[G::Elem], x: &G::Elem, radius: usize) -> Option<usize> {
    WordBall::grow(group, gens, radius, usize::MAX, |y| y == x).0.distance(x)
}

/// [`word_distance`] with the BFS capped at `max_size` elements; `Err(max_size)`
/// when the cap is hit before `x` is found.
pub fn word_distance_limited<G: Group>(
    group: &G,
    gens: &[G::Elem],
    x: &G::Elem,
    radius: usize,
    max_size: usize,
) -> Result<Option<usize>, usize> {
    let (ball, overflow) = WordBall::grow(group, gens, radius, max_size, |y| y == x);
    match ball.distance(x) {
        Some(d) => Ok(Some(d)),
        None if overflow => Err(max_size),
        None => Ok(None),
    }
}

/// `V(t) = #{x : |x| <= t}` for `t = 0..=t_max`.
pub fn volume_growth<G: Group>(group: &G, gens: &[G::Elem], t_max: usize) -> Vec<u64> {
    let ball = WordBall::new(group, gens, t_max);
    let mut out = Vec::with_capacity(t_max + 1);
    let mut acc = 0u64;
    for t in 0..=t_max {
        acc += ball.layers.get(t).map_or(0, |l| l.len() as u64);
        out.push(acc);
    }
    out
}

/// Finite window of the Cayley graph carrying the walk `q(x, x g_i) = 1/K`
/// (summed over repeated generators).
#[derive(Clone, Debug)]
pub struct CayleyWindow<G: Group> {
    pub group: G,
    pub gens: Vec<G::Elem>,
    pub vertices: BTreeSet<G::Elem>,
}

impl<G: Group> CayleyWindow<G> {
    /// Word-metric ball of `radius` for `G ∪ G⁻¹`.
    pub fn ball(group: G, gens: Vec<G::Elem>, radius: usize) -> Self {
        let vertices = WordBall::new(&group, &gens, radius).elements().cloned().collect();
        Self { group, gens, vertices }
    }

    pub fn from_vertices(group: G, gens: Vec<G::Elem>, vertices: impl IntoIterator<Item = G::Elem>) -> Self {
        Self { group, gens, vertices: vertices.into_iter().collect() }
    }

    pub fn contains(&self, x: &G::Elem) -> bool {
        self.vertices.contains(x)
    }

    /// The walk restricted to the window; vertices with a neighbour outside
    /// the window (either direction) are flagged boundary.
    pub fn kernel(&self) -> Result<Kernel<G::Elem, Rational>, GraphError> {
        let w = Rational::from_ratio(1, self.gens.len() as i64);
        let inv: Vec<G::Elem> = self.gens.iter().map(|g| self.group.inverse(g)).collect();
        Kernel::from_step_fn(
            self.vertices.iter().cloned(),
            |x| self.gens.iter().map(|g| (self.group.multiply(x, g), w.clone())).collect(),
            |x| inv.iter().map(|g| self.group.multiply(x, g)).collect(),
        )
    }
}
