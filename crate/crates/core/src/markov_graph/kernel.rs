use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use super::GraphError;
use crate::weight::Weight;

/// Row-stochastic transition weights materialized on a finite window.
///
/// Rows exist exactly for the window vertices. Targets may fall outside the
/// window; such vertices are never expanded. A window vertex is on the
/// *boundary* when part of its neighbourhood (in or out) is not materialized.
/// Out-edges leaving the window are detected automatically; builders that know
/// the ambient graph (Cayley windows, translation-invariant fixtures) also flag
/// vertices with in-neighbours outside the window.
#[derive(Clone, Debug, PartialEq)]
pub struct Kernel<V, W> {
    rows: BTreeMap<V, Vec<(V, W)>>,
    incoming: BTreeMap<V, BTreeSet<V>>,
    boundary: BTreeSet<V>,
    killed: bool,
}

/// Incremental constructor for [`Kernel`].
#[derive(Clone, Debug)]
pub struct KernelBuilder<V, W> {
    rows: BTreeMap<V, BTreeMap<V, W>>,
    boundary: BTreeSet<V>,
    killed: bool,
    tol: f64,
}

pub const ROW_SUM_TOL: f64 = 1e-12;

impl<V: Ord + Clone + fmt::Debug, W: Weight> Default for KernelBuilder<V, W> {
    fn default() -> Self {
        Self::new()
    }
}

impl<V: Ord + Clone + fmt::Debug, W: Weight> KernelBuilder<V, W> {
    pub fn new() -> Self {
        Self { rows: BTreeMap::new(), boundary: BTreeSet::new(), killed: false, tol: ROW_SUM_TOL }
    }

    /// Declares a window vertex with no out-edges yet.
    pub fn vertex(&mut self, x: V) -> &mut Self {
        self.rows.entry(x).or_default();
        self
    }

    /// Adds `w` to the weight of `(x, y)`; repeated edges accumulate.
    pub fn edge(&mut self, x: V, y: V, w: W) -> &mut Self {
        let row = self.rows.entry(x).or_default();
        let slot = row.entry(y).or_insert_with(W::zero);
        *slot = slot.clone() + w;
        self
    }

    pub fn flag_boundary(&mut self, x: V) -> &mut Self {
        self.boundary.insert(x);
        self
    }

    /// Allows rows summing to less than one (killed / absorbing chains).
    pub fn killed(&mut self, killed: bool) -> &mut Self {
        self.killed = killed;
        self
    }

    pub fn build(&self) -> Result<Kernel<V, W>, GraphError> {
        let mut rows = BTreeMap::new();
        let mut incoming: BTreeMap<V, BTreeSet<V>> = BTreeMap::new();
        let mut boundary: BTreeSet<V> =
            self.boundary.iter().filter(|v| self.rows.contains_key(*v)).cloned().collect();
        for (x, row) in &self.rows {
            let mut out = Vec::with_capacity(row.len());
            let mut sum = W::zero();
            for (y, w) in row {
                if w.is_negative() {
                    return Err(GraphError::NegativeWeight { src: format!("{x:?}"), dst: format!("{y:?}") });
                }
                if w.is_zero() {
                    continue;
                }
                sum = sum + w.clone();
                if !self.rows.contains_key(y) {
                    boundary.insert(x.clone());
                }
                incoming.entry(y.clone()).or_default().insert(x.clone());
                out.push((y.clone(), w.clone()));
            }
            rows.insert(x.clone(), (out, sum));
        }
        let mut final_rows = BTreeMap::new();
        for (x, (out, sum)) in rows {
            let excess = (sum.clone() - W::one()).to_f64();
            let on_boundary = boundary.contains(&x);
            let ok = if self.killed || on_boundary {
                excess <= self.tol
            } else {
                excess.abs() <= self.tol
            };
            if !ok {
                return Err(GraphError::RowSum { vertex: format!("{x:?}"), sum: sum.to_f64() });
            }
            final_rows.insert(x, out);
        }
        Ok(Kernel { rows: final_rows, incoming, boundary, killed: self.killed })
    }
}

impl<V: Ord + Clone + fmt::Debug, W: Weight> Kernel<V, W> {
    pub fn builder() -> KernelBuilder<V, W> {
        KernelBuilder::new()
    }

    /// Kernel on `window` with rows produced by `step`; vertices with a neighbour
    /// (via `step` or `predecessors`) outside the window are flagged boundary.
    pub fn from_step_fn<I, S, P>(window: I, step: S, predecessors: P) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = V>,
        S: Fn(&V) -> Vec<(V, W)>,
        P: Fn(&V) -> Vec<V>,
    {
        let window: BTreeSet<V> = window.into_iter().collect();
        let mut b = KernelBuilder::new();
        for x in &window {
            b.vertex(x.clone());
            for (y, w) in step(x) {
                b.edge(x.clone(), y, w);
            }
            if predecessors(x).iter().any(|p| !window.contains(p)) {
                b.flag_boundary(x.clone());
            }
        }
        b.build()
    }

    pub fn window(&self) -> impl Iterator<Item = &V> {
        self.rows.keys()
    }

    pub fn window_len(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, x: &V) -> bool {
        self.rows.contains_key(x)
    }

    pub fn is_killed(&self) -> bool {
        self.killed
    }

    pub fn row(&self, x: &V) -> &[(V, W)] {
        self.rows.get(x).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn rows(&self) -> impl Iterator<Item = (&V, &[(V, W)])> {
        self.rows.iter().map(|(x, r)| (x, r.as_slice()))
    }

    /// `q(x, y)`, zero when the edge is absent or `x` is outside the window.
    pub fn weight(&self, x: &V, y: &V) -> W {
        self.row(x)
            .iter()
            .find(|(t, _)| t == y)
            .map(|(_, w)| w.clone())
            .unwrap_or_else(W::zero)
    }

    pub fn row_sum(&self, x: &V) -> W {
        self.row(x).iter().fold(W::zero(), |acc, (_, w)| acc + w.clone())
    }

    /// Sources of materialized edges into `y`.
    pub fn in_neighbors(&self, y: &V) -> impl Iterator<Item = &V> {
        self.incoming.get(y).into_iter().flatten()
    }

    /// Neighbours in the undirected support `q(x,y) + q(y,x) > 0`, sorted.
    pub fn undirected_neighbors(&self, x: &V) -> BTreeSet<V> {
        let mut out: BTreeSet<V> = self.row(x).iter().map(|(y, _)| y.clone()).collect();
        out.extend(self.in_neighbors(x).cloned());
        out.remove(x);
        out
    }

    pub fn boundary(&self) -> &BTreeSet<V> {
        &self.boundary
    }

    /// Undirected distance from each window vertex to the boundary set
    /// (`None` in the map when the boundary is empty or unreachable).
    pub fn boundary_distances(&self) -> BTreeMap<V, usize> {
        let mut dist = BTreeMap::new();
        let mut queue = VecDeque::new();
        for b in &self.boundary {
            dist.insert(b.clone(), 0usize);
            queue.push_back(b.clone());
        }
        while let Some(v) = queue.pop_front() {
            let d = dist[&v];
            for n in self.undirected_neighbors(&v) {
                if self.contains(&n) && !dist.contains_key(&n) {
                    dist.insert(n.clone(), d + 1);
                    queue.push_back(n);
                }
            }
        }
        dist
    }

    /// Window vertices at undirected distance `>= margin` from the boundary.
    pub fn interior(&self, margin: usize) -> BTreeSet<V> {
        let dist = self.boundary_distances();
        self.rows
            .keys()
            .filter(|v| dist.get(*v).is_none_or(|d| *d >= margin))
            .cloned()
            .collect()
    }

    /// Every positive-weight edge `(x, y, q(x, y))` of the window rows.
    pub fn edges(&self) -> impl Iterator<Item = (&V, &V, &W)> {
        self.rows.iter().flat_map(|(x, r)| r.iter().map(move |(y, w)| (x, y, w)))
    }
}

/// Positive reference measure `m` on the vertex set.
#[derive(Clone, Debug, PartialEq)]
pub struct Measure<V, W> {
    values: BTreeMap<V, W>,
    default: Option<W>,
}

impl<V: Ord + Clone + fmt::Debug, W: Weight> Measure<V, W> {
    /// Counting measure, `m ≡ 1`.
    pub fn counting() -> Self {
        Self { values: BTreeMap::new(), default: Some(W::one()) }
    }

    /// Explicit values with no default: vertices outside the map have no mass.
    pub fn from_values(values: BTreeMap<V, W>) -> Result<Self, GraphError> {
        if let Some((v, _)) = values.iter().find(|(_, w)| !w.is_positive()) {
            return Err(GraphError::NonPositiveMeasure { vertex: format!("{v:?}") });
        }
        Ok(Self { values, default: None })
    }

    pub fn from_fn<'a, I>(vertices: I, f: impl Fn(&V) -> W) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = &'a V>,
        V: 'a,
    {
        Self::from_values(vertices.into_iter().map(|v| (v.clone(), f(v))).collect())
    }

    pub fn get(&self, x: &V) -> Option<W> {
        self.values.get(x).cloned().or_else(|| self.default.clone())
    }

    /// `m(x)`, or zero when the measure is undefined at `x`.
    pub fn value(&self, x: &V) -> W {
        self.get(x).unwrap_or_else(W::zero)
    }

    pub fn is_counting(&self) -> bool {
        self.values.is_empty() && self.default.as_ref().is_some_and(|d| d.is_one())
    }
}
