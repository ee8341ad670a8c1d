use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use super::{Cycle, CycleDecomposition, GraphError, Kernel, Measure};
use crate::weight::Weight;

/// Result of peeling a circulation into cycles.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowDecomposition<V, W> {
    pub decomposition: CycleDecomposition<V, W>,
    /// Some extracted cycle is longer than the requested cap.
    pub exceeds_max_len: bool,
}

/// The edge flow `m(x) q(x, y)` restricted to edges inside the window.
pub fn kernel_flow<V, W>(kernel: &Kernel<V, W>, m: &Measure<V, W>) -> BTreeMap<(V, V), W>
where
    V: Ord + Clone + fmt::Debug,
    W: Weight,
{
    kernel
        .edges()
        .filter(|(_, y, _)| kernel.contains(y))
        .map(|(x, y, w)| ((x.clone(), y.clone()), m.value(x) * w.clone()))
        .collect()
}

/// Greedy shortest-cycle extraction.
///
/// Repeatedly takes the heaviest remaining edge `(u, v)` (ties broken by the
/// smallest edge), closes it with a BFS shortest path `v → u` over the
/// remaining support, and subtracts the bottleneck weight along the cycle.
/// Every peel removes at least one edge, so the loop terminates; with exact
/// weights the coverage reproduces the input flow exactly.
pub fn circulation_to_cycles<V, W>(
    flow: &BTreeMap<(V, V), W>,
    max_len: usize,
    tol: f64,
) -> Result<FlowDecomposition<V, W>, GraphError>
where
    V: Ord + Clone + fmt::Debug,
    W: Weight,
{
    check_circulation(flow, tol)?;
    let mut remaining: BTreeMap<(V, V), W> = flow
        .iter()
        .filter(|(_, w)| w.is_positive_weight(tol))
        .map(|(e, w)| (e.clone(), w.clone()))
        .collect();
    if let Some((e, _)) = flow.iter().find(|(_, w)| w.is_negative()) {
        return Err(GraphError::NegativeWeight { src: format!("{:?}", e.0), dst: format!("{:?}", e.1) });
    }
    let mut entries = Vec::new();
    let mut exceeds = false;
    while let Some(((u, v), _)) = heaviest(&remaining) {
        let path = if u == v {
            vec![u.clone(), u.clone()]
        } else {
            match shortest_path(&remaining, &v, &u) {
                Some(p) => {
                    let mut cyc = Vec::with_capacity(p.len() + 1);
                    cyc.push(u.clone());
                    cyc.extend(p);
                    cyc
                }
                None if !W::EXACT => {
                    // Float leftovers that no longer close up.
                    remaining.remove(&(u, v));
                    continue;
                }
                None => {
                    return Err(GraphError::NotCirculation { vertex: format!("{v:?}"), divergence: 0.0 });
                }
            }
        };
        let cycle = Cycle::new(path)?;
        let bottleneck = cycle
            .edges()
            .map(|(a, b)| remaining[&(a.clone(), b.clone())].clone())
            .fold(None::<W>, |acc, w| Some(acc.map_or(w.clone(), |a| if w < a { w } else { a })))
            .expect("cycle has an edge");
        for (a, b) in cycle.edges() {
            let key = (a.clone(), b.clone());
            let left = remaining[&key].clone() - bottleneck.clone();
            if left.is_positive_weight(tol) {
                remaining.insert(key, left);
            } else {
                remaining.remove(&key);
            }
        }
        exceeds |= cycle.len() > max_len;
        entries.push((cycle, bottleneck));
    }
    Ok(FlowDecomposition { decomposition: CycleDecomposition::new(entries)?, exceeds_max_len: exceeds })
}

fn check_circulation<V, W>(flow: &BTreeMap<(V, V), W>, tol: f64) -> Result<(), GraphError>
where
    V: Ord + Clone + fmt::Debug,
    W: Weight,
{
    let mut div: BTreeMap<&V, W> = BTreeMap::new();
    for ((x, y), w) in flow {
        let out = div.entry(x).or_insert_with(W::zero);
        *out = out.clone() + w.clone();
        let inn = div.entry(y).or_insert_with(W::zero);
        *inn = inn.clone() - w.clone();
    }
    let worst = div
        .iter()
        .filter(|(_, d)| !d.is_negligible(tol))
        .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap_or(std::cmp::Ordering::Equal));
    match worst {
        Some((v, d)) => Err(GraphError::NotCirculation { vertex: format!("{v:?}"), divergence: d.to_f64() }),
        None => Ok(()),
    }
}

fn heaviest<V: Ord + Clone, W: Weight>(remaining: &BTreeMap<(V, V), W>) -> Option<((V, V), W)> {
    let mut best: Option<(&(V, V), &W)> = None;
    for (e, w) in remaining {
        if best.is_none_or(|(_, bw)| w > bw) {
            best = Some((e, w));
        }
    }
    best.map(|(e, w)| (e.clone(), w.clone()))
}

/// BFS path `from → to` (inclusive) over edges of the remaining flow, visiting
/// successors in label order.
fn shortest_path<V: Ord + Clone, W>(remaining: &BTreeMap<(V, V), W>, from: &V, to: &V) -> Option<Vec<V>> {
    let mut succ: BTreeMap<&V, Vec<&V>> = BTreeMap::new();
    for (a, b) in remaining.keys() {
        succ.entry(a).or_default().push(b);
    }
    let mut parent: BTreeMap<&V, &V> = BTreeMap::new();
    let mut seen: BTreeSet<&V> = BTreeSet::from([from]);
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        if x == to {
            let mut path = vec![to.clone()];
            let mut cur = to;
            while cur != from {
                cur = parent[cur];
                path.push(cur.clone());
            }
            path.reverse();
            return Some(path);
        }
        for &y in succ.get(x).into_iter().flatten() {
            if seen.insert(y) {
                parent.insert(y, x);
                queue.push_back(y);
            }
        }
    }
    None
}
