use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use super::{CycleDecomposition, GraphError, Kernel};
use crate::weight::Weight;

/// Undirected BFS distance on the support `q(x,y) + q(y,x) > 0`, or `None`
/// when `y` is farther than `radius`.
pub fn graph_distance<V, W>(kernel: &Kernel<V, W>, x: &V, y: &V, radius: usize) -> Option<usize>
where
    V: Ord + Clone + fmt::Debug,
    W: Weight,
{
    undirected_path(kernel, x, y, radius).map(|p| p.len() - 1)
}

/// Geodesic `x = p_0, ..., p_d = y`; neighbours are visited in label order.
fn undirected_path<V, W>(kernel: &Kernel<V, W>, x: &V, y: &V, radius: usize) -> Option<Vec<V>>
where
    V: Ord + Clone + fmt::Debug,
    W: Weight,
{
    let mut parent: BTreeMap<V, Option<V>> = BTreeMap::from([(x.clone(), None)]);
    let mut queue = VecDeque::from([(x.clone(), 0usize)]);
    while let Some((v, d)) = queue.pop_front() {
        if &v == y {
            let mut path = vec![v.clone()];
            let mut cur = v;
            while let Some(Some(p)) = parent.get(&cur) {
                path.push(p.clone());
                cur = p.clone();
            }
            path.reverse();
            return Some(path);
        }
        if d == radius {
            continue;
        }
        for n in kernel.undirected_neighbors(&v) {
            if !parent.contains_key(&n) {
                parent.insert(n.clone(), Some(v.clone()));
                queue.push_back((n, d + 1));
            }
        }
    }
    None
}

/// Directed path from `x` to `y` with positive kernel weights.
///
/// Follows an undirected geodesic; every step `u → v` that only exists as the
/// kernel edge `v → u` is replaced by the rest of a cycle covering `(v, u)`,
/// so the result has at most `C0 · d(x, y)` steps.
pub fn directed_detour<V, W>(
    kernel: &Kernel<V, W>,
    dec: &CycleDecomposition<V, W>,
    x: &V,
    y: &V,
    radius: usize,
) -> Result<Vec<V>, GraphError>
where
    V: Ord + Clone + fmt::Debug,
    W: Weight,
{
    let geodesic = undirected_path(kernel, x, y, radius).ok_or_else(|| GraphError::Unreachable {
        src: format!("{x:?}"),
        dst: format!("{y:?}"),
        radius,
    })?;
    let mut out = vec![x.clone()];
    for step in geodesic.windows(2) {
        let (u, v) = (&step[0], &step[1]);
        if !kernel.weight(u, v).is_zero() {
            out.push(v.clone());
            continue;
        }
        let detour = dec
            .entries()
            .iter()
            .find_map(|(c, _)| c.complement_of_edge(v, u))
            .ok_or_else(|| GraphError::MissingCoveringCycle { src: format!("{u:?}"), dst: format!("{v:?}") })?;
        for w in detour.windows(2) {
            if kernel.weight(&w[0], &w[1]).is_zero() {
                return Err(GraphError::MissingCoveringCycle { src: format!("{u:?}"), dst: format!("{v:?}") });
            }
        }
        out.extend(detour.into_iter().skip(1));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::markov_graph::reversible_decomposition;
    use crate::markov_graph::Measure;

    use num_traits::Zero;

    fn is_directed_path(k: &Kernel<i64, crate::weight::Rational>, p: &[i64]) -> bool {
        p.windows(2).all(|w| !k.weight(&w[0], &w[1]).is_zero())
    }

    #[test]
    fn distances_on_z() {
        let srw = fixtures::srw_z(-20..=20);
        assert_eq!(graph_distance(&srw, &0, &5, 10), Some(5));
        assert_eq!(graph_distance(&srw, &0, &5, 4), None);
        assert_eq!(graph_distance(&srw, &3, &3, 0), Some(0));
        let skew = fixtures::skewed_z_walk(-20..=20);
        // -1 -> 0 is a +1 step, so -1 is a neighbour of 0.
        assert_eq!(graph_distance(&skew, &0, &-1, 10), Some(1));
        assert_eq!(graph_distance(&skew, &0, &-2, 10), Some(1));
        assert_eq!(graph_distance(&skew, &0, &3, 10), Some(2));
        assert_eq!(graph_distance(&skew, &0, &-3, 10), Some(2));
    }

    #[test]
    fn rotation_detour_goes_forward() {
        let k = fixtures::oriented_rotation(3);
        let dec = fixtures::rotation_decomposition(3);
        assert_eq!(graph_distance(&k, &0, &2, 3), Some(1));
        let p = directed_detour(&k, &dec, &0, &2, 3).unwrap();
        assert_eq!(p, vec![0, 1, 2]);
    }

    #[test]
    fn reversible_detour_is_the_geodesic() {
        let k = fixtures::srw_z(-10..=10);
        let dec = reversible_decomposition(&k, &Measure::counting(), 1e-12).unwrap();
        let p = directed_detour(&k, &dec, &-3, &4, 10).unwrap();
        assert_eq!(p, (-3..=4).collect::<Vec<_>>());
    }

    #[test]
    fn skewed_detours_respect_the_length_bound() {
        let k = fixtures::skewed_z_walk(-30..=30);
        let dec = fixtures::skewed_z_decomposition(-30..=28);
        for y in -8..=8 {
            let d = graph_distance(&k, &0, &y, 20).unwrap();
            let p = directed_detour(&k, &dec, &0, &y, 20).unwrap();
            assert_eq!((p[0], *p.last().unwrap()), (0, y));
            assert!(is_directed_path(&k, &p));
            assert!(p.len() - 1 <= dec.c0() * d, "y={y} K={} d={d}", p.len() - 1);
        }
    }

    #[test]
    fn missing_cover_is_an_error() {
        let k = fixtures::oriented_rotation(3);
        let dec = CycleDecomposition::empty();
        assert!(matches!(directed_detour(&k, &dec, &0, &2, 3), Err(GraphError::MissingCoveringCycle { .. })));
    }
}
