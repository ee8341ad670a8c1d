use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{Cycle, CycleDecomposition, GraphError, Kernel, Measure};
use crate::weight::Weight;

/// Outcome of checking `m(x)q(x,y) = Σ_i q_i N((x,y), γ_i)` on a window.
#[derive(Clone, Debug, PartialEq)]
pub struct CenteringReport<V, W> {
    pub valid: bool,
    /// `m(x)q(x,y) − Σ_i q_i N((x,y), γ_i)` on interior edges.
    pub residuals: BTreeMap<(V, V), W>,
    pub max_abs_residual: f64,
    /// Edges with an endpoint too close to the window boundary to be judged.
    pub boundary_edges_skipped: Vec<(V, V)>,
    /// Covered edges with `q(x, y) = 0` (anywhere in the window).
    pub unsupported_edges: Vec<(V, V)>,
    pub c0: usize,
}

/// Checks the cycle covering identity on every interior edge.
///
/// An edge is interior when both endpoints are window vertices at undirected
/// distance at least `C0` from the boundary. Closed windows (no boundary) have
/// every edge interior.
pub fn verify_centering<V, W>(
    kernel: &Kernel<V, W>,
    m: &Measure<V, W>,
    dec: &CycleDecomposition<V, W>,
    tol: f64,
) -> Result<CenteringReport<V, W>, GraphError>
where
    V: Ord + Clone + fmt::Debug,
    W: Weight,
{
    if !(tol > 0.0) {
        return Err(GraphError::InvalidTolerance(tol));
    }
    for (c, _) in dec.entries() {
        if let Some((x, y)) = c.edges().find(|(x, y)| !kernel.contains(x) || !kernel.contains(y)) {
            return Err(GraphError::CycleOutsideWindow { src: format!("{x:?}"), dst: format!("{y:?}") });
        }
    }
    let c0 = dec.c0();
    let interior = kernel.interior(c0);
    let coverage = dec.coverage();

    let mut edges: BTreeSet<(V, V)> = kernel.edges().map(|(x, y, _)| (x.clone(), y.clone())).collect();
    edges.extend(coverage.keys().cloned());

    let mut residuals = BTreeMap::new();
    let mut skipped = Vec::new();
    let mut unsupported = Vec::new();
    let mut max_abs = 0.0f64;
    for (x, y) in edges {
        let q = kernel.weight(&x, &y);
        let cov = coverage.get(&(x.clone(), y.clone())).cloned().unwrap_or_else(W::zero);
        if q.is_zero() && cov.is_positive() {
            unsupported.push((x.clone(), y.clone()));
        }
        if !(interior.contains(&x) && interior.contains(&y)) {
            skipped.push((x, y));
            continue;
        }
        let r = m.value(&x) * q - cov;
        max_abs = max_abs.max(r.abs().to_f64());
        residuals.insert((x, y), r);
    }
    let valid = max_abs <= tol && unsupported.is_empty();
    Ok(CenteringReport {
        valid,
        residuals,
        max_abs_residual: max_abs,
        boundary_edges_skipped: skipped,
        unsupported_edges: unsupported,
        c0,
    })
}

/// Two-cycles `(x, y, x)` with weight `m(x)q(x,y)` and loops `(x, x)` with
/// weight `m(x)q(x,x)`, for a kernel in detailed balance with `m`.
///
/// Pairs leaving the window are skipped. Fails on the worst detailed-balance
/// violation among window pairs.
pub fn reversible_decomposition<V, W>(
    kernel: &Kernel<V, W>,
    m: &Measure<V, W>,
    tol: f64,
) -> Result<CycleDecomposition<V, W>, GraphError>
where
    V: Ord + Clone + fmt::Debug,
    W: Weight,
{
    let mut entries = Vec::new();
    let mut worst: Option<(f64, V, V)> = None;
    for (x, row) in kernel.rows() {
        for (y, w) in row {
            if !kernel.contains(y) {
                continue;
            }
            if x == y {
                entries.push((Cycle::new(vec![x.clone(), x.clone()])?, m.value(x) * w.clone()));
                continue;
            }
            let forward = m.value(x) * w.clone();
            let backward = m.value(y) * kernel.weight(y, x);
            let gap = (forward.clone() - backward).abs();
            if !gap.is_negligible(tol) || gap.to_f64() > tol {
                if worst.as_ref().is_none_or(|(g, _, _)| gap.to_f64() > *g) {
                    worst = Some((gap.to_f64(), x.clone(), y.clone()));
                }
                continue;
            }
            if x < y {
                entries.push((Cycle::new(vec![x.clone(), y.clone(), x.clone()])?, forward));
            }
        }
    }
    if let Some((gap, x, y)) = worst {
        return Err(GraphError::NotReversible { src: format!("{x:?}"), dst: format!("{y:?}"), gap });
    }
    CycleDecomposition::new(entries)
}

/// Residuals of `Σ_x m(x)q(x,y) = m(y)` at non-boundary vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct InvarianceReport<V, W> {
    pub residuals: BTreeMap<V, W>,
    pub max_abs_residual: f64,
    pub boundary: Vec<V>,
}

pub fn invariance_check<V, W>(kernel: &Kernel<V, W>, m: &Measure<V, W>) -> InvarianceReport<V, W>
where
    V: Ord + Clone + fmt::Debug,
    W: Weight,
{
    let mut residuals = BTreeMap::new();
    let mut boundary = Vec::new();
    let mut max_abs = 0.0f64;
    for y in kernel.window() {
        if kernel.boundary().contains(y) {
            boundary.push(y.clone());
            continue;
        }
        let inflow = kernel
            .in_neighbors(y)
            .fold(W::zero(), |acc, x| acc + m.value(x) * kernel.weight(x, y));
        let r = inflow - m.value(y);
        max_abs = max_abs.max(r.abs().to_f64());
        residuals.insert(y.clone(), r);
    }
    InvarianceReport { residuals, max_abs_residual: max_abs, boundary }
}

/// Time reversal `q*(y, x) = m(x) q(x, y) / m(y)` on the window.
///
/// Requires `m` to be invariant (within `tol`) at every non-boundary vertex.
/// Rows of boundary vertices may be incomplete because their in-edges from
/// outside the window are unknown.
pub fn time_reversal<V, W>(kernel: &Kernel<V, W>, m: &Measure<V, W>, tol: f64) -> Result<Kernel<V, W>, GraphError>
where
    V: Ord + Clone + fmt::Debug,
    W: Weight,
{
    let inv = invariance_check(kernel, m);
    if let Some((v, r)) = inv
        .residuals
        .iter()
        .filter(|(_, r)| r.abs().to_f64() > tol)
        .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap_or(std::cmp::Ordering::Equal))
    {
        return Err(GraphError::NotInvariant { vertex: format!("{v:?}"), residual: r.to_f64() });
    }
    let mut b = Kernel::builder();
    b.killed(kernel.is_killed());
    for x in kernel.window() {
        b.vertex(x.clone());
    }
    for b_vertex in kernel.boundary() {
        b.flag_boundary(b_vertex.clone());
    }
    for (x, y, w) in kernel.edges() {
        if !kernel.contains(y) {
            continue;
        }
        let my = m.value(y);
        if my.is_zero() {
            return Err(GraphError::NonPositiveMeasure { vertex: format!("{y:?}") });
        }
        b.edge(y.clone(), x.clone(), m.value(x) * w.clone() / my);
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::weight::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn rotation_single_cycle_is_valid() {
        let k = fixtures::oriented_rotation(3);
        let dec = CycleDecomposition::new(vec![(Cycle::new(vec![0, 1, 2, 0]).unwrap(), r(1, 1))]).unwrap();
        let rep = verify_centering(&k, &Measure::counting(), &dec, 1e-12).unwrap();
        assert!(rep.valid);
        assert_eq!(rep.residuals.len(), 3);
        assert!(rep.residuals.values().all(|v| *v == r(0, 1)));
        assert!(rep.boundary_edges_skipped.is_empty());
    }

    #[test]
    fn half_weight_leaves_half_residual() {
        let k = fixtures::oriented_rotation(3);
        let dec = CycleDecomposition::new(vec![(Cycle::new(vec![0, 1, 2, 0]).unwrap(), r(1, 2))]).unwrap();
        let rep = verify_centering(&k, &Measure::counting(), &dec, 1e-12).unwrap();
        assert!(!rep.valid);
        assert!(rep.residuals.values().all(|v| *v == r(1, 2)));
        assert_eq!(rep.max_abs_residual, 0.5);
    }

    #[test]
    fn three_cycles_center_the_skewed_walk() {
        let k = fixtures::skewed_z_walk(-50..=50);
        let dec = fixtures::skewed_z_decomposition(-50..=48);
        let rep = verify_centering(&k, &Measure::counting(), &dec, 1e-12).unwrap();
        assert!(rep.valid, "{:?}", rep.max_abs_residual);
        assert_eq!(rep.max_abs_residual, 0.0);
        // (x, x+1) carries 2/3 from γ_{x-1} and γ_x; (x+2, x) carries 1/3.
        let cov = dec.coverage();
        assert_eq!(cov[&(0, 1)], r(2, 3));
        assert_eq!(cov[&(2, 0)], r(1, 3));
        assert!(!rep.boundary_edges_skipped.is_empty());
    }

    #[test]
    fn covered_non_edge_is_a_violation() {
        let k = fixtures::oriented_rotation(3);
        let dec = CycleDecomposition::new(vec![
            (Cycle::new(vec![0, 1, 2, 0]).unwrap(), r(1, 1)),
            (Cycle::new(vec![0, 2, 0]).unwrap(), r(1, 10)),
        ])
        .unwrap();
        let rep = verify_centering(&k, &Measure::counting(), &dec, 1e-12).unwrap();
        assert!(!rep.valid);
        assert!(rep.unsupported_edges.contains(&(0, 2)));
    }

    #[test]
    fn cycle_outside_window_is_structural() {
        let k = fixtures::oriented_rotation(3);
        let dec = CycleDecomposition::new(vec![(Cycle::new(vec![0, 7, 0]).unwrap(), r(1, 1))]).unwrap();
        assert!(matches!(
            verify_centering(&k, &Measure::counting(), &dec, 1e-12),
            Err(GraphError::CycleOutsideWindow { .. })
        ));
        assert!(matches!(
            verify_centering(&k, &Measure::counting(), &CycleDecomposition::empty(), 0.0),
            Err(GraphError::InvalidTolerance(_))
        ));
    }

    #[test]
    fn reversible_srw_gives_half_weight_two_cycles() {
        let k = fixtures::srw_z(-10..=10);
        let m = Measure::counting();
        let dec = reversible_decomposition(&k, &m, 1e-12).unwrap();
        assert!(dec.entries().iter().all(|(c, w)| c.len() == 2 && *w == r(1, 2)));
        assert_eq!(dec.len(), 20);
        assert!(verify_centering(&k, &m, &dec, 1e-12).unwrap().valid);
    }

    #[test]
    fn lazy_single_vertex_loop() {
        let mut b = Kernel::builder();
        b.edge(0i64, 0i64, r(1, 1));
        let k = b.build().unwrap();
        let m = Measure::from_values([(0, r(3, 1))].into_iter().collect()).unwrap();
        let dec = reversible_decomposition(&k, &m, 1e-12).unwrap();
        assert_eq!(dec.entries().len(), 1);
        assert_eq!(dec.entries()[0].0.len(), 1);
        assert_eq!(dec.entries()[0].1, r(3, 1));
    }

    #[test]
    fn skewed_walk_is_not_reversible() {
        let k = fixtures::skewed_z_walk(-10..=10);
        assert!(matches!(
            reversible_decomposition(&k, &Measure::counting(), 1e-12),
            Err(GraphError::NotReversible { .. })
        ));
    }

    #[test]
    fn counting_measure_invariant_for_skewed_walk() {
        let k = fixtures::skewed_z_walk(-20..=20);
        let rep = invariance_check(&k, &Measure::counting());
        assert!(rep.residuals.values().all(|v| *v == r(0, 1)));
        assert_eq!(rep.boundary, vec![-20, -19, 19, 20]);
    }

    #[test]
    fn exponential_measure_not_invariant_for_srw() {
        let k = fixtures::srw_z(-8..=8);
        let m = Measure::from_fn(k.window(), |x| Rational::from_integer(num_bigint::BigInt::from(2).pow((*x + 8) as u32)))
            .unwrap();
        let rep = invariance_check(&k, &m);
        assert!(rep.residuals.values().all(|v| *v != r(0, 1)));
    }

    #[test]
    fn reversal_of_rotation_is_transpose() {
        let k = fixtures::oriented_rotation(3);
        let ks = time_reversal(&k, &Measure::counting(), 1e-12).unwrap();
        assert_eq!(ks.weight(&1, &0), r(1, 1));
        assert_eq!(ks.weight(&0, &2), r(1, 1));
        assert_eq!(ks.weight(&0, &1), r(0, 1));
        assert_eq!(time_reversal(&ks, &Measure::counting(), 1e-12).unwrap(), k);
    }

    #[test]
    fn reversal_of_skewed_walk() {
        let k = fixtures::skewed_z_walk(-20..=20);
        let m = Measure::counting();
        let ks = time_reversal(&k, &m, 1e-12).unwrap();
        for x in -17..=17 {
            assert_eq!(ks.weight(&x, &(x - 1)), r(2, 3));
            assert_eq!(ks.weight(&x, &(x + 2)), r(1, 3));
        }
        let dec = fixtures::skewed_z_decomposition(-20..=18);
        assert!(verify_centering(&ks, &m, &dec.reversed(), 1e-12).unwrap().valid);
    }

    #[test]
    fn reversal_requires_invariance() {
        let k = fixtures::srw_z(-8..=8);
        let m = Measure::from_fn(k.window(), |x| r((*x + 20) * (*x + 20), 1)).unwrap();
        assert!(matches!(time_reversal(&k, &m, 1e-12), Err(GraphError::NotInvariant { .. })));
    }

    #[test]
    fn reversible_kernel_is_self_reverse() {
        let k = fixtures::srw_z(-8..=8);
        let ks = time_reversal(&k, &Measure::counting(), 1e-12).unwrap();
        for x in -7..=7 {
            assert_eq!(ks.row(&x), k.row(&x));
        }
    }
}
