use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use nalgebra::{DMatrix, DVector, LU};
use serde::{Deserialize, Serialize};

use super::FormError;
use crate::markov_graph::{Kernel, KernelBuilder, Measure};
use crate::weight::Weight;

/// Window vertices indexed densely; edges leaving the window are dropped,
/// i.e. the chain is killed when it exits.
struct Indexed<V> {
    index: BTreeMap<V, usize>,
    labels: Vec<V>,
    rows: Vec<Vec<(usize, f64)>>,
}

impl<V: Ord + Clone + fmt::Debug> Indexed<V> {
    fn new<W: Weight>(kernel: &Kernel<V, W>) -> Self {
        let labels: Vec<V> = kernel.window().cloned().collect();
        let index: BTreeMap<V, usize> = labels.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let rows = labels
            .iter()
            .map(|x| kernel.row(x).iter().filter_map(|(y, w)| index.get(y).map(|&j| (j, w.to_f64()))).collect())
            .collect();
        Self { index, labels, rows }
    }

    fn position(&self, x: &V) -> Result<usize, FormError> {
        self.index.get(x).copied().ok_or_else(|| FormError::Invalid(format!("{x:?} is not in the window")))
    }
}

/// `Σ_{t=0}^{T} P[X_t = y | X_0 = x]` by repeated propagation; mass leaving the
/// window is lost.
pub fn green_partial<V, W>(kernel: &Kernel<V, W>, x: &V, y: &V, t_max: usize) -> Result<f64, FormError>
where
    V: Ord + Clone + fmt::Debug,
    W: Weight,
{
    let chain = Indexed::new(kernel);
    let start = chain.position(x)?;
    let target = chain.index.get(y).copied();
    let mut p = vec![0.0; chain.labels.len()];
    p[start] = 1.0;
    let mut total = if target == Some(start) { 1.0 } else { 0.0 };
    let mut next = vec![0.0; p.len()];
    for _ in 0..t_max {
        next.iter_mut().for_each(|v| *v = 0.0);
        for (i, &pi) in p.iter().enumerate() {
            if pi != 0.0 {
                for &(j, w) in &chain.rows[i] {
                    next[j] += pi * w;
                }
            }
        }
        std::mem::swap(&mut p, &mut next);
        if let Some(j) = target {
            total += p[j];
        }
    }
    Ok(total)
}

/// LU factorization of `(I − Q_B)ᵀ` for a chain killed on exit from its window.
pub struct GreenSolver<V> {
    chain: Indexed<V>,
    lu: LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
}

impl<V: Ord + Clone + fmt::Debug> GreenSolver<V> {
    /// Fails when some state cannot reach a killing state: `I − Q_B` is then singular.
    pub fn new<W: Weight>(kernel: &Kernel<V, W>) -> Result<Self, FormError> {
        let chain = Indexed::new(kernel);
        let n = chain.labels.len();
        let mut reached = vec![false; n];
        let mut queue = VecDeque::new();
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, row) in chain.rows.iter().enumerate() {
            let sum: f64 = row.iter().map(|(_, w)| w).sum();
            if sum < 1.0 - 1e-12 {
                reached[i] = true;
                queue.push_back(i);
            }
            for &(j, w) in row {
                if w > 0.0 {
                    preds[j].push(i);
                }
            }
        }
        while let Some(j) = queue.pop_front() {
            for &i in &preds[j] {
                if !reached[i] {
                    reached[i] = true;
                    queue.push_back(i);
                }
            }
        }
        if let Some(i) = reached.iter().position(|r| !r) {
            return Err(FormError::NoKilling(format!("{:?}", chain.labels[i])));
        }
        // Row x of (I − Q)^{-1} solves (I − Q)ᵀ u = δ_x.
        let mut mt = DMatrix::<f64>::identity(n, n);
        for (i, row) in chain.rows.iter().enumerate() {
            for &(j, w) in row {
                mt[(j, i)] -= w;
            }
        }
        Ok(Self { chain, lu: mt.lu() })
    }

    /// `g(x, ·)` on the window.
    pub fn row(&self, x: &V) -> Result<Vec<f64>, FormError> {
        let i = self.chain.position(x)?;
        let mut e = DVector::<f64>::zeros(self.chain.labels.len());
        e[i] = 1.0;
        let u = self.lu.solve(&e).ok_or(FormError::Singular)?;
        if u.iter().any(|v| !v.is_finite()) {
            return Err(FormError::Singular);
        }
        Ok(u.iter().copied().collect())
    }

    pub fn diagonal(&self, x: &V) -> Result<f64, FormError> {
        let i = self.chain.position(x)?;
        Ok(self.row(x)?[i])
    }

    pub fn labels(&self) -> &[V] {
        &self.chain.labels
    }
}

/// Green kernel `g(x, ·)` of the chain killed on leaving the window (and by
/// any row deficit), from one dense LU solve.
pub fn green_absorbing<V, W>(kernel: &Kernel<V, W>, x: &V) -> Result<BTreeMap<V, f64>, FormError>
where
    V: Ord + Clone + fmt::Debug,
    W: Weight,
{
    let solver = GreenSolver::new(kernel)?;
    let row = solver.row(x)?;
    Ok(solver.labels().iter().cloned().zip(row).filter(|(_, v)| *v != 0.0).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GreenMode {
    PartialSum { t: usize },
    AbsorbingBall,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GreenReport<V> {
    pub points: Vec<V>,
    pub g_diag: Vec<f64>,
    pub g0_diag: Vec<f64>,
    pub sector_m: f64,
    pub mode: GreenMode,
    /// Interior points are at undirected distance >= `margin` from the boundary.
    pub margin: usize,
    /// `g(x,x) <= g0(x,x)` at every point.
    pub holds_i: bool,
    /// `g0(x,x) <= M̂² g(x,x)` at every point.
    pub holds_ii: bool,
    /// max of `g − g0` (nonpositive when (i) holds).
    pub worst_i: f64,
    /// max of `g0 − M̂² g` (nonpositive when (ii) holds).
    pub worst_ii: f64,
}

/// `(Q + Q*)/2` on the window, `q*(x, y) = m(y) q(y, x) / m(x)`.
pub(crate) fn symmetrized_kernel<V, W>(kernel: &Kernel<V, W>, m: &Measure<V, W>) -> Result<Kernel<V, f64>, FormError>
where
    V: Ord + Clone + fmt::Debug,
    W: Weight,
{
    let mut b = KernelBuilder::<V, f64>::new();
    b.killed(true);
    for x in kernel.window() {
        b.vertex(x.clone());
    }
    for v in kernel.boundary() {
        b.flag_boundary(v.clone());
    }
    for (x, y, w) in kernel.edges() {
        if !kernel.contains(y) {
            continue;
        }
        let w = w.to_f64();
        let (mx, my) = (m.value(x).to_f64(), m.value(y).to_f64());
        if mx <= 0.0 || my <= 0.0 {
            return Err(FormError::Invalid(format!("measure vanishes near {x:?}")));
        }
        b.edge(x.clone(), y.clone(), 0.5 * w);
        b.edge(y.clone(), x.clone(), 0.5 * mx * w / my);
    }
    Ok(b.build()?)
}

/// Compares the diagonal Green kernels of `Q` and `Q0 = (Q + Q*)/2`, both
/// killed on leaving the window, at the points at distance `>= margin` from
/// the window boundary.
pub fn green_comparison<V, W>(
    kernel: &Kernel<V, W>,
    m: &Measure<V, W>,
    margin: usize,
    sector_m: f64,
) -> Result<GreenReport<V>, FormError>
where
    V: Ord + Clone + fmt::Debug,
    W: Weight,
{
    let q0 = symmetrized_kernel(kernel, m)?;
    let solver = GreenSolver::new(kernel)?;
    let solver0 = GreenSolver::new(&q0)?;
    let points: Vec<V> = kernel.interior(margin).into_iter().collect();
    if points.is_empty() {
        return Err(FormError::Invalid(format!("no point at distance >= {margin} from the boundary")));
    }
    let mut g_diag = Vec::with_capacity(points.len());
    let mut g0_diag = Vec::with_capacity(points.len());
    for x in &points {
        g_diag.push(solver.diagonal(x)?);
        g0_diag.push(solver0.diagonal(x)?);
    }
    let m2 = sector_m * sector_m;
    let worst_i = g_diag.iter().zip(&g0_diag).map(|(g, g0)| g - g0).fold(f64::NEG_INFINITY, f64::max);
    let worst_ii = g_diag.iter().zip(&g0_diag).map(|(g, g0)| g0 - m2 * g).fold(f64::NEG_INFINITY, f64::max);
    // Relative slack for rounding in the two solves.
    let slack = 1e-10 * g0_diag.iter().fold(1.0f64, |a, v| a.max(*v));
    Ok(GreenReport {
        points,
        g_diag,
        g0_diag,
        sector_m,
        mode: GreenMode::AbsorbingBall,
        margin,
        holds_i: worst_i <= slack,
        holds_ii: worst_ii <= slack,
        worst_i,
        worst_ii,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::weight::Rational;

    #[test]
    fn single_exit_vertex() {
        let mut b = KernelBuilder::<i64, Rational>::new();
        b.edge(0, 1, Rational::from_ratio(1, 1));
        let k = b.build().unwrap();
        assert!(k.boundary().contains(&0));
        let g = green_absorbing(&k, &0).unwrap();
        assert_eq!(g[&0], 1.0);
        assert_eq!(green_partial(&k, &0, &0, 0).unwrap(), 1.0);
    }

    #[test]
    fn killed_srw_matches_series() {
        let k = fixtures::srw_z(-3..=3);
        let g = green_absorbing(&k, &0).unwrap();
        // Killed outside [-3, 3]: g(0, 0) = 4 (gambler's ruin on 8 sites).
        assert!((g[&0] - 4.0).abs() < 1e-12);
        let s = green_partial(&k, &0, &0, 10_000).unwrap();
        assert!((s - g[&0]).abs() < 1e-9);
    }

    #[test]
    fn closed_chain_is_singular() {
        let k = fixtures::oriented_rotation(3);
        assert!(matches!(GreenSolver::new(&k), Err(FormError::NoKilling(_))));
    }

    #[test]
    fn tree_return_gives_three_halves() {
        let k = fixtures::tree_radial(200);
        let g = green_absorbing(&k, &0).unwrap();
        assert!((g[&0] - 1.5).abs() < 1e-9);
        let mut last = 0.0;
        for t in [0, 10, 50, 200, 1000] {
            let s = green_partial(&k, &0, &0, t).unwrap();
            assert!(s >= last);
            last = s;
        }
        assert!((last - 1.5).abs() < 1e-6);
    }

    #[test]
    fn reversible_kernel_has_equal_green() {
        let k = fixtures::srw_z(-6..=6);
        let rep = green_comparison(&k, &Measure::counting(), 2, 1.0).unwrap();
        for (g, g0) in rep.g_diag.iter().zip(&rep.g0_diag) {
            assert!((g - g0).abs() < 1e-12);
        }
        assert!(rep.holds_i && rep.holds_ii);
    }

    #[test]
    fn killed_rotation_comparison() {
        let k = fixtures::rotation_with_killing(3, Rational::from_ratio(1, 10));
        let rep = green_comparison(&k, &Measure::counting(), 3, (4.0f64 / 3.0).sqrt()).unwrap();
        assert_eq!(rep.points, vec![0, 1, 2]);
        let expected = 1.0 / (1.0 - 0.9f64.powi(3));
        assert!((rep.g_diag[0] - expected).abs() < 1e-12);
        assert!(rep.holds_i, "{rep:?}");
        assert!(rep.g_diag.iter().all(|g| *g >= 1.0));
    }
}
