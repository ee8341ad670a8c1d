use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::FormError;
use crate::markov_graph::{verify_centering, CycleDecomposition, Kernel, Measure};
use crate::weight::Weight;

/// Finitely supported real function; absent keys are zero.
pub type TestFunction<V> = BTreeMap<V, f64>;

fn at<V: Ord>(f: &TestFunction<V>, x: &V) -> f64 {
    f.get(x).copied().unwrap_or(0.0)
}

/// Supports must avoid boundary vertices, so every in- and out-edge of a
/// support point is materialized.
fn check_support<V, W>(kernel: &Kernel<V, W>, fs: &[&TestFunction<V>]) -> Result<(), FormError>
where
    V: Ord + Clone + fmt::Debug,
    W: Weight,
{
    for f in fs {
        for x in f.keys() {
            if !kernel.contains(x) {
                return Err(FormError::SupportOutsideWindow(format!("{x:?}")));
            }
            if kernel.boundary().contains(x) {
                return Err(FormError::SupportOnBoundary(format!("{x:?}")));
            }
        }
    }
    Ok(())
}

/// `E(f, g) = m(g · (I − Q) f) = Σ_x m(x) g(x) (f(x) − Σ_y q(x, y) f(y))`.
pub fn dirichlet_form<V, W>(
    kernel: &Kernel<V, W>,
    m: &Measure<V, W>,
    f: &TestFunction<V>,
    g: &TestFunction<V>,
) -> Result<f64, FormError>
where
    V: Ord + Clone + fmt::Debug,
    W: Weight,
{
    check_support(kernel, &[f, g])?;
    Ok(raw_form(kernel, m, f, g))
}

pub(crate) fn raw_form<V, W>(kernel: &Kernel<V, W>, m: &Measure<V, W>, f: &TestFunction<V>, g: &TestFunction<V>) -> f64
where
    V: Ord + Clone + fmt::Debug,
    W: Weight,
{
    let mut total = 0.0;
    for (x, gx) in g {
        let qf: f64 = kernel.row(x).iter().map(|(y, w)| w.to_f64() * at(f, y)).sum();
        total += m.value(x).to_f64() * gx * (at(f, x) - qf);
    }
    total
}

/// `E0(f, g) = ½ Σ_{x,y} p0(x, y)(f(x) − f(y))(g(x) − g(y))` with
/// `p0(x, y) = ½(m(x)q(x, y) + m(y)q(y, x))`, summed once per unordered pair.
pub fn symmetrized_form<V, W>(
    kernel: &Kernel<V, W>,
    m: &Measure<V, W>,
    f: &TestFunction<V>,
    g: &TestFunction<V>,
) -> Result<f64, FormError>
where
    V: Ord + Clone + fmt::Debug,
    W: Weight,
{
    check_support(kernel, &[f, g])?;
    let touched: BTreeSet<&V> = f.keys().chain(g.keys()).collect();
    let mut seen: BTreeSet<(V, V)> = BTreeSet::new();
    let mut total = 0.0;
    for x in touched {
        for y in kernel.undirected_neighbors(x) {
            let pair = if *x < y { (x.clone(), y.clone()) } else { (y.clone(), x.clone()) };
            if !seen.insert(pair) {
                continue;
            }
            let p0 = 0.5
                * (m.value(x).to_f64() * kernel.weight(x, &y).to_f64()
                    + m.value(&y).to_f64() * kernel.weight(&y, x).to_f64());
            total += p0 * (at(f, x) - at(f, &y)) * (at(g, x) - at(g, &y));
        }
    }
    Ok(total)
}

/// `½ Σ_i q_i Σ_{(x,y) ∈ γ_i} (f(x)g(y) − f(y)g(x))`.
pub fn antisymmetric_form_cycles<V, W>(dec: &CycleDecomposition<V, W>, f: &TestFunction<V>, g: &TestFunction<V>) -> f64
where
    V: Ord + Clone + fmt::Debug,
    W: Weight,
{
    let mut total = 0.0;
    for (c, q) in dec.entries() {
        let s: f64 = c.edges().map(|(x, y)| at(f, x) * at(g, y) - at(f, y) * at(g, x)).sum();
        if s != 0.0 {
            total += q.to_f64() * s;
        }
    }
    0.5 * total
}

/// A kernel, a measure and a decomposition checked to center it.
#[derive(Clone, Debug)]
pub struct CenteredChain<V, W> {
    pub kernel: Kernel<V, W>,
    pub m: Measure<V, W>,
    pub dec: CycleDecomposition<V, W>,
}

impl<V: Ord + Clone + fmt::Debug, W: Weight> CenteredChain<V, W> {
    pub fn new(kernel: Kernel<V, W>, m: Measure<V, W>, dec: CycleDecomposition<V, W>, tol: f64) -> Result<Self, FormError> {
        let rep = verify_centering(&kernel, &m, &dec, tol)?;
        if !rep.valid {
            return Err(FormError::NotCentered(rep.max_abs_residual));
        }
        Ok(Self { kernel, m, dec })
    }

    pub fn form(&self, f: &TestFunction<V>, g: &TestFunction<V>) -> Result<f64, FormError> {
        dirichlet_form(&self.kernel, &self.m, f, g)
    }

    pub fn symmetrized(&self, f: &TestFunction<V>, g: &TestFunction<V>) -> Result<f64, FormError> {
        symmetrized_form(&self.kernel, &self.m, f, g)
    }

    pub fn antisymmetric(&self, f: &TestFunction<V>, g: &TestFunction<V>) -> Result<f64, FormError> {
        check_support(&self.kernel, &[f, g])?;
        Ok(antisymmetric_form_cycles(&self.dec, f, g))
    }
}

/// `−E(w_s f, w_{−s} f) / (s² m(f²))` with `w_s(x) = e^{s·d(o, x)}`; `dist`
/// holds `d(o, ·)` on the support of `f`.
pub fn exponential_weight_ratio<V, W>(
    kernel: &Kernel<V, W>,
    m: &Measure<V, W>,
    f: &TestFunction<V>,
    s: f64,
    dist: &BTreeMap<V, usize>,
) -> Result<f64, FormError>
where
    V: Ord + Clone + fmt::Debug,
    W: Weight,
{
    if s == 0.0 {
        return Err(FormError::Invalid("s must be nonzero".into()));
    }
    let weighted = |sign: f64| -> Result<TestFunction<V>, FormError> {
        f.iter()
            .map(|(x, v)| {
                let d = dist.get(x).ok_or_else(|| FormError::Invalid(format!("no distance for {x:?}")))?;
                Ok((x.clone(), v * (sign * s * *d as f64).exp()))
            })
            .collect()
    };
    let e = dirichlet_form(kernel, m, &weighted(1.0)?, &weighted(-1.0)?)?;
    let mass: f64 = f.iter().map(|(x, v)| m.value(x).to_f64() * v * v).sum();
    if mass == 0.0 {
        return Err(FormError::Invalid("f must not vanish".into()));
    }
    Ok(-e / (s * s * mass))
}
