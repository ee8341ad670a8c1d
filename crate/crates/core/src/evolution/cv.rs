use serde::{Deserialize, Serialize};

use super::{DistanceOracle, EvolutionError, SparseDistribution};
use crate::groups::Group;
use crate::weight::Rational;

const BRACKET: (f64, f64) = (1e-6, 1e12);
const REL_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CVMargin {
    pub t: usize,
    pub x_label: String,
    pub mu: f64,
    pub bound: f64,
    pub margin: f64,
}

/// Smallest `C` with `μ^t(x) <= C m(x) t^{-d_exp/2} exp(-d(x)²/(C t))` over
/// every evaluated `(t, x)`, `t >= 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CVReport {
    pub c_star: f64,
    pub d_exp: f64,
    pub t_max: usize,
    pub points: usize,
    pub margins: Vec<CVMargin>,
    /// No `C` in the bisection bracket satisfies the bound.
    pub violated: bool,
    /// The predicate fails at `C_star (1 - 1e-3)` and holds at `C_star (1 + 1e-3)`.
    pub monotone_check: bool,
    /// Some distribution was pruned.
    pub approximate: bool,
    /// Distances came from a lower-bound metric.
    pub lower_bound_metric: bool,
}

struct Point {
    t: usize,
    label: String,
    ln_mu: f64,
    ln_m: f64,
    ln_t: f64,
    d2_over_t: f64,
}

impl Point {
    fn ln_bound(&self, c: f64, d_exp: f64) -> f64 {
        c.ln() + self.ln_m - 0.5 * d_exp * self.ln_t - self.d2_over_t / c
    }
}

fn holds(points: &[Point], c: f64, d_exp: f64) -> bool {
    points.iter().all(|p| p.ln_mu <= p.ln_bound(c, d_exp))
}

pub fn fit_cv_constant<G: Group>(
    group: &G,
    dists: &[SparseDistribution<G::Elem>],
    oracle: &DistanceOracle<G::Elem>,
    m: &dyn Fn(&G::Elem) -> f64,
    d_exp: f64,
) -> Result<CVReport, EvolutionError> {
    if !d_exp.is_finite() || d_exp < 0.0 {
        return Err(EvolutionError::Invalid(format!("d_exp must be a nonnegative number, got {d_exp}")));
    }
    let mut points = Vec::new();
    let mut lower = false;
    for dist in dists.iter().filter(|d| d.t() >= 1) {
        let t = dist.t() as f64;
        for (x, _) in dist.iter() {
            let (d, lb) = oracle.distance(group, x)?;
            lower |= lb;
            let mx = m(x);
            if mx <= 0.0 || !mx.is_finite() {
                return Err(EvolutionError::Invalid(format!("measure at {} is not positive", group.format(x))));
            }
            points.push(Point {
                t: dist.t(),
                label: group.format(x),
                ln_mu: dist.ln_prob(x),
                ln_m: mx.ln(),
                ln_t: t.ln(),
                d2_over_t: (d as f64).powi(2) / t,
            });
        }
    }
    let (mut lo, mut hi) = BRACKET;
    let violated = !holds(&points, hi, d_exp);
    if !violated && holds(&points, lo, d_exp) {
        hi = lo;
    } else if !violated {
        // Invariant: predicate false at lo, true at hi.
        while hi / lo > 1.0 + REL_TOL {
            let mid = (lo * hi).sqrt();
            if holds(&points, mid, d_exp) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }
    let c_star = hi;
    let monotone_check = violated
        || (holds(&points, c_star * (1.0 + 1e-3), d_exp)
            && (c_star <= BRACKET.0 || !holds(&points, c_star * (1.0 - 1e-3), d_exp)));
    let margins = points
        .iter()
        .map(|p| {
            let mu = p.ln_mu.exp();
            let bound = p.ln_bound(c_star, d_exp).exp();
            CVMargin { t: p.t, x_label: p.label.clone(), mu, bound, margin: bound - mu }
        })
        .collect();
    Ok(CVReport {
        c_star,
        d_exp,
        t_max: dists.iter().map(SparseDistribution::t).max().unwrap_or(0),
        points: points.len(),
        margins,
        violated,
        monotone_check,
        approximate: dists.iter().any(SparseDistribution::is_approximate),
        lower_bound_metric: lower,
    })
}

/// Exact `P[d(id, X_t) >= alpha t]` for `X_t ~ dist`, `t = dist.t()`.
pub fn escape_probability<G: Group>(
    group: &G,
    dist: &SparseDistribution<G::Elem>,
    oracle: &DistanceOracle<G::Elem>,
    alpha: f64,
) -> Result<Rational, EvolutionError> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(EvolutionError::Invalid(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    let threshold = alpha * dist.t() as f64;
    let mut far = Vec::new();
    for x in dist.support() {
        if oracle.distance(group, x)?.0 as f64 >= threshold {
            far.push(x.clone());
        }
    }
    let far: std::collections::BTreeSet<_> = far.into_iter().collect();
    Ok(dist.mass_where(|x| far.contains(x)))
}

/// `t^{d_exp/2} μ^t(id)` for every `t >= 1`.
pub fn return_profile<G: Group>(group: &G, dists: &[SparseDistribution<G::Elem>], d_exp: f64) -> Vec<(usize, f64)> {
    let id = group.identity();
    dists
        .iter()
        .filter(|d| d.t() >= 1)
        .map(|d| (d.t(), (d.t() as f64).powf(0.5 * d_exp) * d.prob_f64(&id)))
        .collect()
}
