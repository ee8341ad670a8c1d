use std::collections::BTreeSet;

use num_traits::{One, Zero};

use super::{C1Witness, CayleyWindow, Cyclic, Group, GroupError};
use crate::markov_graph::{Cycle, CycleDecomposition, Kernel};
use crate::weight::{Rational, Weight};

/// Left translates of the witness cycle, restricted to a Cayley window.
///
/// `γ_1 = (id, g̃_1, ..., g̃_{nK} = id)` with `g̃_t` the partial products of the
/// witness. `γ_1` is split into edge self-avoiding pieces, each piece gets
/// weight `1/(nK)`, and every translate `x · piece` lying entirely in the
/// window is kept (including translates by `x` outside the window). Interior
/// edges are then covered exactly as in the infinite graph.
pub fn translated_cycle_decomposition<G: Group>(
    window: &CayleyWindow<G>,
    witness: &C1Witness,
) -> Result<CycleDecomposition<G::Elem, Rational>, GroupError> {
    let group = &window.group;
    witness.validate(group, &window.gens)?;
    let mut path = vec![group.identity()];
    for g in witness.factors(&window.gens) {
        let next = group.multiply(path.last().expect("nonempty"), g);
        path.push(next);
    }
    let gamma = Cycle::generalized(path)?;
    let pieces = gamma.split_simple();
    let weight = Rational::from_ratio(1, witness.sigma.len() as i64);

    let mut shifts: BTreeSet<G::Elem> = BTreeSet::new();
    let inverses: BTreeSet<G::Elem> = gamma.points().iter().map(|p| group.inverse(p)).collect();
    for v in &window.vertices {
        for pinv in &inverses {
            shifts.insert(group.multiply(v, pinv));
        }
    }
    let mut entries = Vec::new();
    for x in &shifts {
        for piece in &pieces {
            let c = piece.map(|p| group.multiply(x, p));
            if c.points().iter().all(|p| window.contains(p)) {
                entries.push((c, weight.clone()));
            }
        }
    }
    Ok(CycleDecomposition::new(entries)?)
}

/// Groups small enough to enumerate.
pub trait FiniteGroup: Group {
    fn elements(&self) -> Vec<Self::Elem>;
}

impl FiniteGroup for Cyclic {
    fn elements(&self) -> Vec<u64> {
        (0..self.p).collect()
    }
}

fn check_probability<G: Group>(group: &G, mu: &[(G::Elem, Rational)]) -> Result<(), GroupError> {
    let total = mu.iter().fold(Rational::zero(), |acc, (_, w)| acc + w);
    if !total.is_one() || mu.iter().any(|(_, w)| !w.is_positive_weight(0.0)) {
        return Err(GroupError::Invalid(format!("step law must be positive and sum to 1, sum is {total}")));
    }
    for (g, _) in mu {
        group.validate(g)?;
    }
    Ok(())
}

/// The walk `q(x, xg) = μ(g)` on a whole finite group.
pub fn finite_walk_kernel<G: FiniteGroup>(group: &G, mu: &[(G::Elem, Rational)]) -> Result<Kernel<G::Elem, Rational>, GroupError> {
    check_probability(group, mu)?;
    let mut b = Kernel::builder();
    for x in group.elements() {
        for (g, w) in mu {
            b.edge(x.clone(), group.multiply(&x, g), w.clone());
        }
    }
    Ok(b.build()?)
}

/// Cycles `γ_{x,g} = (x, xg, ..., xg^{p(g)})` with weight `μ(g)/p(g)` for every
/// `x` and every `g` in the support of `μ`.
pub fn torsion_decomposition<G: FiniteGroup>(
    group: &G,
    mu: &[(G::Elem, Rational)],
) -> Result<CycleDecomposition<G::Elem, Rational>, GroupError> {
    check_probability(group, mu)?;
    let elements = group.elements();
    let mut entries = Vec::new();
    for (g, w) in mu {
        let p = group.order(g).ok_or_else(|| GroupError::InfiniteOrder(group.format(g)))?;
        let q = w / Rational::from_integer(p.into());
        for x in &elements {
            let mut v = vec![x.clone()];
            for _ in 0..p {
                let next = group.multiply(v.last().expect("nonempty"), g);
                v.push(next);
            }
            entries.push((Cycle::new(v)?, q.clone()));
        }
    }
    Ok(CycleDecomposition::new(entries)?)
}
