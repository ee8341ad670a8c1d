//! Small reference chains used throughout the tests and the CLI examples.

use std::ops::RangeInclusive;

use crate::markov_graph::{Cycle, CycleDecomposition, Kernel};
use num_traits::Zero;

use crate::weight::{Rational, Weight};

fn r(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

/// `q(x, x+1 mod n) = 1` on `Z_n`.
pub fn oriented_rotation(n: i64) -> Kernel<i64, Rational> {
    rotation_with_killing(n, r(0, 1))
}

/// Rotation on `Z_n` that dies with probability `kill` at every step.
pub fn rotation_with_killing(n: i64, kill: Rational) -> Kernel<i64, Rational> {
    assert!(n >= 1, "rotation needs n >= 1");
    let mut b = Kernel::builder();
    let stay = Rational::from_ratio(1, 1) - kill.clone();
    for x in 0..n {
        b.edge(x, (x + 1) % n, stay.clone());
    }
    b.killed(!kill.is_zero());
    b.build().expect("rotation is stochastic")
}

/// The single cycle `(0, 1, ..., n-1, 0)` with weight one.
pub fn rotation_decomposition(n: i64) -> CycleDecomposition<i64, Rational> {
    let mut v: Vec<i64> = (0..n).collect();
    v.push(0);
    CycleDecomposition::new(vec![(Cycle::new(v).expect("closed"), r(1, 1))]).expect("positive")
}

/// Translation-invariant walk on `Z` with the given steps, on `window`.
pub fn z_walk(window: RangeInclusive<i64>, steps: &[(i64, Rational)]) -> Kernel<i64, Rational> {
    Kernel::from_step_fn(
        window,
        |x| steps.iter().map(|(s, w)| (x + s, w.clone())).collect(),
        |x| steps.iter().map(|(s, _)| x - s).collect(),
    )
    .expect("steps sum to one")
}

/// Steps `+1` (probability 2/3) and `-2` (probability 1/3).
pub fn skewed_z_walk(window: RangeInclusive<i64>) -> Kernel<i64, Rational> {
    z_walk(window, &[(1, r(2, 3)), (-2, r(1, 3))])
}

/// Cycles `(x, x+1, x+2, x)` with weight 1/3 for every `x` in `starts`.
pub fn skewed_z_decomposition(starts: RangeInclusive<i64>) -> CycleDecomposition<i64, Rational> {
    let entries = starts
        .map(|x| (Cycle::new(vec![x, x + 1, x + 2, x]).expect("closed"), r(1, 3)))
        .collect();
    CycleDecomposition::new(entries).expect("positive")
}

/// Simple random walk on `Z`.
pub fn srw_z(window: RangeInclusive<i64>) -> Kernel<i64, Rational> {
    z_walk(window, &[(1, r(1, 2)), (-1, r(1, 2))])
}

/// Steps `+1, +1, -1` with probability 1/3 each (mean 1/3).
pub fn drifted_z_walk(window: RangeInclusive<i64>) -> Kernel<i64, Rational> {
    z_walk(window, &[(1, r(2, 3)), (-1, r(1, 3))])
}

/// Distance-to-root chain of simple random walk on the 4-regular tree,
/// truncated at `levels` (level `levels` has no outgoing mass).
pub fn tree_radial(levels: i64) -> Kernel<i64, Rational> {
    let mut b = Kernel::builder();
    b.edge(0, 1, r(1, 1));
    for k in 1..levels {
        b.edge(k, k + 1, r(3, 4)).edge(k, k - 1, r(1, 4));
    }
    b.vertex(levels).killed(true);
    b.build().expect("substochastic")
}
