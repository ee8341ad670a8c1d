use std::collections::HashSet;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{Abelianization, Group, GroupError};

/// `n` and an `n`-to-1 arrangement `σ` (1-based indices into `G`) with
/// `g_{σ(1)} ··· g_{σ(nK)} = id`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct C1Witness {
    pub n: usize,
    pub sigma: Vec<usize>,
}

impl C1Witness {
    /// Re-checks multiplicities and the product directly.
    pub fn validate<G: Group>(&self, group: &G, gens: &[G::Elem]) -> Result<(), GroupError> {
        let k = gens.len();
        if self.n == 0 || self.sigma.len() != self.n * k {
            return Err(GroupError::InvalidWitness(format!("expected {} factors, found {}", self.n * k, self.sigma.len())));
        }
        let mut used = vec![0usize; k];
        for &i in &self.sigma {
            if i == 0 || i > k {
                return Err(GroupError::InvalidWitness(format!("index {i} out of range 1..={k}")));
            }
            used[i - 1] += 1;
        }
        if let Some(i) = used.iter().position(|&u| u != self.n) {
            return Err(GroupError::InvalidWitness(format!("index {} used {} times, expected {}", i + 1, used[i], self.n)));
        }
        let prod = group.product(self.sigma.iter().map(|&i| &gens[i - 1]));
        if !group.is_identity(&prod) {
            return Err(GroupError::InvalidWitness(format!("product is {}", group.format(&prod))));
        }
        Ok(())
    }

    /// The ordered factors `g_{σ(1)}, ..., g_{σ(nK)}`.
    pub fn factors<'a, E>(&self, gens: &'a [E]) -> Vec<&'a E> {
        self.sigma.iter().map(|&i| &gens[i - 1]).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum C1Outcome {
    Found { witness: C1Witness, nodes: u64 },
    /// Exhaustive: no witness with `n <= n_max`.
    NotFoundUpTo { n_max: usize, nodes: u64 },
    /// The node budget ran out while searching multiplicity `n`; smaller
    /// multiplicities were searched exhaustively.
    BudgetExhausted { n: usize, nodes: u64 },
}

impl C1Outcome {
    pub fn witness(&self) -> Option<&C1Witness> {
        match self {
            C1Outcome::Found { witness, .. } => Some(witness),
            _ => None,
        }
    }
}

struct Search<'a, G: Group> {
    group: &'a G,
    classes: Vec<G::Elem>,
    norms: Vec<u64>,
    memo: HashSet<(G::Elem, Vec<u32>)>,
    nodes: u64,
    budget: u64,
    path: Vec<usize>,
}

enum Step {
    Found,
    Fail,
    OutOfBudget,
}

impl<G: Group> Search<'_, G> {
    fn dfs(&mut self, cur: &G::Elem, counts: &mut Vec<u32>, remaining_norm: u64) -> Step {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Step::OutOfBudget;
        }
        if remaining_norm == 0 && counts.iter().all(|&c| c == 0) {
            return if self.group.is_identity(cur) { Step::Found } else { Step::Fail };
        }
        if self.group.seminorm(cur) > remaining_norm {
            return Step::Fail;
        }
        let key = (cur.clone(), counts.clone());
        if self.memo.contains(&key) {
            return Step::Fail;
        }
        for c in 0..self.classes.len() {
            if counts[c] == 0 {
                continue;
            }
            counts[c] -= 1;
            let next = self.group.multiply(cur, &self.classes[c]);
            self.path.push(c);
            let r = self.dfs(&next, counts, remaining_norm - self.norms[c]);
            counts[c] += 1;
            match r {
                Step::Found | Step::OutOfBudget => return r,
                Step::Fail => {
                    self.path.pop();
                }
            }
        }
        self.memo.insert(key);
        Step::Fail
    }
}

/// Depth-first search for a (C1) witness, multiplicity `n = 1, ..., n_max`.
///
/// Equal generators are merged into classes, the first factor is pinned to
/// the class of `g_1` (a cyclic rotation of a witness is a witness), states
/// `(product, remaining counts)` that failed are memoized, and states whose
/// product cannot be cancelled by the remaining factors (seminorm bound) are
/// cut. Indices are tried in ascending order.
pub fn c1_search<G: Group>(group: &G, gens: &[G::Elem], n_max: usize, node_budget: u64) -> Result<C1Outcome, GroupError> {
    if gens.is_empty() {
        return Err(GroupError::Invalid("empty generating sequence".into()));
    }
    if n_max == 0 {
        return Err(GroupError::Invalid("n_max must be at least 1".into()));
    }
    for g in gens {
        group.validate(g)?;
    }
    let mut classes: Vec<G::Elem> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        match classes.iter().position(|c| c == g) {
            Some(c) => members[c].push(i + 1),
            None => {
                classes.push(g.clone());
                members.push(vec![i + 1]);
            }
        }
    }
    let norms: Vec<u64> = classes.iter().map(|c| group.seminorm(c)).collect();
    let mut nodes = 0u64;
    for n in 1..=n_max {
        let mut counts: Vec<u32> = members.iter().map(|m| (m.len() * n) as u32).collect();
        let total: u64 = counts.iter().zip(&norms).map(|(&c, &w)| c as u64 * w).sum();
        let mut s = Search {
            group,
            classes: classes.clone(),
            norms: norms.clone(),
            memo: HashSet::new(),
            nodes,
            budget: node_budget,
            path: vec![0],
        };
        counts[0] -= 1;
        let r = s.dfs(&classes[0].clone(), &mut counts, total - norms[0]);
        nodes = s.nodes;
        match r {
            Step::Found => {
                let mut seen = vec![0usize; classes.len()];
                let sigma = s
                    .path
                    .iter()
                    .map(|&c| {
                        let i = members[c][seen[c] % members[c].len()];
                        seen[c] += 1;
                        i
                    })
                    .collect();
                let witness = C1Witness { n, sigma };
                witness.validate(group, gens)?;
                return Ok(C1Outcome::Found { witness, nodes });
            }
            Step::OutOfBudget => return Ok(C1Outcome::BudgetExhausted { n, nodes: node_budget }),
            Step::Fail => {}
        }
    }
    Ok(C1Outcome::NotFoundUpTo { n_max, nodes })
}

/// Abelianization sum of the generators; (C2) holds iff its free part vanishes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct C2Report {
    pub holds: bool,
    pub free_sum: Vec<BigInt>,
    pub torsion_sum: Vec<(BigInt, BigInt)>,
}

pub fn c2_check<G: Group>(group: &G, gens: &[G::Elem]) -> C2Report {
    let mut acc: Option<Abelianization> = None;
    for g in gens {
        let a = group.abelianization(g);
        acc = Some(match acc {
            None => a,
            Some(s) => s.add(&a),
        });
    }
    let sum = acc.unwrap_or_else(|| group.abelianization(&group.identity()));
    C2Report { holds: sum.free_is_zero(), free_sum: sum.free, torsion_sum: sum.torsion }
}

/// For abelian groups (C1) reduces to the sum having finite order `n`; the
/// witness lists every index `n` times in a row.
pub fn abelian_c1<G: Group>(group: &G, gens: &[G::Elem]) -> Result<Option<C1Witness>, GroupError> {
    if !group.is_abelian() {
        return Err(GroupError::NotAbelian(group.name()));
    }
    if gens.is_empty() {
        return Err(GroupError::Invalid("empty generating sequence".into()));
    }
    let sum = group.product(gens.iter());
    let Some(n) = group.order(&sum) else { return Ok(None) };
    let n = n as usize;
    let sigma = (1..=gens.len()).flat_map(|i| std::iter::repeat_n(i, n)).collect();
    let w = C1Witness { n, sigma };
    w.validate(group, gens)?;
    Ok(Some(w))
}
