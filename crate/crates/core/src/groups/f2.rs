//! Cancellation graphs for products of the sequence
//! `G = (a, a⁻¹, b, b⁻¹, b⁻², ababa⁻²)` in the free group.

use serde::{Deserialize, Serialize};

use super::free::{push_reduced, word_string, Letter};
use super::GroupError;

/// The six generators as words.
pub fn sequence() -> [Vec<Letter>; 6] {
    use Letter::*;
    [vec![A], vec![AInv], vec![B], vec![BInv], vec![BInv, BInv], vec![A, B, A, B, AInv, AInv]]
}

pub const SEQUENCE_LITERAL: &str = "a,A,b,B,BB,ababAA";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CancellationGraph {
    pub n: usize,
    /// `(i, j)`: an `a⁻¹` of the `i`-th occurrence of `g_6` cancelled an `a`
    /// of the `j`-th occurrence (labels 1-based).
    pub edges: Vec<(usize, usize)>,
    /// Number of distinct unordered edges.
    pub j: usize,
    pub reduced_word: String,
    pub reduced_len: usize,
    pub passes: usize,
    pub no_double_edge: bool,
    pub no_two_loop: bool,
    pub no_self_loop: bool,
    pub nesting: bool,
    pub acyclic: bool,
}

impl CancellationGraph {
    /// All structural properties hold, and `J < n` forces a nonempty word.
    pub fn properties_hold(&self) -> bool {
        self.no_double_edge
            && self.no_two_loop
            && self.no_self_loop
            && self.nesting
            && self.acyclic
            && (self.j >= self.n || self.reduced_len > 0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Tagged {
    letter: Letter,
    label: Option<usize>,
}

/// Literal left-to-right cancellation: each pass reads the word once and
/// deletes every adjacent inverse pair it meets without stepping back; passes
/// repeat until one makes no deletion. Returns the pairs cancelled per pass.
fn cancel_passes(mut word: Vec<Tagged>) -> (Vec<Tagged>, Vec<(Tagged, Tagged)>, usize) {
    let mut pairs = Vec::new();
    let mut passes = 0;
    loop {
        passes += 1;
        let mut out = Vec::with_capacity(word.len());
        let mut i = 0;
        let mut changed = false;
        while i < word.len() {
            if i + 1 < word.len() && word[i + 1].letter == word[i].letter.inverse() {
                pairs.push((word[i], word[i + 1]));
                i += 2;
                changed = true;
            } else {
                out.push(word[i]);
                i += 1;
            }
        }
        word = out;
        if !changed {
            return (word, pairs, passes);
        }
    }
}

/// Runs the cancellation algorithm on an arrangement of generator indices
/// `1..=6`, each used the same number `n` of times.
pub fn f2_reduce(arrangement: &[usize]) -> Result<CancellationGraph, GroupError> {
    let mut used = [0usize; 6];
    for &g in arrangement {
        if !(1..=6).contains(&g) {
            return Err(GroupError::Invalid(format!("generator index {g} out of range 1..=6")));
        }
        used[g - 1] += 1;
    }
    let n = used[0];
    if n == 0 || used.iter().any(|&u| u != n) {
        return Err(GroupError::Invalid(format!("each generator must appear equally often, counts {used:?}")));
    }
    let words = sequence();
    let mut word = Vec::new();
    let mut occurrence = 0;
    for &g in arrangement {
        let label = (g == 6).then(|| {
            occurrence += 1;
            occurrence
        });
        word.extend(words[g - 1].iter().map(|&letter| Tagged { letter, label }));
    }
    let (reduced, pairs, passes) = cancel_passes(word);

    let mut edges = Vec::new();
    for (x, y) in pairs {
        let (inv, pos) = match (x.letter, y.letter) {
            (Letter::AInv, Letter::A) => (x, y),
            (Letter::A, Letter::AInv) => (y, x),
            _ => continue,
        };
        if let (Some(i), Some(j)) = (inv.label, pos.label) {
            edges.push((i, j));
        }
    }

    let mut sorted = edges.clone();
    sorted.sort_unstable();
    let no_double_edge = sorted.windows(2).all(|w| w[0] != w[1]);
    let no_two_loop = edges.iter().all(|&(i, j)| i == j || !edges.contains(&(j, i)));
    let no_self_loop = edges.iter().all(|&(i, j)| i != j);
    let mut undirected: Vec<(usize, usize)> = edges.iter().map(|&(i, j)| (i.min(j), i.max(j))).collect();
    undirected.sort_unstable();
    undirected.dedup();
    let nesting = nesting_holds(&undirected);
    let acyclic = no_self_loop && is_forest(n, &undirected);

    let letters: Vec<Letter> = reduced.iter().map(|t| t.letter).collect();
    debug_assert!({
        let mut check = Vec::new();
        push_reduced(&mut check, &letters);
        check == letters
    });
    Ok(CancellationGraph {
        n,
        edges,
        j: undirected.len(),
        reduced_word: word_string(&letters),
        reduced_len: letters.len(),
        passes,
        no_double_edge,
        no_two_loop,
        no_self_loop,
        nesting,
        acyclic,
    })
}

/// For edges `{i1, i2}`, `{i3, i4}`: `i4` strictly between `i1` and `i2`
/// implies `i3` between them (inclusive).
fn nesting_holds(edges: &[(usize, usize)]) -> bool {
    for &(lo, hi) in edges {
        for &(u, v) in edges {
            for (i3, i4) in [(u, v), (v, u)] {
                if lo < i4 && i4 < hi && !(lo <= i3 && i3 <= hi) {
                    return false;
                }
            }
        }
    }
    true
}

fn is_forest(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..=n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut c = x;
        while p[c] != r {
            let next = p[c];
            p[c] = r;
            c = next;
        }
        r
    }
    for &(i, j) in edges {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    true
}
