use alloc::vec;
use alloc::vec::Vec;

use super::syntax::literal_occurrences;
use super::{Clause, Formula, SignVector};

/// Default variable cap for exact unate distance.
pub const DEFAULT_EXACT_CAP: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceMode {
    /// Exhaustive over sign vectors (branch and bound); errors beyond the cap.
    Exact { cap: usize },
    /// Majority sign per variable followed by single-flip descent.
    Heuristic,
}

impl Default for DistanceMode {
    fn default() -> Self {
        DistanceMode::Exact {
            cap: DEFAULT_EXACT_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnateDistance {
    /// Clauses disagreeing with `best`; the minimum over all sign vectors when `exact`.
    pub distance: u64,
    pub best: SignVector,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("exact unate distance limited to {cap} variables, formula has {n}")]
pub struct DistanceCapExceeded {
    pub n: usize,
    pub cap: usize,
}

fn disagreements(f: &Formula, s: &SignVector) -> u64 {
    f.clauses().iter().filter(|c| !s.agrees_with(c)).count() as u64
}

fn heuristic(f: &Formula) -> (u64, SignVector) {
    let n = f.n();
    let (pos, neg) = literal_occurrences(f);
    let mut signs = 0u64;
    for v in 0..n {
        if pos[v] >= neg[v] {
            signs |= 1 << v;
        }
    }
    let mut best = SignVector::new(n, signs);
    let mut cost = disagreements(f, &best);
    loop {
        let mut improved = false;
        for v in 0..n {
            let cand = SignVector::new(n, best.bits() ^ (1 << v));
            let c = disagreements(f, &cand);
            if c < cost {
                cost = c;
                best = cand;
                improved = true;
            }
        }
        if !improved {
            return (cost, best);
        }
    }
}

/// Minimum number of clauses to delete to make the formula unate, with a
/// sign vector attaining it.
pub fn unate_distance(
    f: &Formula,
    mode: DistanceMode,
) -> Result<UnateDistance, DistanceCapExceeded> {
    let (h_cost, h_best) = heuristic(f);
    match mode {
        DistanceMode::Heuristic => Ok(UnateDistance {
            distance: h_cost,
            best: h_best,
            exact: false,
        }),
        DistanceMode::Exact { cap } => {
            if f.n() > cap {
                return Err(DistanceCapExceeded { n: f.n(), cap });
            }
            let mut search = Exact::new(f, h_cost, h_best);
            search.dfs(0, 0, 0);
            Ok(UnateDistance {
                distance: search.best_cost,
                best: search.best,
                exact: true,
            })
        }
    }
}

struct Exact {
    n: usize,
    /// clauses grouped by their highest variable
    closing: Vec<Vec<Clause>>,
    best_cost: u64,
    best: SignVector,
}

impl Exact {
    fn new(f: &Formula, cost: u64, best: SignVector) -> Self {
        let mut closing = vec![Vec::new(); f.n()];
        for c in f.clauses() {
            let last = 63 - c.vars().leading_zeros() as usize;
            closing[last].push(*c);
        }
        Exact {
            n: f.n(),
            closing,
            best_cost: cost,
            best,
        }
    }

    fn dfs(&mut self, var: usize, negated: u64, cost: u64) {
        if cost >= self.best_cost {
            return;
        }
        if var == self.n {
            self.best_cost = cost;
            self.best = SignVector::new(self.n, !negated);
            return;
        }
        for neg in [false, true] {
            let nm = if neg { negated | 1 << var } else { negated };
            let extra = self.closing[var]
                .iter()
                .filter(|c| c.negs() != c.vars() & nm)
                .count() as u64;
            self.dfs(var + 1, nm, cost + extra);
        }
    }
}
