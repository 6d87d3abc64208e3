use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::combin::{binomial, submasks, Subsets};

/// Default cap on the number of distinct tables held during a census.
pub const CENSUS_STATE_BUDGET: usize = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CensusError {
    #[error("census for n = {n}, k = {k} is outside the supported range")]
    Infeasible { n: usize, k: usize },
    #[error("state budget exceeded with {reached} tables reached")]
    BudgetExceeded { reached: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalFormulaStats {
    /// Number of minimal formulae, counted as clause sets.
    pub formulas: u64,
    /// Of those, how many are syntactically unate.
    pub unate_formulas: u64,
    /// Number of distinct functions they represent.
    pub functions: u64,
    pub functions_with_unique_minimal_formula: u64,
    pub max_formulas_per_function: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusReport {
    pub n: usize,
    pub k: usize,
    pub total: u64,
    pub monotone: u64,
    pub unate: u64,
}

impl CensusReport {
    /// `2^n (2^C(n,k) - n 2^C(n-1,k))`, the classical lower bound on the
    /// number of unate functions.
    pub fn unate_lower_bound(&self) -> BigInt {
        let c = binomial(self.n, self.k) as usize;
        let c1 = binomial(self.n - 1, self.k) as usize;
        let one = BigInt::from(1u8);
        (one.clone() << self.n) * ((one.clone() << c) - BigInt::from(self.n) * (one << c1))
    }

    /// Number of monotone k-SAT functions, `2^C(n,k)`.
    pub fn monotone_expected(&self) -> BigInt {
        BigInt::from(1u8) << binomial(self.n, self.k) as usize
    }
}

fn check_feasible(n: usize, k: usize) -> Result<(), CensusError> {
    let ok = k >= 2 && n >= 1 && if k == 2 { n <= 5 } else { n <= 4 };
    if ok {
        Ok(())
    } else {
        Err(CensusError::Infeasible { n, k })
    }
}

/// Clauses `(support, negs)` with their cubes as packed tables (n <= 6).
/// Supports in colex order, sign patterns increasing within a support.
pub(crate) fn clause_list(n: usize, k: usize) -> Vec<(u64, u64, u64)> {
    let mut out = Vec::new();
    for s in Subsets::new(n, k) {
        for negs in submasks(s) {
            let pos = s & !negs;
            let cube = (0..1u64 << n)
                .filter(|a| a & s == pos)
                .fold(0u64, |w, a| w | 1 << a);
            out.push((s, negs, cube));
        }
    }
    out
}

pub(crate) fn clause_cubes(n: usize, k: usize) -> Vec<u64> {
    clause_list(n, k).into_iter().map(|(_, _, c)| c).collect()
}

/// All tables reachable from the zero table by OR-ing the given cubes,
/// sorted. Processing cube by cube keeps the working set equal to the
/// reachable set of the prefix, so the result does not depend on order.
pub fn reachable_tables(cubes: &[u64], budget: usize) -> Result<Vec<u64>, CensusError> {
    let mut set = vec![0u64];
    for &c in cubes {
        let extra: Vec<u64> = set.iter().map(|t| t | c).collect();
        set.extend(extra);
        set.sort_unstable();
        set.dedup();
        if set.len() > budget {
            return Err(CensusError::BudgetExceeded { reached: set.len() });
        }
    }
    Ok(set)
}

fn direction_masks(n: usize) -> Vec<u64> {
    (0..n)
        .map(|v| {
            (0..1u64 << n)
                .filter(|a| a >> v & 1 == 0)
                .fold(0u64, |w, a| w | 1 << a)
        })
        .collect()
}

/// Whether `t` is the union of the clause cubes it contains whose signs
/// agree with the negation mask `neg`.
fn spanned_by_signs(t: u64, neg: u64, clauses: &[(u64, u64, u64)]) -> bool {
    let union = clauses
        .iter()
        .filter(|&&(s, negs, cube)| negs == s & neg && cube & !t == 0)
        .fold(0u64, |u, &(_, _, cube)| u | cube);
    union == t
}

/// (has a monotone formula, has a unate formula) for a packed table. A
/// unate formula can only use the signs forced by the pointwise direction
/// of each variable; variables the function ignores may take either sign.
fn tally(t: u64, masks: &[u64], clauses: &[(u64, u64, u64)]) -> (bool, bool) {
    let mut neg = 0u64;
    for (v, &m) in masks.iter().enumerate() {
        let lo = t & m;
        let hi = (t >> (1u32 << v)) & m;
        let up = !lo & hi != 0;
        let down = lo & !hi != 0;
        if up && down {
            return (spanned_by_signs(t, 0, clauses), false);
        }
        if down {
            neg |= 1 << v;
        }
    }
    let unate = spanned_by_signs(t, neg, clauses);
    let monotone = if neg == 0 {
        unate
    } else {
        spanned_by_signs(t, 0, clauses)
    };
    (monotone, unate)
}

/// Exhaustive census of k-SAT functions on `n` variables.
pub fn enumerate_functions(n: usize, k: usize, budget: usize) -> Result<CensusReport, CensusError> {
    check_feasible(n, k)?;
    let clauses = clause_list(n, k);
    let cubes: Vec<u64> = clauses.iter().map(|c| c.2).collect();
    let tables = reachable_tables(&cubes, budget)?;
    let masks = direction_masks(n);
    let (mut monotone, mut unate) = (0u64, 0u64);
    for &t in &tables {
        let (m, u) = tally(t, &masks, &clauses);
        monotone += u64::from(m);
        unate += u64::from(u);
    }
    Ok(CensusReport {
        n,
        k,
        total: tables.len() as u64,
        monotone,
        unate,
    })
}

/// Independent oracle: the set of truth tables of all `2^(2^k C(n,k))`
/// formulae, by direct enumeration of clause subsets. Only for `n <= 4`.
pub fn dedupe_formula_tables(n: usize, k: usize) -> Vec<u64> {
    assert!(n <= 4, "oracle limited to n <= 4");
    let cubes = clause_cubes(n, k);
    let mut seen = vec![false; 1usize << (1 << n)];
    fn walk(cubes: &[u64], acc: u64, seen: &mut [bool]) {
        match cubes.split_first() {
            None => seen[acc as usize] = true,
            Some((&c, rest)) => {
                walk(rest, acc, seen);
                walk(rest, acc | c, seen);
            }
        }
    }
    walk(&cubes, 0, &mut seen);
    (0..seen.len() as u64)
        .filter(|&t| seen[t as usize])
        .collect()
}

/// Counts minimal formulae and the functions they represent. Returns `None`
/// when the search exceeds `node_budget` nodes.
pub fn minimal_formula_census(
    n: usize,
    k: usize,
    node_budget: u64,
) -> Result<Option<MinimalFormulaStats>, CensusError> {
    check_feasible(n, k)?;
    let list = clause_list(n, k);
    let clauses: Vec<(u64, u64)> = list.iter().map(|&(s, negs, _)| (s, negs)).collect();
    let cubes: Vec<u64> = list.iter().map(|c| c.2).collect();
    let mut search = MinimalSearch {
        cubes: &cubes,
        clauses: &clauses,
        chosen: Vec::new(),
        per_function: BTreeMap::new(),
        formulas: 0,
        unate_formulas: 0,
        nodes: 0,
        budget: node_budget,
    };
    if !search.walk(0, 0, 0, 0, 0) {
        return Ok(None);
    }
    let per = &search.per_function;
    Ok(Some(MinimalFormulaStats {
        formulas: search.formulas,
        unate_formulas: search.unate_formulas,
        functions: per.len() as u64,
        functions_with_unique_minimal_formula: per.values().filter(|&&c| c == 1).count() as u64,
        max_formulas_per_function: per.values().copied().max().unwrap_or(0),
    }))
}

struct MinimalSearch<'a> {
    cubes: &'a [u64],
    clauses: &'a [(u64, u64)],
    chosen: Vec<usize>,
    per_function: BTreeMap<u64, u64>,
    formulas: u64,
    unate_formulas: u64,
    nodes: u64,
    budget: u64,
}

impl MinimalSearch<'_> {
    /// `once`/`twice`: assignments covered by at least one/two chosen clauses.
    /// A chosen clause that loses its last private assignment can never
    /// regain one, so such branches are cut.
    fn walk(&mut self, i: usize, once: u64, twice: u64, pos_used: u64, neg_used: u64) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            return false;
        }
        if i == self.cubes.len() {
            self.formulas += 1;
            if pos_used & neg_used == 0 {
                self.unate_formulas += 1;
            }
            *self.per_function.entry(once).or_insert(0) += 1;
            return true;
        }
        if !self.walk(i + 1, once, twice, pos_used, neg_used) {
            return false;
        }
        let c = self.cubes[i];
        let twice2 = twice | (once & c);
        let once2 = once | c;
        if c & !twice2 == 0 || self.chosen.iter().any(|&j| self.cubes[j] & !twice2 == 0) {
            return true;
        }
        let (s, negs) = self.clauses[i];
        self.chosen.push(i);
        let ok = self.walk(
            i + 1,
            once2,
            twice2,
            pos_used | (s & !negs),
            neg_used | negs,
        );
        self.chosen.pop();
        ok
    }
}
