//! Classifier predicates for nearly monotone, sparsely minimal formulae.
//!
//! Every threshold (`ζn^k`, `ζn`, `β_i n^{k-i}`, `ζ′C(n-1,k-1)`,
//! `C(n-k,k-1)/2^{k+1}`) is compared as an exact rational, with strict and
//! non-strict inequalities kept apart.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::combin::{binomial, deposit, elements, elements_vec, low_mask, Subsets};
use crate::exact::{count_le, count_lt, pow_big, Rational};
use crate::formula::syntax::{dense_violation, literal_occurrences};
use crate::formula::{unate_distance, DistanceCapExceeded, DistanceMode, Formula};
use crate::semantics::{is_minimal, SemanticsError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StabilityError {
    #[error("parameter {name} = {value} must lie in (0, 1]")]
    ParamOutOfRange { name: &'static str, value: Rational },
    #[error("expected {expected} beta values for k = {k}, got {got}")]
    BetaLength {
        k: usize,
        expected: usize,
        got: usize,
    },
    #[error("formula has k = {formula_k}, parameters were built for k = {params_k}")]
    KMismatch { formula_k: usize, params_k: usize },
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Distance(#[from] DistanceCapExceeded),
    #[error("link check needs {needed} word operations, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
}

/// Word-operation budget for [`check_i3`].
pub const I3_BUDGET: u128 = 1 << 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifierParams {
    k: usize,
    pub zeta: Rational,
    pub zeta_prime: Rational,
    pub rho: Rational,
    /// `β_1..β_{k-2}`; a single `β_1` when `k <= 3`.
    pub beta: Vec<Rational>,
}

/// Number of β values used for clause width `k`.
pub fn beta_len(k: usize) -> usize {
    k.saturating_sub(2).max(1)
}

fn unit_interval(name: &'static str, value: Rational) -> Result<(), StabilityError> {
    if value > Rational::zero() && value <= Rational::one() {
        Ok(())
    } else {
        Err(StabilityError::ParamOutOfRange { name, value })
    }
}

impl ClassifierParams {
    pub fn new(
        k: usize,
        zeta: Rational,
        zeta_prime: Rational,
        rho: Rational,
        beta: Vec<Rational>,
    ) -> Result<Self, StabilityError> {
        unit_interval("zeta", zeta)?;
        unit_interval("zeta_prime", zeta_prime)?;
        unit_interval("rho", rho)?;
        if beta.len() != beta_len(k) {
            return Err(StabilityError::BetaLength {
                k,
                expected: beta_len(k),
                got: beta.len(),
            });
        }
        for b in &beta {
            unit_interval("beta", *b)?;
        }
        Ok(ClassifierParams {
            k,
            zeta,
            zeta_prime,
            rho,
            beta,
        })
    }

    /// `ζ′ = 1/(10k)` and the other parameters all equal to `zeta`.
    pub fn with_zeta(k: usize, zeta: Rational) -> Result<Self, StabilityError> {
        Self::new(
            k,
            zeta,
            Rational::new(1, 10 * k as i64),
            zeta,
            vec![zeta; beta_len(k)],
        )
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct I2Level {
    pub i: usize,
    pub passed: bool,
    pub max_count: u64,
    /// First negated set (ascending mask) over `β_i n^{k-i}`.
    pub witness: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct I3Failure {
    pub vars: Vec<usize>,
    /// Bit `j` set: `M_{u_j}` is the complement of the link.
    pub complemented: u64,
    pub size: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct I3Verdict {
    pub passed: bool,
    /// `C(n-k, k-1)`; the bound is this divided by `2^{k+1}`.
    pub universe: u64,
    pub failures: u64,
    pub first_failure: Option<I3Failure>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifierVerdict {
    pub minimal: bool,
    /// A clause with no witness.
    pub non_minimal_clause: Option<usize>,
    pub nearly_monotone: bool,
    pub non_monotone_clauses: u64,
    pub sparsely_minimal: bool,
    /// A clause whose lightest witness has weight `>= ζn`.
    pub heavy_clause: Option<usize>,
    pub positive_dominant: bool,
    /// A variable with `m(x) < m(x̄)`.
    pub dominance_violation: Option<usize>,
    pub dense: bool,
    pub sparse_variable: Option<usize>,
    pub in_i1star: bool,
    pub i2: Vec<I2Level>,
    pub in_i2star: bool,
    pub i3: I3Verdict,
    pub in_i3star: bool,
}

fn check_k(f: &Formula, p: &ClassifierParams) -> Result<(), StabilityError> {
    if f.k() != p.k {
        return Err(StabilityError::KMismatch {
            formula_k: f.k(),
            params_k: p.k,
        });
    }
    Ok(())
}

pub fn classify_i1star(
    f: &Formula,
    p: &ClassifierParams,
    cap: usize,
) -> Result<ClassifierVerdict, StabilityError> {
    check_k(f, p)?;
    let n = f.n();
    let report = is_minimal(f, cap)?;
    let non_minimal_clause = report.witnesses.iter().position(Option::is_none);
    let non_monotone = f.clauses().iter().filter(|c| !c.is_monotone()).count() as u64;
    let nearly_monotone = count_le(non_monotone, &p.zeta, &pow_big(n as u64, f.k() as u64));
    let zn = BigUint::from(n);
    let heavy_clause = report.witnesses.iter().position(|w| {
        w.as_ref()
            .is_some_and(|w| !count_lt(u64::from(w.weight()), &p.zeta, &zn))
    });
    let sparsely_minimal = report.minimal && heavy_clause.is_none();
    let (pos, neg) = literal_occurrences(f);
    let dominance_violation = (0..n).find(|&v| pos[v] < neg[v]);
    let sparse_variable = dense_violation(f, &p.zeta_prime).map(|(v, _)| v);
    let in_i1star = report.minimal
        && nearly_monotone
        && sparsely_minimal
        && dominance_violation.is_none()
        && sparse_variable.is_none();
    let i2 = check_i2(f, p)?;
    let in_i2star = in_i1star && i2.iter().all(|l| l.passed);
    let i3 = check_i3(f, I3_BUDGET)?;
    let in_i3star = in_i2star && i3.passed;
    Ok(ClassifierVerdict {
        minimal: report.minimal,
        non_minimal_clause,
        nearly_monotone,
        non_monotone_clauses: non_monotone,
        sparsely_minimal,
        heavy_clause,
        positive_dominant: dominance_violation.is_none(),
        dominance_violation,
        dense: sparse_variable.is_none(),
        sparse_variable,
        in_i1star,
        i2,
        in_i2star,
        i3,
        in_i3star,
    })
}

/// For each `i` in `1..=max(1, k-2)`: every `i`-set `U` of variables heads
/// at most `β_i n^{k-i}` clauses whose negated literals are exactly `U`.
pub fn check_i2(f: &Formula, p: &ClassifierParams) -> Result<Vec<I2Level>, StabilityError> {
    check_k(f, p)?;
    let (n, k) = (f.n() as u64, f.k());
    let mut by_negs: BTreeMap<u64, u64> = BTreeMap::new();
    for c in f.clauses() {
        *by_negs.entry(c.negs()).or_insert(0) += 1;
    }
    let levels = (1..=beta_len(k))
        .map(|i| {
            let scale = pow_big(n, (k - i) as u64);
            let beta = &p.beta[i - 1];
            let mut level = I2Level {
                i,
                passed: true,
                max_count: 0,
                witness: None,
            };
            for (&negs, &count) in by_negs.iter().filter(|(m, _)| m.count_ones() as usize == i) {
                level.max_count = level.max_count.max(count);
                if !count_le(count, beta, &scale) && level.witness.is_none() {
                    level.passed = false;
                    level.witness = Some(elements_vec(negs));
                }
            }
            level
        })
        .collect();
    Ok(levels)
}

/// For every `k`-set `u` of variables and every choice of `M_{u_j}` among
/// the monotone link of `u_j` in `X∖u` and its complement, the intersection
/// has at least `C(n-k, k-1)/2^{k+1}` members.
pub fn check_i3(f: &Formula, budget: u128) -> Result<I3Verdict, StabilityError> {
    let (n, k) = (f.n(), f.k());
    if n < k {
        return Ok(I3Verdict {
            passed: true,
            universe: 0,
            failures: 0,
            first_failure: None,
        });
    }
    let universe = binomial(n - k, k - 1);
    let words = (universe as usize).div_ceil(64).max(1);
    let needed = u128::from(binomial(n, k)) * (1u128 << k) * (k as u128) * words as u128;
    if needed > budget {
        return Err(StabilityError::BudgetExceeded { needed, budget });
    }
    let mut monotone: Vec<u64> = f
        .clauses()
        .iter()
        .filter(|c| c.is_monotone())
        .map(|c| c.vars())
        .collect();
    monotone.sort_unstable();
    let has = |m: u64| monotone.binary_search(&m).is_ok();
    let tail = if (universe as usize).is_multiple_of(64) {
        u64::MAX
    } else {
        (1u64 << (universe % 64)) - 1
    };
    let mut verdict = I3Verdict {
        passed: true,
        universe,
        failures: 0,
        first_failure: None,
    };
    let mut links = vec![vec![0u64; words]; k];
    let mut acc = vec![0u64; words];
    for u in Subsets::new(n, k) {
        let rest = low_mask(n) & !u;
        let members = elements_vec(u);
        for (j, &uj) in members.iter().enumerate() {
            links[j].iter_mut().for_each(|w| *w = 0);
            for (idx, s) in Subsets::new(n - k, k - 1).enumerate() {
                if has(deposit(s, rest) | 1 << uj) {
                    links[j][idx / 64] |= 1 << (idx % 64);
                }
            }
        }
        for choice in 0..(1u64 << k) {
            acc.iter_mut().for_each(|w| *w = u64::MAX);
            for (j, link) in links.iter().enumerate() {
                let flip = if choice >> j & 1 == 1 { u64::MAX } else { 0 };
                for (a, l) in acc.iter_mut().zip(link) {
                    *a &= l ^ flip;
                }
            }
            acc[words - 1] &= tail;
            if universe == 0 {
                acc.iter_mut().for_each(|w| *w = 0);
            }
            let size: u64 = acc.iter().map(|w| u64::from(w.count_ones())).sum();
            // size >= universe / 2^{k+1}
            if (u128::from(size) << (k + 1)) < u128::from(universe) {
                verdict.passed = false;
                verdict.failures += 1;
                if verdict.first_failure.is_none() {
                    verdict.first_failure = Some(I3Failure {
                        vars: members.clone(),
                        complemented: choice,
                        size,
                    });
                }
            }
        }
    }
    Ok(verdict)
}

/// Key for a clause with one negative literal removed: `(vars, negs)` of
/// the remaining `k-1` literals.
type PartialClause = (u64, u64);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMinimalityReport {
    /// The formula is ζ-sparsely minimal, the hypothesis the proofs use.
    pub precondition: bool,
    /// Largest number of `w` with `z_1⋯z_{k-1} w̄` in the formula.
    pub a_max: u64,
    /// `a_max <= ζn`.
    pub a_holds: bool,
    /// The first `(k-1)`-literal set over `ζn`, as `(vars, negs)` masks.
    pub a_witness: Option<PartialClause>,
    /// The bound the proof of (a) establishes: `count - 1 + #positive(z) < ζn`.
    pub a_proof_bound_holds: bool,
    /// Largest count of clauses with positive `v` and exactly `j` negative
    /// literals, over `v` and `j ∈ 1..k`.
    pub b_max: u64,
    pub b_holds: bool,
    /// Same with negative `v̄` and `j` other negative literals.
    pub c_max: u64,
    pub c_holds: bool,
    /// Precondition met but the proof-derived bound fails: an implementation bug.
    pub consistency_violation: bool,
}

impl SparseMinimalityReport {
    pub fn holds(&self) -> bool {
        self.a_holds && self.b_holds && self.c_holds
    }
}

pub fn check_sparse_minimality(
    f: &Formula,
    zeta: &Rational,
    cap: usize,
) -> Result<SparseMinimalityReport, StabilityError> {
    let (n, k) = (f.n(), f.k());
    let report = is_minimal(f, cap)?;
    let zn = BigUint::from(n);
    let precondition = report.minimal
        && report
            .witnesses
            .iter()
            .flatten()
            .all(|w| count_lt(u64::from(w.weight()), zeta, &zn));

    let mut partial: BTreeMap<PartialClause, u64> = BTreeMap::new();
    let mut b_counts: BTreeMap<(usize, u32), u64> = BTreeMap::new();
    let mut c_counts: BTreeMap<(usize, u32), u64> = BTreeMap::new();
    for c in f.clauses() {
        for w in elements(c.negs()) {
            let bit = 1u64 << w;
            *partial
                .entry((c.vars() & !bit, c.negs() & !bit))
                .or_insert(0) += 1;
        }
        let j = c.negs().count_ones();
        if j >= 1 {
            for v in elements(c.pos()) {
                *b_counts.entry((v, j)).or_insert(0) += 1;
            }
        }
        for v in elements(c.negs()) {
            if j >= 2 {
                *c_counts.entry((v, j - 1)).or_insert(0) += 1;
            }
        }
    }
    let mut a_max = 0;
    let mut a_witness = None;
    let mut a_proof_bound_holds = true;
    for (&(vars, negs), &count) in &partial {
        a_max = a_max.max(count);
        if !count_le(count, zeta, &zn) && a_witness.is_none() {
            a_witness = Some((vars, negs));
        }
        let forced = count - 1 + u64::from((vars & !negs).count_ones());
        if !count_lt(forced, zeta, &zn) {
            a_proof_bound_holds = false;
        }
    }
    let scale = pow_big(n as u64, k as u64 - 1);
    let b_max = b_counts.values().copied().max().unwrap_or(0);
    let c_max = c_counts.values().copied().max().unwrap_or(0);
    Ok(SparseMinimalityReport {
        precondition,
        a_max,
        a_holds: a_witness.is_none(),
        a_witness,
        a_proof_bound_holds,
        b_max,
        b_holds: count_le(b_max, zeta, &scale),
        c_max,
        c_holds: count_le(c_max, zeta, &scale),
        consistency_violation: precondition && !a_proof_bound_holds,
    })
}

/// Unate after deleting at most `ρ n^k` clauses.
pub fn nearly_unate_gap(
    f: &Formula,
    rho: &Rational,
    mode: DistanceMode,
) -> Result<bool, StabilityError> {
    let d = unate_distance(f, mode)?;
    Ok(count_le(
        d.distance,
        rho,
        &pow_big(f.n() as u64, f.k() as u64),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::syntax::negate_variables;
    use crate::formula::{Clause, SignVector};
    use crate::semantics::DEFAULT_TABLE_CAP;

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    fn dimacs(n: usize, k: usize, cl: &[&[i64]]) -> Formula {
        Formula::from_dimacs(n, k, cl).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(ClassifierParams::new(2, r(1, 2), r(1, 2), r(1, 2), vec![r(1, 2)]).is_ok());
        assert!(ClassifierParams::new(4, r(1, 2), r(1, 2), r(1, 2), vec![r(1, 2)]).is_err());
        assert!(ClassifierParams::new(3, r(0, 1), r(1, 2), r(1, 2), vec![r(1, 2)]).is_err());
        assert!(ClassifierParams::new(3, r(3, 2), r(1, 2), r(1, 2), vec![r(1, 2)]).is_err());
    }

    #[test]
    fn complete_monotone_is_dense_and_dominant() {
        let f = Formula::complete_monotone(6, 3).unwrap();
        let p = ClassifierParams::with_zeta(3, r(1, 30)).unwrap();
        let v = classify_i1star(&f, &p, DEFAULT_TABLE_CAP).unwrap();
        assert!(v.nearly_monotone && v.dense && v.positive_dominant && v.minimal);
        assert!(v.i2.iter().all(|l| l.passed && l.max_count == 0));
        // complements of full links are empty
        assert!(!v.i3.passed);
        assert_eq!(v.i3.first_failure.as_ref().unwrap().complemented & 1, 1);
    }

    #[test]
    fn unused_variable_breaks_density() {
        let f = dimacs(4, 2, &[&[1, 2], &[1, 3], &[2, 3]]);
        let p = ClassifierParams::with_zeta(2, r(1, 2)).unwrap();
        let v = classify_i1star(&f, &p, DEFAULT_TABLE_CAP).unwrap();
        assert!(!v.dense);
        assert_eq!(v.sparse_variable, Some(3));
        assert!(!v.in_i1star);
    }

    #[test]
    fn i2_failure_witness() {
        // beta_1 n^{k-1} = 1/16 * 4^2 = 1; two clauses x̄1 v w exceed it
        let f = dimacs(4, 3, &[&[-1, 2, 3], &[-1, 2, 4], &[2, 3, 4]]);
        let p = ClassifierParams::new(3, r(1, 2), r(1, 2), r(1, 2), vec![r(1, 16)]).unwrap();
        let levels = check_i2(&f, &p).unwrap();
        assert_eq!(levels.len(), 1);
        assert!(!levels[0].passed);
        assert_eq!(levels[0].witness, Some(vec![0]));
        let loose = ClassifierParams::new(3, r(1, 2), r(1, 2), r(1, 2), vec![r(1, 8)]).unwrap();
        assert!(check_i2(&f, &loose).unwrap()[0].passed);
    }

    #[test]
    fn i3_small_universe_is_vacuous() {
        // n - k < k - 1 gives C(n-k, k-1) = 0
        let f = Formula::complete_monotone(4, 3).unwrap();
        let v = check_i3(&f, I3_BUDGET).unwrap();
        assert_eq!(v.universe, 0);
        assert!(v.passed);
    }

    #[test]
    fn i3_matches_set_oracle() {
        let f = dimacs(
            6,
            2,
            &[
                &[1, 3],
                &[1, 4],
                &[2, 4],
                &[2, 5],
                &[3, 6],
                &[5, 6],
                &[1, 6],
            ],
        );
        let v = check_i3(&f, I3_BUDGET).unwrap();
        let mut failures = 0;
        for u1 in 0..6usize {
            for u2 in u1 + 1..6 {
                let rest: Vec<usize> = (0..6).filter(|&x| x != u1 && x != u2).collect();
                let link = |u: usize| -> Vec<bool> {
                    rest.iter()
                        .map(|&s| f.contains(&Clause::monotone((1 << u) | (1 << s))))
                        .collect()
                };
                let (l1, l2) = (link(u1), link(u2));
                for choice in 0..4u32 {
                    let size = (0..rest.len())
                        .filter(|&i| l1[i] != (choice & 1 == 1) && l2[i] != (choice & 2 == 2))
                        .count();
                    if size * 8 < rest.len() {
                        failures += 1;
                    }
                }
            }
        }
        assert_eq!(v.failures, failures);
    }

    #[test]
    fn lemma_a_as_stated_fails_at_fractional_threshold() {
        // x̄1 pairs with three negated partners; ζn = 5/2
        let f = dimacs(
            4,
            2,
            &[&[-1, -2], &[-1, -3], &[-1, -4], &[1, 2], &[1, 3], &[1, 4]],
        );
        let zeta = r(5, 8);
        let p = ClassifierParams::with_zeta(2, zeta).unwrap();
        let v = classify_i1star(&f, &p, DEFAULT_TABLE_CAP).unwrap();
        assert!(v.in_i1star);
        let rep = check_sparse_minimality(&f, &zeta, DEFAULT_TABLE_CAP).unwrap();
        assert_eq!(rep.a_max, 3);
        assert!(!rep.a_holds);
        assert!(rep.a_proof_bound_holds);
        assert!(!rep.consistency_violation);
    }

    #[test]
    fn lemma_on_monotone_formula() {
        let f = Formula::complete_monotone(5, 3).unwrap();
        let rep = check_sparse_minimality(&f, &r(1, 10), DEFAULT_TABLE_CAP).unwrap();
        assert!(rep.holds());
        assert_eq!((rep.a_max, rep.b_max, rep.c_max), (0, 0, 0));
    }

    #[test]
    fn nearly_unate_examples() {
        let f = dimacs(3, 2, &[&[1, 2], &[-1, -2]]);
        let exact = DistanceMode::default();
        assert!(!nearly_unate_gap(&f, &r(1, 10), exact).unwrap());
        assert!(nearly_unate_gap(&f, &r(1, 9), exact).unwrap());
        assert!(nearly_unate_gap(&f, &r(1, 1), exact).unwrap());
        let u = negate_variables(
            &Formula::complete_monotone(4, 2).unwrap(),
            &SignVector::new(4, 0b0101),
        );
        assert!(nearly_unate_gap(&u, &r(1, 1000), exact).unwrap());
    }
}
