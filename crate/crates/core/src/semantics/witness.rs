use alloc::vec;
use alloc::vec::Vec;

use super::{check_cap, cube_points, Assignment, SemanticsError};
use crate::combin::{deposit, low_mask, Subsets};
use crate::exact::{count_lt, Rational};
use crate::formula::{Clause, Formula};

/// Per-clause witness report. `witnesses[i]` is the first witness of clause
/// `i` in (Hamming weight, assignment index) order, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalityReport {
    pub minimal: bool,
    pub witnesses: Vec<Option<Assignment>>,
}

/// Number of satisfied clauses per assignment, saturated at 2.
fn coverage(f: &Formula) -> Vec<u8> {
    let mut cov = vec![0u8; 1usize << f.n()];
    for c in f.clauses() {
        for a in cube_points(f.n(), c.vars(), c.pos()) {
            let slot = &mut cov[a as usize];
            *slot = (*slot + 1).min(2);
        }
    }
    cov
}

fn first_private_point(n: usize, c: &Clause, cov: &[u8]) -> Option<Assignment> {
    let free = low_mask(n) & !c.vars();
    let r = free.count_ones() as usize;
    for w in 0..=r {
        for compact in Subsets::new(r, w) {
            let a = deposit(compact, free) | c.pos();
            if cov[a as usize] == 1 {
                return Some(Assignment { n, bits: a });
            }
        }
    }
    None
}

/// An assignment satisfying clause `i` and no other clause.
pub fn witness(f: &Formula, i: usize, cap: usize) -> Result<Option<Assignment>, SemanticsError> {
    check_cap(f.n(), cap)?;
    let c = f.clauses().get(i).ok_or(SemanticsError::ClauseIndex {
        index: i,
        len: f.len(),
    })?;
    let cov = coverage(f);
    Ok(first_private_point(f.n(), c, &cov))
}

pub fn is_minimal(f: &Formula, cap: usize) -> Result<MinimalityReport, SemanticsError> {
    check_cap(f.n(), cap)?;
    let cov = coverage(f);
    let witnesses: Vec<_> = f
        .clauses()
        .iter()
        .map(|c| first_private_point(f.n(), c, &cov))
        .collect();
    let minimal = witnesses.iter().all(Option::is_some);
    Ok(MinimalityReport { minimal, witnesses })
}

/// Minimal, and every clause has a witness of weight `< zeta * n`.
/// The reported witnesses already have minimum weight, so checking them suffices.
pub fn is_sparsely_minimal(
    f: &Formula,
    zeta: &Rational,
    cap: usize,
) -> Result<bool, SemanticsError> {
    let report = is_minimal(f, cap)?;
    let n = num_bigint::BigUint::from(f.n());
    Ok(report.minimal
        && report
            .witnesses
            .iter()
            .flatten()
            .all(|w| count_lt(u64::from(w.weight()), zeta, &n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::blowup;
    use crate::semantics::{truth_table, DEFAULT_TABLE_CAP};

    fn f(n: usize, k: usize, cs: &[&[i64]]) -> Formula {
        Formula::from_dimacs(n, k, cs).unwrap()
    }

    #[test]
    fn single_clause() {
        let g = f(2, 2, &[&[1, 2]]);
        assert_eq!(
            witness(&g, 0, 24).unwrap(),
            Some(Assignment { n: 2, bits: 0b11 })
        );
        assert!(is_minimal(&g, 24).unwrap().minimal);
        assert!(matches!(
            witness(&g, 1, 24),
            Err(SemanticsError::ClauseIndex { .. })
        ));
    }

    #[test]
    fn wxyz_example() {
        // w=1, x=2, y=3, z=4: {wx, wy, x z̄, ȳ z}
        let g = f(4, 2, &[&[1, 2], &[1, 3], &[2, -4], &[-3, 4]]);
        let wx = g
            .clauses()
            .iter()
            .position(|c| c.vars() == 0b11 && c.negs() == 0)
            .unwrap();
        assert_eq!(witness(&g, wx, 24).unwrap(), None);
        assert!(!is_minimal(&g, 24).unwrap().minimal);
    }

    #[test]
    fn weight_then_index_order() {
        let g = f(4, 2, &[&[1, 2], &[3, 4]]);
        let w = witness(&g, 0, 24).unwrap().unwrap();
        assert_eq!(w.bits, 0b0011);
        let w = witness(&g, 1, 24).unwrap().unwrap();
        assert_eq!(w.bits, 0b1100);
    }

    #[test]
    fn sparse_boundary() {
        let g = f(2, 2, &[&[1, 2]]);
        assert!(!is_sparsely_minimal(&g, &Rational::from_integer(1), 24).unwrap());
        assert!(is_sparsely_minimal(&g, &Rational::new(3, 2), 24).unwrap());
    }

    #[test]
    fn pair_blowup_not_minimal() {
        let pair = f(3, 3, &[&[1, 2, 3], &[1, 2, -3]]);
        let b = blowup(&pair, 2).unwrap();
        assert!(!is_minimal(&b, 24).unwrap().minimal);
    }

    #[test]
    fn agrees_with_deletion_oracle() {
        let g = f(
            5,
            2,
            &[&[1, 2], &[-1, 3], &[2, 3], &[-4, 5], &[1, -5], &[3, 4]],
        );
        let full = truth_table(&g, DEFAULT_TABLE_CAP).unwrap();
        let report = is_minimal(&g, 24).unwrap();
        for i in 0..g.len() {
            let without = truth_table(&g.without_clause(i).unwrap(), DEFAULT_TABLE_CAP).unwrap();
            assert_eq!(report.witnesses[i].is_some(), without != full, "clause {i}");
        }
    }
}
