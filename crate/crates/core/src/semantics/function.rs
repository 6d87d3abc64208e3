use alloc::vec::Vec;

use super::{check_cap, cube_points, prime_implicants, SemanticsError, TruthTable, IMPLICANT_CAP};
use crate::combin::Subsets;
use crate::formula::SignVector;

/// How a function depends on one variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Does not depend on the variable.
    Constant,
    Nondecreasing,
    Nonincreasing,
    Neither,
}

/// Pointwise flags (`monotone_fn`, `unate_fn`) only look at how the function
/// moves with each variable. The `*_formula` flags ask for an actual k-SAT
/// formula of that kind: `x1 = x1x2 ∨ x1x̄2` is pointwise monotone but has no
/// monotone 2-SAT formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionFlags {
    pub monotone_fn: bool,
    pub unate_fn: Option<SignVector>,
    pub monotone_formula: bool,
    pub unate_formula: Option<SignVector>,
    pub k_expressible: bool,
    /// `None` for the constant-zero function.
    pub max_prime_implicant_width: Option<usize>,
}

pub fn variable_directions(t: &TruthTable) -> Vec<Direction> {
    (0..t.n())
        .map(|v| {
            let bit = 1u64 << v;
            let (mut up, mut down) = (false, false);
            for a in (0..1u64 << t.n()).filter(|a| a & bit == 0) {
                match (t.get(a), t.get(a | bit)) {
                    (false, true) => up = true,
                    (true, false) => down = true,
                    _ => {}
                }
            }
            match (up, down) {
                (false, false) => Direction::Constant,
                (true, false) => Direction::Nondecreasing,
                (false, true) => Direction::Nonincreasing,
                (true, true) => Direction::Neither,
            }
        })
        .collect()
}

/// Whether `t` is the union of the width-k cubes inside it whose signs
/// agree with the negation mask `neg`.
fn spanned_by_signs(t: &TruthTable, k: usize, neg: u64) -> bool {
    let n = t.n();
    if n < k {
        return t.is_zero();
    }
    let mut union = TruthTable::zero(n);
    for s in Subsets::new(n, k) {
        let pos = s & !neg;
        if cube_points(n, s, pos).all(|a| t.get(a)) {
            for a in cube_points(n, s, pos) {
                union.set(a);
            }
        }
    }
    union == *t
}

/// Function-level flags. A nonzero function is k-expressible when it has
/// at least `k` variables and its prime implicants of width at most `k`
/// already cover it (each such implicant is a union of width-k cubes).
pub fn classify_function(t: &TruthTable, k: usize) -> Result<FunctionFlags, SemanticsError> {
    check_cap(t.n(), IMPLICANT_CAP)?;
    let dirs = variable_directions(t);
    let monotone_fn = dirs
        .iter()
        .all(|d| matches!(d, Direction::Constant | Direction::Nondecreasing));
    let unate_fn = dirs.iter().all(|d| *d != Direction::Neither).then(|| {
        let neg = dirs
            .iter()
            .enumerate()
            .filter(|(_, d)| **d == Direction::Nonincreasing)
            .fold(0u64, |m, (v, _)| m | 1 << v);
        SignVector::new(t.n(), !neg)
    });
    let monotone_formula = spanned_by_signs(t, k, 0);
    let unate_formula = unate_fn.filter(|sv| spanned_by_signs(t, k, sv.negated()));
    let primes = prime_implicants(t)?;
    let max_prime_implicant_width = primes.iter().map(|p| p.width()).max();
    let k_expressible = if t.is_zero() {
        true
    } else if t.n() < k {
        false
    } else {
        let short: Vec<_> = primes.iter().filter(|p| p.width() <= k).collect();
        t.ones().all(|a| short.iter().any(|p| p.contains(a)))
    };
    Ok(FunctionFlags {
        monotone_fn,
        unate_fn,
        monotone_formula,
        unate_formula,
        k_expressible,
        max_prime_implicant_width,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula;
    use crate::semantics::{truth_table, DEFAULT_TABLE_CAP};

    #[test]
    fn negated_literal() {
        let t = TruthTable::from_word(1, 0b01);
        let flags = classify_function(&t, 2).unwrap();
        assert!(!flags.monotone_fn);
        assert_eq!(flags.unate_fn, Some(SignVector::new(1, 0)));
    }

    #[test]
    fn xor_and_majority() {
        let xor = classify_function(&TruthTable::from_word(2, 0b0110), 2).unwrap();
        assert!(xor.unate_fn.is_none());
        assert!(xor.k_expressible);
        assert_eq!(xor.max_prime_implicant_width, Some(2));
        let maj = classify_function(&TruthTable::from_fn(3, |a| a.count_ones() >= 2), 2).unwrap();
        assert!(maj.monotone_fn && maj.k_expressible && maj.monotone_formula);
    }

    #[test]
    fn pointwise_versus_formula() {
        let x1 = classify_function(&TruthTable::from_fn(3, |a| a & 1 == 1), 2).unwrap();
        assert!(x1.monotone_fn && x1.k_expressible);
        assert!(!x1.monotone_formula);
        assert_eq!(x1.unate_formula, None);
        let g = Formula::from_dimacs(3, 2, &[&[-1, 2], &[2, 3]]).unwrap();
        let flags = classify_function(&truth_table(&g, DEFAULT_TABLE_CAP).unwrap(), 2).unwrap();
        assert_eq!(flags.unate_formula, Some(SignVector::new(3, !1)));
    }

    #[test]
    fn wide_prime_implicant_can_still_be_expressible() {
        // x1ab ∨ x̄1cd has the consensus abcd as a width-4 prime implicant
        let g = Formula::from_dimacs(5, 3, &[&[1, 2, 3], &[-1, 4, 5]]).unwrap();
        let flags = classify_function(&truth_table(&g, DEFAULT_TABLE_CAP).unwrap(), 3).unwrap();
        assert_eq!(flags.max_prime_implicant_width, Some(4));
        assert!(flags.k_expressible);
    }

    #[test]
    fn not_expressible() {
        let and3 = TruthTable::from_fn(3, |a| a == 7);
        assert!(!classify_function(&and3, 2).unwrap().k_expressible);
        assert!(
            classify_function(&TruthTable::zero(1), 2)
                .unwrap()
                .k_expressible
        );
        assert!(
            !classify_function(&TruthTable::from_word(1, 0b10), 2)
                .unwrap()
                .k_expressible
        );
    }
}
