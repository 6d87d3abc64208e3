use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;

use super::{Clause, Formula, Literal, SignVector};
use crate::combin::{binomial_big, elements};
use crate::exact::{count_ge, Rational};

/// Syntactic structure flags of a formula, each computed independently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntacticFlags {
    /// No two clauses share a support.
    pub simple: bool,
    /// Every support carries at most two clauses, and pairs differ in exactly
    /// one negation.
    pub semisimple: bool,
    pub monotone: bool,
    /// A sign vector making the formula monotone, if one exists. Unused
    /// variables default to positive.
    pub unate: Option<SignVector>,
    /// `m(x) >= m(x̄)` for every variable.
    pub positive_dominant: bool,
}

/// Groups of clauses sharing a support, in canonical order.
pub(crate) fn support_groups(f: &Formula) -> impl Iterator<Item = &[Clause]> {
    f.clauses().chunk_by(|a, b| a.vars() == b.vars())
}

pub fn classify_syntactic(f: &Formula) -> SyntacticFlags {
    let mut simple = true;
    let mut semisimple = true;
    for g in support_groups(f) {
        match g.len() {
            1 => {}
            2 => {
                simple = false;
                if (g[0].negs() ^ g[1].negs()).count_ones() != 1 {
                    semisimple = false;
                }
            }
            _ => {
                simple = false;
                semisimple = false;
            }
        }
    }
    let monotone = f.clauses().iter().all(Clause::is_monotone);
    let (pos_used, neg_used) = f
        .clauses()
        .iter()
        .fold((0u64, 0u64), |(p, q), c| (p | c.pos(), q | c.negs()));
    let unate = (pos_used & neg_used == 0).then(|| SignVector::new(f.n(), !neg_used));
    let (pos, neg) = literal_occurrences(f);
    let positive_dominant = pos.iter().zip(&neg).all(|(p, q)| p >= q);
    SyntacticFlags {
        simple,
        semisimple,
        monotone,
        unate,
        positive_dominant,
    }
}

/// Occurrence counts `(m(x_i), m(x̄_i))` for every variable.
pub fn literal_occurrences(f: &Formula) -> (Vec<u64>, Vec<u64>) {
    let mut pos = vec![0u64; f.n()];
    let mut neg = vec![0u64; f.n()];
    for c in f.clauses() {
        for v in elements(c.pos()) {
            pos[v] += 1;
        }
        for v in elements(c.negs()) {
            neg[v] += 1;
        }
    }
    (pos, neg)
}

/// Number of clauses using each variable (either sign).
pub fn variable_usage(f: &Formula) -> Vec<u64> {
    let (pos, neg) = literal_occurrences(f);
    pos.iter().zip(&neg).map(|(a, b)| a + b).collect()
}

/// Replace `x_i` by `x̄_i` for every variable the sign vector marks as negated.
/// An involution; clause count is preserved.
pub fn negate_variables(f: &Formula, s: &SignVector) -> Formula {
    let flip = s.negated();
    Formula::new(
        f.n(),
        f.k(),
        f.clauses().iter().map(|c| c.flip(flip)).collect::<Vec<_>>(),
    )
    .expect("negation preserves validity")
}

/// Monotone link `N_u`: the (k-1)-sets `S` of other variables such that the
/// clause `u ∧ S` (all literals of `S` positive) belongs to the formula.
pub fn monotone_link(f: &Formula, u: Literal) -> Vec<u64> {
    let bit = 1u64 << u.var;
    let mut out: Vec<u64> = f
        .clauses()
        .iter()
        .filter(|c| c.contains(u) && c.negs() & !bit == 0)
        .map(|c| c.vars() & !bit)
        .collect();
    out.sort_unstable();
    out
}

/// Every variable is used by at least `ζ′·C(n-1, k-1)` clauses.
pub fn is_dense(f: &Formula, zeta_prime: &Rational) -> bool {
    dense_violation(f, zeta_prime).is_none()
}

/// First variable used by fewer than `ζ′·C(n-1, k-1)` clauses.
pub(crate) fn dense_violation(f: &Formula, zeta_prime: &Rational) -> Option<(usize, u64)> {
    let scale: BigUint = binomial_big(f.n().saturating_sub(1) as u64, (f.k() - 1) as u64);
    variable_usage(f)
        .into_iter()
        .enumerate()
        .find(|(_, used)| !count_ge(*used, zeta_prime, &scale))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: usize, k: usize, cs: &[&[i64]]) -> Formula {
        Formula::from_dimacs(n, k, cs).unwrap()
    }

    #[test]
    fn unate_examples() {
        let a = classify_syntactic(&f(3, 2, &[&[-1, 2], &[2, 3]]));
        let s = a.unate.expect("unate");
        assert!(!s.is_positive(0));
        assert!(s.is_positive(1) && s.is_positive(2));
        let b = classify_syntactic(&f(3, 2, &[&[-1, 2], &[1, 2], &[2, 3]]));
        assert!(b.unate.is_none());
        assert!(!b.monotone);
    }

    #[test]
    fn semisimple_examples() {
        let yes = classify_syntactic(&f(4, 3, &[&[1, -2, 3], &[1, -2, -3], &[1, 2, -4]]));
        assert!(yes.semisimple);
        assert!(!yes.simple);
        let no = classify_syntactic(&f(4, 3, &[&[1, -2, 3], &[1, 2, -3]]));
        assert!(!no.semisimple);
        let simple = classify_syntactic(&f(4, 3, &[&[1, 2, 3], &[1, 2, -4], &[2, 3, 4]]));
        assert!(simple.simple && simple.semisimple);
        let triple = classify_syntactic(&f(3, 2, &[&[1, 2], &[-1, 2], &[1, -2]]));
        assert!(!triple.semisimple);
    }

    #[test]
    fn positive_dominance() {
        assert!(classify_syntactic(&f(3, 2, &[&[1, 2], &[-1, 3]])).positive_dominant);
        assert!(!classify_syntactic(&f(3, 2, &[&[-1, 2], &[-1, 3]])).positive_dominant);
    }

    #[test]
    fn negation_is_involution() {
        let g = f(3, 2, &[&[-1, 2], &[2, 3]]);
        let s = SignVector::new(3, 0b110);
        let h = negate_variables(&g, &s);
        assert_eq!(h, f(3, 2, &[&[1, 2], &[2, 3]]));
        assert_eq!(negate_variables(&h, &s), g);
        assert_eq!(negate_variables(&g, &SignVector::all_positive(3)), g);
    }

    #[test]
    fn links() {
        let g = f(4, 3, &[&[1, 2, 3], &[-1, 2, 4]]);
        assert_eq!(monotone_link(&g, Literal::pos(0)), [0b0110]);
        assert_eq!(monotone_link(&g, Literal::neg(0)), [0b1010]);
        assert!(monotone_link(&g, Literal::pos(3)).is_empty());
    }

    #[test]
    fn density() {
        let complete = Formula::complete_monotone(5, 2).unwrap();
        assert!(is_dense(&complete, &Rational::from_integer(1)));
        let missing = f(4, 2, &[&[1, 2], &[2, 3], &[1, 3]]);
        assert!(!is_dense(&missing, &Rational::new(1, 100)));
        assert_eq!(
            dense_violation(&missing, &Rational::new(1, 100)),
            Some((3, 0))
        );
    }
}
