use alloc::vec::Vec;

use super::{Clause, Formula, FormulaError};
use crate::combin::elements;

/// The b-blowup `F[b]`: every variable `x_i` is replaced by `b` duplicates and
/// each clause by all `b^k` choices of duplicates, sign pattern copied.
///
/// Copy `j` of variable `i` is variable `i + j·n`, so copy 0 is the original
/// variable and `blowup(f, 1) == f`.
pub fn blowup(f: &Formula, b: usize) -> Result<Formula, FormulaError> {
    assert!(b >= 1, "blowup factor must be positive");
    let n = f.n();
    let big_n = n * b;
    if big_n > super::MAX_VARS {
        return Err(FormulaError::TooManyVariables { n: big_n });
    }
    let k = f.k();
    let mut out = Vec::with_capacity(f.len() * b.pow(k as u32));
    for c in f.clauses() {
        let vars: Vec<usize> = elements(c.vars()).collect();
        let mut choice = alloc::vec![0usize; k];
        loop {
            let mut vm = 0u64;
            let mut nm = 0u64;
            for (slot, &v) in vars.iter().enumerate() {
                let bit = 1u64 << (v + choice[slot] * n);
                vm |= bit;
                if c.negs() >> v & 1 == 1 {
                    nm |= bit;
                }
            }
            out.push(Clause::from_masks(vm, nm));
            // odometer over duplicate choices
            let mut i = 0;
            while i < k {
                choice[i] += 1;
                if choice[i] < b {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
        }
    }
    Formula::new(big_n, k, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Literal;

    #[test]
    fn two_blowup_matches_listing() {
        // G = {x1x2x3, x1x̄3x4}; primes are variables +4 (n = 4)
        let g = Formula::from_dimacs(4, 3, &[&[1, 2, 3], &[1, -3, 4]]).unwrap();
        let g2 = blowup(&g, 2).unwrap();
        assert_eq!(g2.n(), 8);
        assert_eq!(g2.len(), 16);
        let p = |v: i64| v + 4;
        let expected: &[&[i64]] = &[
            &[1, 2, 3],
            &[1, 2, p(3)],
            &[1, p(2), 3],
            &[1, p(2), p(3)],
            &[p(1), 2, 3],
            &[p(1), 2, p(3)],
            &[p(1), p(2), 3],
            &[p(1), p(2), p(3)],
            &[1, -3, 4],
            &[1, -3, p(4)],
            &[1, -p(3), 4],
            &[1, -p(3), p(4)],
            &[p(1), -3, 4],
            &[p(1), -3, p(4)],
            &[p(1), -p(3), 4],
            &[p(1), -p(3), p(4)],
        ];
        assert_eq!(g2, Formula::from_dimacs(8, 3, expected).unwrap());
    }

    #[test]
    fn identity_and_counts() {
        let g = Formula::from_dimacs(3, 2, &[&[1, -2], &[2, 3]]).unwrap();
        assert_eq!(blowup(&g, 1).unwrap(), g);
        let single = Formula::from_dimacs(2, 2, &[&[1, 2]]).unwrap();
        let b3 = blowup(&single, 3).unwrap();
        assert_eq!(b3.len(), 9);
        assert!(b3
            .clauses()
            .iter()
            .all(|c| c.literals().all(|l: Literal| !l.negated)));
    }
}
