use alloc::vec::Vec;

use super::{check_cap, SemanticsError, TruthTable, IMPLICANT_CAP};
use crate::combin::low_mask;

/// A cube: the variables in `vars` are fixed, those in `negs` to 0 and the
/// rest of `vars` to 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Implicant {
    pub vars: u64,
    pub negs: u64,
}

impl Implicant {
    pub fn width(&self) -> usize {
        self.vars.count_ones() as usize
    }

    pub fn pos(&self) -> u64 {
        self.vars & !self.negs
    }

    pub fn contains(&self, a: u64) -> bool {
        a & self.vars == self.pos()
    }
}

/// All prime implicants of `t` (Quine–McCluskey), sorted.
pub fn prime_implicants(t: &TruthTable) -> Result<Vec<Implicant>, SemanticsError> {
    check_cap(t.n(), IMPLICANT_CAP)?;
    let full = low_mask(t.n());
    // (care mask, value) pairs, value ⊆ care
    let mut level: Vec<(u64, u64)> = t.ones().map(|a| (full, a)).collect();
    let mut primes = Vec::new();
    while !level.is_empty() {
        level.sort_unstable();
        level.dedup();
        let mut next = Vec::new();
        for &(care, value) in &level {
            let mut merged = false;
            let mut bits = care;
            while bits != 0 {
                let b = bits & bits.wrapping_neg();
                bits &= bits - 1;
                if level.binary_search(&(care, value ^ b)).is_ok() {
                    merged = true;
                    if value & b == 0 {
                        next.push((care & !b, value));
                    }
                }
            }
            if !merged {
                primes.push(Implicant {
                    vars: care,
                    negs: care & !value,
                });
            }
        }
        level = next;
    }
    primes.sort_unstable();
    Ok(primes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_functions() {
        let x1 = TruthTable::from_fn(2, |a| a & 1 == 1);
        assert_eq!(
            prime_implicants(&x1).unwrap(),
            [Implicant { vars: 1, negs: 0 }]
        );
        let one = TruthTable::from_fn(2, |_| true);
        assert_eq!(
            prime_implicants(&one).unwrap(),
            [Implicant { vars: 0, negs: 0 }]
        );
        assert!(prime_implicants(&TruthTable::zero(3)).unwrap().is_empty());
    }

    #[test]
    fn xor_and_majority() {
        let xor = TruthTable::from_word(2, 0b0110);
        assert_eq!(
            prime_implicants(&xor).unwrap(),
            [
                Implicant { vars: 3, negs: 1 },
                Implicant { vars: 3, negs: 2 }
            ]
        );
        let maj = TruthTable::from_fn(3, |a| a.count_ones() >= 2);
        let p = prime_implicants(&maj).unwrap();
        assert_eq!(p.len(), 3);
        assert!(p.iter().all(|i| i.width() == 2 && i.negs == 0));
    }

    #[test]
    fn primes_are_maximal_and_cover() {
        for word in [0x96u64, 0xe8, 0x3c, 0x7f, 0x81, 0x5a] {
            let t = TruthTable::from_word(3, word);
            let primes = prime_implicants(&t).unwrap();
            for a in 0..8 {
                assert_eq!(t.get(a), primes.iter().any(|p| p.contains(a)));
            }
            for p in &primes {
                // dropping any literal leaves f
                for v in 0..3 {
                    if p.vars >> v & 1 == 1 {
                        let wider = Implicant {
                            vars: p.vars & !(1 << v),
                            negs: p.negs & !(1 << v),
                        };
                        assert!((0..8).any(|a| wider.contains(a) && !t.get(a)));
                    }
                }
            }
        }
    }
}
