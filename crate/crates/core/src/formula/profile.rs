use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::syntax::support_groups;
use super::Formula;
use crate::combin::binomial_big;
use crate::exact::Rational;

/// Multiplicity profile of a formula over all k-subsets of variables.
///
/// `counts[i]` is the number of k-subsets supporting exactly `i` clauses. The
/// weight `Σ log₂(i+1)·counts[i] / C(n,k)` is never materialised as a float:
/// it is compared through `Π (i+1)^counts[i] = 2^{wt·C(n,k)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaProfile {
    pub n: usize,
    pub k: usize,
    pub counts: Vec<u64>,
    /// Two-clause supports whose clauses differ in exactly one negation.
    pub a2_prime: u64,
    /// `counts[2] - a2_prime`.
    pub a2_doubleprime: u64,
    /// `C(n, k)`.
    pub total: BigUint,
}

pub fn alpha_profile(f: &Formula) -> AlphaProfile {
    let total = binomial_big(f.n() as u64, f.k() as u64);
    let mut counts = vec![0u64; 3];
    let mut supported = 0u64;
    let mut a2_prime = 0u64;
    for g in support_groups(f) {
        if g.len() >= counts.len() {
            counts.resize(g.len() + 1, 0);
        }
        counts[g.len()] += 1;
        supported += 1;
        if g.len() == 2 && (g[0].negs() ^ g[1].negs()).count_ones() == 1 {
            a2_prime += 1;
        }
    }
    let empty = &total - BigUint::from(supported);
    counts[0] = u64::try_from(&empty).expect("C(n,k) exceeds u64");
    let a2_doubleprime = counts[2] - a2_prime;
    AlphaProfile {
        n: f.n(),
        k: f.k(),
        counts,
        a2_prime,
        a2_doubleprime,
        total,
    }
}

impl AlphaProfile {
    pub fn count(&self, i: usize) -> u64 {
        self.counts.get(i).copied().unwrap_or(0)
    }

    /// `Σ i·counts[i]`, the number of clauses.
    pub fn clause_count(&self) -> u64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(i, c)| i as u64 * c)
            .sum()
    }

    /// Number of simple subformulae, `Π (i+1)^counts[i]`.
    pub fn simple_subformula_count(&self) -> BigUint {
        self.counts
            .iter()
            .enumerate()
            .skip(1)
            .fold(BigUint::one(), |acc, (i, &c)| {
                acc * num_traits::pow::pow(BigUint::from(i as u64 + 1), c as usize)
            })
    }

    /// Exact test of `wt(G) <= bound` via `Π^q <= 2^{p·C(n,k)}` for `bound = p/q`.
    pub fn weight_at_most(&self, bound: &Rational) -> bool {
        let p = *bound.numer();
        let q = *bound.denom();
        if p < 0 {
            return false;
        }
        if self.total.is_zero() {
            return true;
        }
        let lhs = num_traits::pow::pow(self.simple_subformula_count(), q as usize);
        let exp = BigUint::from(p as u64) * &self.total;
        cmp_with_power_of_two(&lhs, &exp) != Ordering::Greater
    }

    /// Compare weights of two profiles exactly.
    pub fn cmp_weight(&self, other: &AlphaProfile) -> Ordering {
        // wt1 vs wt2  <=>  P1^{C2} vs P2^{C1}
        let c1 = usize::try_from(&self.total).expect("C(n,k) too large");
        let c2 = usize::try_from(&other.total).expect("C(n,k) too large");
        // an empty k-subset universe has weight zero
        let zero_weight = |p: &AlphaProfile, c| c == 0 || p.simple_subformula_count().is_one();
        match (c1 == 0, c2 == 0) {
            (true, true) => return Ordering::Equal,
            (true, false) => {
                return if zero_weight(other, c2) {
                    Ordering::Equal
                } else {
                    Ordering::Less
                }
            }
            (false, true) => {
                return if zero_weight(self, c1) {
                    Ordering::Equal
                } else {
                    Ordering::Greater
                }
            }
            _ => {}
        }
        let a = num_traits::pow::pow(self.simple_subformula_count(), c2);
        let b = num_traits::pow::pow(other.simple_subformula_count(), c1);
        a.cmp(&b)
    }

    /// `floor(scale · wt)`, for display.
    pub fn weight_floor_scaled(&self, scale: u32) -> u64 {
        let c = u64::try_from(&self.total).expect("C(n,k) too large");
        if c == 0 {
            return 0;
        }
        let powered = num_traits::pow::pow(self.simple_subformula_count(), scale as usize);
        // largest t with 2^{t·c} <= powered, i.e. t = floor(log2(powered) / c)
        let log_floor = powered.bits().saturating_sub(1);
        log_floor / c
    }
}

fn cmp_with_power_of_two(x: &BigUint, exp: &BigUint) -> Ordering {
    let e = u64::try_from(exp).expect("exponent too large");
    // x is compared to 2^e
    let bits = x.bits();
    if x.is_zero() {
        return Ordering::Less;
    }
    if bits <= e {
        Ordering::Less
    } else if bits > e + 1 {
        Ordering::Greater
    } else if x.trailing_zeros() == Some(e) {
        Ordering::Equal
    } else {
        Ordering::Greater
    }
}
