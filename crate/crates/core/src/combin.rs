//! Binomial coefficients and k-subsets of a small ground set.
//!
//! Subsets of `{0, .., n-1}` with `n <= 64` are stored as `u64` bit masks.
//! For a fixed cardinality, numeric order of masks coincides with colex order,
//! so [`Subsets`] (Gosper's hack) yields k-subsets in colex order and
//! [`colex_rank`] is the position in that sequence.

use alloc::vec::Vec;
use num_bigint::BigUint;
use num_traits::One;

/// `C(n, k)` in 128-bit arithmetic. Returns `None` on overflow.
pub fn binomial_checked(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is always divisible by (i + 1) at this point.
        acc = acc.checked_mul(u128::from(n - i))? / u128::from(i + 1);
    }
    Some(acc)
}

/// `C(n, k)` for the desk-scale parameters used throughout the crate.
///
/// Panics if the value does not fit in a `u64`.
pub fn binomial(n: usize, k: usize) -> u64 {
    let v = binomial_checked(n as u64, k as u64).expect("binomial overflow");
    u64::try_from(v).expect("binomial overflow")
}

pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn factorial_big(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Mask with the lowest `n` bits set.
#[inline]
pub const fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterator over all k-subsets of `{0, .., n-1}` in colex order.
#[derive(Clone, Debug)]
pub struct Subsets {
    next: Option<u64>,
    limit: u64,
}

impl Subsets {
    pub fn new(n: usize, k: usize) -> Self {
        assert!(n <= 63, "subset enumeration supports n <= 63");
        let limit = 1u64 << n;
        let next = if k > n { None } else { Some(low_mask(k)) };
        Subsets { next, limit }
    }
}

impl Iterator for Subsets {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            let nxt = (((r ^ cur) >> 2) / c) | r;
            (nxt < self.limit).then_some(nxt)
        };
        Some(cur)
    }
}

/// Sub-masks of `mask` in increasing numeric order, starting with `0`.
pub fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    let mut cur = Some(0u64);
    core::iter::from_fn(move || {
        let c = cur?;
        cur = if c == mask {
            None
        } else {
            Some((c.wrapping_sub(mask)) & mask)
        };
        Some(c)
    })
}

/// Position of the k-subset `mask` in colex order.
pub fn colex_rank(mask: u64) -> usize {
    let mut rank = 0u64;
    let mut m = mask;
    let mut i = 1usize;
    while m != 0 {
        let b = m.trailing_zeros() as usize;
        rank += binomial(b, i);
        m &= m - 1;
        i += 1;
    }
    rank as usize
}

/// Inverse of [`colex_rank`] for k-subsets.
pub fn colex_unrank(mut rank: u64, k: usize) -> u64 {
    let mut mask = 0u64;
    for i in (1..=k).rev() {
        let mut b = i - 1;
        while binomial(b + 1, i) <= rank {
            b += 1;
        }
        rank -= binomial(b, i);
        mask |= 1 << b;
    }
    mask
}

/// Scatter the low bits of `compact` into the positions of the set bits of
/// `mask` (software `pdep`). Preserves numeric order.
#[inline]
pub fn deposit(compact: u64, mask: u64) -> u64 {
    let mut out = 0u64;
    let mut m = mask;
    let mut c = compact;
    while m != 0 && c != 0 {
        let low = m & m.wrapping_neg();
        if c & 1 == 1 {
            out |= low;
        }
        c >>= 1;
        m &= m - 1;
    }
    out
}

/// Elements of a mask in increasing order.
pub fn elements(mask: u64) -> impl Iterator<Item = usize> {
    let mut m = mask;
    core::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}

pub fn elements_vec(mask: u64) -> Vec<usize> {
    elements(mask).collect()
}

/// Dense lookup from mask to colex rank for all k-subsets of an n-set.
/// Intended for small `n` (the table has `2^n` entries).
#[derive(Clone, Debug)]
pub struct RankTable {
    ranks: Vec<u32>,
}

impl RankTable {
    pub const NONE: u32 = u32::MAX;

    pub fn new(n: usize, k: usize) -> Self {
        assert!(n <= 24, "rank table limited to n <= 24");
        let mut ranks = alloc::vec![Self::NONE; 1usize << n];
        for (i, s) in Subsets::new(n, k).enumerate() {
            ranks[s as usize] = i as u32;
        }
        RankTable { ranks }
    }

    #[inline]
    pub fn rank(&self, mask: u64) -> u32 {
        self.ranks[mask as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(4, 5), 0);
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(64, 32), 1_832_624_140_942_590_534);
        assert_eq!(
            binomial_big(100, 50).to_string(),
            "100891344545564193334812497256"
        );
    }

    #[test]
    fn subsets_are_colex_and_ranked() {
        let all: Vec<u64> = Subsets::new(5, 3).collect();
        assert_eq!(all.len(), 10);
        assert_eq!(all[0], 0b00111);
        assert_eq!(all[1], 0b01011);
        for (i, &s) in all.iter().enumerate() {
            assert_eq!(s.count_ones(), 3);
            assert_eq!(colex_rank(s), i);
            assert_eq!(colex_unrank(i as u64, 3), s);
        }
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(Subsets::new(3, 0).collect::<Vec<_>>(), alloc::vec![0]);
        assert_eq!(Subsets::new(2, 3).count(), 0);
    }

    #[test]
    fn submask_order() {
        let v: Vec<u64> = submasks(0b1010).collect();
        assert_eq!(v, alloc::vec![0, 0b0010, 0b1000, 0b1010]);
        assert_eq!(submasks(0).count(), 1);
    }

    #[test]
    fn deposit_preserves_order() {
        let mask = 0b1011_0100;
        let mut prev = None;
        for c in 0..16u64 {
            let d = deposit(c, mask);
            assert_eq!(d & !mask, 0);
            assert_eq!(d.count_ones(), c.count_ones());
            if let Some(p) = prev {
                assert!(d > p);
            }
            prev = Some(d);
        }
    }
}
