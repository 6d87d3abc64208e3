//! Exact comparisons between integer counts and rational thresholds.

use core::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::{Signed, Zero};

/// User-facing rational parameters (ζ, ζ′, ρ, β, δ, ...).
pub type Rational = Ratio<i64>;

/// Compare `count` against `r * scale` without rounding.
pub fn cmp_count(count: &BigUint, r: &Rational, scale: &BigUint) -> Ordering {
    // r = num/den with den > 0 (Ratio keeps the sign in the numerator).
    let lhs = BigInt::from(count.clone()) * BigInt::from(*r.denom());
    let rhs = BigInt::from(*r.numer()) * BigInt::from(scale.clone());
    lhs.cmp(&rhs)
}

/// `count <= r * scale`.
pub fn count_le(count: u64, r: &Rational, scale: &BigUint) -> bool {
    cmp_count(&BigUint::from(count), r, scale) != Ordering::Greater
}

/// `count < r * scale`.
pub fn count_lt(count: u64, r: &Rational, scale: &BigUint) -> bool {
    cmp_count(&BigUint::from(count), r, scale) == Ordering::Less
}

/// `count >= r * scale`.
pub fn count_ge(count: u64, r: &Rational, scale: &BigUint) -> bool {
    cmp_count(&BigUint::from(count), r, scale) != Ordering::Less
}

pub fn pow_big(base: u64, exp: u64) -> BigUint {
    num_traits::pow::pow(BigUint::from(base), exp as usize)
}

pub fn is_positive(r: &Rational) -> bool {
    r.is_positive()
}

pub fn is_nonnegative(r: &Rational) -> bool {
    !r.is_negative()
}

/// Exact decimal rendering of `num/den` with `digits` fractional digits
/// (truncated toward zero).
pub fn decimal_string(num: &BigInt, den: &BigInt, digits: usize) -> alloc::string::String {
    use alloc::string::ToString;
    use num_integer::Integer;
    assert!(!den.is_zero(), "zero denominator");
    let negative = num.is_negative() != den.is_negative() && !num.is_zero();
    let n = num.abs();
    let d = den.abs();
    let (int, mut rem) = n.div_rem(&d);
    let mut s = alloc::string::String::new();
    if negative {
        s.push('-');
    }
    s.push_str(&int.to_string());
    if digits > 0 {
        s.push('.');
        for _ in 0..digits {
            rem *= 10u32;
            let (q, r) = rem.div_rem(&d);
            s.push_str(&q.to_string());
            rem = r;
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comparisons_are_exact() {
        let third = Rational::new(1, 3);
        let nine = BigUint::from(9u32);
        assert!(count_le(3, &third, &nine));
        assert!(!count_lt(3, &third, &nine));
        assert!(count_ge(3, &third, &nine));
        assert!(!count_le(4, &third, &nine));
    }

    #[test]
    fn decimals() {
        let s = decimal_string(&BigInt::from(1), &BigInt::from(3), 4);
        assert_eq!(s, "0.3333");
        assert_eq!(
            decimal_string(&BigInt::from(-7), &BigInt::from(2), 1),
            "-3.5"
        );
        assert_eq!(decimal_string(&BigInt::from(6), &BigInt::from(5), 0), "1");
    }
}
