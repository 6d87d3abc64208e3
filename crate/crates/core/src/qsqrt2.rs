//! Exact arithmetic in `Q(√2)`.

use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// The number `p + q·√2` with rational `p`, `q`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct QSqrt2 {
    p: BigRational,
    q: BigRational,
}

impl QSqrt2 {
    pub fn new(p: BigRational, q: BigRational) -> Self {
        QSqrt2 { p, q }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        QSqrt2::new(
            BigRational::new(num.into(), den.into()),
            BigRational::zero(),
        )
    }

    pub fn from_int(v: i64) -> Self {
        QSqrt2::from_ratio(v, 1)
    }

    pub fn from_rational(r: &crate::Rational) -> Self {
        QSqrt2::from_ratio(*r.numer(), *r.denom())
    }

    pub fn sqrt2() -> Self {
        QSqrt2::new(BigRational::zero(), BigRational::one())
    }

    pub fn zero() -> Self {
        QSqrt2::default()
    }

    pub fn one() -> Self {
        QSqrt2::from_int(1)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.p
    }

    pub fn sqrt2_part(&self) -> &BigRational {
        &self.q
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        QSqrt2::new(self.p.clone(), -self.q.clone())
    }

    /// `p² - 2q²`, the field norm.
    pub fn norm(&self) -> BigRational {
        &self.p * &self.p - BigRational::from_integer(2.into()) * &self.q * &self.q
    }

    /// Exact sign, decided by comparing `p²` with `2q²` when the parts disagree.
    pub fn signum(&self) -> Ordering {
        let sp = self.p.numer().sign();
        let sq = self.q.numer().sign();
        match (sp, sq) {
            (Sign::NoSign, Sign::NoSign) => Ordering::Equal,
            (Sign::Minus, Sign::Minus | Sign::NoSign) | (Sign::NoSign, Sign::Minus) => {
                Ordering::Less
            }
            (Sign::Plus, Sign::Plus | Sign::NoSign) | (Sign::NoSign, Sign::Plus) => {
                Ordering::Greater
            }
            _ => {
                // opposite signs: the part with the larger square wins
                let dominant = if self.norm().is_positive() { sp } else { sq };
                if dominant == Sign::Plus {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn mul_int(&self, m: i64) -> Self {
        let m = BigRational::from_integer(m.into());
        QSqrt2::new(&self.p * &m, &self.q * &m)
    }

    pub fn div_int(&self, m: i64) -> Self {
        let m = BigRational::from_integer(m.into());
        QSqrt2::new(&self.p / &m, &self.q / &m)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(QSqrt2::one(), |acc, _| &acc * self)
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        // q√2 = ±√(2q²); the integer square root of the scaled numerator is
        // within one of the truth, then fix up with exact comparisons.
        let (c, d) = (self.q.numer(), self.q.denom());
        let s = (BigInt::from(2) * c * c).sqrt();
        let approx_q = if c.is_negative() { -s } else { s }.div_floor(d);
        let mut est = self.p.floor().to_integer() + approx_q;
        while QSqrt2::from(est.clone()) > *self {
            est -= 1;
        }
        while QSqrt2::from(&est + 1) <= *self {
            est += 1;
        }
        est
    }

    /// Decimal expansion truncated toward zero.
    pub fn to_decimal(&self, digits: u32) -> String {
        if self.signum() == Ordering::Less {
            let mut s = String::from("-");
            s.push_str(&(-self).to_decimal(digits));
            return s;
        }
        let scale = BigInt::from(10).pow(digits);
        let scaled = self.mul_big(&scale).floor();
        let (int, frac) = scaled.div_mod_floor(&scale);
        if digits == 0 {
            return int.to_string();
        }
        let frac = frac.to_string();
        let mut s = int.to_string();
        s.push('.');
        for _ in frac.len()..digits as usize {
            s.push('0');
        }
        s.push_str(&frac);
        s
    }

    fn mul_big(&self, m: &BigInt) -> Self {
        let m = BigRational::from_integer(m.clone());
        QSqrt2::new(&self.p * &m, &self.q * &m)
    }
}

impl From<BigInt> for QSqrt2 {
    fn from(v: BigInt) -> Self {
        QSqrt2::new(BigRational::from_integer(v), BigRational::zero())
    }
}

impl Ord for QSqrt2 {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl PartialOrd for QSqrt2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&QSqrt2> for &QSqrt2 {
            type Output = QSqrt2;
            fn $m(self, rhs: &QSqrt2) -> QSqrt2 {
                let f: fn(&QSqrt2, &QSqrt2) -> QSqrt2 = $body;
                f(self, rhs)
            }
        }
        impl $tr<QSqrt2> for QSqrt2 {
            type Output = QSqrt2;
            fn $m(self, rhs: QSqrt2) -> QSqrt2 {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&QSqrt2> for QSqrt2 {
            type Output = QSqrt2;
            fn $m(self, rhs: &QSqrt2) -> QSqrt2 {
                (&self).$m(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| QSqrt2::new(&a.p + &b.p, &a.q + &b.q));
forward_binop!(Sub, sub, |a, b| QSqrt2::new(&a.p - &b.p, &a.q - &b.q));
forward_binop!(Mul, mul, |a, b| {
    let two = BigRational::from_integer(2.into());
    QSqrt2::new(&a.p * &b.p + two * &a.q * &b.q, &a.p * &b.q + &a.q * &b.p)
});
forward_binop!(Div, div, |a, b| {
    assert!(!b.is_zero(), "division by zero in Q(sqrt2)");
    let n = b.norm();
    let t = a * &b.conjugate();
    QSqrt2::new(t.p / &n, t.q / n)
});

impl Neg for QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2::new(-self.p, -self.q)
    }
}

impl Neg for &QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2::new(-self.p.clone(), -self.q.clone())
    }
}

/// Written as `p + q*sqrt2` with `p`, `q` as reduced fractions; a zero
/// part is omitted.
impl fmt::Display for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.p.is_zero(), self.q.is_zero()) {
            (_, true) => write!(f, "{}", self.p),
            (true, false) => write!(f, "{}*sqrt2", self.q),
            (false, false) if self.q.is_negative() => {
                write!(f, "{} - {}*sqrt2", self.p, -self.q.clone())
            }
            (false, false) => write!(f, "{} + {}*sqrt2", self.p, self.q),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse {0:?} as p + q*sqrt2")]
pub struct ParseQSqrt2Error(pub String);

fn parse_ratio(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).ok()?;
    let den = BigInt::from_str(den).ok()?;
    (!den.is_zero()).then(|| BigRational::new(num, den))
}

fn parse_term(t: &str) -> Option<(BigRational, bool)> {
    let t = t.trim();
    if let Some(coef) = t.strip_suffix("sqrt2") {
        let coef = coef.trim().trim_end_matches('*').trim();
        let q = match coef {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            c => parse_ratio(c)?,
        };
        Some((q, true))
    } else {
        Some((parse_ratio(t)?, false))
    }
}

/// Accepts sums like `1 + 1/2*sqrt2`, `3/2`, `-sqrt2`, `2 - sqrt2`.
impl FromStr for QSqrt2 {
    type Err = ParseQSqrt2Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseQSqrt2Error(s.to_string());
        let mut terms = alloc::vec::Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-')
                && !s[..i].trim_end().ends_with(['/', '*', '+', '-'])
                && !s[..i].trim().is_empty()
            {
                terms.push(&s[start..i]);
                start = i;
            }
        }
        terms.push(&s[start..]);
        let mut out = QSqrt2::zero();
        for t in terms {
            let t = t.trim();
            let (neg, body) = match t.strip_prefix('-') {
                Some(r) => (true, r),
                None => (false, t.strip_prefix('+').unwrap_or(t)),
            };
            let (v, is_root) = parse_term(body).ok_or_else(err)?;
            let v = if neg { -v } else { v };
            if is_root {
                out.q += v;
            } else {
                out.p += v;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> QSqrt2 {
        s.parse().unwrap()
    }

    #[test]
    fn field_identities() {
        let theta = q("1 + 1/2*sqrt2");
        let sq = &theta * &theta;
        assert_eq!(sq, q("3/2 + sqrt2"));
        let lhs = sq.mul_int(2) - theta.mul_int(4) + QSqrt2::one();
        assert!(lhs.is_zero());
        assert_eq!(&theta / &theta, QSqrt2::one());
        assert_eq!(QSqrt2::sqrt2() * QSqrt2::sqrt2(), QSqrt2::from_int(2));
    }

    #[test]
    fn ordering_and_sign() {
        assert!(QSqrt2::sqrt2() > q("1414/1000"));
        assert!(QSqrt2::sqrt2() < q("1415/1000"));
        assert!(q("3 - 2*sqrt2") > QSqrt2::zero());
        assert!(q("-3 + 2*sqrt2") < QSqrt2::zero());
        assert!(q("1 - sqrt2") < QSqrt2::zero());
        assert_eq!(q("0").signum(), Ordering::Equal);
    }

    #[test]
    fn floor_and_decimal() {
        assert_eq!(QSqrt2::sqrt2().floor(), BigInt::from(1));
        assert_eq!((-QSqrt2::sqrt2()).floor(), BigInt::from(-2));
        assert_eq!(q("1 + 1/2*sqrt2").to_decimal(6), "1.707106");
        assert_eq!(q("-1/3").to_decimal(3), "-0.333");
        assert_eq!(q("5").floor(), BigInt::from(5));
    }

    #[test]
    fn display_round_trip() {
        for s in [
            "1 + 1/2*sqrt2",
            "2 - 1/2*sqrt2",
            "3/7",
            "-sqrt2",
            "-5/3*sqrt2",
            "0",
        ] {
            let v = q(s);
            assert_eq!(q(&v.to_string()), v, "{s}");
        }
        assert_eq!(q("2 - 1/2*sqrt2").to_string(), "2 - 1/2*sqrt2");
        assert!("1 + x".parse::<QSqrt2>().is_err());
    }
}
