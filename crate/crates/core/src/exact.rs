//! Exact rationals and the integer helpers the symbolic code leans on.
//!
//! [`Rational`] wraps a [`BigRational`] and keeps it in lowest terms with a
//! positive denominator, so structural equality is numeric equality. Its
//! textual form is `num/den`, with the denominator omitted when it is 1.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `num/den` in lowest terms.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(num.into(), den)))
    }

    /// Shorthand for small literals; panics on a zero denominator.
    pub fn frac(num: i64, den: i64) -> Self {
        Self::new(num, den).expect("nonzero denominator")
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match self.0.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    pub fn recip(&self) -> Result<Self> {
        Rational::one().checked_div(self)
    }

    /// Integer power; negative exponents invert (and fail on zero).
    pub fn pow(&self, exp: i32) -> Result<Self> {
        if exp < 0 && self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(num_traits::Pow::pow(&self.0, exp)))
    }

    /// Multiplies by an integer without allocating a full rational.
    pub fn mul_int(&self, k: i64) -> Self {
        Rational(&self.0 * BigRational::from_integer(BigInt::from(k)))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal expansion rounded half away from zero to `digits` places.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = BigInt::from(10u32).pow(digits as u32);
        let num = self.0.numer().abs() * &scale;
        let den = self.0.denom();
        let (q, r) = num.div_rem(den);
        let q = if (r * 2u32) >= *den { q + 1u32 } else { q };
        let mut s = q.to_string();
        if digits > 0 {
            if s.len() <= digits {
                s = format!("{}{}", "0".repeat(digits + 1 - s.len()), s);
            }
            s.insert(s.len() - digits, '.');
        }
        if self.signum() < 0 && s.chars().any(|c| c != '0' && c != '.') {
            s.insert(0, '-');
        }
        s
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `a`, `a/b`, with an ASCII or Unicode minus sign.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseRational(s.to_string());
        let t = s.trim().replace('\u{2212}', "-");
        let parse_int = |x: &str| x.trim().parse::<BigInt>().map_err(|_| bad());
        match t.split_once('/') {
            None => Ok(Rational::from_integer(parse_int(&t)?)),
            Some((n, d)) => {
                let d = parse_int(d)?;
                if d.is_zero() {
                    return Err(bad());
                }
                Rational::new(parse_int(n)?, d)
            }
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        self.0.is_integer() && *self.0.numer() == BigInt::from(*other)
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.0.cmp(&BigRational::from_integer(BigInt::from(*other))))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $assign_tr:ident, $assign_method:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl $assign_tr<&Rational> for Rational {
            fn $assign_method(&mut self, rhs: &Rational) {
                self.0.$assign_method(&rhs.0);
            }
        }
        impl $assign_tr<Rational> for Rational {
            fn $assign_method(&mut self, rhs: Rational) {
                self.0.$assign_method(rhs.0);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// C(n, k), zero outside `0 <= k <= n`.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// lcm(1, 2, ..., n); 1 for n = 0.
pub fn lcm_upto(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc.lcm(&BigInt::from(k)))
}

/// (-1)^e as an i64.
pub fn sign_pow(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn arithmetic_basics() {
        assert_eq!(r("1/2") + r("1/3"), r("5/6"));
        assert_eq!(r("-17/4") * Rational::zero(), Rational::zero());
        assert_eq!(r("7/8").checked_div(&r("7/8")).unwrap(), Rational::one());
        assert_eq!(r("3/4") - r("3/4"), Rational::zero());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(r("1/2").checked_div(&Rational::zero()), Err(Error::DivisionByZero));
        assert_eq!(Rational::zero().recip(), Err(Error::DivisionByZero));
        assert_eq!(Rational::new(1, 0), Err(Error::DivisionByZero));
        assert!("1/0".parse::<Rational>().is_err());
    }

    #[test]
    fn canonical_form() {
        let x = Rational::new(6, -4).unwrap();
        assert_eq!(x.numer(), &BigInt::from(-3));
        assert_eq!(x.denom(), &BigInt::from(2));
        assert_eq!(x.to_string(), "-3/2");
        assert_eq!(Rational::new(0, -5).unwrap().to_string(), "0");
        assert_eq!(Rational::from(7).to_string(), "7");
        assert_eq!(r("\u{2212}3/2"), Rational::frac(-3, 2));
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(5, 0), BigInt::from(1));
        assert_eq!(binomial(3, 5), BigInt::from(0));
        assert_eq!(binomial(3, -1), BigInt::from(0));
        assert_eq!(binomial(30, 15), BigInt::from(155117520u64));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(r("1/3").to_decimal(5), "0.33333");
        assert_eq!(r("2/3").to_decimal(3), "0.667");
        assert_eq!(r("-89/192").to_decimal(6), "-0.463542");
        assert_eq!(r("5").to_decimal(0), "5");
        assert_eq!(r("1/1000").to_decimal(2), "0.00");
    }

    #[test]
    fn lcm_small() {
        assert_eq!(lcm_upto(10), BigInt::from(2520));
        assert_eq!(lcm_upto(0), BigInt::from(1));
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-10_000i64..10_000, 1i64..500).prop_map(|(n, d)| Rational::frac(n, d))
    }

    proptest! {
        #[test]
        fn add_commutes_mul_distributes(a in arb_rational(), b in arb_rational(), c in arb_rational()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
        }

        #[test]
        fn text_round_trip(a in arb_rational()) {
            prop_assert_eq!(a.to_string().parse::<Rational>().unwrap(), a);
        }
    }
}
