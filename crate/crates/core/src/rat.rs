//! Arbitrary-precision rational scalar.
//!
//! `Rat` is the universal scalar of the crate: every probability, polynomial
//! coefficient and linear-system entry is one. It wraps
//! [`num::BigRational`], which keeps values fully reduced with a positive
//! denominator, and adds the formatting contract used by the CLI
//! (`"p/q"`, or `"p"` when the denominator is one). No floating point enters
//! through this type.

use num::bigint::{BigInt, Sign};
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

/// Exact rational number, always stored reduced with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    /// Builds `num/den`. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rat(BigRational::from_integer(n))
    }

    pub fn from_ratio(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Rat(BigRational::new(num, den))
    }

    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "division by zero");
        Rat(self.0.recip())
    }

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    pub fn pow(&self, exp: u32) -> Self {
        if exp == 0 {
            return Rat::one();
        }
        Rat(BigRational::new_raw(
            self.0.numer().pow(exp),
            self.0.denom().pow(exp),
        ))
    }

    /// Nearest `f64`; used only at explicitly floating-point surfaces.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            // Fall back to a quotient of approximations for huge operands.
            let n = big_to_f64(self.0.numer());
            let d = big_to_f64(self.0.denom());
            n / d
        })
    }
}

fn big_to_f64(n: &BigInt) -> f64 {
    n.to_f64().unwrap_or(match n.sign() {
        Sign::Minus => f64::NEG_INFINITY,
        _ => f64::INFINITY,
    })
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }
}

impl From<u64> for Rat {
    fn from(n: u64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }
}

impl From<BigInt> for Rat {
    fn from(n: BigInt) -> Self {
        Rat::from_bigint(n)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rat({})", self)
    }
}

impl FromStr for Rat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n = BigInt::from_str(n.trim()).map_err(|e| e.to_string())?;
                let d = BigInt::from_str(d.trim()).map_err(|e| e.to_string())?;
                if d.is_zero() {
                    return Err("zero denominator".into());
                }
                Ok(Rat(BigRational::new(n, d)))
            }
            None => {
                let n = BigInt::from_str(s).map_err(|e| e.to_string())?;
                Ok(Rat(BigRational::from_integer(n)))
            }
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((self.0).$method(rhs.0))
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((&self.0).$method(rhs.0))
            }
        }
        impl $trait<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for Rat {
    fn add_assign(&mut self, rhs: Rat) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl SubAssign for Rat {
    fn sub_assign(&mut self, rhs: Rat) {
        self.0 -= rhs.0;
    }
}

impl MulAssign for Rat {
    fn mul_assign(&mut self, rhs: Rat) {
        self.0 *= rhs.0;
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        self.0 *= &rhs.0;
    }
}

impl DivAssign<&Rat> for Rat {
    fn div_assign(&mut self, rhs: &Rat) {
        self.0 /= &rhs.0;
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

/// `n!` as a big integer.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// Binomial coefficient `C(n, k)` as a big integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Stirling number of the second kind `S(n, k)`.
pub fn stirling2(n: u64, k: u64) -> BigInt {
    if n == 0 && k == 0 {
        return BigInt::one();
    }
    if k == 0 || k > n {
        return BigInt::zero();
    }
    // S(n, k) = k * S(n-1, k) + S(n-1, k-1), rolled row by row.
    let mut row = vec![BigInt::zero(); k as usize + 1];
    row[0] = BigInt::one();
    for _ in 1..=n {
        for j in (1..row.len()).rev() {
            let prev = row[j - 1].clone();
            row[j] = &row[j] * j + prev;
        }
        row[0] = BigInt::zero();
    }
    row[k as usize].clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn reduced_and_positive_denominator() {
        let r = rat(-4, -6);
        assert_eq!(r, rat(2, 3));
        assert_eq!(r.to_string(), "2/3");
        let r = rat(3, -6);
        assert_eq!(r.to_string(), "-1/2");
        assert_eq!(Rat::zero().to_string(), "0");
        assert_eq!(rat(14, 7).to_string(), "2");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0", "-7", "2/3", "-11/17", "123456789123456789/2"] {
            let r: Rat = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert!("1/0".parse::<Rat>().is_err());
        assert!("abc".parse::<Rat>().is_err());
    }

    #[test]
    fn factorial_and_binomial() {
        assert_eq!(factorial(0), BigInt::one());
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(binomial(6, 2), BigInt::from(15));
        assert_eq!(binomial(4, 7), BigInt::zero());
    }

    #[test]
    fn stirling_small_table() {
        // Rows 0..5 of S(n, k).
        let expect = [
            vec![1u64],
            vec![0, 1],
            vec![0, 1, 1],
            vec![0, 1, 3, 1],
            vec![0, 1, 7, 6, 1],
            vec![0, 1, 15, 25, 10, 1],
        ];
        for (n, row) in expect.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                assert_eq!(stirling2(n as u64, k as u64), BigInt::from(*v), "S({n},{k})");
            }
        }
    }

    #[test]
    fn pow_and_recip() {
        assert_eq!(rat(2, 3).pow(3), rat(8, 27));
        assert_eq!(rat(2, 3).pow(0), Rat::one());
        assert_eq!(rat(-5, 7).recip(), rat(-7, 5));
    }

    proptest! {
        // Exactness: (a + b) - b == a on randomized big operands.
        #[test]
        fn add_sub_cancels(an in -1_000_000_000_000i64..1_000_000_000_000,
                           ad in 1i64..1_000_000,
                           bn in -1_000_000_000_000i64..1_000_000_000_000,
                           bd in 1i64..1_000_000) {
            let a = rat(an, ad);
            let b = rat(bn, bd);
            prop_assert_eq!(&(&(&a + &b) - &b), &a);
        }

        #[test]
        fn mul_div_cancels(an in -1_000_000i64..1_000_000, ad in 1i64..1_000_000,
                           bn in 1i64..1_000_000, bd in 1i64..1_000_000) {
            let a = rat(an, ad);
            let b = rat(bn, bd);
            prop_assert_eq!(&(&(&a / &b) * &b), &a);
        }
    }
}
