use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// A 2-local integer: a rational whose reduced denominator is odd.
///
/// Units are the elements of valuation 0, so every odd integer is
/// invertible and division by an odd pivot stays inside the ring.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Local2(BigRational);

fn two_valuation(v: &BigInt) -> u32 {
    v.trailing_zeros().map_or(0, |z| z as u32)
}

impl Local2 {
    pub fn new(r: BigRational) -> Result<Self> {
        if r.denom().is_even() {
            return Err(Error::InvalidParameter(format!("{r} is not 2-local")));
        }
        Ok(Local2(r))
    }

    pub fn zero() -> Self {
        Local2(BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// 2-adic valuation; `None` for zero.
    pub fn valuation(&self) -> Option<u32> {
        (!self.is_zero()).then(|| two_valuation(self.0.numer()))
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Some(0)
    }

    /// Whether `2^e` divides `self` in the 2-local integers.
    pub fn divisible_by_pow2(&self, e: u32) -> bool {
        self.valuation().is_none_or(|v| v >= e)
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.0.is_integer().then(|| self.0.to_integer())
    }

    /// Quotient by a unit; `None` if `d` is not a unit.
    pub fn div_unit(&self, d: &Local2) -> Option<Local2> {
        d.is_unit().then(|| Local2(&self.0 / &d.0))
    }

    /// `self / 2`, defined when `2 | self`.
    pub fn halve(&self) -> Option<Local2> {
        self.divisible_by_pow2(1)
            .then(|| Local2(&self.0 / BigRational::from_integer(BigInt::from(2))))
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }
}

impl<T: Into<BigInt>> From<T> for Local2 {
    fn from(v: T) -> Self {
        Local2(BigRational::from_integer(v.into()))
    }
}

impl Add for &Local2 {
    type Output = Local2;
    fn add(self, rhs: &Local2) -> Local2 {
        Local2(&self.0 + &rhs.0)
    }
}

impl Sub for &Local2 {
    type Output = Local2;
    fn sub(self, rhs: &Local2) -> Local2 {
        Local2(&self.0 - &rhs.0)
    }
}

impl Mul for &Local2 {
    type Output = Local2;
    fn mul(self, rhs: &Local2) -> Local2 {
        Local2(&self.0 * &rhs.0)
    }
}

impl Neg for &Local2 {
    type Output = Local2;
    fn neg(self) -> Local2 {
        Local2(-&self.0)
    }
}

impl fmt::Display for Local2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Local2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Local2 {
        Local2::new(BigRational::new(n.into(), d.into())).unwrap()
    }

    #[test]
    fn rejects_even_denominators() {
        assert!(Local2::new(BigRational::new(1.into(), 2.into())).is_err());
        assert!(Local2::new(BigRational::new(2.into(), 4.into())).is_err());
        // 4/2 reduces to 2
        assert!(Local2::new(BigRational::new(4.into(), 2.into())).is_ok());
    }

    #[test]
    fn valuations_and_units() {
        assert_eq!(q(12, 5).valuation(), Some(2));
        assert!(q(3, 7).is_unit());
        assert!(!Local2::from(4).is_unit());
        assert_eq!(Local2::zero().valuation(), None);
        assert!(Local2::zero().divisible_by_pow2(10));
    }

    #[test]
    fn unit_division_and_halving() {
        let a = Local2::from(6);
        assert_eq!(a.div_unit(&Local2::from(3)), Some(Local2::from(2)));
        assert_eq!(a.div_unit(&Local2::from(2)), None);
        assert_eq!(a.halve(), Some(Local2::from(3)));
        assert_eq!(Local2::from(3).halve(), None);
        assert_eq!(q(4, 3).halve(), Some(q(2, 3)));
    }

    #[test]
    fn arithmetic() {
        assert_eq!(&q(1, 3) + &q(2, 3), Local2::from(1));
        assert_eq!(&q(1, 3) * &Local2::from(6), Local2::from(2));
        assert_eq!(-&Local2::from(2), Local2::from(-2));
        assert_eq!(&Local2::from(5) - &Local2::from(7), Local2::from(-2));
    }
}
