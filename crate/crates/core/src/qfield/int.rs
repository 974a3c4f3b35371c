//! Integers with an inline machine-word fast path.
//!
//! Coefficients of the polynomials behind `RatQ` are almost always tiny, so
//! `Int` keeps them in an `i64` and only promotes to `BigInt` on overflow.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Int {
    S(i64),
    // never holds a value that fits in i64
    B(BigInt),
}

impl Int {
    pub const ZERO: Int = Int::S(0);
    pub const ONE: Int = Int::S(1);

    fn norm(b: BigInt) -> Int {
        match b.to_i64() {
            Some(x) => Int::S(x),
            None => Int::B(b),
        }
    }

    pub fn big(&self) -> BigInt {
        match self {
            Int::S(x) => BigInt::from(*x),
            Int::B(b) => b.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Int::S(0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Int::S(1))
    }

    pub fn signum(&self) -> i32 {
        match self {
            Int::S(x) => x.signum() as i32,
            Int::B(b) => {
                if b.is_negative() {
                    -1
                } else {
                    1
                }
            }
        }
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Int {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Int::S(x) => Some(*x),
            Int::B(_) => None,
        }
    }

    pub fn gcd(&self, other: &Int) -> Int {
        match (self, other) {
            (Int::S(a), Int::S(b)) => {
                let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
                while b != 0 {
                    let t = a % b;
                    a = b;
                    b = t;
                }
                if a <= i64::MAX as u64 {
                    Int::S(a as i64)
                } else {
                    Int::B(BigInt::from(a))
                }
            }
            _ => Int::norm(self.big().gcd(&other.big())),
        }
    }

    /// Truncating quotient; callers use it only where the division is exact.
    pub fn div_exact(&self, other: &Int) -> Int {
        match (self, other) {
            (Int::S(a), Int::S(b)) => match a.checked_div(*b) {
                Some(x) => Int::S(x),
                None => Int::norm(BigInt::from(*a) / BigInt::from(*b)),
            },
            _ => Int::norm(self.big() / other.big()),
        }
    }

    pub fn divides(&self, other: &Int) -> bool {
        match (self, other) {
            (Int::S(0), _) => other.is_zero(),
            (Int::S(a), Int::S(b)) => b.checked_rem(*a).map_or(true, |r| r == 0),
            _ => (other.big() % self.big()).is_zero(),
        }
    }

    pub fn pow(&self, e: u32) -> Int {
        let mut r = Int::ONE;
        for _ in 0..e {
            r = &r * self;
        }
        r
    }
}

impl From<i64> for Int {
    fn from(x: i64) -> Int {
        Int::S(x)
    }
}

impl From<BigInt> for Int {
    fn from(b: BigInt) -> Int {
        Int::norm(b)
    }
}

impl<'a> std::ops::Add<&'a Int> for &'a Int {
    type Output = Int;
    fn add(self, o: &Int) -> Int {
        if let (Int::S(a), Int::S(b)) = (self, o) {
            if let Some(c) = a.checked_add(*b) {
                return Int::S(c);
            }
        }
        Int::norm(self.big() + o.big())
    }
}

impl<'a> std::ops::Sub<&'a Int> for &'a Int {
    type Output = Int;
    fn sub(self, o: &Int) -> Int {
        if let (Int::S(a), Int::S(b)) = (self, o) {
            if let Some(c) = a.checked_sub(*b) {
                return Int::S(c);
            }
        }
        Int::norm(self.big() - o.big())
    }
}

impl<'a> std::ops::Mul<&'a Int> for &'a Int {
    type Output = Int;
    fn mul(self, o: &Int) -> Int {
        if let (Int::S(a), Int::S(b)) = (self, o) {
            if let Some(c) = a.checked_mul(*b) {
                return Int::S(c);
            }
        }
        Int::norm(self.big() * o.big())
    }
}

impl std::ops::Neg for &Int {
    type Output = Int;
    fn neg(self) -> Int {
        match self {
            Int::S(a) => match a.checked_neg() {
                Some(c) => Int::S(c),
                None => Int::norm(-BigInt::from(*a)),
            },
            Int::B(b) => Int::norm(-b),
        }
    }
}

impl std::ops::AddAssign<&Int> for Int {
    fn add_assign(&mut self, o: &Int) {
        if let (Int::S(a), Int::S(b)) = (&*self, o) {
            if let Some(c) = a.checked_add(*b) {
                *self = Int::S(c);
                return;
            }
        }
        *self = &*self + o;
    }
}

impl Ord for Int {
    fn cmp(&self, o: &Int) -> Ordering {
        match (self, o) {
            (Int::S(a), Int::S(b)) => a.cmp(b),
            _ => self.big().cmp(&o.big()),
        }
    }
}

impl PartialOrd for Int {
    fn partial_cmp(&self, o: &Int) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Int::S(a) => write!(f, "{a}"),
            Int::B(b) => write!(f, "{b}"),
        }
    }
}

impl FromStr for Int {
    type Err = num_bigint::ParseBigIntError;
    fn from_str(s: &str) -> Result<Int, Self::Err> {
        match s.parse::<i64>() {
            Ok(x) => Ok(Int::S(x)),
            Err(_) => Ok(Int::norm(s.parse::<BigInt>()?)),
        }
    }
}

impl Zero for Int {
    fn zero() -> Int {
        Int::ZERO
    }
    fn is_zero(&self) -> bool {
        Int::is_zero(self)
    }
}

impl std::ops::Add for Int {
    type Output = Int;
    fn add(self, o: Int) -> Int {
        &self + &o
    }
}

impl std::ops::Mul for Int {
    type Output = Int;
    fn mul(self, o: Int) -> Int {
        &self * &o
    }
}

impl One for Int {
    fn one() -> Int {
        Int::ONE
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_promotes_and_demotes() {
        let a = Int::S(i64::MAX);
        let b = &a + &Int::ONE;
        assert!(matches!(b, Int::B(_)));
        let c = &b - &Int::ONE;
        assert_eq!(c, Int::S(i64::MAX));
        let m = &a * &a;
        assert_eq!(m.div_exact(&a), a);
        assert_eq!((-&Int::S(i64::MIN)).to_string(), "9223372036854775808");
    }

    #[test]
    fn gcd_and_divisibility() {
        assert_eq!(Int::S(12).gcd(&Int::S(-18)), Int::S(6));
        assert_eq!(Int::S(0).gcd(&Int::S(-7)), Int::S(7));
        assert!(Int::S(3).divides(&Int::S(-9)));
        assert!(!Int::S(4).divides(&Int::S(6)));
        let big: Int = "123456789012345678901234567890".parse().unwrap();
        assert!(Int::S(10).divides(&big));
        assert_eq!(big.gcd(&Int::S(15)), Int::S(15));
    }
}
