//! Exact arithmetic in Q(q).
//!
//! A nonzero `RatQ` is stored as `q^v * num / den` with `num(0) != 0`,
//! `den(0) != 0`, `gcd(num, den) = 1` in Z[q] and `lc(den) > 0`. The q-adic
//! valuation is then `v` and the leading coefficient of the expansion at
//! q = 0 is `num(0)/den(0)`, so order and membership need no series.

pub mod int;
pub mod poly;

pub use int::Int;
pub use poly::Poly;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QError {
    #[error("division by zero")]
    DivByZero,
    #[error("factorial of negative integer {0}")]
    NegativeFactorial(i64),
    #[error("cannot parse rational function: {0}")]
    Parse(String),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatQ {
    v: i32,
    num: Poly,
    den: Poly,
}

/// Subsets of Q(q) with a membership test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subset {
    A,
    QA,
    /// q^n A
    QPowA(i32),
    OnePlusQA,
    AZ,
    KZ,
}

impl RatQ {
    pub fn zero() -> RatQ {
        RatQ { v: 0, num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> RatQ {
        RatQ::int(1)
    }

    pub fn int(c: i64) -> RatQ {
        RatQ::from_int(Int::S(c))
    }

    pub fn from_int(c: Int) -> RatQ {
        if c.is_zero() {
            return RatQ::zero();
        }
        RatQ { v: 0, num: Poly::constant(c), den: Poly::one() }
    }

    /// q^k
    pub fn qpow(k: i32) -> RatQ {
        RatQ { v: k, num: Poly::one(), den: Poly::one() }
    }

    /// c q^k
    pub fn mono(c: i64, k: i32) -> RatQ {
        if c == 0 {
            return RatQ::zero();
        }
        RatQ { v: k, num: Poly::constant(Int::S(c)), den: Poly::one() }
    }

    /// Laurent polynomial sum of c_j q^(lo+j).
    pub fn laurent(lo: i32, coeffs: &[i64]) -> RatQ {
        RatQ::from_parts(lo, Poly::from_i64(coeffs), Poly::one())
    }

    /// q^v * num / den in canonical form; den must be nonzero.
    pub fn from_parts(v: i32, mut num: Poly, mut den: Poly) -> RatQ {
        assert!(!den.is_zero(), "zero denominator");
        let Some(a) = num.val() else { return RatQ::zero() };
        let b = den.val().unwrap();
        num.shift_down(a);
        den.shift_down(b);
        let v = v + a as i32 - b as i32;
        RatQ::reduce(v, num, den)
    }

    /// Canonicalize given num(0), den(0) nonzero.
    fn reduce(v: i32, num: Poly, den: Poly) -> RatQ {
        if den.is_one() {
            return RatQ { v, num, den };
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g), den.div_exact(&g))
        };
        if den.lc().is_negative() {
            num = num.neg();
            den = den.neg();
        }
        RatQ { v, num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.v == 0 && self.num.is_one() && self.den.is_one()
    }

    /// True when the value is c q^k for an integer c.
    pub fn is_monomial(&self) -> bool {
        self.den.is_one() && self.num.is_const()
    }

    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// q-adic valuation; None for zero.
    pub fn val(&self) -> Option<i32> {
        if self.is_zero() {
            None
        } else {
            Some(self.v)
        }
    }

    /// Leading coefficient of the q-adic expansion as (numerator, denominator).
    pub fn lead(&self) -> (Int, Int) {
        if self.is_zero() {
            return (Int::ZERO, Int::ONE);
        }
        let (a, b) = (self.num.c0().clone(), self.den.c0().clone());
        let g = a.gcd(&b);
        let (a, b) = (a.div_exact(&g), b.div_exact(&g));
        if b.is_negative() {
            (-&a, -&b)
        } else {
            (a, b)
        }
    }

    /// Sign of the leading q-adic coefficient: the sign under the total order.
    pub fn signum(&self) -> i32 {
        if self.is_zero() {
            0
        } else {
            self.num.c0().signum() * self.den.c0().signum()
        }
    }

    /// Value at q = 0 of an element of A (as numerator, denominator).
    pub fn at_zero(&self) -> Option<(Int, Int)> {
        match self.val() {
            None => Some((Int::ZERO, Int::ONE)),
            Some(v) if v > 0 => Some((Int::ZERO, Int::ONE)),
            Some(0) => Some(self.lead()),
            _ => None,
        }
    }

    /// The numerator and denominator as plain polynomials (q-power folded in).
    pub fn num_den(&self) -> (Poly, Poly) {
        if self.v >= 0 {
            (self.num.shift_up(self.v as usize), self.den.clone())
        } else {
            (self.num.clone(), self.den.shift_up((-self.v) as usize))
        }
    }

    pub fn neg(&self) -> RatQ {
        RatQ { v: self.v, num: self.num.neg(), den: self.den.clone() }
    }

    pub fn add(&self, o: &RatQ) -> RatQ {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let v = self.v.min(o.v);
        let a = self.num.shift_up((self.v - v) as usize);
        let b = o.num.shift_up((o.v - v) as usize);
        if self.den == o.den {
            let mut n = a.add(&b);
            let Some(k) = n.val() else { return RatQ::zero() };
            n.shift_down(k);
            return RatQ::reduce(v + k as i32, n, self.den.clone());
        }
        let g = self.den.gcd(&o.den);
        let d1 = self.den.div_exact(&g);
        let d2 = o.den.div_exact(&g);
        let mut n = a.mul(&d2).add(&b.mul(&d1));
        let Some(k) = n.val() else { return RatQ::zero() };
        n.shift_down(k);
        let den = self.den.mul(&d2);
        if g.is_one() {
            return RatQ { v: v + k as i32, num: n, den };
        }
        RatQ::reduce(v + k as i32, n, den)
    }

    pub fn sub(&self, o: &RatQ) -> RatQ {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatQ) -> RatQ {
        if self.is_zero() || o.is_zero() {
            return RatQ::zero();
        }
        let v = self.v + o.v;
        if self.den.is_one() && o.den.is_one() {
            return RatQ { v, num: self.num.mul(&o.num), den: Poly::one() };
        }
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let n1 = self.num.div_exact(&g1);
        let d2 = o.den.div_exact(&g1);
        let n2 = o.num.div_exact(&g2);
        let d1 = self.den.div_exact(&g2);
        let mut num = n1.mul(&n2);
        let mut den = d1.mul(&d2);
        if den.lc().is_negative() {
            num = num.neg();
            den = den.neg();
        }
        RatQ { v, num, den }
    }

    pub fn inv(&self) -> Result<RatQ, QError> {
        if self.is_zero() {
            return Err(QError::DivByZero);
        }
        let (mut num, mut den) = (self.den.clone(), self.num.clone());
        if den.lc().is_negative() {
            num = num.neg();
            den = den.neg();
        }
        Ok(RatQ { v: -self.v, num, den })
    }

    pub fn div(&self, o: &RatQ) -> Result<RatQ, QError> {
        Ok(self.mul(&o.inv()?))
    }

    /// Multiply by q^k.
    pub fn shift(&self, k: i32) -> RatQ {
        if self.is_zero() {
            return RatQ::zero();
        }
        RatQ { v: self.v + k, num: self.num.clone(), den: self.den.clone() }
    }

    pub fn scale_int(&self, c: i64) -> RatQ {
        self.mul(&RatQ::int(c))
    }

    pub fn pow(&self, e: u32) -> RatQ {
        let mut r = RatQ::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Replace q by q^s.
    pub fn subs_qpow(&self, s: u32) -> RatQ {
        if s == 1 || self.is_zero() {
            return self.clone();
        }
        let spread = |p: &Poly| {
            let mut c = vec![Int::ZERO; (p.coeffs().len() - 1) * s as usize + 1];
            for (k, x) in p.coeffs().iter().enumerate() {
                c[k * s as usize] = x.clone();
            }
            Poly::from_coeffs(c)
        };
        RatQ::from_parts(self.v * s as i32, spread(&self.num), spread(&self.den))
    }

    pub fn compare(&self, o: &RatQ) -> Ordering {
        self.sub(o).signum().cmp(&0)
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn member(&self, set: Subset) -> bool {
        match set {
            Subset::A => self.in_qpow_a(0),
            Subset::QA => self.in_qpow_a(1),
            Subset::QPowA(n) => self.in_qpow_a(n),
            Subset::OnePlusQA => self.sub(&RatQ::one()).in_qpow_a(1),
            Subset::AZ => self.in_qpow_a(0) && self.integral_den(),
            Subset::KZ => self.integral_den(),
        }
    }

    fn in_qpow_a(&self, n: i32) -> bool {
        self.val().map_or(true, |v| v >= n)
    }

    // the reduced denominator has constant term +-1
    fn integral_den(&self) -> bool {
        self.is_zero() || self.den.c0().abs().is_one()
    }

    /// [m]_{q^s}
    pub fn q_int(m: i64, s: u32) -> RatQ {
        if m == 0 {
            return RatQ::zero();
        }
        let n = m.unsigned_abs() as usize;
        // q^{-(n-1)} (1 + q^2 + ... + q^{2(n-1)})
        let mut c = vec![0i64; 2 * (n - 1) + 1];
        for k in 0..n {
            c[2 * k] = m.signum();
        }
        RatQ::laurent(-(n as i32 - 1), &c).subs_qpow(s)
    }

    /// [m]_{q^s}!
    pub fn q_fact(m: i64, s: u32) -> Result<RatQ, QError> {
        if m < 0 {
            return Err(QError::NegativeFactorial(m));
        }
        Ok((1..=m).fold(RatQ::one(), |acc, k| acc.mul(&RatQ::q_int(k, s))))
    }

    /// Gaussian binomial [m choose n]_{q^s} by the product formula.
    pub fn q_binom(m: i64, n: i64, s: u32) -> RatQ {
        assert!(n >= 0, "binomial with negative lower index");
        let mut num = RatQ::one();
        for j in 0..n {
            num = num.mul(&RatQ::q_int(m - j, s));
        }
        num.div(&RatQ::q_fact(n, s).unwrap()).unwrap()
    }
}

impl Default for RatQ {
    fn default() -> RatQ {
        RatQ::zero()
    }
}

impl fmt::Display for RatQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = self.num_den();
        write!(f, "({})/({})", n, d)
    }
}

impl fmt::Debug for RatQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for RatQ {
    type Err = QError;
    fn from_str(s: &str) -> Result<RatQ, QError> {
        let t = s.trim();
        let bad = || QError::Parse(s.to_string());
        let (n, d) = match t.split_once(")/(") {
            Some((a, b)) => {
                let a = a.strip_prefix('(').ok_or_else(bad)?;
                let b = b.strip_suffix(')').ok_or_else(bad)?;
                (a, b)
            }
            None => (t.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(t), "1"),
        };
        let n = Poly::parse(n).map_err(QError::Parse)?;
        let d = Poly::parse(d).map_err(QError::Parse)?;
        if d.is_zero() {
            return Err(QError::DivByZero);
        }
        Ok(RatQ::from_parts(0, n, d))
    }
}

impl Serialize for RatQ {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RatQ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<RatQ, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident, $m:ident) => {
        impl std::ops::$tr<&RatQ> for &RatQ {
            type Output = RatQ;
            fn $f(self, o: &RatQ) -> RatQ {
                RatQ::$m(self, o)
            }
        }
        impl std::ops::$tr<RatQ> for RatQ {
            type Output = RatQ;
            fn $f(self, o: RatQ) -> RatQ {
                RatQ::$m(&self, &o)
            }
        }
    };
}
binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);

impl std::ops::Neg for &RatQ {
    type Output = RatQ;
    fn neg(self) -> RatQ {
        RatQ::neg(self)
    }
}

impl std::ops::Neg for RatQ {
    type Output = RatQ;
    fn neg(self) -> RatQ {
        RatQ::neg(&self)
    }
}

/// Checked binary operation by name, as exposed to the CLI and bindings.
pub fn arith(op: &str, f: &RatQ, g: &RatQ) -> Result<RatQ, QError> {
    match op {
        "add" => Ok(f + g),
        "sub" => Ok(f - g),
        "mul" => Ok(f * g),
        "div" => f.div(g),
        "neg" => Ok(-f),
        _ => Err(QError::Parse(format!("unknown operation {op}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> RatQ {
        s.parse().unwrap()
    }

    #[test]
    fn worked_examples() {
        assert_eq!(r("1-q^2").div(&r("1-q")).unwrap(), r("1+q"));
        assert_eq!(RatQ::qpow(-1) + RatQ::qpow(1), r("(1+q^2)/(q)"));
        assert_eq!(RatQ::one().div(&RatQ::zero()), Err(QError::DivByZero));
        assert_eq!((RatQ::qpow(-1) + RatQ::qpow(1)).to_string(), "(1+q^2)/(q)");
    }

    #[test]
    fn quantum_numbers() {
        assert_eq!(RatQ::q_int(2, 1), RatQ::qpow(1) + RatQ::qpow(-1));
        assert_eq!(RatQ::q_binom(7, 0, 3), RatQ::one());
        assert_eq!(RatQ::q_binom(-1, 1, 1), RatQ::int(-1));
        assert!(RatQ::q_fact(-1, 1).is_err());
        // [4 choose 2]_q = q^-4 + q^-2 + 2 + q^2 + q^4
        assert_eq!(RatQ::q_binom(4, 2, 1), RatQ::laurent(-4, &[1, 0, 1, 0, 2, 0, 1, 0, 1]));
        assert_eq!(RatQ::q_int(3, 3), RatQ::laurent(-6, &[1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1]));
    }

    #[test]
    fn membership_examples() {
        assert!(r("(1)/(1-q)").member(Subset::A));
        assert!(!RatQ::qpow(-1).member(Subset::A));
        assert!(r("(1)/(q^5+q^6)").member(Subset::KZ));
        assert!(!r("(1)/(q^5+q^6)").member(Subset::AZ));
        assert!(!r("(1)/(2+2q)").member(Subset::AZ));
        assert!(r("(2)/(2+2q)").member(Subset::AZ));
        assert!(r("1+q").member(Subset::OnePlusQA));
        assert!(!r("2+q").member(Subset::OnePlusQA));
    }

    #[test]
    fn order_examples() {
        assert_eq!(RatQ::qpow(-1).compare(&RatQ::one()), Ordering::Greater);
        assert_eq!(r("1+q^2").compare(&RatQ::zero()), Ordering::Greater);
        assert_eq!(r("-q").compare(&r("q^2")), Ordering::Less);
    }

    #[test]
    fn print_parse_round_trip() {
        for s in ["(0)/(1)", "(1+q^2)/(q)", "(-3q^2+q^5)/(2+q)", "(1)/(q^3)", "(7)/(1)"] {
            assert_eq!(r(s).to_string(), s);
        }
        assert!("(1)/(0)".parse::<RatQ>().is_err());
        assert!("(1+)/(q)".parse::<RatQ>().is_err());
    }
}
