//! Dense polynomials in Z[q], ascending coefficient order.

use super::int::Int;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly(pub(crate) Vec<Int>);

impl Poly {
    pub fn zero() -> Poly {
        Poly(Vec::new())
    }

    pub fn one() -> Poly {
        Poly(vec![Int::ONE])
    }

    pub fn constant(c: Int) -> Poly {
        let mut p = Poly(vec![c]);
        p.trim();
        p
    }

    pub fn from_coeffs(c: Vec<Int>) -> Poly {
        let mut p = Poly(c);
        p.trim();
        p
    }

    pub fn from_i64(c: &[i64]) -> Poly {
        Poly::from_coeffs(c.iter().map(|&x| Int::S(x)).collect())
    }

    /// q^k
    pub fn monomial(k: usize) -> Poly {
        let mut v = vec![Int::ZERO; k + 1];
        v[k] = Int::ONE;
        Poly(v)
    }

    fn trim(&mut self) {
        while matches!(self.0.last(), Some(c) if c.is_zero()) {
            self.0.pop();
        }
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    pub fn is_const(&self) -> bool {
        self.0.len() <= 1
    }

    /// Degree; -1 for the zero polynomial.
    pub fn deg(&self) -> i64 {
        self.0.len() as i64 - 1
    }

    pub fn lc(&self) -> &Int {
        self.0.last().unwrap_or(&Int::ZERO)
    }

    pub fn c0(&self) -> &Int {
        self.0.first().unwrap_or(&Int::ZERO)
    }

    /// Index of the lowest nonzero coefficient.
    pub fn val(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    /// Divide by q^k; the low k coefficients must be zero.
    pub fn shift_down(&mut self, k: usize) {
        if k > 0 {
            self.0.drain(0..k);
        }
    }

    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut v = vec![Int::ZERO; k];
        v.extend(self.0.iter().cloned());
        Poly(v)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let (a, b) = if self.0.len() >= o.0.len() { (self, o) } else { (o, self) };
        let mut v = a.0.clone();
        for (x, y) in v.iter_mut().zip(b.0.iter()) {
            *x += y;
        }
        Poly::from_coeffs(v)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if self.is_one() {
            return o.clone();
        }
        if o.is_one() {
            return self.clone();
        }
        let mut v = vec![Int::ZERO; self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += &(a * b);
                }
            }
        }
        Poly::from_coeffs(v)
    }

    pub fn scale(&self, c: &Int) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        Poly(self.0.iter().map(|x| x * c).collect())
    }

    pub fn div_int_exact(&self, c: &Int) -> Poly {
        if c.is_one() {
            return self.clone();
        }
        Poly(self.0.iter().map(|x| x.div_exact(c)).collect())
    }

    pub fn content(&self) -> Int {
        let mut g = Int::ZERO;
        for c in &self.0 {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -&g;
        }
        self.div_int_exact(&g)
    }

    /// Exact quotient self / d in Z[q]; d must divide self.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        assert!(!d.is_zero(), "polynomial division by zero");
        if d.is_one() {
            return self.clone();
        }
        if d.is_const() {
            return self.div_int_exact(&d.0[0]);
        }
        if self.is_zero() {
            return Poly::zero();
        }
        let mut r = self.0.clone();
        let dn = d.0.len();
        let lc = d.lc().clone();
        let qn = r.len() + 1 - dn;
        let mut q = vec![Int::ZERO; qn];
        for k in (0..qn).rev() {
            let top = &r[k + dn - 1];
            if top.is_zero() {
                continue;
            }
            let c = top.div_exact(&lc);
            for (j, dj) in d.0.iter().enumerate() {
                if !dj.is_zero() {
                    r[k + j] = &r[k + j] - &(&c * dj);
                }
            }
            q[k] = c;
        }
        debug_assert!(r.iter().all(|c| c.is_zero()), "inexact polynomial division");
        Poly::from_coeffs(q)
    }

    /// Pseudo-remainder of self by d.
    fn prem(&self, d: &Poly) -> Poly {
        let mut r = self.0.clone();
        let dn = d.0.len();
        let lc = d.lc().clone();
        while r.len() >= dn {
            let top = r.last().unwrap().clone();
            let shift = r.len() - dn;
            for c in r.iter_mut() {
                *c = &*c * &lc;
            }
            for (j, dj) in d.0.iter().enumerate() {
                r[shift + j] = &r[shift + j] - &(&top * dj);
            }
            r.pop();
            while matches!(r.last(), Some(c) if c.is_zero()) {
                r.pop();
            }
        }
        Poly::from_coeffs(r)
    }

    /// gcd in Z[q], normalized to positive leading coefficient.
    pub fn gcd(&self, o: &Poly) -> Poly {
        if self.is_zero() {
            return o.primitive_signed_content();
        }
        if o.is_zero() {
            return self.primitive_signed_content();
        }
        let c = self.content().gcd(&o.content());
        if self.is_const() || o.is_const() {
            return Poly::constant(c);
        }
        if self == o {
            return self.primitive().scale(&c);
        }
        let (mut a, mut b) = (self.primitive(), o.primitive());
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        loop {
            let r = a.prem(&b);
            if r.is_zero() {
                break;
            }
            if r.is_const() {
                return Poly::constant(c);
            }
            a = b;
            b = r.primitive();
        }
        b.scale(&c)
    }

    fn primitive_signed_content(&self) -> Poly {
        if self.lc().is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Render with variable `q`, ascending powers: "1-2q+q^3".
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if neg {
                s.push('-');
            } else if !s.is_empty() {
                s.push('+');
            }
            if k == 0 || !a.is_one() {
                s.push_str(&a.to_string());
            }
            if k >= 1 {
                s.push('q');
            }
            if k >= 2 {
                s.push('^');
                s.push_str(&k.to_string());
            }
        }
        s
    }

    pub fn parse(s: &str) -> Result<Poly, String> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err("empty polynomial".into());
        }
        let mut coeffs: Vec<Int> = Vec::new();
        let b = s.as_bytes();
        let mut i = 0;
        while i < b.len() {
            let mut neg = false;
            if b[i] == b'+' || b[i] == b'-' {
                neg = b[i] == b'-';
                i += 1;
            } else if i != 0 {
                return Err(format!("unexpected '{}' in {s}", b[i] as char));
            }
            let st = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            let mut c: Int = if st == i {
                Int::ONE
            } else {
                s[st..i].parse().map_err(|_| format!("bad integer in {s}"))?
            };
            let mut k = 0usize;
            if i < b.len() && b[i] == b'q' {
                i += 1;
                k = 1;
                if i < b.len() && b[i] == b'^' {
                    i += 1;
                    let st = i;
                    while i < b.len() && b[i].is_ascii_digit() {
                        i += 1;
                    }
                    k = s[st..i].parse().map_err(|_| format!("bad exponent in {s}"))?;
                }
            } else if st == i {
                return Err(format!("missing term in {s}"));
            }
            if neg {
                c = -&c;
            }
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Int::ZERO);
            }
            coeffs[k] += &c;
        }
        Ok(Poly::from_coeffs(coeffs))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_i64(c)
    }

    #[test]
    fn gcd_of_products() {
        let a = p(&[1, 1]);
        let b = p(&[1, 0, 1]);
        let c = p(&[2, -1, 3]);
        let g = a.mul(&b).mul(&c).gcd(&a.mul(&c).scale(&Int::S(4)));
        assert_eq!(g, a.mul(&c));
        assert_eq!(p(&[2, 2]).gcd(&p(&[4, 0, 4])), p(&[2]));
        assert_eq!(p(&[-1, 0, 1]).gcd(&p(&[1, -1])), p(&[-1, 1]));
    }

    #[test]
    fn exact_division() {
        let a = p(&[1, 0, -1]);
        assert_eq!(a.div_exact(&p(&[1, -1])), p(&[1, 1]));
        assert_eq!(p(&[3, 6, 3]).div_exact(&p(&[3, 3])), p(&[1, 1]));
    }

    #[test]
    fn render_parse() {
        for c in [&[0i64][..], &[1], &[-1, 0, 2], &[0, 1], &[5, -1, 0, 0, -12]] {
            let x = p(c);
            assert_eq!(Poly::parse(&x.render()).unwrap(), x);
        }
        assert_eq!(p(&[1, 0, 1]).render(), "1+q^2");
        assert_eq!(p(&[0, -1]).render(), "-q");
        assert!(Poly::parse("1+").is_err());
    }
}
