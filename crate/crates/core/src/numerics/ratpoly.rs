use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{format_rational, IntPoly};
use crate::error::{Error, Result};

/// Dense polynomial with rational coefficients, ascending order, no stored
/// leading zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(c.into()))
    }

    /// The indeterminate `X`.
    pub fn x() -> Self {
        Self::monomial(1)
    }

    /// `X^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = BigRational::one();
        RatPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> BigRational {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Writes `self = num / den` with `num` integral and `den > 0`.
    pub fn to_int_poly(&self) -> (IntPoly, BigInt) {
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        (IntPoly::new(num), den)
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn div_rem(&self, divisor: &RatPoly) -> (RatPoly, RatPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = divisor.lead().recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (i, b) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] -= &c * b;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn rem(&self, divisor: &RatPoly) -> RatPoly {
        self.div_rem(divisor).1
    }

    pub fn monic(&self) -> RatPoly {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.lead().recip())
    }

    /// Inverse modulo `modulus` by the extended Euclidean algorithm over Q.
    pub fn inverse_mod(&self, modulus: &RatPoly) -> Result<RatPoly> {
        let mut r0 = modulus.monic();
        let mut r1 = self.rem(modulus);
        let mut s0 = Self::zero();
        let mut s1 = Self::one();
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = &s0 - &(&q * &s1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            // keep the running remainder monic to limit coefficient growth
            if !r1.is_zero() {
                let c = r1.lead().recip();
                r1 = r1.scale(&c);
                s1 = s1.scale(&c);
            }
        }
        if r0.degree() != Some(0) {
            return Err(Error::NotInvertible);
        }
        Ok(s0.scale(&r0.lead().recip()).rem(modulus))
    }

    pub fn pow(&self, e: u32) -> RatPoly {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl From<&IntPoly> for RatPoly {
    fn from(p: &IntPoly) -> Self {
        RatPoly::new(
            p.coeffs()
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatPoly({self})")
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (k, a.is_one()) {
                (0, _) => write!(f, "{}", format_rational(&a))?,
                (_, true) => {}
                _ => write!(f, "({})", format_rational(&a))?,
            }
            match k {
                0 => {}
                1 => write!(f, "X")?,
                _ => write!(f, "X^{k}")?,
            }
        }
        Ok(())
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        -&self
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = BigRational::zero();
        RatPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        self + &(-rhs)
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for RatPoly {
            type Output = RatPoly;
            fn $f(self, rhs: RatPoly) -> RatPoly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&RatPoly> for RatPoly {
            type Output = RatPoly;
            fn $f(self, rhs: &RatPoly) -> RatPoly {
                (&self).$f(rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn rp(c: &[i64]) -> RatPoly {
        RatPoly::from(&IntPoly::from_i64s(c))
    }

    #[test]
    fn division_identity() {
        let a = RatPoly::new(vec![q(1, 2), q(-3, 1), q(0, 1), q(5, 3), q(1, 1)]);
        let b = rp(&[-1, -3, 1]);
        let (quot, rem) = a.div_rem(&b);
        assert!(rem.degree().unwrap_or(0) < 2);
        assert_eq!(&(&quot * &b) + &rem, a);
    }

    #[test]
    fn x4_mod_quadratic() {
        // X^2 = 3X + 1, so X^4 = (3X+1)^2 = 9X^2 + 6X + 1 = 33X + 10.
        let r = RatPoly::monomial(4).rem(&rp(&[-1, -3, 1]));
        assert_eq!(r, rp(&[10, 33]));
    }

    #[test]
    fn inverse() {
        let m = rp(&[-1, -3, 1]);
        let a = rp(&[-3, 1]);
        let inv = a.inverse_mod(&m).unwrap();
        assert_eq!((&a * &inv).rem(&m), RatPoly::one());
        let shared = rp(&[1, 0, 1]);
        assert!(matches!(
            shared.inverse_mod(&(&shared * &rp(&[-2, 1]))),
            Err(Error::NotInvertible)
        ));
    }

    #[test]
    fn clears_denominators() {
        let a = RatPoly::new(vec![q(1, 2), q(-1, 3)]);
        let (num, den) = a.to_int_poly();
        assert_eq!(den, BigInt::from(6));
        assert_eq!(num, IntPoly::from_i64s(&[3, -2]));
    }

    #[test]
    fn display() {
        let a = RatPoly::new(vec![q(1, 2), q(-1, 1), q(0, 1), q(2, 3)]);
        assert_eq!(a.to_string(), "(2/3)X^3 - X + 1/2");
    }
}
