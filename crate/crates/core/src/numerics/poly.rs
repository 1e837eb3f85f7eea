//! Dense univariate polynomials over the integers.
//!
//! Coefficients are stored in ascending degree order and kept canonical: the
//! highest stored coefficient is nonzero, and the zero polynomial is the empty
//! vector.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign as BigSign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Sign;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c * X^k`
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// `X - r`
    pub fn linear_root(r: i64) -> Self {
        Self::from_i64s(&[-r, 1])
    }

    /// `X^n + 1`
    pub fn x_pow_plus_one(n: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[0] += 1;
        coeffs[n] += 1;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree, treating the zero polynomial as degree 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lead(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Nonnegative gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divides out the content, keeping the sign of the leading coefficient.
    pub fn primitive_part(&self) -> Self {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| c / &g).collect(),
        }
    }

    /// Primitive part with a positive leading coefficient.
    pub fn normalized(&self) -> Self {
        let p = self.primitive_part();
        if p.lead().is_negative() {
            -p
        } else {
            p
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// `X^deg * p(1/X)`.
    pub fn reverse(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self::new(coeffs)
    }

    /// Largest `k` with `X^k` dividing `self`, together with the cofactor.
    pub fn split_x_power(&self) -> (usize, Self) {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if self.is_zero() {
            return (0, Self::zero());
        }
        (
            k,
            IntPoly {
                coeffs: self.coeffs[k..].to_vec(),
            },
        )
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let (num, den) = homogeneous_eval(&self.coeffs, x);
        BigRational::new(num, den)
    }

    /// Sign of `p(x)` using integer arithmetic only.
    pub fn sign_at(&self, x: &BigRational) -> Sign {
        Sign::of(&homogeneous_eval(&self.coeffs, x).0)
    }

    /// Sign of `p(x)` as `x -> +inf` (`positive = true`) or `-inf`.
    pub fn sign_at_infinity(&self, positive: bool) -> Sign {
        let Some(deg) = self.degree() else {
            return Sign::Zero;
        };
        let s = Sign::of(&self.lead());
        if positive || deg % 2 == 0 {
            s
        } else {
            -s
        }
    }

    /// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
    pub fn pseudo_rem(&self, b: &IntPoly) -> IntPoly {
        assert!(!b.is_zero(), "pseudo-division by zero polynomial");
        let db = b.deg();
        if self.is_zero() || self.deg() < db {
            return self.clone();
        }
        let lb = b.lead();
        let mut r = self.coeffs.clone();
        let mut steps = self.deg() - db + 1;
        while r.len() > db && !r.is_empty() {
            let shift = r.len() - 1 - db;
            let lr = r.last().unwrap().clone();
            for c in r.iter_mut() {
                *c *= &lb;
            }
            for (i, bc) in b.coeffs.iter().enumerate() {
                r[i + shift] -= &lr * bc;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
            steps -= 1;
        }
        // Pad the missing multiplications so that the result is the
        // conventional pseudo-remainder.
        let mut res = IntPoly::new(r);
        if steps > 0 {
            res = res.scale(&num_traits::pow(lb, steps));
        }
        res
    }

    /// Exact division over the integers; `None` if `b` does not divide `self`
    /// with an integral quotient.
    pub fn div_exact(&self, b: &IntPoly) -> Option<IntPoly> {
        assert!(!b.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        let db = b.deg();
        if self.deg() < db {
            return None;
        }
        let lb = b.lead();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); self.deg() - db + 1];
        for k in (0..q.len()).rev() {
            let top = &r[k + db];
            if top.is_zero() {
                continue;
            }
            let (qc, rem) = top.div_rem(&lb);
            if !rem.is_zero() {
                return None;
            }
            for (i, bc) in b.coeffs.iter().enumerate() {
                r[k + i] -= &qc * bc;
            }
            q[k] = qc;
        }
        if r.iter().all(Zero::is_zero) {
            Some(IntPoly::new(q))
        } else {
            None
        }
    }

    /// Greatest common divisor via the subresultant polynomial remainder
    /// sequence. The result is primitive with a positive leading coefficient;
    /// `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return other.normalized();
        }
        if other.is_zero() {
            return self.normalized();
        }
        let (mut a, mut b) = if self.deg() >= other.deg() {
            (self.primitive_part(), other.primitive_part())
        } else {
            (other.primitive_part(), self.primitive_part())
        };
        let mut g = BigInt::one();
        let mut h = BigInt::one();
        loop {
            let delta = a.deg() - b.deg();
            let r = a.pseudo_rem(&b);
            if r.is_zero() {
                return b.normalized();
            }
            if r.deg() == 0 {
                return IntPoly::one();
            }
            a = b;
            let divisor = &g * num_traits::pow(h.clone(), delta);
            b = IntPoly {
                coeffs: r.coeffs.iter().map(|c| c / &divisor).collect(),
            };
            g = a.lead();
            h = if delta == 0 {
                h
            } else {
                num_traits::pow(g.clone(), delta) / num_traits::pow(h, delta - 1)
            };
        }
    }

    /// `p / gcd(p, p')`, normalized.
    pub fn square_free_part(&self) -> IntPoly {
        if self.is_constant() {
            return self.normalized();
        }
        let g = self.gcd(&self.derivative());
        self.normalized()
            .div_exact(&g)
            .expect("gcd divides its argument")
            .normalized()
    }

    /// Yun's algorithm: returns `[(f_1, 1), (f_2, 2), ...]` with each `f_k`
    /// square-free, pairwise coprime, and `p = c * prod f_k^k`. Constant factors
    /// are omitted.
    pub fn square_free_decomposition(&self) -> Vec<(IntPoly, u32)> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let p = self.normalized();
        let dp = p.derivative();
        let a0 = p.gcd(&dp);
        let mut b = p.div_exact(&a0).expect("gcd divides p");
        // a0 is primitive, so the quotients below are integral (Gauss's lemma).
        let mut c = dp.div_exact(&a0).expect("gcd divides p'");
        let mut d = &c - &b.derivative();
        let mut k = 1;
        while !b.is_constant() {
            let a = b.gcd(&d);
            if !a.is_constant() {
                out.push((a.clone(), k));
            }
            b = b.div_exact(&a).expect("a divides b");
            c = d.div_exact(&a).expect("a divides d");
            d = &c - &b.derivative();
            k += 1;
        }
        out
    }

    /// Number of sign changes in the coefficient sequence (zeros skipped).
    pub fn coefficient_sign_changes(&self) -> usize {
        let signs: Vec<_> = self
            .coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| c.sign())
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Cauchy bound `1 + max |c_i| / |c_lead|`: every complex root has modulus
    /// strictly smaller.
    pub fn cauchy_bound(&self) -> BigRational {
        let lead = self.lead().abs();
        let max = self
            .coeffs
            .iter()
            .take(self.coeffs.len().saturating_sub(1))
            .map(|c| c.abs())
            .max()
            .unwrap_or_default();
        BigRational::one() + BigRational::new(max, lead)
    }
}

/// Returns `(q^deg * p(x), q^deg)` for `x = num/q`, `q > 0`.
fn homogeneous_eval(coeffs: &[BigInt], x: &BigRational) -> (BigInt, BigInt) {
    if coeffs.is_empty() {
        return (BigInt::zero(), BigInt::one());
    }
    let num = x.numer();
    let den = x.denom();
    let n = coeffs.len() - 1;
    // Horner on the homogenised form: sum c_i num^i den^(n-i).
    let mut acc = BigInt::zero();
    let mut den_pow = BigInt::one();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if i == n {
            acc = c.clone();
        } else {
            den_pow *= den;
            acc = acc * num + c * &den_pow;
        }
    }
    (acc, den_pow)
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.sign() == BigSign::Minus;
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = !abs.is_one() || i == 0;
            if show_coeff {
                write!(f, "{abs}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "X")?,
                _ => write!(f, "X^{i}")?,
            }
        }
        Ok(())
    }
}

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        -(self.clone())
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let mut c = self.coeffs.get(i).cloned().unwrap_or_default();
            if let Some(r) = rhs.coeffs.get(i) {
                c += r;
            }
            coeffs.push(c);
        }
        IntPoly::new(coeffs)
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let mut c = self.coeffs.get(i).cloned().unwrap_or_default();
            if let Some(r) = rhs.coeffs.get(i) {
                c -= r;
            }
            coeffs.push(c);
        }
        IntPoly::new(coeffs)
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        IntPoly::new(coeffs)
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&IntPoly> for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: &IntPoly) -> IntPoly {
                (&self).$m(rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    /// Schoolbook product written independently of the `Mul` impl.
    fn oracle_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; a.len() + b.len() - 1];
        for i in 0..a.len() {
            for j in 0..b.len() {
                out[i + j] += a[i] * b[j];
            }
        }
        while out.last() == Some(&0) {
            out.pop();
        }
        out
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&p(&[1, 1]) * &p(&[-1, 1]), p(&[-1, 0, 1]));
        let prod = &p(&[-1, -3, 1]) * &p(&[1, 0, 1]);
        assert_eq!(prod, p(&[-1, -3, 0, -3, 1]));
        assert_eq!(prod, p(&oracle_mul(&[-1, -3, 1], &[1, 0, 1])));
        let q = p(&[4, 0, -7]);
        assert_eq!(&q + &IntPoly::zero(), q);
        assert!((&q - &q).is_zero());
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-1, -2, 0, -3, 1]).to_string(), "X^4 - 3X^3 - 2X - 1");
        assert_eq!(IntPoly::zero().to_string(), "0");
        assert_eq!(p(&[0, -1]).to_string(), "-X");
    }

    #[test]
    fn gcd_and_division() {
        let a = &p(&[-1, 1]) * &p(&[2, 0, 1]);
        let b = &p(&[-1, 1]) * &p(&[3, 1]);
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
        assert_eq!(p(&[1, 0, 1]).gcd(&p(&[-1, 1])), IntPoly::one());
        let q = a.div_exact(&p(&[-1, 1])).unwrap();
        assert_eq!(q, p(&[2, 0, 1]));
        assert!(p(&[1, 0, 1]).div_exact(&p(&[0, 2])).is_none());
        // non-monic divisor with integral quotient
        let f = &p(&[1, 2]) * &p(&[3, 0, 5]);
        assert_eq!(f.div_exact(&p(&[1, 2])).unwrap(), p(&[3, 0, 5]));
    }

    #[test]
    fn square_free() {
        let f = &p(&[-1, 1]).pow(3) * &p(&[1, 0, 1]).pow(2);
        assert_eq!(f.square_free_part(), &p(&[-1, 1]) * &p(&[1, 0, 1]));
        let dec = f.square_free_decomposition();
        assert_eq!(dec, vec![(p(&[1, 0, 1]), 2), (p(&[-1, 1]), 3)]);
        let g = &p(&[2, 1]) * &p(&[-3, 1]).pow(2);
        assert_eq!(
            g.square_free_decomposition(),
            vec![(p(&[2, 1]), 1), (p(&[-3, 1]), 2)]
        );
    }

    #[test]
    fn sign_evaluation() {
        let f = p(&[-1, -2, 0, -3, 1]);
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(f.sign_at(&r(32, 10)), Sign::Negative);
        assert_eq!(f.sign_at(&r(33, 10)), Sign::Positive);
        assert_eq!(p(&[-4, 0, 1]).sign_at(&r(2, 1)), Sign::Zero);
        assert_eq!(f.eval(&r(1, 2)), r(1, 16) - r(3, 8) - r(1, 1) - r(1, 1));
    }

    #[test]
    fn pseudo_remainder_matches_definition() {
        let a = p(&[1, 2, 3, 4, 5]);
        let b = p(&[1, 0, 3]);
        let r = a.pseudo_rem(&b);
        // lc(b)^(4-2+1) a - q b = r with deg r < 2: check divisibility.
        let lhs = &a.scale(&BigInt::from(27)) - &r;
        assert!(lhs.div_exact(&b).is_some());
        assert!(r.deg() < 2);
    }
}
