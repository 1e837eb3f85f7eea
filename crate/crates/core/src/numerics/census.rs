//! Counting complex roots inside, on and outside the unit circle.

use std::ops::Add;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{sturm_count, IntPoly, RationalInterval, Sign, SturmChain};
use crate::error::{Error, Result};

/// Root counts (with multiplicity) relative to the unit circle.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UnitCircleCensus {
    pub inside: usize,
    pub on: usize,
    pub outside: usize,
}

impl UnitCircleCensus {
    pub fn total(&self) -> usize {
        self.inside + self.on + self.outside
    }

    fn times(self, k: usize) -> Self {
        UnitCircleCensus {
            inside: self.inside * k,
            on: self.on * k,
            outside: self.outside * k,
        }
    }
}

impl Add for UnitCircleCensus {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        UnitCircleCensus {
            inside: self.inside + rhs.inside,
            on: self.on + rhs.on,
            outside: self.outside + rhs.outside,
        }
    }
}

/// Exact census of the roots of `p`. Roots at the origin count as inside.
pub fn unit_circle_census(p: &IntPoly) -> Result<UnitCircleCensus> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (zeros, f) = p.split_x_power();
    let mut total = UnitCircleCensus {
        inside: zeros,
        ..Default::default()
    };
    for (factor, mult) in f.square_free_decomposition() {
        total = total + square_free_census(&factor)?.times(mult as usize);
    }
    debug_assert_eq!(total.total(), p.deg());
    Ok(total)
}

/// Census of a square-free polynomial with nonzero constant term.
fn square_free_census(f: &IntPoly) -> Result<UnitCircleCensus> {
    // Roots closed under z -> 1/z live in the reciprocal part; they are either
    // on the circle or come in inside/outside pairs.
    let recip = f.gcd(&f.reverse());
    let on = on_circle_count(&recip)?;
    let paired = recip.deg() - on;
    let rest = f.div_exact(&recip).expect("gcd divides f");
    let rest_inside = match inside_count_schur_cohn(&rest) {
        Some(n) => n,
        None => inside_count_cauchy_index(&rest)?,
    };
    let inside = paired / 2 + rest_inside;
    Ok(UnitCircleCensus {
        inside,
        on,
        outside: f.deg() - inside - on,
    })
}

/// Number of unit-circle roots of a square-free polynomial whose root set is
/// closed under inversion.
fn on_circle_count(s: &IntPoly) -> Result<usize> {
    let mut s = s.normalized();
    let mut on = 0;
    for r in [1, -1] {
        if let Some(q) = s.div_exact(&IntPoly::linear_root(r)) {
            s = q;
            on += 1;
        }
    }
    if s.is_constant() {
        return Ok(on);
    }
    if s.deg() % 2 == 1 || s.reverse() != s {
        return Err(Error::CensusContradiction(format!(
            "reciprocal factor {s} is not palindromic"
        )));
    }
    let t = trace_polynomial(&s);
    let interval = RationalInterval::from_ints(-2, 2).expect("ordered");
    Ok(on + 2 * sturm_count(&t, &interval)?)
}

/// For palindromic `s` of degree `2k`, the `t` with `s(z) = z^k t(z + 1/z)`.
fn trace_polynomial(s: &IntPoly) -> IntPoly {
    let k = s.deg() / 2;
    // v[j] is z^j + z^-j written in x = z + 1/z.
    let mut v = vec![
        IntPoly::constant(BigInt::from(2)),
        IntPoly::from_i64s(&[0, 1]),
    ];
    for j in 1..k {
        let next = &v[j].shift(1) - &v[j - 1];
        v.push(next);
    }
    let mut t = IntPoly::constant(s.coeff(k));
    for (j, vj) in v.iter().enumerate().take(k + 1).skip(1) {
        t = &t + &vj.scale(&s.coeff(k + j));
    }
    t
}

/// Inside count by iterated Schur transforms, or `None` when a transform
/// degenerates (a vanishing parameter or a drop in degree).
pub fn inside_count_schur_cohn(p: &IntPoly) -> Option<usize> {
    let mut cur = p.primitive_part();
    let n = cur.degree()?;
    let mut product = Sign::Positive;
    let mut inside = 0;
    for k in (1..=n).rev() {
        if cur.degree() != Some(k) {
            return None;
        }
        // T p = a0 p - an p*, of degree at most k - 1.
        let next = &cur.scale(&cur.coeff(0)) - &cur.reverse().scale(&cur.lead());
        let delta = Sign::of(&next.coeff(0));
        if delta == Sign::Zero {
            return None;
        }
        product = product * delta;
        if product == Sign::Negative {
            inside += 1;
        }
        cur = next.primitive_part();
    }
    Some(inside)
}

/// Inside count through the Cauchy index of the Möbius-transformed polynomial.
/// Requires that `p` has no roots on the unit circle.
pub fn inside_count_cauchy_index(p: &IntPoly) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = p.deg();
    if n == 0 {
        return Ok(0);
    }
    // q(w) = (w + i)^n p((w - i)/(w + i)) = A(w) + i B(w); |z| < 1 iff Im w > 0.
    let minus = GaussPoly::linear(-1);
    let plus = GaussPoly::linear(1);
    let mut minus_pow = vec![GaussPoly::one()];
    let mut plus_pow = vec![GaussPoly::one()];
    for _ in 0..n {
        minus_pow.push(minus_pow.last().unwrap().mul(&minus));
        plus_pow.push(plus_pow.last().unwrap().mul(&plus));
    }
    let mut q = GaussPoly::zero(n + 1);
    for (k, a) in p.coeffs().iter().enumerate() {
        if !a.is_zero() {
            q.add_scaled(&minus_pow[k].mul(&plus_pow[n - k]), a);
        }
    }
    let (mut re, mut im) = (IntPoly::new(q.re), IntPoly::new(q.im));
    // The leading coefficient of q is p(1), real and nonzero off the circle.
    let on_circle = || Error::InvalidArgument(format!("{p} has a root on the unit circle"));
    if re.deg() != n {
        return Err(on_circle());
    }
    if re.lead().is_negative() {
        re = -re;
        im = -im;
    }
    // A real root of q is a common real root of A and B.
    let common = re.gcd(&im);
    if !common.is_constant() && SturmChain::new(&common).count_all() > 0 {
        return Err(on_circle());
    }
    let index = if im.is_zero() {
        0
    } else {
        SturmChain::from_pair(&re, &im).cauchy_index()
    };
    let twice = n as i64 - index;
    debug_assert!(twice >= 0 && twice % 2 == 0);
    Ok((twice / 2) as usize)
}

/// Polynomial with Gaussian-integer coefficients, split into real and
/// imaginary coefficient vectors of equal length.
struct GaussPoly {
    re: Vec<BigInt>,
    im: Vec<BigInt>,
}

impl GaussPoly {
    fn zero(len: usize) -> Self {
        GaussPoly {
            re: vec![BigInt::zero(); len],
            im: vec![BigInt::zero(); len],
        }
    }

    fn one() -> Self {
        GaussPoly {
            re: vec![BigInt::one()],
            im: vec![BigInt::zero()],
        }
    }

    /// `w + s i`.
    fn linear(s: i64) -> Self {
        GaussPoly {
            re: vec![BigInt::zero(), BigInt::one()],
            im: vec![BigInt::from(s), BigInt::zero()],
        }
    }

    fn mul(&self, other: &GaussPoly) -> GaussPoly {
        let mut out = GaussPoly::zero(self.re.len() + other.re.len() - 1);
        for i in 0..self.re.len() {
            for j in 0..other.re.len() {
                out.re[i + j] += &self.re[i] * &other.re[j] - &self.im[i] * &other.im[j];
                out.im[i + j] += &self.re[i] * &other.im[j] + &self.im[i] * &other.re[j];
            }
        }
        out
    }

    fn add_scaled(&mut self, other: &GaussPoly, c: &BigInt) {
        for i in 0..other.re.len() {
            self.re[i] += &other.re[i] * c;
            self.im[i] += &other.im[i] * c;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn census(i: usize, o: usize, out: usize) -> UnitCircleCensus {
        UnitCircleCensus {
            inside: i,
            on: o,
            outside: out,
        }
    }

    #[test]
    fn examples() {
        assert_eq!(unit_circle_census(&p(&[1, 0, 1])).unwrap(), census(0, 2, 0));
        assert_eq!(
            unit_circle_census(&p(&[-1, -3, 1])).unwrap(),
            census(1, 0, 1)
        );
        let c = unit_circle_census(&p(&[-1, -2, 0, -3, 1])).unwrap();
        assert_eq!(c.outside, 1);
        assert_eq!(c, census(3, 0, 1));
    }

    #[test]
    fn origin_and_repeated_roots() {
        // X^2 (X - 1)^3 (2X - 1)^2 (X - 3)
        let f = &(&(&p(&[0, 0, 1]) * &p(&[-1, 1]).pow(3)) * &p(&[-1, 2]).pow(2)) * &p(&[-3, 1]);
        assert_eq!(unit_circle_census(&f).unwrap(), census(4, 3, 1));
    }

    #[test]
    fn lehmer_polynomial() {
        // Lehmer's degree-10 Salem polynomial: one root outside, one inside,
        // eight on the circle.
        let f = p(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
        assert_eq!(unit_circle_census(&f).unwrap(), census(1, 8, 1));
    }

    #[test]
    fn cyclotomic_products() {
        // Phi_5 * Phi_12 * (X+1)
        let f = &(&p(&[1, 1, 1, 1, 1]) * &p(&[1, 0, -1, 0, 1])) * &p(&[1, 1]);
        assert_eq!(unit_circle_census(&f).unwrap(), census(0, 9, 0));
    }

    #[test]
    fn schur_degeneracy_falls_back() {
        // X^3 + X + 1: a0 = an, so the first parameter vanishes. One real
        // root near -0.682 and a complex pair of modulus 1/sqrt(0.682) > 1.
        let f = p(&[1, 1, 0, 1]);
        assert_eq!(inside_count_schur_cohn(&f), None);
        assert_eq!(inside_count_cauchy_index(&f).unwrap(), 1);
        assert_eq!(unit_circle_census(&f).unwrap(), census(1, 0, 2));
    }

    /// Oracle: polynomial assembled from linear factors (X - r) with rational
    /// roots and quadratic factors X^2 - 2 re X + modsq with known modulus.
    fn assemble(lin: &[(i64, i64)], quad: &[(i64, i64)]) -> (IntPoly, UnitCircleCensus) {
        let mut f = IntPoly::one();
        let mut c = UnitCircleCensus::default();
        for &(num, den) in lin {
            f = &f * &p(&[-num, den]);
            match num.abs().cmp(&den) {
                std::cmp::Ordering::Less => c.inside += 1,
                std::cmp::Ordering::Equal => c.on += 1,
                std::cmp::Ordering::Greater => c.outside += 1,
            }
        }
        for &(b, m) in quad {
            // X^2 + b X + m with b^2 < 4m: complex pair of modulus sqrt(m)
            f = &f * &p(&[m, b, 1]);
            match m.cmp(&1) {
                std::cmp::Ordering::Less => c.inside += 2,
                std::cmp::Ordering::Equal => c.on += 2,
                std::cmp::Ordering::Greater => c.outside += 2,
            }
        }
        (f, c)
    }

    fn lin_factor() -> impl Strategy<Value = (i64, i64)> {
        (-7i64..8, 1i64..5).prop_filter("nonzero", |(n, _)| *n != 0)
    }

    fn quad_factor() -> impl Strategy<Value = (i64, i64)> {
        (-3i64..4, 1i64..6).prop_filter("complex", |(b, m)| b * b < 4 * m)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]
        #[test]
        fn matches_factor_oracle(lin in proptest::collection::vec(lin_factor(), 0..4),
                                 quad in proptest::collection::vec(quad_factor(), 0..3)) {
            prop_assume!(!lin.is_empty() || !quad.is_empty());
            let (f, expected) = assemble(&lin, &quad);
            prop_assert_eq!(unit_circle_census(&f).unwrap(), expected);
        }

        #[test]
        fn census_is_additive(a in proptest::collection::vec(lin_factor(), 1..3),
                              qa in proptest::collection::vec(quad_factor(), 0..2),
                              b in proptest::collection::vec(lin_factor(), 1..3)) {
            let (f, _) = assemble(&a, &qa);
            let (g, _) = assemble(&b, &[]);
            prop_assume!(f.gcd(&g).is_constant());
            let whole = unit_circle_census(&(&f * &g)).unwrap();
            let parts = unit_circle_census(&f).unwrap() + unit_circle_census(&g).unwrap();
            prop_assert_eq!(whole, parts);
        }

        #[test]
        fn both_inside_counts_agree(coeffs in proptest::collection::vec(-9i64..10, 2..8)) {
            let f = p(&coeffs);
            prop_assume!(f.deg() >= 1 && !f.coeff(0).is_zero());
            let f = f.square_free_part();
            let recip = f.gcd(&f.reverse());
            let rest = f.div_exact(&recip).unwrap();
            if let Some(n) = inside_count_schur_cohn(&rest) {
                prop_assert_eq!(n, inside_count_cauchy_index(&rest).unwrap());
            }
        }
    }
}
