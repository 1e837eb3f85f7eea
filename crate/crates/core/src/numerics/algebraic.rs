use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use super::{sturm_count, to_decimal, IntPoly, RationalInterval, Sign, SturmChain};
use crate::error::{Error, Result};

/// A real algebraic number given by a square-free integer polynomial and an
/// isolating interval.
///
/// Either the interval is a single rational point at which `defining`
/// vanishes, or it has distinct endpoints, neither a root, and contains
/// exactly one root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicReal {
    defining: IntPoly,
    interval: RationalInterval,
}

impl AlgebraicReal {
    /// Validates the isolation certificate. `defining` is replaced by its
    /// normalized square-free part.
    pub fn new(defining: &IntPoly, interval: RationalInterval) -> Result<Self> {
        if defining.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let defining = defining.square_free_part();
        if interval.is_point() {
            if defining.sign_at(interval.lo()) != Sign::Zero {
                return Err(Error::InvalidArgument(format!(
                    "{interval} is not a root of {defining}"
                )));
            }
        } else {
            let n = sturm_count(&defining, &interval)?;
            if n != 1 {
                return Err(Error::InvalidArgument(format!(
                    "{interval} contains {n} roots of {defining}, expected 1"
                )));
            }
        }
        Ok(AlgebraicReal { defining, interval })
    }

    pub fn from_rational(x: BigRational) -> Self {
        let defining = IntPoly::new(vec![-x.numer().clone(), x.denom().clone()]);
        AlgebraicReal {
            defining,
            interval: RationalInterval::point(x),
        }
    }

    pub fn from_int(x: i64) -> Self {
        Self::from_rational(BigRational::from_integer(x.into()))
    }

    pub fn defining(&self) -> &IntPoly {
        &self.defining
    }

    pub fn interval(&self) -> &RationalInterval {
        &self.interval
    }

    pub fn lo(&self) -> &BigRational {
        self.interval.lo()
    }

    pub fn hi(&self) -> &BigRational {
        self.interval.hi()
    }

    /// The exact value when it is known to be rational.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.interval.is_point().then(|| self.interval.lo())
    }

    /// Halves the isolating interval (or collapses it onto a rational root).
    pub fn bisect(&self) -> AlgebraicReal {
        if self.interval.is_point() {
            return self.clone();
        }
        let mid = self.interval.midpoint();
        let s_mid = self.defining.sign_at(&mid);
        let interval = match s_mid {
            Sign::Zero => RationalInterval::point(mid),
            s if s == self.defining.sign_at(self.lo()) => {
                RationalInterval::new(mid, self.hi().clone()).expect("ordered")
            }
            _ => RationalInterval::new(self.lo().clone(), mid).expect("ordered"),
        };
        AlgebraicReal {
            defining: self.defining.clone(),
            interval,
        }
    }

    /// Same number with an interval of width at most `width` (`width > 0`).
    pub fn refine(&self, width: &BigRational) -> AlgebraicReal {
        assert!(width.is_positive(), "refinement width must be positive");
        let mut out = self.clone();
        while out.interval.width() > *width {
            out = out.bisect();
        }
        out
    }

    /// Exact comparison; terminates on equal numbers through a gcd certificate.
    pub fn compare(&self, other: &AlgebraicReal) -> Ordering {
        if let (Some(a), Some(b)) = (self.as_rational(), other.as_rational()) {
            return a.cmp(b);
        }
        let mut a = self.clone();
        let mut b = other.clone();
        let mut common: Option<IntPoly> = None;
        loop {
            if let Some(ord) = disjoint_order(&a, &b) {
                return ord;
            }
            let g = common.get_or_insert_with(|| a.defining.gcd(&b.defining));
            if !g.is_constant() && shares_root(g, &a, &b) {
                return Ordering::Equal;
            }
            a = a.bisect();
            b = b.bisect();
        }
    }

    /// Floating-point approximation; a display hint, never used for decisions.
    pub fn to_f64(&self) -> f64 {
        let mid = self.interval.midpoint();
        mid.to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal string accurate to `digits` places (truncated).
    pub fn to_decimal(&self, digits: usize) -> String {
        let tight = self.refine(&BigRational::new(
            1.into(),
            num_traits::pow(BigInt::from(10), digits + 3),
        ));
        to_decimal(tight.lo(), digits)
    }
}

/// Decides the order when the enclosures do not overlap. A shared endpoint is
/// a root of at most one side (it is not a root of a non-degenerate side).
fn disjoint_order(a: &AlgebraicReal, b: &AlgebraicReal) -> Option<Ordering> {
    let strict = !(a.interval.is_point() && b.interval.is_point());
    if a.hi() < b.lo() || (strict && a.hi() == b.lo()) {
        Some(Ordering::Less)
    } else if b.hi() < a.lo() || (strict && b.hi() == a.lo()) {
        Some(Ordering::Greater)
    } else {
        None
    }
}

fn shares_root(g: &IntPoly, a: &AlgebraicReal, b: &AlgebraicReal) -> bool {
    if let Some(x) = a.as_rational() {
        return b.interval.contains(x) && g.sign_at(x) == Sign::Zero;
    }
    if let Some(x) = b.as_rational() {
        return a.interval.contains(x) && g.sign_at(x) == Sign::Zero;
    }
    let Some(both) = a.interval.intersect(&b.interval) else {
        return false;
    };
    // g divides both defining polynomials, so no endpoint of either interval
    // is a root of g.
    sturm_count(g, &both).map(|n| n >= 1).unwrap_or(false)
}

impl fmt::Display for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "root of {} in {}", self.defining, self.interval)
    }
}

/// Isolates the largest real root of `p` to an interval of width at most
/// `width`.
pub fn isolate_largest_real_root(p: &IntPoly, width: &BigRational) -> Result<AlgebraicReal> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !width.is_positive() {
        return Err(Error::InvalidArgument("width must be positive".into()));
    }
    let f = p.square_free_part();
    if f.is_constant() {
        return Err(Error::NoRealRoot);
    }
    let chain = SturmChain::new(&f);
    let bound = f.cauchy_bound();
    let mut lo = -bound.clone();
    let mut hi = bound;
    let v_hi = chain.variations_at(&hi);
    let roots_above = |x: &BigRational| chain.variations_at(x).saturating_sub(v_hi);
    if roots_above(&lo) == 0 {
        return Err(Error::NoRealRoot);
    }
    // Invariant: lo is not a root and (lo, hi] holds the largest root.
    loop {
        if roots_above(&lo) == 1 {
            break;
        }
        let split = split_point(&f, &lo, &hi);
        if roots_above(&split) >= 1 {
            lo = split;
        } else {
            hi = split;
        }
    }
    let root = AlgebraicReal {
        defining: f,
        interval: RationalInterval::new(lo, hi)?,
    }
    .refine(width);
    Ok(snap_to_rational(root))
}

/// Collapses the interval onto the root when it is a rational that bisection
/// would never hit: the root of a linear factor, or an integer.
fn snap_to_rational(a: AlgebraicReal) -> AlgebraicReal {
    if a.interval.is_point() {
        return a;
    }
    let mut candidates = Vec::new();
    if a.defining.deg() == 1 {
        let c = a.defining.coeffs();
        candidates.push(BigRational::new(-c[0].clone(), c[1].clone()));
    }
    if a.interval.width() < BigRational::from_integer(2.into()) {
        let mut k = a.lo().ceil();
        while &k <= a.hi() {
            candidates.push(k.clone());
            k += BigRational::from_integer(1.into());
        }
    }
    for x in candidates {
        if a.interval.contains(&x) && a.defining.sign_at(&x) == Sign::Zero {
            return AlgebraicReal {
                defining: a.defining,
                interval: RationalInterval::point(x),
            };
        }
    }
    a
}

/// A point strictly inside `(lo, hi)` that is not a root of `f`, preferring
/// the midpoint.
fn split_point(f: &IntPoly, lo: &BigRational, hi: &BigRational) -> BigRational {
    let w = hi - lo;
    for k in 1u32.. {
        for (num, den) in [(1, 2), (k, 2 * k + 1), (k + 1, 2 * k + 1)] {
            let x = lo + &w * BigRational::new(num.into(), den.into());
            if f.sign_at(&x) != Sign::Zero {
                return x;
            }
        }
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn golden_13() -> f64 {
        (3.0 + 13f64.sqrt()) / 2.0
    }

    #[test]
    fn quadratic_root() {
        let a = isolate_largest_real_root(&p(&[-1, -3, 1]), &q(1, 1_000_000)).unwrap();
        assert!(a.interval().width() <= q(1, 1_000_000));
        assert!((a.to_f64() - golden_13()).abs() < 1e-6);
        assert!(a.lo() < &q(3_302_776, 1_000_000));
        assert!(a.hi() > &q(3_302_775, 1_000_000));
    }

    #[test]
    fn rational_root_is_exact() {
        let a = isolate_largest_real_root(&p(&[-5, 1]), &q(1, 1000)).unwrap();
        assert_eq!(a.as_rational(), Some(&q(5, 1)));
        let b = isolate_largest_real_root(&p(&[-10, 2]), &q(1, 1000)).unwrap();
        assert_eq!(a.compare(&b), Ordering::Equal);
    }

    #[test]
    fn quartic_bracket() {
        let a = isolate_largest_real_root(&p(&[-1, -2, 0, -3, 1]), &q(1, 100)).unwrap();
        assert!(a.lo() > &q(32, 10) && a.hi() < &q(33, 10));
    }

    #[test]
    fn no_real_root() {
        assert!(matches!(
            isolate_largest_real_root(&p(&[1, 0, 1]), &q(1, 10)),
            Err(Error::NoRealRoot)
        ));
        assert!(matches!(
            isolate_largest_real_root(&p(&[3]), &q(1, 10)),
            Err(Error::NoRealRoot)
        ));
    }

    #[test]
    fn repeated_largest_root() {
        let f = &p(&[-2, 1]).pow(3) * &p(&[1, 1]);
        let a = isolate_largest_real_root(&f, &q(1, 1000)).unwrap();
        assert_eq!(a.compare(&AlgebraicReal::from_int(2)), Ordering::Equal);
    }

    #[test]
    fn compare_examples() {
        let w = q(1, 16);
        let lam = isolate_largest_real_root(&p(&[-1, -3, 1]), &w).unwrap();
        assert_eq!(lam.compare(&lam), Ordering::Equal);
        assert_eq!(lam.compare(&AlgebraicReal::from_int(3)), Ordering::Greater);
        let mu = isolate_largest_real_root(&p(&[-1, -2, 0, -3, 1]), &w).unwrap();
        assert_eq!(mu.compare(&lam), Ordering::Less);
        // same number, different defining polynomials and coarse intervals
        let lam2 =
            isolate_largest_real_root(&(&p(&[-1, -3, 1]) * &p(&[-7, 0, 1])), &q(4, 1)).unwrap();
        assert_eq!(lam.compare(&lam2), Ordering::Equal);
        assert_eq!(lam2.compare(&lam), Ordering::Equal);
    }

    #[test]
    fn refine_keeps_root() {
        let lam = isolate_largest_real_root(&p(&[-1, -3, 1]), &q(1, 2)).unwrap();
        let a = lam.refine(&q(1, 1000));
        let b = a.refine(&q(1, 1000));
        assert_eq!(a, b);
        assert_eq!(lam.compare(&a), Ordering::Equal);
    }

    fn sqrt_of(k: i64) -> AlgebraicReal {
        isolate_largest_real_root(&p(&[-k, 0, 1]), &q(1, 4)).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn compare_is_a_total_order(x in 1i64..40, y in 1i64..40, z in 1i64..40) {
            // sqrt is monotone, so the oracle is integer comparison.
            let (a, b, c) = (sqrt_of(x), sqrt_of(y), sqrt_of(z));
            prop_assert_eq!(a.compare(&b), x.cmp(&y));
            prop_assert_eq!(b.compare(&a), y.cmp(&x));
            prop_assert_eq!(a.compare(&a), Ordering::Equal);
            if a.compare(&b) != Ordering::Greater && b.compare(&c) != Ordering::Greater {
                prop_assert_ne!(a.compare(&c), Ordering::Greater);
            }
        }
    }
}
