use num_rational::BigRational;
use num_traits::Signed;

use super::{format_rational, IntPoly, RationalInterval, Sign};
use crate::error::{Error, Result};

/// Signed remainder sequence `p0, p1, -rem(p0, p1), ...` with every member
/// scaled by a positive constant to stay primitive.
#[derive(Clone, Debug)]
pub struct SturmChain {
    polys: Vec<IntPoly>,
}

impl SturmChain {
    /// Classical Sturm chain `p, p', ...`.
    pub fn new(p: &IntPoly) -> Self {
        Self::from_pair(p, &p.derivative())
    }

    /// Signed remainder sequence of an arbitrary pair; its variation count
    /// difference is the Cauchy index of `q / p`.
    pub fn from_pair(p: &IntPoly, q: &IntPoly) -> Self {
        let mut polys = vec![p.primitive_part()];
        if !q.is_zero() {
            polys.push(q.primitive_part());
        }
        while polys.len() >= 2 {
            let a = &polys[polys.len() - 2];
            let b = &polys[polys.len() - 1];
            let delta = a.deg() - b.deg().min(a.deg());
            let mut r = a.pseudo_rem(b);
            if r.is_zero() {
                break;
            }
            // prem carries a factor lc(b)^(delta+1); undo its sign.
            let flip = b.lead().is_negative() && (delta + 1) % 2 == 1;
            if !flip {
                r = -r;
            }
            polys.push(r.primitive_part());
        }
        SturmChain { polys }
    }

    pub fn polys(&self) -> &[IntPoly] {
        &self.polys
    }

    fn variations<I: Iterator<Item = Sign>>(signs: I) -> usize {
        let mut last = Sign::Zero;
        let mut v = 0;
        for s in signs {
            if s == Sign::Zero {
                continue;
            }
            if last != Sign::Zero && s != last {
                v += 1;
            }
            last = s;
        }
        v
    }

    pub fn variations_at(&self, x: &BigRational) -> usize {
        Self::variations(self.polys.iter().map(|p| p.sign_at(x)))
    }

    pub fn variations_at_infinity(&self, positive: bool) -> usize {
        Self::variations(self.polys.iter().map(|p| p.sign_at_infinity(positive)))
    }

    /// Number of distinct real roots of the first polynomial in `interval`.
    pub fn count(&self, interval: &RationalInterval) -> Result<usize> {
        let p = &self.polys[0];
        for x in [interval.lo(), interval.hi()] {
            if p.sign_at(x) == Sign::Zero {
                return Err(Error::EndpointIsRoot(format_rational(x)));
            }
        }
        let a = self.variations_at(interval.lo());
        let b = self.variations_at(interval.hi());
        Ok(a.saturating_sub(b))
    }

    /// Number of distinct real roots of the first polynomial.
    pub fn count_all(&self) -> usize {
        self.variations_at_infinity(false)
            .saturating_sub(self.variations_at_infinity(true))
    }

    /// Cauchy index of `p1/p0` over the whole real line.
    pub fn cauchy_index(&self) -> i64 {
        self.variations_at_infinity(false) as i64 - self.variations_at_infinity(true) as i64
    }
}

/// Number of distinct real roots of `p` in the closed interval `interval`,
/// whose endpoints must not be roots.
pub fn sturm_count(p: &IntPoly, interval: &RationalInterval) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.is_constant() {
        return Ok(0);
    }
    SturmChain::new(p).count(interval)
}
