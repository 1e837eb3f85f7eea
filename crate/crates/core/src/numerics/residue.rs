//! Arithmetic in `Q[X] / (modulus)` with sign and zero decisions at a fixed
//! real root of the modulus.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{format_rational, pow2_neg, sturm_count, AlgebraicReal, IntPoly, RatPoly, Sign};
use crate::error::{Error, Result};

/// A modulus together with the real root at which residues are evaluated.
#[derive(Debug)]
pub struct ResidueContext {
    modulus: IntPoly,
    modulus_rat: RatPoly,
    root: AlgebraicReal,
    // tight enclosure of the root, computed once so that most sign queries
    // resolve without further bisection
    fine: AlgebraicReal,
}

impl ResidueContext {
    /// Fails unless `root` is a root of `modulus`.
    pub fn new(modulus: &IntPoly, root: AlgebraicReal) -> Result<Arc<Self>> {
        if modulus.is_constant() {
            return Err(Error::InvalidArgument("modulus must be nonconstant".into()));
        }
        let modulus = modulus.normalized();
        let g = modulus.gcd(root.defining());
        let vanishes = match root.as_rational() {
            Some(x) => g.sign_at(x) == Sign::Zero,
            None => !g.is_constant() && sturm_count(&g, root.interval())? >= 1,
        };
        if !vanishes {
            return Err(Error::InvalidArgument(format!(
                "{root} is not a root of {modulus}"
            )));
        }
        let fine = root.refine(&pow2_neg(96));
        Ok(Arc::new(ResidueContext {
            modulus_rat: RatPoly::from(&modulus),
            modulus,
            root,
            fine,
        }))
    }

    pub fn modulus(&self) -> &IntPoly {
        &self.modulus
    }

    pub fn root(&self) -> &AlgebraicReal {
        &self.root
    }

    pub fn degree(&self) -> usize {
        self.modulus.deg()
    }

    /// Exact zero test of `f(root)`: `f` vanishes there iff `gcd(f, modulus)`
    /// has a root in the isolating interval.
    fn vanishes(&self, f: &RatPoly) -> bool {
        if f.is_zero() {
            return true;
        }
        let (num, _) = f.to_int_poly();
        let g = num.gcd(&self.modulus);
        if g.is_constant() {
            return false;
        }
        match self.root.as_rational() {
            Some(x) => g.sign_at(x) == Sign::Zero,
            // g divides the modulus, so the interval endpoints are not roots
            None => sturm_count(&g, self.root.interval())
                .map(|n| n >= 1)
                .unwrap_or(false),
        }
    }

    /// Sign of `f(root)`, after the zero case has been excluded.
    fn nonzero_sign(&self, f: &RatPoly) -> Sign {
        if let Some(x) = self.root.as_rational() {
            return Sign::of(&f.eval(x));
        }
        let mut enclosure = self.fine.clone();
        loop {
            let (lo, hi) = interval_eval(f, enclosure.lo(), enclosure.hi());
            if lo.is_positive() {
                return Sign::Positive;
            }
            if hi.is_negative() {
                return Sign::Negative;
            }
            for _ in 0..16 {
                enclosure = enclosure.bisect();
            }
            if let Some(x) = enclosure.as_rational() {
                return Sign::of(&f.eval(x));
            }
        }
    }
}

/// Bounds of `f` over `[lo, hi]` by interval Horner evaluation.
fn interval_eval(f: &RatPoly, lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
    let mut a = BigRational::zero();
    let mut b = BigRational::zero();
    for c in f.coeffs().iter().rev() {
        let products = [&a * lo, &a * hi, &b * lo, &b * hi];
        let min = products.iter().min().expect("nonempty").clone();
        let max = products.iter().max().expect("nonempty").clone();
        a = min + c;
        b = max + c;
    }
    (a, b)
}

/// A residue class modulo the context polynomial, standing for its value at
/// the context root.
#[derive(Clone)]
pub struct ResidueElement {
    ctx: Arc<ResidueContext>,
    rep: RatPoly,
}

/// Reduces `expr` modulo the context polynomial.
pub fn residue_reduce(expr: &RatPoly, ctx: &Arc<ResidueContext>) -> ResidueElement {
    ResidueElement {
        ctx: Arc::clone(ctx),
        rep: expr.rem(&ctx.modulus_rat),
    }
}

impl ResidueElement {
    pub fn from_rational(ctx: &Arc<ResidueContext>, c: BigRational) -> Self {
        residue_reduce(&RatPoly::constant(c), ctx)
    }

    pub fn from_int(ctx: &Arc<ResidueContext>, c: i64) -> Self {
        residue_reduce(&RatPoly::from_int(c), ctx)
    }

    /// The class of `X`, i.e. the root itself.
    pub fn root(ctx: &Arc<ResidueContext>) -> Self {
        residue_reduce(&RatPoly::x(), ctx)
    }

    pub fn context(&self) -> &Arc<ResidueContext> {
        &self.ctx
    }

    pub fn representative(&self) -> &RatPoly {
        &self.rep
    }

    pub fn same_context(&self, other: &ResidueElement) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx)
            || (self.ctx.modulus == other.ctx.modulus && self.ctx.root == other.ctx.root)
    }

    fn check(&self, other: &ResidueElement) -> Result<()> {
        if self.same_context(other) {
            Ok(())
        } else {
            Err(Error::ModulusMismatch)
        }
    }

    fn with_rep(&self, rep: RatPoly) -> ResidueElement {
        residue_reduce(&rep, &self.ctx)
    }

    pub fn try_add(&self, other: &ResidueElement) -> Result<ResidueElement> {
        self.check(other)?;
        Ok(self.with_rep(&self.rep + &other.rep))
    }

    pub fn try_sub(&self, other: &ResidueElement) -> Result<ResidueElement> {
        self.check(other)?;
        Ok(self.with_rep(&self.rep - &other.rep))
    }

    pub fn try_mul(&self, other: &ResidueElement) -> Result<ResidueElement> {
        self.check(other)?;
        Ok(self.with_rep(&self.rep * &other.rep))
    }

    pub fn inverse(&self) -> Result<ResidueElement> {
        let inv = self.rep.inverse_mod(&self.ctx.modulus_rat)?;
        Ok(self.with_rep(inv))
    }

    pub fn try_div(&self, other: &ResidueElement) -> Result<ResidueElement> {
        self.check(other)?;
        self.try_mul(&other.inverse()?)
    }

    pub fn pow(&self, e: u32) -> ResidueElement {
        let mut acc = ResidueElement::from_int(&self.ctx, 1);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, c: &BigRational) -> ResidueElement {
        self.with_rep(self.rep.scale(c))
    }

    /// True iff the value at the context root is zero.
    pub fn is_zero(&self) -> bool {
        self.ctx.vanishes(&self.rep)
    }

    /// True iff the representative is the zero polynomial, which is stronger
    /// than [`ResidueElement::is_zero`] when the modulus is reducible.
    pub fn is_identically_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn sign(&self) -> Sign {
        if self.is_zero() {
            Sign::Zero
        } else {
            self.ctx.nonzero_sign(&self.rep)
        }
    }

    /// Coefficients of the representative as `"p/q"` strings, ascending.
    pub fn coefficient_strings(&self) -> Vec<String> {
        self.rep.coeffs().iter().map(format_rational).collect()
    }

    pub fn to_f64(&self) -> f64 {
        let mid = self.ctx.fine.interval().midpoint();
        let v = self.rep.eval(&mid);
        v.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Debug for ResidueElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] mod {}", self.rep, self.ctx.modulus)
    }
}

impl fmt::Display for ResidueElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}

// Operator forms panic on mixed contexts; the `try_*` methods report it.
macro_rules! residue_op {
    ($tr:ident $f:ident $checked:ident) => {
        impl $tr for &ResidueElement {
            type Output = ResidueElement;
            fn $f(self, rhs: &ResidueElement) -> ResidueElement {
                self.$checked(rhs)
                    .expect("residues from different contexts")
            }
        }
        impl $tr for ResidueElement {
            type Output = ResidueElement;
            fn $f(self, rhs: ResidueElement) -> ResidueElement {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&ResidueElement> for ResidueElement {
            type Output = ResidueElement;
            fn $f(self, rhs: &ResidueElement) -> ResidueElement {
                (&self).$f(rhs)
            }
        }
    };
}
residue_op!(Add add try_add);
residue_op!(Sub sub try_sub);
residue_op!(Mul mul try_mul);

impl Neg for &ResidueElement {
    type Output = ResidueElement;
    fn neg(self) -> ResidueElement {
        ResidueElement {
            ctx: Arc::clone(&self.ctx),
            rep: -&self.rep,
        }
    }
}

impl Neg for ResidueElement {
    type Output = ResidueElement;
    fn neg(self) -> ResidueElement {
        -&self
    }
}
