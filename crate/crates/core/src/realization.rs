//! Orbit points on the cuspidal cubic `x y^2 = z^3` and exact verification of
//! the conditions under which the de Jonquières matrix is realized by an
//! automorphism of the blow-up.
//!
//! A smooth point of the cubic is its affine parameter `t`, with projective
//! coordinates `[t^3 : 1 : t]`; three points are collinear iff their
//! parameters sum to zero. All parameters live in `Q[X]/(modulus)` evaluated
//! at the dominant root.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jonquieres::{basis_labels, jonquieres_matrix, BasisLabel};
use crate::matrix::IntMatrix;
use crate::numerics::{
    pow2_neg, residue_reduce, IntPoly, RatPoly, ResidueContext, ResidueElement, Sign,
};
use crate::spectrum::{dynamical_degree, SpectrumKey};

/// Report heading for the groups below: each is the arithmetic form of a
/// geometric step.
pub const REPORT_KIND: &str = "arithmetic reductions of geometric steps";

#[derive(Clone, Debug)]
pub struct CubicPoint {
    pub t: ResidueElement,
}

impl CubicPoint {
    pub fn new(t: ResidueElement) -> Self {
        CubicPoint { t }
    }

    /// `[t^3 : 1 : t]`.
    pub fn projective(&self) -> [ResidueElement; 3] {
        let one = ResidueElement::from_int(self.t.context(), 1);
        [self.t.pow(3), one, self.t.clone()]
    }
}

/// Projective coordinates of a rational parameter.
pub fn cubic_point_coordinates(t: &BigRational) -> [BigRational; 3] {
    [t * t * t, BigRational::one(), t.clone()]
}

/// `t1 + t2 + t3`; the points are collinear iff it is zero.
pub fn collinearity_sum(
    t1: &ResidueElement,
    t2: &ResidueElement,
    t3: &ResidueElement,
) -> Result<ResidueElement> {
    t1.try_add(t2)?.try_add(t3)
}

/// The auxiliary polynomial with every factor it shares with `X - 1` or an
/// `X^{n_i} + 1` removed, so that those values become invertible. The
/// dominant root is untouched since it exceeds 2.
pub fn realization_modulus(key: &SpectrumKey) -> IntPoly {
    let mut modulus = key.polynomial();
    let mut denominators = vec![IntPoly::from_i64s(&[-1, 1])];
    denominators.extend(
        key.tuple()
            .iter()
            .map(|&n| IntPoly::x_pow_plus_one(n as usize)),
    );
    for den in &denominators {
        loop {
            let g = modulus.gcd(den);
            if g.is_constant() {
                break;
            }
            modulus = modulus.div_exact(&g).expect("gcd divides");
        }
    }
    modulus.normalized()
}

fn realization_context(key: &SpectrumKey) -> Result<Arc<ResidueContext>> {
    let lambda = dynamical_degree(key, &pow2_neg(32))?;
    ResidueContext::new(&realization_modulus(key), lambda)
}

fn lambda_power(ctx: &Arc<ResidueContext>, k: u32) -> ResidueElement {
    residue_reduce(&RatPoly::monomial(k as usize), ctx)
}

/// `lambda^n + 1`.
fn orbit_denominator(ctx: &Arc<ResidueContext>, n: u32) -> ResidueElement {
    &lambda_power(ctx, n) + &ResidueElement::from_int(ctx, 1)
}

/// Eigenvector of the transposed matrix for the dominant root, in basis
/// order: `(lambda + 1, 1, lambda, lambda^{j+1} / (lambda^{n_i} + 1) ...)`.
pub fn transpose_eigenvector(key: &SpectrumKey) -> Result<Vec<ResidueElement>> {
    eigenvector_in(key, &realization_context(key)?)
}

fn eigenvector_in(key: &SpectrumKey, ctx: &Arc<ResidueContext>) -> Result<Vec<ResidueElement>> {
    let lambda = ResidueElement::root(ctx);
    let one = ResidueElement::from_int(ctx, 1);
    let mut v = vec![&lambda + &one, one, lambda];
    for &n in key.tuple() {
        let inv = orbit_denominator(ctx, n)
            .inverse()
            .map_err(|_| Error::NotInvertible)?;
        for j in 0..n {
            v.push(&lambda_power(ctx, j + 1) * &inv);
        }
    }
    Ok(v)
}

/// `J^T v = lambda v`, row by row.
pub fn check_transpose_eigenvector(key: &SpectrumKey, v: &[ResidueElement]) -> Result<bool> {
    let j = jonquieres_matrix(key.orbit_data())?;
    let lambda = ResidueElement::root(v[0].context());
    for c in 0..j.size() {
        let mut acc = -&(&lambda * &v[c]);
        for (r, vr) in v.iter().enumerate() {
            let e = j.get(r, c);
            if *e != BigInt::from(0) {
                acc = &acc + &vr.scale(&BigRational::from_integer(e.clone()));
            }
        }
        if !acc.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug)]
pub struct RealizationPlan {
    pub key: SpectrumKey,
    pub context: Arc<ResidueContext>,
    /// Multiplier of the affine map `z -> a z + b`, equal to the dominant root.
    pub a: ResidueElement,
    pub b: ResidueElement,
    pub eigenvector: Vec<ResidueElement>,
    /// Orbit points in basis order, without the line class.
    pub labels: Vec<BasisLabel>,
    pub points: Vec<CubicPoint>,
}

impl RealizationPlan {
    pub fn point(&self, orbit: usize, step: usize) -> Option<&CubicPoint> {
        self.labels
            .iter()
            .position(|l| *l == BasisLabel::Exceptional { orbit, step })
            .map(|i| &self.points[i])
    }

    fn param(&self, orbit: usize, step: usize) -> &ResidueElement {
        &self.point(orbit, step).expect("point in plan").t
    }

    fn n(&self, orbit: usize) -> u32 {
        if orbit == 1 {
            2
        } else {
            self.key.tuple()[orbit - 2]
        }
    }

    fn orbits(&self) -> std::ops::RangeInclusive<usize> {
        2..=self.key.m()
    }
}

fn check_realizable(key: &SpectrumKey) -> Result<()> {
    let m = key.m();
    if m != 2 * key.d() as usize - 1 {
        return Err(Error::InvalidKey(format!(
            "{key}: realization needs {} orbits, got {m}",
            2 * key.d() - 1
        )));
    }
    let mut sorted = key.tuple().to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidKey(format!(
            "{key}: orbit lengths must be pairwise distinct"
        )));
    }
    Ok(())
}

/// The orbit points from their closed forms, checked against
/// `(3 v - b) / (a - 1)` for the eigenvector `v`.
pub fn realization_points(key: &SpectrumKey) -> Result<RealizationPlan> {
    check_realizable(key)?;
    let ctx = realization_context(key)?;
    let lambda = ResidueElement::root(&ctx);
    let one = ResidueElement::from_int(&ctx, 1);
    let int = |c: i64| ResidueElement::from_int(&ctx, c);
    let inv_lm1 = (&lambda - &one)
        .inverse()
        .map_err(|_| Error::NotInvertible)?;

    let mut params = vec![
        &(&int(2) - &lambda) * &inv_lm1,
        &(&(&int(2) * &lambda) - &one) * &inv_lm1,
    ];
    for &n in key.tuple() {
        let inv = orbit_denominator(&ctx, n)
            .inverse()
            .map_err(|_| Error::NotInvertible)?;
        for j in 0..n {
            let t =
                &(&(&int(3) * &(&lambda_power(&ctx, j + 1) * &inv)) - &(&lambda + &one)) * &inv_lm1;
            params.push(t);
        }
    }

    let eigenvector = eigenvector_in(key, &ctx)?;
    let a = lambda.clone();
    let b = eigenvector[0].clone();
    let inv_am1 = (&a - &one).inverse().map_err(|_| Error::NotInvertible)?;
    for (t, v) in params.iter().zip(&eigenvector[1..]) {
        let recipe = &(&(&int(3) * v) - &b) * &inv_am1;
        if !(t - &recipe).is_zero() {
            return Err(Error::StructureViolation(format!(
                "{key}: closed-form point disagrees with the eigenvector recipe"
            )));
        }
    }

    Ok(RealizationPlan {
        key: key.clone(),
        labels: basis_labels(key.orbit_data())[1..].to_vec(),
        points: params.into_iter().map(CubicPoint::new).collect(),
        context: ctx,
        a,
        b,
        eigenvector,
    })
}

/// First `(orbit, step)` whose successor is not `a t + b`.
pub fn first_affine_failure(plan: &RealizationPlan) -> Option<(usize, usize)> {
    let step = |t: &ResidueElement| &(&plan.a * t) + &plan.b;
    for orbit in std::iter::once(1).chain(plan.orbits()) {
        for j in 0..plan.n(orbit) as usize - 1 {
            if !(&step(plan.param(orbit, j)) - plan.param(orbit, j + 1)).is_zero() {
                return Some((orbit, j));
            }
        }
    }
    None
}

/// `a q_i^j + b = q_i^{j+1}` along every orbit.
pub fn check_affine_recursion(plan: &RealizationPlan) -> bool {
    first_affine_failure(plan).is_none()
}

/// The images `a t + b` meet the point set exactly where the matrix column of
/// `t` is a unit vector, and there at the indicated point.
pub fn check_orbit_shifts(plan: &RealizationPlan) -> Result<bool> {
    let j = jonquieres_matrix(plan.key.orbit_data())?;
    let n = plan.points.len();
    for s in 0..n {
        let column = j.column(s + 1);
        let target = unit_position(&column).and_then(|r| r.checked_sub(1));
        let image = &(&plan.a * &plan.points[s].t) + &plan.b;
        for u in 0..n {
            let equal = (&image - &plan.points[u].t).is_zero();
            if equal != (target == Some(u)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn unit_position(column: &[BigInt]) -> Option<usize> {
    let nonzero: Vec<usize> = (0..column.len())
        .filter(|&i| column[i] != BigInt::from(0))
        .collect();
    match nonzero.as_slice() {
        [i] if column[*i] == BigInt::one() => Some(*i),
        _ => None,
    }
}

fn column_sum(j: &IntMatrix, c: usize, plan: &RealizationPlan) -> ResidueElement {
    let mut acc = ResidueElement::from_int(&plan.context, 0);
    for (k, p) in plan.points.iter().enumerate() {
        let e = j.get(k + 1, c);
        if *e != BigInt::from(0) {
            acc = &acc + &p.t.scale(&BigRational::from_integer(e.clone()));
        }
    }
    acc
}

/// The line-class equation `3 b = sum_k F_{k+1,1} p_k` and, for every orbit
/// point `p_i`, `b = sum_k F_{k+1,i+1} p_k - a p_i`, where `F` is the matrix.
pub fn check_eigen_system(plan: &RealizationPlan) -> Result<bool> {
    let j = jonquieres_matrix(plan.key.orbit_data())?;
    let three_b = plan.b.scale(&BigRational::from_integer(3.into()));
    if !(&column_sum(&j, 0, plan) - &three_b).is_zero() {
        return Ok(false);
    }
    for (i, p) in plan.points.iter().enumerate() {
        let rhs = &column_sum(&j, i + 1, plan) - &(&plan.a * &p.t);
        if !(&rhs - &plan.b).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Zero,
    Nonzero,
    Positive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expect: Expectation,
    /// Ascending coefficients of the residue representative.
    pub expression: Vec<String>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckGroup {
    pub name: String,
    pub pass: bool,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub d: u32,
    pub tuple: Vec<u32>,
    pub kind: String,
    pub modulus: Vec<String>,
    pub point_count: usize,
    pub transpose_eigenvector: bool,
    pub affine_recursion: bool,
    pub eigen_system: bool,
    pub groups: Vec<CheckGroup>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn check_count(&self) -> usize {
        self.groups.iter().map(|g| g.checks.len()).sum()
    }
}

struct GroupBuilder {
    name: &'static str,
    checks: Vec<Check>,
}

impl GroupBuilder {
    fn new(name: &'static str) -> Self {
        GroupBuilder {
            name,
            checks: Vec::new(),
        }
    }

    fn push(&mut self, name: String, expect: Expectation, value: &ResidueElement) {
        let pass = match expect {
            Expectation::Zero => value.is_zero(),
            Expectation::Nonzero => !value.is_zero(),
            Expectation::Positive => value.sign() == Sign::Positive,
        };
        self.checks.push(Check {
            name,
            expect,
            expression: value.coefficient_strings(),
            pass,
        });
    }

    fn finish(self) -> CheckGroup {
        CheckGroup {
            name: self.name.to_string(),
            pass: self.checks.iter().all(|c| c.pass),
            checks: self.checks,
        }
    }
}

fn label(orbit: usize, step: usize) -> String {
    format!("q{orbit}^{step}")
}

/// Runs every check on the orbit points; see [`VerificationReport`].
pub fn verify_realization(key: &SpectrumKey) -> Result<VerificationReport> {
    let plan = realization_points(key)?;
    let ctx = &plan.context;
    let lambda = ResidueElement::root(ctx);
    let one = ResidueElement::from_int(ctx, 1);
    let pw = |k: u32| lambda_power(ctx, k);
    let den = |orbit: usize| orbit_denominator(ctx, plan.n(orbit));
    let q1 = plan.param(1, 0);
    let p1 = plan.param(1, 1);

    let mut distinct = GroupBuilder::new("distinctness");
    let n = plan.points.len();
    for x in 0..n {
        for y in x + 1..n {
            let (
                BasisLabel::Exceptional { orbit: i, step: k },
                BasisLabel::Exceptional { orbit: j, step: l },
            ) = (plan.labels[x], plan.labels[y])
            else {
                unreachable!("points carry exceptional labels")
            };
            let pair = format!("{} != {}", label(i, k), label(j, l));
            distinct.push(
                pair.clone(),
                Expectation::Nonzero,
                &(&plan.points[x].t - &plan.points[y].t),
            );
            // equivalent monomial identity for the same pair
            let monomial = match (i, j) {
                (1, 1) => &lambda - &one,
                (1, _) if k == 0 => &den(j) - &pw(l as u32 + 1),
                (1, _) => &den(j) - &pw(l as u32),
                _ if i == j => &pw(k as u32) - &pw(l as u32),
                _ => &(&pw(k as u32) * &den(j)) - &(&pw(l as u32) * &den(i)),
            };
            distinct.push(
                format!("{pair} (monomial)"),
                Expectation::Nonzero,
                &monomial,
            );
        }
    }

    let mut collinear = GroupBuilder::new("non_collinearity");
    for i in plan.orbits() {
        for j in i + 1..=plan.key.m() {
            let name = format!("{} + {} + {} != 0", label(1, 0), label(i, 0), label(j, 0));
            collinear.push(
                name.clone(),
                Expectation::Nonzero,
                &collinearity_sum(q1, plan.param(i, 0), plan.param(j, 0))?,
            );
            let monomial = &pw(plan.n(i) + plan.n(j)) - &one;
            collinear.push(
                format!("{name} (monomial)"),
                Expectation::Nonzero,
                &monomial,
            );
        }
    }

    let mut off_lines = GroupBuilder::new("off_lines");
    for k in plan.orbits() {
        let qk = plan.param(k, 0);
        let name = format!("{} + {} + {} != 0", label(1, 0), label(k, 0), label(1, 1));
        off_lines.push(
            name.clone(),
            Expectation::Nonzero,
            &collinearity_sum(q1, qk, p1)?,
        );
        off_lines.push(format!("{name} (monomial)"), Expectation::Nonzero, &lambda);
        for i in plan.orbits() {
            for j in 1..plan.n(i) as usize {
                let name = format!("{} + {} + {} != 0", label(1, 0), label(k, 0), label(i, j));
                off_lines.push(
                    name.clone(),
                    Expectation::Nonzero,
                    &collinearity_sum(q1, qk, plan.param(i, j))?,
                );
                let (di, dk) = (den(i), den(k));
                let monomial = &(&(&lambda * &di) + &(&pw(j as u32 + 1) * &dk)) - &(&di * &dk);
                off_lines.push(
                    format!("{name} (monomial)"),
                    Expectation::Nonzero,
                    &monomial,
                );
            }
        }
    }

    let mut off_curve = GroupBuilder::new("off_curve");
    let d = plan.key.d() as i64;
    let base_sum = plan.orbits().fold(
        q1.scale(&BigRational::from_integer((d - 2).into())),
        |acc, k| &acc + plan.param(k, 0),
    );
    let identity = &(&(&lambda - &one) * &base_sum)
        + &(&(&(&ResidueElement::from_int(ctx, 3) * &pw(2)) - &lambda) - &one);
    off_curve.push(
        "(lambda-1)((d-2) q1 + sum q_k) = -3 lambda^2 + lambda + 1".into(),
        Expectation::Zero,
        &identity,
    );
    let lam2 = pw(2);
    off_curve.push(
        format!("{} + (d-2) q1 + sum q_k != 0", label(1, 0)),
        Expectation::Nonzero,
        &(q1 + &base_sum),
    );
    off_curve.push(
        format!("{} + (d-2) q1 + sum q_k != 0", label(1, 1)),
        Expectation::Nonzero,
        &(p1 + &base_sum),
    );
    off_curve.push(
        "lambda^2 - 1 > 0".into(),
        Expectation::Positive,
        &(&lam2 - &one),
    );
    off_curve.push(
        "lambda^2 - lambda > 0".into(),
        Expectation::Positive,
        &(&lam2 - &lambda),
    );
    // sign variants of the same contradictions; also positive for lambda > 2
    off_curve.push(
        "lambda^2 + 1 > 0".into(),
        Expectation::Positive,
        &(&lam2 + &one),
    );
    off_curve.push(
        "lambda^2 + lambda > 0".into(),
        Expectation::Positive,
        &(&lam2 + &lambda),
    );
    for i in plan.orbits() {
        let di = den(i);
        for j in 1..plan.n(i) as usize {
            let point = label(i, j);
            off_curve.push(
                format!("{point} + (d-2) q1 + sum q_k != 0"),
                Expectation::Nonzero,
                &(plan.param(i, j) + &base_sum),
            );
            let scaled = &lam2 * &di;
            off_curve.push(
                format!("lambda^2 (lambda^{} + 1) - lambda^{} > 0", plan.n(i), j + 1),
                Expectation::Positive,
                &(&scaled - &pw(j as u32 + 1)),
            );
            off_curve.push(
                format!("lambda^2 (lambda^{} + 1) + lambda^{} > 0", plan.n(i), j),
                Expectation::Positive,
                &(&scaled + &pw(j as u32)),
            );
        }
    }

    let transpose_eigenvector = check_transpose_eigenvector(key, &plan.eigenvector)?;
    let affine_recursion = check_affine_recursion(&plan);
    let eigen_system = check_eigen_system(&plan)?;
    let groups = vec![
        distinct.finish(),
        collinear.finish(),
        off_lines.finish(),
        off_curve.finish(),
    ];
    let pass =
        transpose_eigenvector && affine_recursion && eigen_system && groups.iter().all(|g| g.pass);
    Ok(VerificationReport {
        d: key.d(),
        tuple: key.tuple().to_vec(),
        kind: REPORT_KIND.to_string(),
        modulus: ctx
            .modulus()
            .coeffs()
            .iter()
            .map(|c| c.to_string())
            .collect(),
        point_count: plan.points.len(),
        transpose_eigenvector,
        affine_recursion,
        eigen_system,
        groups,
        pass,
    })
}
