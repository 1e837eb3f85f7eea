//! Dominant roots of the auxiliary polynomials, the nested level sets built
//! from them, and their Salem/Pisot classification.

mod cache;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jonquieres::{auxiliary_polynomial, OrbitData};
use crate::numerics::{
    format_rational, isolate_largest_real_root, pow2_neg, unit_circle_census, AlgebraicReal,
    IntPoly, UnitCircleCensus,
};

pub use cache::{CacheRecord, SpectrumCache};

/// Width of the intervals stored with entries, `10^-12`.
pub fn default_stored_width() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10u64).pow(12))
}

/// Orbit data admissible for the spectrum: `d >= 4` and every entry `>= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "OrbitData", into = "OrbitData")]
pub struct SpectrumKey(OrbitData);

impl SpectrumKey {
    pub fn new(d: u32, tuple: Vec<u32>) -> Result<Self> {
        if d < 4 {
            return Err(Error::InvalidKey(format!("degree {d} < 4")));
        }
        if let Some(n) = tuple.iter().find(|&&n| n < 2) {
            return Err(Error::InvalidKey(format!("orbit length {n} < 2")));
        }
        OrbitData::new(d, tuple)
            .map(SpectrumKey)
            .map_err(|e| Error::InvalidKey(e.to_string()))
    }

    pub fn d(&self) -> u32 {
        self.0.d
    }

    pub fn tuple(&self) -> &[u32] {
        &self.0.tuple
    }

    pub fn m(&self) -> usize {
        self.0.m()
    }

    pub fn orbit_data(&self) -> &OrbitData {
        &self.0
    }

    pub fn polynomial(&self) -> IntPoly {
        auxiliary_polynomial(&self.0)
    }

    fn with_tuple(&self, tuple: Vec<u32>) -> Result<Self> {
        SpectrumKey::new(self.d(), tuple)
    }
}

impl TryFrom<OrbitData> for SpectrumKey {
    type Error = Error;
    fn try_from(o: OrbitData) -> Result<Self> {
        SpectrumKey::new(o.d, o.tuple)
    }
}

impl From<SpectrumKey> for OrbitData {
    fn from(k: SpectrumKey) -> Self {
        k.0
    }
}

impl fmt::Display for SpectrumKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    SalemLike,
    PisotLike,
    Undetermined,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::SalemLike => "salem_like",
            Label::PisotLike => "pisot_like",
            Label::Undetermined => "undetermined",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumEntry {
    pub key: SpectrumKey,
    pub value: AlgebraicReal,
    /// Census of the full auxiliary polynomial.
    pub census: UnitCircleCensus,
    pub label: Label,
    /// Orders `k` of the cyclotomic factors divided out before labelling.
    pub cyclotomic_orders: Vec<u32>,
    /// What remains after removing them: the minimal polynomial of the value.
    pub residual: IntPoly,
    pub residual_census: UnitCircleCensus,
}

/// The dominant root of the auxiliary polynomial, isolated to `width`.
pub fn dynamical_degree(key: &SpectrumKey, width: &BigRational) -> Result<AlgebraicReal> {
    let value = isolate_largest_real_root(&key.polynomial(), width)?;
    if value.compare(&AlgebraicReal::from_int(2)) != Ordering::Greater {
        return Err(Error::StructureViolation(format!(
            "dominant root for {key} is not larger than 2"
        )));
    }
    Ok(value)
}

/// Largest root of `X^2 - (d-1)X - 1`.
pub fn level1_value(d: u32) -> Result<AlgebraicReal> {
    dynamical_degree(&SpectrumKey::new(d, Vec::new())?, &pow2_neg(32))
}

/// How the lower reference point in the level definition is indexed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum LevelReading {
    /// Drop the last entry and decrement the new last one:
    /// `(n_2, ..., n_{m-2}, n_{m-1} - 1)`, a tuple of the previous level.
    #[default]
    TruncateDecrement,
    /// Decrement the last entry, `(n_2, ..., n_m - 1)`, tested at the same
    /// level. Every level `m >= 3` is empty under this reading.
    DecrementLast,
}

/// Memoized dominant roots for one degree, at a coarse width; comparisons
/// refine on demand.
struct LambdaTable {
    d: u32,
    values: HashMap<Vec<u32>, AlgebraicReal>,
}

impl LambdaTable {
    fn new(d: u32) -> Self {
        LambdaTable {
            d,
            values: HashMap::new(),
        }
    }

    fn get(&mut self, tuple: &[u32]) -> Result<AlgebraicReal> {
        if let Some(v) = self.values.get(tuple) {
            return Ok(v.clone());
        }
        let key = SpectrumKey::new(self.d, tuple.to_vec())?;
        let v = dynamical_degree(&key, &pow2_neg(20))?;
        self.values.insert(tuple.to_vec(), v.clone());
        Ok(v)
    }

    fn less(&mut self, a: &[u32], b: &[u32]) -> Result<bool> {
        Ok(self.get(a)?.compare(&self.get(b)?) == Ordering::Less)
    }

    fn is_member(&mut self, tuple: &[u32], reading: LevelReading) -> Result<bool> {
        let m = tuple.len() + 1;
        if tuple.iter().any(|&n| n < 2) || m > 2 * self.d as usize - 1 {
            return Ok(false);
        }
        match m {
            1 => Ok(true),
            2 => {
                let floor = AlgebraicReal::from_int(self.d as i64 - 1);
                Ok(self.get(tuple)?.compare(&floor) == Ordering::Greater)
            }
            _ => {
                if tuple.windows(2).any(|w| w[0] >= w[1]) {
                    return Ok(false);
                }
                let reference = reference_tuple(tuple, reading);
                if reference.iter().any(|&n| n < 2) {
                    return Ok(false);
                }
                Ok(self.is_member(&reference, reading)? && self.less(&reference, tuple)?)
            }
        }
    }
}

fn reference_tuple(tuple: &[u32], reading: LevelReading) -> Vec<u32> {
    let mut r = tuple.to_vec();
    if reading == LevelReading::TruncateDecrement {
        r.pop();
    }
    if let Some(last) = r.last_mut() {
        *last -= 1;
    }
    r
}

/// Membership in the level set indexed by `key.m()`.
pub fn is_level_member(key: &SpectrumKey, reading: LevelReading) -> Result<bool> {
    LambdaTable::new(key.d()).is_member(key.tuple(), reading)
}

/// Visits level-`m` members with entries `<= bound` in lexicographic order
/// until `visit` returns `false`.
fn walk_members(
    table: &mut LambdaTable,
    m: usize,
    bound: u32,
    visit: &mut dyn FnMut(&mut LambdaTable, Vec<u32>) -> Result<bool>,
) -> Result<bool> {
    match m {
        1 => visit(table, Vec::new()),
        2 => {
            for n in 2..=bound {
                if table.is_member(&[n], LevelReading::TruncateDecrement)?
                    && !visit(table, vec![n])?
                {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        _ => walk_members(table, m - 1, bound, &mut |table, reference| {
            // reference = (n_2, ..., n_{m-1} - 1); restore the prefix
            let mut prefix = reference.clone();
            *prefix.last_mut().expect("level >= 2 tuple") += 1;
            let start = prefix.last().unwrap() + 1;
            for last in start..=bound {
                let mut tuple = prefix.clone();
                tuple.push(last);
                if table.less(&reference, &tuple)? && !visit(table, tuple)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }),
    }
}

/// Lexicographically first `limit` tuples of level `m` with entries
/// `<= bound`.
pub fn enumerate_level_tuples(
    d: u32,
    m: usize,
    limit: usize,
    bound: u32,
    reading: LevelReading,
) -> Result<Vec<Vec<u32>>> {
    if d < 4 || m < 1 || m > 2 * d as usize - 1 {
        return Err(Error::InvalidKey(format!(
            "level {m} is not available for d = {d}"
        )));
    }
    let mut table = LambdaTable::new(d);
    let mut found = Vec::new();
    match reading {
        LevelReading::TruncateDecrement => {
            walk_members(&mut table, m, bound, &mut |_, t| {
                found.push(t);
                Ok(found.len() < limit)
            })?;
        }
        LevelReading::DecrementLast => {
            for t in increasing_tuples(m - 1, bound) {
                if found.len() >= limit {
                    break;
                }
                if table.is_member(&t, reading)? {
                    found.push(t);
                }
            }
        }
    }
    if found.len() < limit {
        return Err(Error::BoundTooSmall {
            found: found.len(),
            wanted: limit,
            bound,
        });
    }
    // lexicographic order must agree with the order of the values
    for w in found.windows(2) {
        if !table.less(&w[0], &w[1])? {
            return Err(Error::StructureViolation(format!(
                "lexicographic and value order disagree at {:?} < {:?}",
                w[0], w[1]
            )));
        }
    }
    Ok(found)
}

/// Strictly increasing tuples of length `len` with entries in `2..=bound`,
/// lexicographically.
fn increasing_tuples(len: usize, bound: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t: Vec<u32>| {
                let start = t.last().map_or(2, |&x| x + 1);
                (start..=bound).map(move |n| {
                    let mut u = t.clone();
                    u.push(n);
                    u
                })
            })
            .collect();
    }
    out
}

/// Classified entries for the first `limit` members of level `m`.
pub fn enumerate_level_prefix(
    d: u32,
    m: usize,
    limit: usize,
    bound: u32,
    reading: LevelReading,
) -> Result<Vec<SpectrumEntry>> {
    enumerate_level_tuples(d, m, limit, bound, reading)?
        .into_iter()
        .map(|t| classify_entry(&SpectrumKey::new(d, t)?))
        .collect()
}

/// `lambda(key) < lambda(key with entry `position` incremented)`; `position`
/// indexes `key.tuple()` from zero.
pub fn verify_monotone_increase(key: &SpectrumKey, position: usize) -> Result<bool> {
    let mut bigger = key.tuple().to_vec();
    let slot = bigger
        .get_mut(position)
        .ok_or_else(|| Error::InvalidArgument(format!("no entry at position {position}")))?;
    *slot += 1;
    let bigger = key.with_tuple(bigger)?;
    let w = pow2_neg(20);
    Ok(dynamical_degree(key, &w)?.compare(&dynamical_degree(&bigger, &w)?) == Ordering::Less)
}

/// `lambda(key extended by appended) < lambda(key)`.
pub fn verify_append_decrease(key: &SpectrumKey, appended: u32) -> Result<bool> {
    let mut longer = key.tuple().to_vec();
    longer.push(appended);
    let longer = key.with_tuple(longer)?;
    let w = pow2_neg(20);
    Ok(dynamical_degree(&longer, &w)?.compare(&dynamical_degree(key, &w)?) == Ordering::Less)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitReport {
    pub d: u32,
    pub prefix: Vec<u32>,
    pub from: u32,
    pub to: u32,
    pub strictly_increasing: bool,
    /// Certified upper bound on `lambda(prefix) - lambda(prefix, to)`.
    pub gap_upper_bound: String,
    pub tolerance: String,
}

/// Checks that `lambda(prefix, n)` increases over `n in from..=to` and ends
/// within `tolerance` of `lambda(prefix)`.
pub fn verify_limit_convergence(
    d: u32,
    prefix: &[u32],
    from: u32,
    to: u32,
    tolerance: &BigRational,
) -> Result<LimitReport> {
    if from > to || !tolerance.is_positive() {
        return Err(Error::InvalidArgument(
            "empty range or nonpositive tolerance".into(),
        ));
    }
    let base = SpectrumKey::new(d, prefix.to_vec())?;
    let mut table = LambdaTable::new(d);
    let tuples: Vec<Vec<u32>> = (from..=to).map(|n| [prefix, &[n]].concat()).collect();
    for t in &tuples {
        SpectrumKey::new(d, t.clone())?;
    }
    let mut strictly_increasing = true;
    for w in tuples.windows(2) {
        if !table.less(&w[0], &w[1])? {
            strictly_increasing = false;
        }
    }
    let mut limit = table.get(base.tuple())?;
    let mut top = table.get(tuples.last().expect("nonempty range"))?;
    // the top value lies below the limit; bound the gap from both sides
    let mut upper;
    for _ in 0..256 {
        upper = limit.hi() - top.lo();
        let lower = limit.lo() - top.hi();
        if upper < *tolerance {
            return Ok(LimitReport {
                d,
                prefix: prefix.to_vec(),
                from,
                to,
                strictly_increasing,
                gap_upper_bound: format_rational(&upper),
                tolerance: format_rational(tolerance),
            });
        }
        if lower >= *tolerance {
            return Err(Error::ToleranceNotReached {
                achieved: format_rational(&lower),
            });
        }
        limit = limit.bisect();
        top = top.bisect();
    }
    upper = limit.hi() - top.lo();
    Err(Error::ToleranceNotReached {
        achieved: format_rational(&upper),
    })
}

fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// `Phi_k` from `prod_{e | k} (X^e - 1)^{mu(k/e)}`.
pub fn cyclotomic_polynomial(k: u32) -> IntPoly {
    let mut num = IntPoly::one();
    let mut den = IntPoly::one();
    for e in 1..=k {
        if !k.is_multiple_of(e) {
            continue;
        }
        let f = &IntPoly::monomial(BigInt::one(), e as usize) - &IntPoly::one();
        match mobius(k / e) {
            1 => num = &num * &f,
            -1 => den = &den * &f,
            _ => {}
        }
    }
    num.div_exact(&den).expect("cyclotomic quotient is exact")
}

fn mobius(mut n: u32) -> i32 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Divides out every cyclotomic factor; returns the orders found (with
/// repetition) and the cofactor. All `Phi_k` with `phi(k) <= deg` are tried,
/// so the cofactor has no root of unity among its roots.
pub fn strip_cyclotomic(p: &IntPoly) -> (Vec<u32>, IntPoly) {
    let mut rest = p.clone();
    let mut orders = Vec::new();
    // phi(k) >= sqrt(k / 2), so k <= 2 deg^2 covers every candidate
    let limit = 2 * (p.deg() as u64).pow(2) + 2;
    for k in 1..=limit {
        let deg = rest.deg() as u64;
        if deg == 0 {
            break;
        }
        if euler_phi(k) > deg {
            continue;
        }
        let phi = cyclotomic_polynomial(k as u32);
        while let Some(q) = rest.div_exact(&phi) {
            rest = q;
            orders.push(k as u32);
        }
    }
    (orders, rest)
}

/// Census and Salem/Pisot label of the dominant root.
///
/// The auxiliary polynomial is monic with constant term `-1` and has exactly
/// one root outside the unit circle. Every irreducible factor other than the
/// minimal polynomial of the dominant root therefore has all its roots in the
/// closed unit disk and is cyclotomic, so stripping cyclotomic factors leaves
/// exactly the minimal polynomial and the label is decided by its census.
pub fn classify_entry(key: &SpectrumKey) -> Result<SpectrumEntry> {
    let p = key.polynomial();
    let census = unit_circle_census(&p)?;
    if census.outside != 1 {
        return Err(Error::CensusContradiction(format!(
            "{key}: {} roots outside the unit circle",
            census.outside
        )));
    }
    let value = dynamical_degree(key, &default_stored_width())?;
    let (cyclotomic_orders, residual) = strip_cyclotomic(&p);
    let residual_census = unit_circle_census(&residual)?;
    if residual_census.outside != 1 {
        return Err(Error::CensusContradiction(format!(
            "{key}: residual factor {residual} has {} roots outside",
            residual_census.outside
        )));
    }
    let label = if residual.deg() < 2 {
        log::warn!("{key}: residual factor {residual} has degree < 2");
        Label::Undetermined
    } else if residual_census.on >= 1 {
        Label::SalemLike
    } else {
        Label::PisotLike
    };
    Ok(SpectrumEntry {
        key: key.clone(),
        value,
        census,
        label,
        cyclotomic_orders,
        residual,
        residual_census,
    })
}
