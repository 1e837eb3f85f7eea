//! The Weyl group acting on the lattice `Z^{1,n}` with form
//! `diag(1, -1, ..., -1)`: generators, reflections and a degree-reduction
//! membership procedure.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jonquieres::intersection_form;
use crate::matrix::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "indices", rename_all = "lowercase")]
pub enum WeylGenerator {
    /// Sends `e_j` to `e_{perm[j]}`; `perm[0] = 0`.
    Permutation(Vec<usize>),
    /// The quadratic element acting on `e_0` and three exceptional indices.
    Quadratic([usize; 3]),
}

impl WeylGenerator {
    pub fn matrix(&self, size: usize) -> Result<IntMatrix> {
        match self {
            WeylGenerator::Permutation(perm) => {
                if perm.len() != size || perm[0] != 0 {
                    return Err(Error::IndexClash(format!(
                        "{perm:?} is not a permutation of 1..{size} fixing 0"
                    )));
                }
                let mut seen = vec![false; size];
                for &i in perm {
                    if i >= size || seen[i] {
                        return Err(Error::IndexClash(format!("{perm:?} is not a permutation")));
                    }
                    seen[i] = true;
                }
                Ok(IntMatrix::permutation(perm))
            }
            WeylGenerator::Quadratic(idx) => a0_on(*idx, size),
        }
    }

    /// Transposition of two exceptional indices.
    pub fn transposition(size: usize, i: usize, j: usize) -> Self {
        let mut perm: Vec<usize> = (0..size).collect();
        perm.swap(i, j);
        WeylGenerator::Permutation(perm)
    }
}

impl fmt::Display for WeylGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeylGenerator::Permutation(p) => write!(f, "perm{p:?}"),
            WeylGenerator::Quadratic([i, j, k]) => write!(f, "A0({i},{j},{k})"),
        }
    }
}

/// `x . y = x_0 y_0 - sum x_i y_i`.
pub fn form(x: &[BigInt], y: &[BigInt]) -> BigInt {
    x.iter()
        .zip(y)
        .enumerate()
        .map(|(i, (a, b))| if i == 0 { a * b } else { -(a * b) })
        .sum()
}

/// Matrix of `x -> x + (x . alpha) alpha` for a root `alpha` (`alpha . alpha = -2`).
pub fn reflection_matrix(alpha: &[i64]) -> Result<IntMatrix> {
    let a: Vec<BigInt> = alpha.iter().map(|&x| BigInt::from(x)).collect();
    let norm = form(&a, &a);
    if norm != BigInt::from(-2) {
        return Err(Error::InvalidRoot(norm.to_string()));
    }
    let n = a.len();
    let mut m = IntMatrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            // (x . alpha) = sum_j x_j (Q alpha)_j
            let q_alpha_j = if j == 0 { a[j].clone() } else { -&a[j] };
            let v = m.get(i, j) + &a[i] * q_alpha_j;
            m.set(i, j, v);
        }
    }
    Ok(m)
}

/// The quadratic generator on `e_0` and the exceptional indices `idx`.
pub fn a0_on(idx: [usize; 3], size: usize) -> Result<IntMatrix> {
    let [i, j, k] = idx;
    if i == j || j == k || i == k || [i, j, k].iter().any(|&x| x == 0 || x >= size) {
        return Err(Error::IndexClash(format!(
            "quadratic generator needs three distinct indices in 1..{}, got {idx:?}",
            size.saturating_sub(1)
        )));
    }
    let mut alpha = vec![0i64; size];
    alpha[0] = 1;
    for x in idx {
        alpha[x] = -1;
    }
    reflection_matrix(&alpha)
}

pub fn is_isometry(m: &IntMatrix) -> bool {
    let q = intersection_form(m.size());
    &(m * &q) * &m.transpose() == q
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TraceStep {
    pub side: Side,
    #[serde(flatten)]
    pub generator: WeylGenerator,
}

/// Generators applied in order to the input, and the matrix they produce.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    pub steps: Vec<TraceStep>,
    pub terminal: IntMatrix,
}

impl ReductionTrace {
    pub fn replay(&self, input: &IntMatrix) -> Result<IntMatrix> {
        let mut m = input.clone();
        for step in &self.steps {
            let g = step.generator.matrix(m.size())?;
            m = match step.side {
                Side::Left => &g * &m,
                Side::Right => &m * &g,
            };
        }
        Ok(m)
    }

    pub fn quadratic_steps(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s.generator, WeylGenerator::Quadratic(_)))
            .count()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.steps).expect("trace serializes")
    }
}

/// Result of greedy degree reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reduction {
    /// The terminal matrix fixes `e_0` and permutes the other basis vectors.
    Reduced(ReductionTrace),
    /// Stuck: the terminal matrix is not a permutation and no quadratic step
    /// lowers its degree.
    NotReduced(ReductionTrace),
}

impl Reduction {
    pub fn trace(&self) -> &ReductionTrace {
        match self {
            Reduction::Reduced(t) | Reduction::NotReduced(t) => t,
        }
    }
}

/// Repeatedly applies, on the left, the quadratic generator on the three
/// largest multiplicities of the first column (ties to the lowest index)
/// while this lowers the degree `M[0][0]`.
pub fn reduce(m: &IntMatrix) -> Result<Reduction> {
    if !is_isometry(m) {
        return Err(Error::NotAnIsometry);
    }
    let size = m.size();
    let mut cur = m.clone();
    let mut steps = Vec::new();
    loop {
        let degree = cur.get(0, 0).clone();
        if degree.is_one() {
            let trace = ReductionTrace {
                steps,
                terminal: cur.clone(),
            };
            return Ok(if cur.is_permutation() {
                Reduction::Reduced(trace)
            } else {
                Reduction::NotReduced(trace)
            });
        }
        let stuck = |steps, cur| {
            Ok(Reduction::NotReduced(ReductionTrace {
                steps,
                terminal: cur,
            }))
        };
        if !degree.is_positive() || size < 4 {
            return stuck(steps, cur);
        }
        // multiplicities m_i = -M[i][0]
        let mut order: Vec<usize> = (1..size).collect();
        order.sort_by(|&a, &b| cur.get(a, 0).cmp(cur.get(b, 0)).then(a.cmp(&b)));
        let idx = [order[0], order[1], order[2]];
        let top: BigInt = idx.iter().map(|&i| -cur.get(i, 0)).sum();
        if top <= degree {
            return stuck(steps, cur);
        }
        let g = WeylGenerator::Quadratic(idx);
        cur = &g.matrix(size)? * &cur;
        steps.push(TraceStep {
            side: Side::Left,
            generator: g,
        });
    }
}

/// Membership decision with its certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    pub trace: ReductionTrace,
}

impl Membership {
    pub fn to_json(&self) -> serde_json::Value {
        let t = &self.trace;
        serde_json::json!({
            "member": self.member,
            "quadratic_steps": t.quadratic_steps(),
            "steps": t.to_json(),
            "terminal": t.terminal.to_document(
                (0..t.terminal.size()).map(|i| format!("e{i}")).collect()
            ),
        })
    }
}

/// Decides whether `m` lies in the group generated by the permutations of
/// the exceptional indices and the quadratic generator. A reduced trace is a
/// certificate; a stuck reduction of an isometry that maps `e_0` into the
/// positive cone is a genuine obstruction because the greedy step is the
/// standard descent into the fundamental chamber.
pub fn is_weyl_member(m: &IntMatrix) -> Result<Membership> {
    let reduction = reduce(m)?;
    let member = matches!(reduction, Reduction::Reduced(_));
    let trace = match reduction {
        Reduction::Reduced(t) | Reduction::NotReduced(t) => t,
    };
    Ok(Membership { member, trace })
}

/// `M^{-1} = Q M^T Q` for an isometry.
pub fn isometry_inverse(m: &IntMatrix) -> IntMatrix {
    let q = intersection_form(m.size());
    &(&q * &m.transpose()) * &q
}
