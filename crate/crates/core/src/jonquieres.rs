//! The auxiliary polynomials, the de Jonquières lattice matrices, the
//! intersection form and the defect matrix, with exact structural checks.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, MatrixDocument};
use crate::numerics::IntPoly;

/// Degree `d` and orbit lengths `(n_2, ..., n_m)`; the first orbit has
/// length 2 and is implicit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrbitData {
    pub d: u32,
    pub tuple: Vec<u32>,
}

impl OrbitData {
    pub fn new(d: u32, tuple: Vec<u32>) -> Result<Self> {
        let o = OrbitData { d, tuple };
        o.validate()?;
        Ok(o)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 1 {
            return Err(Error::InvalidOrbitData("degree must be at least 1".into()));
        }
        if self.m() > 2 * self.d as usize - 1 {
            return Err(Error::InvalidOrbitData(format!(
                "{} orbits exceed 2d-1 = {} for d = {}",
                self.m(),
                2 * self.d - 1,
                self.d
            )));
        }
        if let Some(n) = self.tuple.iter().find(|&&n| n < 1) {
            return Err(Error::InvalidOrbitData(format!("orbit length {n} < 1")));
        }
        Ok(())
    }

    /// Number of orbits including the implicit first one.
    pub fn m(&self) -> usize {
        1 + self.tuple.len()
    }

    /// Rank of the lattice minus one: `2 + sum n_i`.
    pub fn n(&self) -> usize {
        2 + self.tuple.iter().map(|&n| n as usize).sum::<usize>()
    }

    pub fn size(&self) -> usize {
        self.n() + 1
    }

    /// Position of `E(q_i^0)` for `i >= 2` (index into `tuple` is `i - 2`).
    pub fn block_start(&self, orbit: usize) -> usize {
        debug_assert!(orbit >= 2);
        3 + self.tuple[..orbit - 2]
            .iter()
            .map(|&n| n as usize)
            .sum::<usize>()
    }
}

impl fmt::Display for OrbitData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<String> = self.tuple.iter().map(u32::to_string).collect();
        write!(f, "d={} ({})", self.d, t.join(","))
    }
}

/// Basis vector names: the line class and the exceptional classes over the
/// orbit points `q_i^j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisLabel {
    Line,
    Exceptional { orbit: usize, step: usize },
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::Line => write!(f, "L"),
            BasisLabel::Exceptional { orbit, step } => write!(f, "E(q{orbit}^{step})"),
        }
    }
}

pub fn basis_labels(o: &OrbitData) -> Vec<BasisLabel> {
    let mut labels = vec![
        BasisLabel::Line,
        BasisLabel::Exceptional { orbit: 1, step: 0 },
        BasisLabel::Exceptional { orbit: 1, step: 1 },
    ];
    for (k, &n) in o.tuple.iter().enumerate() {
        for step in 0..n as usize {
            labels.push(BasisLabel::Exceptional { orbit: k + 2, step });
        }
    }
    labels
}

/// `(X^2 - (d-1)X - 1) prod (X^{n_i} + 1) + X sum_i prod_{j != i} (X^{n_j} + 1)`.
pub fn auxiliary_polynomial(o: &OrbitData) -> IntPoly {
    let factors: Vec<IntPoly> = o
        .tuple
        .iter()
        .map(|&n| IntPoly::x_pow_plus_one(n as usize))
        .collect();
    let quadratic = IntPoly::new(vec![
        BigInt::from(-1),
        -BigInt::from(o.d as i64 - 1),
        BigInt::one(),
    ]);
    // prefix[k] = prod_{j<k} f_j and suffix[k] = prod_{j>=k} f_j
    let k = factors.len();
    let mut prefix = vec![IntPoly::one()];
    for f in &factors {
        let next = prefix.last().unwrap() * f;
        prefix.push(next);
    }
    let mut suffix = vec![IntPoly::one(); k + 1];
    for i in (0..k).rev() {
        suffix[i] = &factors[i] * &suffix[i + 1];
    }
    let mut sum = IntPoly::zero();
    for i in 0..k {
        sum = &sum + &(&prefix[i] * &suffix[i + 1]);
    }
    &(&quadratic * &prefix[k]) + &sum.shift(1)
}

/// The lattice action of the de Jonquières map with orbit data `o`, in the
/// basis of [`basis_labels`]. Column `j` is the image of basis vector `j`.
pub fn jonquieres_matrix(o: &OrbitData) -> Result<IntMatrix> {
    o.validate()?;
    let size = o.size();
    let d = o.d as i64;
    let mut m = IntMatrix::zeros(size);
    let starts: Vec<usize> = (2..=o.m()).map(|i| o.block_start(i)).collect();
    // L
    m.set(0, 0, d.into());
    m.set(1, 0, (-(d - 1)).into());
    // E(q1^0) -> E(q1^1)
    m.set(2, 1, BigInt::one());
    // E(q1^1)
    m.set(0, 2, (d - 1).into());
    m.set(1, 2, (-(d - 2)).into());
    for &s in &starts {
        m.set(s, 0, (-1).into());
        m.set(s, 2, (-1).into());
    }
    for (k, &n) in o.tuple.iter().enumerate() {
        let s = starts[k];
        let n = n as usize;
        for j in 0..n - 1 {
            m.set(s + j + 1, s + j, BigInt::one());
        }
        // the last point of the orbit maps to L - E(q1^0) - E(q_i^0)
        let last = s + n - 1;
        m.set(0, last, BigInt::one());
        m.set(1, last, (-1).into());
        let v = m.get(s, last) - 1;
        m.set(s, last, v);
    }
    Ok(m)
}

/// `diag(1, -1, ..., -1)`.
pub fn intersection_form(size: usize) -> IntMatrix {
    let mut diag = vec![-1; size];
    if size > 0 {
        diag[0] = 1;
    }
    IntMatrix::diagonal(&diag)
}

/// `(2d - 1 - m) [[1, -1], [-1, 1]]` in the top-left corner, zero elsewhere.
pub fn defect_h(o: &OrbitData) -> IntMatrix {
    let c = BigInt::from(2 * o.d as i64 - 1 - o.m() as i64);
    let mut h = IntMatrix::zeros(o.size());
    h.set(0, 0, c.clone());
    h.set(1, 1, c.clone());
    h.set(0, 1, -c.clone());
    h.set(1, 0, -c);
    h
}

/// Outcome of the exact structural checks for one orbit datum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub d: u32,
    pub tuple: Vec<u32>,
    pub size: usize,
    /// `char(J) = (X - 1) p`.
    pub char_poly_factors: bool,
    /// `J Q J^T - Q = H`.
    pub intersection_defect: bool,
    pub defect_is_zero: bool,
    /// First entry of `(3, 1, ..., 1) J`.
    pub canonical_row_value: String,
    /// `(3, 1, ..., 1) J = (3, 1, ..., 1)`.
    pub canonical_row_preserved: bool,
}

/// Checks the three structural identities exactly. A failure of any of them
/// is reported as [`Error::StructureViolation`].
pub fn verify_structure(o: &OrbitData) -> Result<StructureReport> {
    let j = jonquieres_matrix(o)?;
    let size = j.size();
    let p = auxiliary_polynomial(o);
    let expected_char = &IntPoly::linear_root(1) * &p;
    if j.char_poly() != expected_char {
        return Err(Error::StructureViolation(format!(
            "characteristic polynomial of J differs from (X-1)p for {o}"
        )));
    }
    let q = intersection_form(size);
    let h = defect_h(o);
    let defect = &(&(&j * &q) * &j.transpose()) - &q;
    if defect != h {
        return Err(Error::StructureViolation(format!(
            "J Q J^T - Q != H for {o}"
        )));
    }
    let mut k = vec![BigInt::one(); size];
    k[0] = BigInt::from(3);
    let image = j.left_apply(&k);
    let preserved = image == k;
    // only the L and E(q1^1) columns depend on m
    let excess = 2 * o.d as i64 - 1 - o.m() as i64;
    let mut expected = k.clone();
    expected[0] += excess;
    expected[2] += excess;
    if image != expected || preserved != (excess == 0) {
        return Err(Error::StructureViolation(format!(
            "canonical row image {image:?} for {o}"
        )));
    }
    Ok(StructureReport {
        d: o.d,
        tuple: o.tuple.clone(),
        size,
        char_poly_factors: true,
        intersection_defect: true,
        defect_is_zero: h.is_zero(),
        canonical_row_value: image[0].to_string(),
        canonical_row_preserved: preserved,
    })
}

/// `{"coeffs": [...]}` with ascending decimal-string coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyDocument {
    pub coeffs: Vec<String>,
}

impl PolyDocument {
    pub fn from_poly(p: &IntPoly) -> Self {
        PolyDocument {
            coeffs: p.coeffs().iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn to_poly(&self) -> Result<IntPoly> {
        self.coeffs
            .iter()
            .map(|s| {
                s.parse::<BigInt>()
                    .map_err(|_| Error::InvalidArgument(format!("bad coefficient {s:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(IntPoly::new)
    }
}

pub fn matrix_document(o: &OrbitData) -> Result<MatrixDocument> {
    let j = jonquieres_matrix(o)?;
    Ok(j.to_document(basis_labels(o).iter().map(|l| l.to_string()).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn od(d: u32, t: &[u32]) -> OrbitData {
        OrbitData::new(d, t.to_vec()).unwrap()
    }

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    /// Independent oracle: the same formula through coefficient vectors and a
    /// schoolbook product, with no shared helpers.
    fn aux_oracle(d: i64, tuple: &[u32]) -> Vec<i64> {
        fn mul(a: &[i64], b: &[i64]) -> Vec<i64> {
            let mut out = vec![0; a.len() + b.len() - 1];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    out[i + j] += x * y;
                }
            }
            out
        }
        fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
            let mut out = vec![0; a.len().max(b.len())];
            for (i, x) in a.iter().enumerate() {
                out[i] += x;
            }
            for (i, x) in b.iter().enumerate() {
                out[i] += x;
            }
            out
        }
        let factor = |n: u32| {
            let mut f = vec![0; n as usize + 1];
            f[0] = 1;
            f[n as usize] = 1;
            f
        };
        let mut total = vec![-1, -(d - 1), 1];
        for &n in tuple {
            total = mul(&total, &factor(n));
        }
        for i in 0..tuple.len() {
            let mut term = vec![0, 1];
            for (j, &n) in tuple.iter().enumerate() {
                if j != i {
                    term = mul(&term, &factor(n));
                }
            }
            total = add(&total, &term);
        }
        while total.last() == Some(&0) {
            total.pop();
        }
        total
    }

    #[test]
    fn auxiliary_examples() {
        assert_eq!(auxiliary_polynomial(&od(4, &[])), p(&[-1, -3, 1]));
        assert_eq!(auxiliary_polynomial(&od(4, &[2])), p(&[-1, -2, 0, -3, 1]));
        assert_eq!(auxiliary_polynomial(&od(1, &[])), p(&[-1, 0, 1]));
        let o = od(4, &[2, 3, 4, 5, 6, 7]);
        assert_eq!(auxiliary_polynomial(&o).deg(), 29);
    }

    #[test]
    fn matrix_sizes_and_columns() {
        assert_eq!(jonquieres_matrix(&od(4, &[2])).unwrap().size(), 5);
        let o = od(4, &[2, 3, 4, 5, 6, 7]);
        let j = jonquieres_matrix(&o).unwrap();
        assert_eq!(j.size(), 30);
        for i in 2..=o.m() {
            let s = o.block_start(i);
            let last = s + o.tuple[i - 2] as usize - 1;
            let mut expected = vec![BigInt::zero(); j.size()];
            expected[0] = BigInt::one();
            expected[1] = BigInt::from(-1);
            expected[s] = BigInt::from(-1);
            assert_eq!(j.column(last), expected, "orbit {i}");
        }
        assert!(matches!(
            jonquieres_matrix(&OrbitData {
                d: 2,
                tuple: vec![2, 2, 2]
            }),
            Err(Error::InvalidOrbitData(_))
        ));
    }

    #[test]
    fn small_matrix_literal() {
        // d = 4, tuple (2): columns L, E(q1^0), E(q1^1), E(q2^0), E(q2^1)
        let j = jonquieres_matrix(&od(4, &[2])).unwrap();
        let expected = IntMatrix::from_rows(&[
            vec![4, 0, 3, 0, 1],
            vec![-3, 0, -2, 0, -1],
            vec![0, 1, 0, 0, 0],
            vec![-1, 0, -1, 0, -1],
            vec![0, 0, 0, 1, 0],
        ]);
        assert_eq!(j, expected);
        assert_eq!(j.char_poly(), &p(&[-1, 1]) * &p(&[-1, -2, 0, -3, 1]));
    }

    #[test]
    fn single_point_orbit() {
        // n_i = 1: the block start is also the last point
        let j = jonquieres_matrix(&od(4, &[1])).unwrap();
        assert_eq!(
            j.column(3),
            vec![1, -1, 0, -1]
                .into_iter()
                .map(BigInt::from)
                .collect::<Vec<_>>()
        );
        verify_structure(&od(4, &[1])).unwrap();
    }

    #[test]
    fn intersection_form_examples() {
        let q2 = intersection_form(2);
        assert_eq!(q2, IntMatrix::diagonal(&[1, -1]));
        let q = intersection_form(7);
        assert_eq!(&q * &q, IntMatrix::identity(7));
        let positive = (0..7).filter(|&i| q.get(i, i) > &BigInt::zero()).count();
        assert_eq!((positive, 7 - positive), (1, 6));
    }

    #[test]
    fn defect_examples() {
        assert!(defect_h(&od(4, &[2, 3, 4, 5, 6, 7])).is_zero());
        let h = defect_h(&od(4, &[2]));
        assert_eq!(h.get(0, 0), &BigInt::from(5));
        assert_eq!(h.get(0, 1), &BigInt::from(-5));
        for i in 0..h.size() {
            assert!(h.row(i).iter().sum::<BigInt>().is_zero());
        }
        let h5 = defect_h(&od(5, &[]));
        assert_eq!(h5.get(1, 1), &BigInt::from(8));
        // char(H) = (X - 2c) X^N
        let o = od(4, &[2, 3]);
        let c = 2 * (2 * 4 - 1 - 3);
        assert_eq!(
            defect_h(&o).char_poly(),
            &p(&[-c, 1]) * &IntPoly::monomial(BigInt::one(), o.n())
        );
    }

    #[test]
    fn structure_reports() {
        let full = verify_structure(&od(4, &[2, 3, 4, 5, 6, 7])).unwrap();
        assert!(full.defect_is_zero && full.canonical_row_preserved);
        assert_eq!(full.canonical_row_value, "3");
        let short = verify_structure(&od(4, &[2])).unwrap();
        assert!(!short.canonical_row_preserved);
        assert_eq!(short.canonical_row_value, "8");
        let empty = verify_structure(&od(5, &[])).unwrap();
        assert!(!empty.defect_is_zero);
    }

    #[test]
    fn documents_roundtrip() {
        let o = od(4, &[2]);
        let doc = PolyDocument::from_poly(&auxiliary_polynomial(&o));
        assert_eq!(doc.coeffs, ["-1", "-2", "0", "-3", "1"]);
        assert_eq!(doc.to_poly().unwrap(), auxiliary_polynomial(&o));
        let m = matrix_document(&o).unwrap();
        assert_eq!(m.labels, ["L", "E(q1^0)", "E(q1^1)", "E(q2^0)", "E(q2^1)"]);
        assert_eq!(
            IntMatrix::from_document(&m).unwrap(),
            jonquieres_matrix(&o).unwrap()
        );
    }

    fn orbit_data() -> impl Strategy<Value = OrbitData> {
        (1u32..7).prop_flat_map(|d| {
            proptest::collection::vec(1u32..6, 0..(2 * d as usize - 1).min(5))
                .prop_map(move |tuple| OrbitData { d, tuple })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn auxiliary_matches_oracle(o in orbit_data()) {
            let got = auxiliary_polynomial(&o);
            prop_assert_eq!(got.clone(), p(&aux_oracle(o.d as i64, &o.tuple)));
            prop_assert_eq!(got.deg(), o.n());
        }

        #[test]
        fn structure_holds(o in orbit_data()) {
            let r = verify_structure(&o).unwrap();
            prop_assert_eq!(r.defect_is_zero, o.m() == 2 * o.d as usize - 1);
        }

        #[test]
        fn determinant_is_unit(o in orbit_data()) {
            let j = jonquieres_matrix(&o).unwrap();
            let det = j.determinant();
            prop_assert!(det == BigInt::one() || det == BigInt::from(-1));
            // |det J|^2 |det Q| = |det(Q + H)|
            let q = intersection_form(j.size());
            let qh = &q + &defect_h(&o);
            prop_assert_eq!(num_traits::Signed::abs(&qh.determinant()), BigInt::one());
        }

        #[test]
        fn eigenvalue_one_multiplicity(o in orbit_data()) {
            let x1 = IntPoly::linear_root(1);
            let mult = |mut f: IntPoly| {
                let mut k = 0;
                while let Some(q) = f.div_exact(&x1) {
                    f = q;
                    k += 1;
                }
                k
            };
            let j = jonquieres_matrix(&o).unwrap();
            prop_assert_eq!(mult(j.char_poly()), mult(auxiliary_polynomial(&o)) + 1);
        }

        #[test]
        fn canonical_row_on_line_column(o in orbit_data()) {
            let j = jonquieres_matrix(&o).unwrap();
            let col = j.column(0);
            let total: BigInt = BigInt::from(3) * &col[0] + col[1..].iter().sum::<BigInt>();
            prop_assert_eq!(total, BigInt::from(2 * o.d as i64 + 2 - o.m() as i64));
        }
    }
}
