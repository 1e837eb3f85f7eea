//! Square integer matrices.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::IntPoly;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    size: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    /// Row-major entries; fails unless there are exactly `size^2` of them.
    pub fn new(size: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != size * size {
            return Err(Error::InvalidArgument(format!(
                "{} entries do not form a {size}x{size} matrix",
                entries.len()
            )));
        }
        Ok(IntMatrix { size, entries })
    }

    pub fn zeros(size: usize) -> Self {
        IntMatrix {
            size,
            entries: vec![BigInt::zero(); size * size],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size);
        for i in 0..size {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn diagonal(diag: &[i64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m.set(i, i, v.into());
        }
        m
    }

    /// Panics on ragged or non-square input; meant for literals.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let size = rows.len();
        assert!(
            rows.iter().all(|r| r.len() == size),
            "matrix must be square"
        );
        IntMatrix {
            size,
            entries: rows.iter().flatten().map(|&v| BigInt::from(v)).collect(),
        }
    }

    /// Matrix whose column `j` is `e_{perm[j]}`, i.e. it sends `e_j` to
    /// `e_{perm[j]}`.
    pub fn permutation(perm: &[usize]) -> Self {
        let mut m = Self::zeros(perm.len());
        for (j, &i) in perm.iter().enumerate() {
            m.set(i, j, BigInt::one());
        }
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.size + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.size + j] = v;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.entries[i * self.size..(i + 1) * self.size].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.size).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.size);
        for i in 0..self.size {
            for j in 0..self.size {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// `v^T M` for a row vector `v`.
    pub fn left_apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.size);
        (0..self.size)
            .map(|j| {
                v.iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(i, x)| x * self.get(i, j))
                    .sum()
            })
            .collect()
    }

    /// `M v` for a column vector `v`.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.size);
        (0..self.size)
            .map(|i| {
                v.iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(j, x)| x * self.get(i, j))
                    .sum()
            })
            .collect()
    }

    /// Each column is `±e_k` and each row holds one nonzero entry.
    pub fn is_signed_permutation(&self) -> bool {
        let n = self.size;
        let mut seen = vec![false; n];
        for j in 0..n {
            let nonzero: Vec<usize> = (0..n).filter(|&i| !self.get(i, j).is_zero()).collect();
            if nonzero.len() != 1 || !self.get(nonzero[0], j).abs().is_one() || seen[nonzero[0]] {
                return false;
            }
            seen[nonzero[0]] = true;
        }
        true
    }

    pub fn is_permutation(&self) -> bool {
        self.is_signed_permutation() && self.entries.iter().all(|x| !x.is_negative())
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn determinant(&self) -> BigInt {
        let n = self.size;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i)).collect();
        let mut sign = false;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        sign = !sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        let det = a[n - 1][n - 1].clone();
        if sign {
            -det
        } else {
            det
        }
    }

    /// `det(X I - M)` by Berkowitz's division-free algorithm.
    pub fn char_poly(&self) -> IntPoly {
        let n = self.size;
        // c holds the characteristic polynomial of the leading r x r block,
        // highest degree first.
        let mut c = vec![BigInt::one()];
        for r in 0..n {
            let a = self.get(r, r);
            let row: Vec<&BigInt> = (0..r).map(|j| self.get(r, j)).collect();
            let mut col: Vec<BigInt> = (0..r).map(|i| self.get(i, r).clone()).collect();
            // t = (1, -a, -R C, -R A C, ..., -R A^(r-1) C)
            let mut t = Vec::with_capacity(r + 2);
            t.push(BigInt::one());
            t.push(-a);
            for _ in 0..r {
                let dot: BigInt = row
                    .iter()
                    .zip(&col)
                    .filter(|(x, y)| !x.is_zero() && !y.is_zero())
                    .map(|(x, y)| *x * y)
                    .sum();
                t.push(-dot);
                col = (0..r)
                    .map(|i| {
                        (0..r)
                            .filter(|&j| !col[j].is_zero())
                            .map(|j| self.get(i, j) * &col[j])
                            .sum()
                    })
                    .collect();
            }
            let next: Vec<BigInt> = (0..r + 2)
                .map(|i| {
                    (0..=i.min(r))
                        .filter(|&j| !c[j].is_zero() && !t[i - j].is_zero())
                        .map(|j| &t[i - j] * &c[j])
                        .sum()
                })
                .collect();
            c = next;
        }
        c.reverse();
        IntPoly::new(c)
    }

    /// Serializable form with decimal-string entries, one row per list.
    pub fn to_document(&self, labels: Vec<String>) -> MatrixDocument {
        MatrixDocument {
            size: self.size,
            labels,
            entries: (0..self.size)
                .map(|i| self.row(i).iter().map(|x| x.to_string()).collect())
                .collect(),
        }
    }

    pub fn from_document(doc: &MatrixDocument) -> Result<Self> {
        let entries = doc
            .entries
            .iter()
            .flatten()
            .map(|s| {
                s.parse::<BigInt>()
                    .map_err(|_| Error::InvalidArgument(format!("bad matrix entry {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if doc.entries.iter().any(|r| r.len() != doc.size) {
            return Err(Error::InvalidArgument("ragged matrix rows".into()));
        }
        Self::new(doc.size, entries)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub size: usize,
    pub labels: Vec<String>,
    pub entries: Vec<Vec<String>>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.size, self.size)?;
        for i in 0..self.size {
            let row: Vec<String> = self.row(i).iter().map(|x| format!("{x:>3}")).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.size, rhs.size, "matrix sizes differ");
        let n = self.size;
        let mut out = IntMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl Add for &IntMatrix {
    type Output = IntMatrix;
    fn add(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.size, rhs.size, "matrix sizes differ");
        IntMatrix {
            size: self.size,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &IntMatrix {
    type Output = IntMatrix;
    fn sub(self, rhs: &IntMatrix) -> IntMatrix {
        self + &(-rhs)
    }
}

impl Neg for &IntMatrix {
    type Output = IntMatrix;
    fn neg(self) -> IntMatrix {
        IntMatrix {
            size: self.size,
            entries: self.entries.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: IntMatrix) -> IntMatrix {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Oracle: `det(x I - M)` by Laplace expansion at integer points `x`,
    /// then Lagrange interpolation over the rationals.
    fn char_poly_by_interpolation(m: &IntMatrix) -> IntPoly {
        use num_rational::BigRational;
        let n = m.size();
        let points: Vec<i64> = (0..=n as i64).collect();
        let values: Vec<BigInt> = points
            .iter()
            .map(|&x| {
                let shifted = &IntMatrix::identity(n).scale_i64(x) - m;
                laplace(&(0..n).map(|i| shifted.row(i)).collect::<Vec<_>>())
            })
            .collect();
        let mut acc = vec![BigRational::zero(); n + 1];
        for (i, &xi) in points.iter().enumerate() {
            // basis polynomial prod_{j != i} (X - xj) / (xi - xj)
            let mut basis = vec![BigRational::one()];
            let mut denom = BigRational::one();
            for (j, &xj) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                let mut next = vec![BigRational::zero(); basis.len() + 1];
                for (k, b) in basis.iter().enumerate() {
                    next[k + 1] += b;
                    next[k] -= b * BigRational::from_integer(xj.into());
                }
                basis = next;
                denom *= BigRational::from_integer((xi - xj).into());
            }
            for (k, b) in basis.iter().enumerate() {
                acc[k] += b * BigRational::from_integer(values[i].clone()) / &denom;
            }
        }
        IntPoly::new(acc.into_iter().map(|c| c.to_integer()).collect())
    }

    fn laplace(rows: &[Vec<BigInt>]) -> BigInt {
        let n = rows.len();
        if n == 0 {
            return BigInt::one();
        }
        let mut total = BigInt::zero();
        for j in 0..n {
            if rows[0][j].is_zero() {
                continue;
            }
            let minor: Vec<Vec<BigInt>> = rows[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(k, _)| *k != j)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let term = &rows[0][j] * laplace(&minor);
            if j % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    impl IntMatrix {
        fn scale_i64(&self, c: i64) -> IntMatrix {
            IntMatrix {
                size: self.size,
                entries: self.entries.iter().map(|a| a * c).collect(),
            }
        }
    }

    #[test]
    fn char_poly_examples() {
        let x_minus_1 = IntPoly::from_i64s(&[-1, 1]);
        assert_eq!(IntMatrix::identity(3).char_poly(), x_minus_1.pow(3));
        let q = IntMatrix::diagonal(&[1, -1, -1]);
        assert_eq!(
            q.char_poly(),
            &x_minus_1 * &IntPoly::from_i64s(&[1, 1]).pow(2)
        );
        assert_eq!(IntMatrix::zeros(0).char_poly(), IntPoly::one());
    }

    #[test]
    fn determinant_examples() {
        let m = IntMatrix::from_rows(&[vec![0, 2, 1], vec![1, 0, 0], vec![3, 1, 1]]);
        assert_eq!(m.determinant(), BigInt::from(-1));
        assert_eq!(IntMatrix::identity(4).determinant(), BigInt::one());
        let singular = IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]]);
        assert!(singular.determinant().is_zero());
    }

    #[test]
    fn permutations() {
        let p = IntMatrix::permutation(&[0, 2, 1]);
        assert!(p.is_permutation());
        assert_eq!(
            p.apply(&[1.into(), 2.into(), 3.into()]),
            vec![1.into(), 3.into(), 2.into()]
        );
        assert!(IntMatrix::diagonal(&[1, -1]).is_signed_permutation());
        assert!(!IntMatrix::diagonal(&[1, -1]).is_permutation());
    }

    #[test]
    fn document_roundtrip() {
        let m = IntMatrix::from_rows(&[vec![1, -2], vec![3, 4]]);
        let doc = m.to_document(vec!["a".into(), "b".into()]);
        let json = serde_json::to_string(&doc).unwrap();
        let back: MatrixDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(IntMatrix::from_document(&back).unwrap(), m);
    }

    fn small_matrix() -> impl Strategy<Value = IntMatrix> {
        (1usize..6).prop_flat_map(|n| {
            proptest::collection::vec(-4i64..5, n * n).prop_map(move |v| {
                IntMatrix::new(n, v.into_iter().map(BigInt::from).collect()).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn char_poly_matches_interpolation(m in small_matrix()) {
            prop_assert_eq!(m.char_poly(), char_poly_by_interpolation(&m));
        }

        #[test]
        fn determinant_matches_laplace(m in small_matrix()) {
            let rows: Vec<Vec<BigInt>> = (0..m.size()).map(|i| m.row(i)).collect();
            prop_assert_eq!(m.determinant(), laplace(&rows));
        }

        #[test]
        fn determinant_is_multiplicative(a in small_matrix(), b in small_matrix()) {
            prop_assume!(a.size() == b.size());
            prop_assert_eq!((&a * &b).determinant(), a.determinant() * b.determinant());
        }
    }
}
