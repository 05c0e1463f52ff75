use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest dimension accepted anywhere in the toolkit.
pub const MAX_DIM: usize = 64;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense square complex matrix stored row-major.
///
/// Every constructor checks the dimension cap and that all entries are
/// finite, so downstream routines never see NaN or infinite input.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        return Err(Error::DimensionOutOfRange { n, max: MAX_DIM });
    }
    Ok(())
}

impl ComplexMatrix {
    pub fn zero(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(Self {
            n,
            data: vec![ZERO; n * n],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zero(n)?;
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        Ok(m)
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let n = rows.len();
        check_dim(n)?;
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Self::from_vec(n, data)
    }

    /// Real-valued rows, a convenience for tests and fixtures.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn from_vec(n: usize, data: Vec<Complex64>) -> Result<Self> {
        check_dim(n)?;
        if data.len() != n * n {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries, found {}",
                n * n,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidMatrix(format!(
                "non-finite entry at ({}, {})",
                pos / n,
                pos % n
            )));
        }
        Ok(Self { n, data })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        check_dim(n)?;
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self::from_vec(n, data)
    }

    pub fn from_diag(diag: &[Complex64]) -> Result<Self> {
        let n = diag.len();
        let mut m = Self::zero(n)?;
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        if !diag.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite diagonal entry".into()));
        }
        Ok(m)
    }

    pub fn from_real_diag(diag: &[f64]) -> Result<Self> {
        let d: Vec<Complex64> = diag.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_diag(&d)
    }

    /// The n×n upper shift matrix (ones on the superdiagonal).
    pub fn jordan_block(n: usize) -> Result<Self> {
        Self::from_fn(n, |i, j| if j == i + 1 { ONE } else { ZERO })
    }

    // Internal constructor for results of arithmetic on already-validated
    // matrices; finite inputs can still overflow, which is caught later by
    // the decompositions' convergence checks.
    pub(crate) fn from_raw(n: usize, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(data.len(), n * n);
        Self { n, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.data.chunks(self.n)
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.n).map(|i| self.data[i * self.n + j]).collect()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.n).map(|i| self.data[i * self.n + i]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                out[j * n + i] = self.data[i * n + j].conj();
            }
        }
        Self::from_raw(n, out)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_raw(self.n, self.data.iter().map(|&z| z * c).collect())
    }

    pub fn scale_real(&self, c: f64) -> Self {
        Self::from_raw(self.n, self.data.iter().map(|&z| z * c).collect())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.data[i * self.n + i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `(A + A*)/2`.
    pub fn hermitian_part(&self) -> Self {
        let n = self.n;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                // halve before adding so entries near f64::MAX stay finite
                out[i * n + j] = self.data[i * n + j] * 0.5 + self.data[j * n + i].conj() * 0.5;
            }
        }
        Self::from_raw(n, out)
    }

    /// `(e^{iθ} A + e^{-iθ} A*)/2`, the real part of the rotated operator.
    pub fn rotated_hermitian_part(&self, theta: f64) -> Self {
        let n = self.n;
        let phase = Complex64::from_polar(1.0, theta);
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                let a = phase * self.data[i * n + j];
                let b = (phase * self.data[j * n + i]).conj();
                out[i * n + j] = a * 0.5 + b * 0.5;
            }
        }
        Self::from_raw(n, out)
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        self.check_same(rhs)?;
        Ok(self.mul_unchecked(rhs))
    }

    pub(crate) fn mul_unchecked(&self, rhs: &Self) -> Self {
        let n = self.n;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            let out_row = &mut out[i * n..(i + 1) * n];
            for (k, &a) in row.iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[k * n..(k + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Self::from_raw(n, out)
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: x.len(),
            });
        }
        Ok(self.mul_vec_unchecked(x))
    }

    pub(crate) fn mul_vec_unchecked(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.rows()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.check_same(rhs)?;
        Ok(self.zip_with(rhs, |a, b| a + b))
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.check_same(rhs)?;
        Ok(self.zip_with(rhs, |a, b| a - b))
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        Self::from_raw(
            self.n,
            self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect(),
        )
    }

    /// Add `c` to every diagonal entry.
    pub fn shift(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            out.data[i * self.n + i] += c;
        }
        out
    }

    /// Frobenius norm of `A - A*`; zero exactly for matrices built as Hermitian.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.n;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self.data[i * n + j] - self.data[j * n + i].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Conjugate by a unitary: `U* A U`.
    pub fn unitary_conjugate(&self, u: &Self) -> Result<Self> {
        self.check_same(u)?;
        Ok(u.adjoint().mul_unchecked(self).mul_unchecked(u))
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.n && j < self.n, "index ({i}, {j}) out of bounds");
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(i < self.n && j < self.n, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.n + j]
    }
}

// Operator sugar panics on dimension mismatch, like slice indexing; the
// `try_*` methods are the fallible forms.
impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        self.try_add(rhs).expect("dimension mismatch in matrix addition")
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        self.try_sub(rhs).expect("dimension mismatch in matrix subtraction")
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("dimension mismatch in matrix product")
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix::from_raw(self.n, self.data.iter().map(|z| -z).collect())
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.n, self.n)?;
        for row in self.rows() {
            write!(f, "  ")?;
            for z in row {
                write!(f, "{:>10.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    n: usize,
    entries: Vec<Vec<[f64; 2]>>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            n: self.n,
            entries: self
                .rows()
                .map(|r| r.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(deserializer)?;
        if repr.entries.len() != repr.n {
            return Err(serde::de::Error::custom(format!(
                "\"n\" is {} but {} rows were given",
                repr.n,
                repr.entries.len()
            )));
        }
        let rows = repr
            .entries
            .into_iter()
            .map(|r| r.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
            .collect();
        ComplexMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn dimension_cap() {
        assert!(ComplexMatrix::zero(0).is_err());
        assert!(ComplexMatrix::zero(MAX_DIM).is_ok());
        assert!(matches!(
            ComplexMatrix::identity(MAX_DIM + 1),
            Err(Error::DimensionOutOfRange { .. })
        ));
    }

    #[test]
    fn rejects_non_finite() {
        let err = ComplexMatrix::from_rows(vec![vec![c(f64::NAN, 0.0)]]).unwrap_err();
        assert!(matches!(err, Error::InvalidMatrix(_)));
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = ComplexMatrix::from_rows(vec![vec![ONE, ONE], vec![ONE]]).unwrap_err();
        assert!(matches!(err, Error::InvalidMatrix(_)));
    }

    #[test]
    fn product_and_adjoint() {
        let a = ComplexMatrix::from_rows(vec![vec![c(1.0, 1.0), c(2.0, 0.0)], vec![ZERO, c(0.0, -1.0)]])
            .unwrap();
        let b = a.adjoint();
        assert_eq!(b[(0, 0)], c(1.0, -1.0));
        assert_eq!(b[(1, 0)], c(2.0, 0.0));
        let p = &a * &b;
        // A A* is Hermitian
        assert_eq!(p.hermitian_defect(), 0.0);
        assert_eq!(p[(0, 0)], c(6.0, 0.0));
    }

    #[test]
    fn rotated_part_is_exactly_hermitian() {
        let a = ComplexMatrix::from_rows(vec![
            vec![c(0.3, -1.2), c(2.0, 0.7)],
            vec![c(-0.1, 0.4), c(1.5, 0.0)],
        ])
        .unwrap();
        for k in 0..16 {
            let h = a.rotated_hermitian_part(k as f64 * 0.41);
            assert_eq!(h.hermitian_defect(), 0.0);
        }
    }

    #[test]
    fn json_format() {
        let j = ComplexMatrix::jordan_block(2).unwrap();
        let s = serde_json::to_string(&j).unwrap();
        assert_eq!(s, r#"{"n":2,"entries":[[[0.0,0.0],[1.0,0.0]],[[0.0,0.0],[0.0,0.0]]]}"#);
        let back: ComplexMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, j);
    }

    #[test]
    fn json_n_mismatch_rejected() {
        let s = r#"{"n":3,"entries":[[[1,0],[0,0]],[[0,0],[1,0]]]}"#;
        assert!(serde_json::from_str::<ComplexMatrix>(s).is_err());
    }
}
