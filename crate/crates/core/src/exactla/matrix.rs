use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::{Error, Result};

/// Dense integer matrix, row-major, stored inline up to 8×8.
///
/// Entries are `i64`; every product and sum goes through checked `i128`
/// arithmetic and a result that does not fit is reported as
/// [`Error::Overflow`] rather than wrapped.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: SmallVec<[i64; 64]>,
}

pub(crate) fn narrow(x: i128, what: &'static str) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Overflow(what))
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = SmallVec::new();
        data.resize(rows * cols, 0);
        Self { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &x) in entries.iter().enumerate() {
            m.set(i, i, x);
        }
        m
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|x| x.as_ref().len()).unwrap_or(0);
        if r == 0 || c == 0 {
            return Err(Error::Dimension("empty matrix".into()));
        }
        let mut data = SmallVec::with_capacity(r * c);
        for row in rows {
            let row = row.as_ref();
            if row.len() != c {
                return Err(Error::Dimension("ragged rows".into()));
            }
            data.extend_from_slice(row);
        }
        Ok(Self {
            rows: r,
            cols: c,
            data,
        })
    }

    /// Builds the matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns<C: AsRef<[i64]>>(columns: &[C]) -> Result<Self> {
        let c = columns.len();
        let r = columns.first().map(|x| x.as_ref().len()).unwrap_or(0);
        if r == 0 || c == 0 {
            return Err(Error::Dimension("empty matrix".into()));
        }
        let mut m = Self::zeros(r, c);
        for (j, col) in columns.iter().enumerate() {
            let col = col.as_ref();
            if col.len() != r {
                return Err(Error::Dimension("ragged columns".into()));
            }
            for (i, &x) in col.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: i64) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn entries(&self) -> &[i64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn checked_mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc: i128 = 0;
                for k in 0..self.cols {
                    acc += self.get(i, k) as i128 * rhs.get(k, j) as i128;
                }
                out.set(i, j, narrow(acc, "matrix product")?);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[i64]) -> Result<Vec<i64>> {
        if x.len() != self.cols {
            return Err(Error::Dimension("matrix-vector length".into()));
        }
        (0..self.rows)
            .map(|i| {
                let acc: i128 = self
                    .row(i)
                    .iter()
                    .zip(x)
                    .map(|(&a, &b)| a as i128 * b as i128)
                    .sum();
                narrow(acc, "matrix-vector product")
            })
            .collect()
    }

    /// `Uᵀ · self · U`, the Gram matrix after the change of basis `U`.
    pub fn congruence(&self, u: &IntMatrix) -> Result<IntMatrix> {
        u.transpose().checked_mul(&self.checked_mul(u)?)
    }

    /// The value `xᵀ · self · x` of the quadratic form.
    pub fn quadratic_form(&self, x: &[i64]) -> i128 {
        let n = self.rows;
        let mut acc: i128 = 0;
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            let mut row: i128 = 0;
            for j in 0..n {
                row += self.get(i, j) as i128 * x[j] as i128;
            }
            acc += row * x[i] as i128;
        }
        acc
    }

    pub fn bilinear(&self, x: &[i64], y: &[i64]) -> i128 {
        let mut acc: i128 = 0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                acc += x[i] as i128 * self.get(i, j) as i128 * y[j] as i128;
            }
        }
        acc
    }

    /// Exact determinant. Runs fraction-free elimination in `i128` and
    /// repeats it over [`BigInt`] if an intermediate value overflows.
    pub fn det(&self) -> BigInt {
        match self.det_i128() {
            Ok(d) => BigInt::from(d),
            Err(_) => self.det_big(),
        }
    }

    /// Fraction-free (Bareiss) determinant in checked `i128`.
    pub fn det_i128(&self) -> Result<i128> {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a: SmallVec<[i128; 64]> = self.data.iter().map(|&x| x as i128).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if a[k * n + k] == 0 {
                let Some(p) = (k + 1..n).find(|&i| a[i * n + k] != 0) else {
                    return Ok(0);
                };
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            let pivot = a[k * n + k];
            for i in k + 1..n {
                let aik = a[i * n + k];
                for j in k + 1..n {
                    let lhs = a[i * n + j]
                        .checked_mul(pivot)
                        .ok_or(Error::Overflow("determinant"))?;
                    let rhs = aik
                        .checked_mul(a[k * n + j])
                        .ok_or(Error::Overflow("determinant"))?;
                    let num = lhs.checked_sub(rhs).ok_or(Error::Overflow("determinant"))?;
                    a[i * n + j] = num / prev;
                }
                a[i * n + k] = 0;
            }
            prev = pivot;
        }
        Ok(sign * a[n * n - 1])
    }

    fn det_big(&self) -> BigInt {
        let n = self.rows;
        let mut a: Vec<BigInt> = self.data.iter().map(|&x| BigInt::from(x)).collect();
        let mut negate = false;
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i * n + k].is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                negate = !negate;
            }
            let pivot = a[k * n + k].clone();
            for i in k + 1..n {
                let aik = a[i * n + k].clone();
                for j in k + 1..n {
                    let num = &a[i * n + j] * &pivot - &aik * &a[k * n + j];
                    a[i * n + j] = num / &prev;
                }
                a[i * n + k] = BigInt::zero();
            }
            prev = pivot;
        }
        let d = a[n * n - 1].clone();
        if negate {
            -d
        } else {
            d
        }
    }

    /// Leading principal minors `d₁, …, d_n` of a symmetric matrix, or
    /// `None` as soon as one of them vanishes.
    ///
    /// Without pivoting the Bareiss pivots are exactly these minors, so a
    /// positive-definite matrix yields all of them in a single pass.
    pub fn leading_minors(&self) -> Result<Option<SmallVec<[i128; 8]>>> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a: SmallVec<[i128; 64]> = self.data.iter().map(|&x| x as i128).collect();
        let mut minors = SmallVec::new();
        let mut prev = 1i128;
        for k in 0..n {
            let pivot = a[k * n + k];
            if pivot == 0 {
                return Ok(None);
            }
            minors.push(pivot);
            for i in k + 1..n {
                let aik = a[i * n + k];
                for j in k + 1..n {
                    let lhs = a[i * n + j]
                        .checked_mul(pivot)
                        .ok_or(Error::Overflow("leading minors"))?;
                    let rhs = aik
                        .checked_mul(a[k * n + j])
                        .ok_or(Error::Overflow("leading minors"))?;
                    a[i * n + j] = lhs
                        .checked_sub(rhs)
                        .ok_or(Error::Overflow("leading minors"))?
                        / prev;
                }
            }
            prev = pivot;
        }
        Ok(Some(minors))
    }

    /// Positive definiteness by Sylvester's criterion on exact minors.
    pub fn is_positive_definite(&self) -> bool {
        if !self.is_symmetric() {
            return false;
        }
        match self.leading_minors() {
            Ok(Some(m)) => m.iter().all(|&x| x > 0),
            Ok(None) => false,
            Err(_) => self.leading_minors_big().iter().all(|x| x.is_positive()),
        }
    }

    fn leading_minors_big(&self) -> Vec<BigInt> {
        (1..=self.rows)
            .map(|k| {
                let rows: Vec<Vec<i64>> = (0..k).map(|i| self.row(i)[..k].to_vec()).collect();
                IntMatrix::from_rows(&rows).expect("nonempty").det()
            })
            .collect()
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.det().abs().is_one()
    }

    /// Inverse of a unimodular matrix, exact over the integers.
    pub fn unimodular_inverse(&self) -> Result<IntMatrix> {
        let det = self.det();
        if !det.abs().is_one() {
            return Err(Error::InvalidArgument("matrix is not unimodular".into()));
        }
        let n = self.rows;
        let sign: i64 = if det.is_positive() { 1 } else { -1 };
        let mut inv = Self::zeros(n, n);
        if n == 1 {
            inv.set(0, 0, sign);
            return Ok(inv);
        }
        for i in 0..n {
            for j in 0..n {
                let minor = self.minor(j, i);
                let c = minor.det();
                let c: i64 = i64::try_from(&c).map_err(|_| Error::Overflow("adjugate"))?;
                let parity = if (i + j) % 2 == 0 { 1 } else { -1 };
                inv.set(i, j, parity * sign * c);
            }
        }
        Ok(inv)
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> IntMatrix {
        let rows: Vec<Vec<i64>> = (0..self.rows)
            .filter(|&i| i != skip_row)
            .map(|i| {
                (0..self.cols)
                    .filter(|&j| j != skip_col)
                    .map(|j| self.get(i, j))
                    .collect()
            })
            .collect();
        IntMatrix::from_rows(&rows).expect("minor of a matrix larger than 1x1")
    }

    /// gcd of all entries (0 for the zero matrix).
    pub fn content(&self) -> i64 {
        self.data.iter().fold(0i64, |g, &x| num_integer::gcd(g, x))
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|i| self.row(i)))
            .finish()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_small() {
        let m = IntMatrix::from_rows(&[[2, -1], [-1, 2]]).unwrap();
        assert_eq!(m.det(), BigInt::from(3));
        let m = IntMatrix::from_rows(&[[0, 1, 0], [1, 0, 0], [0, 0, 1]]).unwrap();
        assert_eq!(m.det_i128().unwrap(), -1);
        let m = IntMatrix::from_rows(&[[1, 2], [2, 4]]).unwrap();
        assert_eq!(m.det_i128().unwrap(), 0);
    }

    #[test]
    fn determinant_overflow_falls_back_to_bigint() {
        let big = 1i64 << 62;
        let m = IntMatrix::from_rows(&[[big, 1, 0], [1, big, 1], [0, 1, big]]).unwrap();
        let b = BigInt::from(big);
        let expected = &b * &b * &b - &b - &b;
        assert_eq!(m.det(), expected);
    }

    #[test]
    fn leading_minors_of_hexagonal() {
        let m = IntMatrix::from_rows(&[[2, -1], [-1, 2]]).unwrap();
        assert_eq!(m.leading_minors().unwrap().unwrap().as_slice(), &[2, 3]);
        assert!(m.is_positive_definite());
        let m = IntMatrix::from_rows(&[[1, 2], [2, 1]]).unwrap();
        assert!(!m.is_positive_definite());
    }

    #[test]
    fn unimodular_inverse_roundtrip() {
        let u = IntMatrix::from_rows(&[[2, 1, 0], [1, 1, 0], [3, -2, 1]]).unwrap();
        let inv = u.unimodular_inverse().unwrap();
        assert_eq!(u.checked_mul(&inv).unwrap(), IntMatrix::identity(3));
    }

    #[test]
    fn content_and_congruence() {
        let g = IntMatrix::from_rows(&[[2, 0], [0, 1]]).unwrap();
        let swap = IntMatrix::from_rows(&[[0, 1], [1, 0]]).unwrap();
        assert_eq!(g.congruence(&swap).unwrap(), IntMatrix::diagonal(&[1, 2]));
        assert_eq!(
            IntMatrix::from_rows(&[[4, 6], [6, 8]]).unwrap().content(),
            2
        );
    }
}
