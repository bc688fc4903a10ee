use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CVector = DVector<Complex64>;

/// Dense complex matrix with finite entries.
///
/// Thin wrapper over a column-major `nalgebra` matrix; the row-major
/// constructor and accessor exist for the serialized form.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    /// Builds a matrix from row-major entries, rejecting NaN/Inf.
    pub fn from_row_major(rows: usize, cols: usize, entries: &[Complex64]) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!(
                "matrix shape must be positive, got {rows}x{cols}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(rows, cols, entries))
    }

    /// Real matrix from row-major entries.
    pub fn from_real_rows(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        let c: Vec<Complex64> = entries.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        Self::from_row_major(rows, cols, &c)
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self(DMatrix::from_fn(rows, cols, f))
    }

    /// Wraps an `nalgebra` matrix, rejecting non-finite entries.
    pub fn new(inner: DMatrix<Complex64>) -> Result<Self> {
        for j in 0..inner.ncols() {
            for i in 0..inner.nrows() {
                let v = inner[(i, j)];
                if !(v.re.is_finite() && v.im.is_finite()) {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(Self(inner))
    }

    /// Diagonal matrix from real values.
    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Rank-one outer product `u v^H`.
    pub fn outer(u: &CVector, v: &CVector) -> Self {
        Self(u * v.adjoint())
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn as_inner(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn row_major(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius inner product `<self, other> = trace(other^H self)`.
    pub fn inner_product(&self, other: &Self) -> Complex64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| b.conj() * a).sum()
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self(&self.0 * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn mul_vec(&self, v: &CVector) -> CVector {
        &self.0 * v
    }

    /// `y^H self x`.
    pub fn bilinear(&self, y: &CVector, x: &CVector) -> Complex64 {
        y.dotc(&(&self.0 * x))
    }

    /// Numerical rank from singular values relative to the largest one.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let sv = super::svd::singular_values(self);
        let smax = sv.iter().cloned().fold(0.0, f64::max);
        if smax == 0.0 {
            return 0;
        }
        sv.iter().filter(|&&s| s > rel_tol * smax).count()
    }

    pub fn is_real(&self) -> bool {
        self.0.iter().all(|z| z.im == 0.0)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.0[idx]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, idx: (usize, usize)) -> &mut Complex64 {
        &mut self.0[idx]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite_and_bad_shapes() {
        let bad = [Complex64::new(f64::NAN, 0.0)];
        assert!(matches!(
            ComplexMatrix::from_row_major(1, 1, &bad),
            Err(Error::NonFinite { row: 0, col: 0 })
        ));
        assert!(matches!(
            ComplexMatrix::from_real_rows(2, 2, &[1.0, 2.0, 3.0]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn row_major_round_trip() {
        let m = ComplexMatrix::from_real_rows(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        assert_eq!(m[(0, 2)], Complex64::new(3.0, 0.0));
        assert_eq!(m[(1, 0)], Complex64::new(4.0, 0.0));
        let back = ComplexMatrix::from_row_major(2, 3, &m.row_major()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn unit_outer_product_has_unit_norm() {
        let u = CVector::from_vec(vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]);
        let v = CVector::from_vec(vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)]);
        let m = ComplexMatrix::outer(&u, &v);
        assert!((m.frobenius_norm() - 1.0).abs() < 1e-15);
        assert_eq!(m.rank(1e-12), 1);
    }
}
