use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Matrix polynomial `P(z) = A_0 + A_1 z + ... + A_m z^m` with square
/// coefficients of a common order `n`. Coefficients are stored constant
/// term first.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixPolynomial {
    coeffs: Vec<ComplexMatrix>,
}

/// Linear pencil `A - z B`.
#[derive(Clone, Debug)]
pub struct Pencil {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
}

impl MatrixPolynomial {
    pub fn new(coeffs: Vec<ComplexMatrix>) -> Result<Self> {
        let first = coeffs
            .first()
            .ok_or_else(|| Error::DimensionMismatch("polynomial needs at least one coefficient".into()))?;
        let n = first.rows();
        for (j, a) in coeffs.iter().enumerate() {
            if a.rows() != n || a.cols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "coefficient A_{j} is {}x{}, expected {n}x{n}",
                    a.rows(),
                    a.cols()
                )));
            }
        }
        Ok(Self { coeffs })
    }

    /// Matrix order `n`.
    pub fn order(&self) -> usize {
        self.coeffs[0].rows()
    }

    /// Degree `m` (number of coefficients minus one).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Number of finite eigenvalues, `m n`.
    pub fn spectrum_size(&self) -> usize {
        self.order() * self.degree()
    }

    pub fn coeffs(&self) -> &[ComplexMatrix] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> &ComplexMatrix {
        &self.coeffs[j]
    }

    pub fn leading(&self) -> &ComplexMatrix {
        &self.coeffs[self.degree()]
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(ComplexMatrix::is_real)
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs
            .iter()
            .map(ComplexMatrix::frobenius_norm)
            .fold(0.0, f64::max)
    }

    /// `sum_j ||A_j||_F |z|^j`, the natural magnitude of `P(z)`.
    pub fn norm_scale(&self, z: Complex64) -> f64 {
        let t = z.norm();
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, a| acc * t + a.frobenius_norm())
    }

    /// `P(z)` by Horner's rule.
    pub fn eval(&self, z: Complex64) -> ComplexMatrix {
        let mut acc = self.leading().as_inner().clone();
        for a in self.coeffs.iter().rev().skip(1) {
            acc *= z;
            acc += a.as_inner();
        }
        ComplexMatrix::new(acc).expect("finite coefficients give finite values")
    }

    /// `P'(z)`; the zero matrix for a constant polynomial.
    pub fn eval_derivative(&self, z: Complex64) -> ComplexMatrix {
        let n = self.order();
        let m = self.degree();
        if m == 0 {
            return ComplexMatrix::zeros(n, n);
        }
        let mut acc = self.coeffs[m].as_inner() * Complex64::new(m as f64, 0.0);
        for j in (1..m).rev() {
            acc *= z;
            acc += self.coeffs[j].as_inner() * Complex64::new(j as f64, 0.0);
        }
        ComplexMatrix::new(acc).expect("finite coefficients give finite values")
    }

    /// First companion pencil of order `m n`:
    ///
    /// ```text
    /// A = [ -A_{m-1} -A_{m-2} ... -A_0 ]     B = diag(A_m, I, ..., I)
    ///     [    I        0     ...   0  ]
    ///     [           ...              ]
    ///     [    0       ...     I    0  ]
    /// ```
    ///
    /// `det(A - z B) = 0` exactly when `det P(z) = 0`, with multiplicity.
    pub fn companion_linearize(&self) -> Result<Pencil> {
        let m = self.degree();
        if m == 0 {
            return Err(Error::InvalidInput(
                "companion form needs a polynomial of degree at least one".into(),
            ));
        }
        let n = self.order();
        let size = m * n;
        let mut a = ComplexMatrix::zeros(size, size);
        let mut b = ComplexMatrix::identity(size);
        for block in 0..m {
            let src = &self.coeffs[m - 1 - block];
            for i in 0..n {
                for j in 0..n {
                    a[(i, block * n + j)] = -src[(i, j)];
                }
            }
        }
        for block in 1..m {
            for i in 0..n {
                a[(block * n + i, (block - 1) * n + i)] = Complex64::new(1.0, 0.0);
            }
        }
        let lead = self.leading();
        for i in 0..n {
            for j in 0..n {
                b[(i, j)] = lead[(i, j)];
            }
        }
        Ok(Pencil { a, b })
    }

    /// Coefficient-wise combination `A_j + s W_j`.
    pub fn perturbed(&self, s: Complex64, dirs: &[ComplexMatrix]) -> Result<Self> {
        if dirs.len() != self.coeffs.len() {
            return Err(Error::DimensionMismatch(format!(
                "perturbation has {} coefficients, polynomial has {}",
                dirs.len(),
                self.coeffs.len()
            )));
        }
        let mut out = Vec::with_capacity(dirs.len());
        for (a, w) in self.coeffs.iter().zip(dirs) {
            if w.rows() != a.rows() || w.cols() != a.cols() {
                return Err(Error::DimensionMismatch(format!(
                    "perturbation coefficient is {}x{}, expected {}x{}",
                    w.rows(),
                    w.cols(),
                    a.rows(),
                    a.cols()
                )));
            }
            out.push(a + &w.scale(s));
        }
        Ok(Self { coeffs: out })
    }
}
