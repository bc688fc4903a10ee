//! Linear structure classes and their Frobenius-orthogonal projectors.
//!
//! `Symmetric` and `SkewSymmetric` use the plain transpose, so over complex
//! matrices they are the complex-symmetric classes; `Hermitian` is a separate
//! class. Every class except `Hermitian` is a complex subspace. Hermitian
//! matrices form only a real subspace, and `project` is then the orthogonal
//! projector for the real inner product `Re <A, B>_F`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numkernel::ComplexMatrix;

/// Relative norm below which a projection is treated as vanishing.
pub const ZERO_PROJECTION_TOL: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StructureClass {
    Full,
    Symmetric,
    SkewSymmetric,
    Hermitian,
    Tridiagonal,
    /// Entries with `-lower <= j - i <= upper`.
    Banded {
        lower: usize,
        upper: usize,
    },
    Toeplitz,
    Hankel,
    TridiagonalToeplitz,
    SymmetricTridiagonalToeplitz,
}

impl StructureClass {
    pub const ALL_FIXED: [StructureClass; 9] = [
        StructureClass::Full,
        StructureClass::Symmetric,
        StructureClass::SkewSymmetric,
        StructureClass::Hermitian,
        StructureClass::Tridiagonal,
        StructureClass::Toeplitz,
        StructureClass::Hankel,
        StructureClass::TridiagonalToeplitz,
        StructureClass::SymmetricTridiagonalToeplitz,
    ];

    /// Checks the class parameters against a matrix order.
    pub fn validate(&self, n: usize) -> Result<()> {
        if let StructureClass::Banded { lower, upper } = *self {
            if n == 0 || lower > n - 1 || upper > n - 1 {
                return Err(Error::InvalidInput(format!(
                    "band widths ({lower}, {upper}) exceed n - 1 = {}",
                    n.saturating_sub(1)
                )));
            }
        }
        Ok(())
    }

    /// Frobenius-nearest member of the class.
    ///
    /// # Panics
    ///
    /// If `m` is not square.
    pub fn project(&self, m: &ComplexMatrix) -> ComplexMatrix {
        assert!(m.is_square(), "structure projection needs a square matrix");
        let n = m.rows();
        let half = Complex64::new(0.5, 0.0);
        match *self {
            StructureClass::Full => m.clone(),
            StructureClass::Symmetric => (m + &m.transpose()).scale(half),
            StructureClass::SkewSymmetric => (m - &m.transpose()).scale(half),
            StructureClass::Hermitian => (m + &m.adjoint()).scale(half),
            StructureClass::Tridiagonal => band_mask(m, 1, 1),
            StructureClass::Banded { lower, upper } => band_mask(m, lower, upper),
            StructureClass::Toeplitz => diagonal_means(m, |i, j| j as isize - i as isize, n),
            StructureClass::Hankel => diagonal_means(m, |i, j| (i + j) as isize, n),
            StructureClass::TridiagonalToeplitz => {
                let mut out = ComplexMatrix::zeros(n, n);
                for d in -1isize..=1 {
                    let mean = diagonal_mean(m, d);
                    for (i, j) in diagonal(n, d) {
                        out[(i, j)] = mean;
                    }
                }
                out
            }
            StructureClass::SymmetricTridiagonalToeplitz => {
                let mut out = ComplexMatrix::zeros(n, n);
                let main = diagonal_mean(m, 0);
                for (i, j) in diagonal(n, 0) {
                    out[(i, j)] = main;
                }
                if n > 1 {
                    let off: Complex64 = diagonal(n, 1)
                        .chain(diagonal(n, -1))
                        .map(|idx| m[idx])
                        .sum::<Complex64>()
                        / (2 * (n - 1)) as f64;
                    for idx in diagonal(n, 1).chain(diagonal(n, -1)) {
                        out[idx] = off;
                    }
                }
                out
            }
        }
    }

    /// Unit-norm projection `M|_S / ||M|_S||_F`.
    pub fn normalized_project(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        let p = self.project(m);
        let norm = p.frobenius_norm();
        let input = m.frobenius_norm();
        if !(norm > ZERO_PROJECTION_TOL * input) {
            return Err(Error::ZeroProjection { norm, input });
        }
        Ok(p.scale_real(1.0 / norm))
    }

    /// `||M|_S||_F`.
    pub fn projection_norm(&self, m: &ComplexMatrix) -> f64 {
        self.project(m).frobenius_norm()
    }

    /// Membership up to `tol ||M||_F`.
    pub fn contains(&self, m: &ComplexMatrix, tol: f64) -> bool {
        (m - &self.project(m)).frobenius_norm() <= tol * m.frobenius_norm().max(f64::MIN_POSITIVE)
    }
}

fn diagonal(n: usize, d: isize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).filter_map(move |i| {
        let j = i as isize + d;
        (j >= 0 && (j as usize) < n).then_some((i, j as usize))
    })
}

fn diagonal_mean(m: &ComplexMatrix, d: isize) -> Complex64 {
    let n = m.rows();
    let len = n.saturating_sub(d.unsigned_abs());
    if len == 0 {
        return Complex64::new(0.0, 0.0);
    }
    diagonal(n, d).map(|idx| m[idx]).sum::<Complex64>() / len as f64
}

fn band_mask(m: &ComplexMatrix, lower: usize, upper: usize) -> ComplexMatrix {
    let n = m.rows();
    ComplexMatrix::from_fn(n, n, |i, j| {
        if j <= i + upper && i <= j + lower {
            m[(i, j)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Replaces every entry by the mean over its level set of `key`.
fn diagonal_means(m: &ComplexMatrix, key: impl Fn(usize, usize) -> isize, n: usize) -> ComplexMatrix {
    let offset = n as isize;
    let mut sums = vec![Complex64::new(0.0, 0.0); 3 * n];
    let mut counts = vec![0usize; 3 * n];
    for i in 0..n {
        for j in 0..n {
            let k = (key(i, j) + offset) as usize;
            sums[k] += m[(i, j)];
            counts[k] += 1;
        }
    }
    ComplexMatrix::from_fn(n, n, |i, j| {
        let k = (key(i, j) + offset) as usize;
        sums[k] / counts[k] as f64
    })
}

impl fmt::Display for StructureClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureClass::Full => f.write_str("full"),
            StructureClass::Symmetric => f.write_str("symmetric"),
            StructureClass::SkewSymmetric => f.write_str("skew-symmetric"),
            StructureClass::Hermitian => f.write_str("hermitian"),
            StructureClass::Tridiagonal => f.write_str("tridiagonal"),
            StructureClass::Banded { lower, upper } => write!(f, "banded:{lower}:{upper}"),
            StructureClass::Toeplitz => f.write_str("toeplitz"),
            StructureClass::Hankel => f.write_str("hankel"),
            StructureClass::TridiagonalToeplitz => f.write_str("tridiagonal-toeplitz"),
            StructureClass::SymmetricTridiagonalToeplitz => f.write_str("symmetric-tridiagonal-toeplitz"),
        }
    }
}

impl FromStr for StructureClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::Parse {
            line: 0,
            field: "structures".into(),
            message: format!("unknown structure tag `{s}`"),
        };
        Ok(match s {
            "full" => StructureClass::Full,
            "symmetric" => StructureClass::Symmetric,
            "skew-symmetric" => StructureClass::SkewSymmetric,
            "hermitian" => StructureClass::Hermitian,
            "tridiagonal" => StructureClass::Tridiagonal,
            "toeplitz" => StructureClass::Toeplitz,
            "hankel" => StructureClass::Hankel,
            "tridiagonal-toeplitz" => StructureClass::TridiagonalToeplitz,
            "symmetric-tridiagonal-toeplitz" => StructureClass::SymmetricTridiagonalToeplitz,
            other => {
                let rest = other.strip_prefix("banded:").ok_or_else(unknown)?;
                let (l, u) = rest.split_once(':').ok_or_else(unknown)?;
                StructureClass::Banded {
                    lower: l.parse().map_err(|_| unknown())?,
                    upper: u.parse().map_err(|_| unknown())?,
                }
            }
        })
    }
}

impl Serialize for StructureClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for StructureClass {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One structure class per coefficient, `[S_0, ..., S_m]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StructureSet {
    classes: Vec<StructureClass>,
}

impl StructureSet {
    pub fn new(classes: Vec<StructureClass>) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::InvalidInput("structure set needs at least one class".into()));
        }
        Ok(Self { classes })
    }

    /// Unconstrained perturbations for a degree-`m` polynomial.
    pub fn full(m: usize) -> Self {
        Self::uniform(StructureClass::Full, m)
    }

    pub fn uniform(class: StructureClass, m: usize) -> Self {
        Self {
            classes: vec![class; m + 1],
        }
    }

    pub fn classes(&self) -> &[StructureClass] {
        &self.classes
    }

    pub fn get(&self, j: usize) -> StructureClass {
        self.classes[j]
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.classes.iter().all(|c| *c == StructureClass::Full)
    }

    /// Checks length `m + 1` and class parameters against order `n`.
    pub fn validate(&self, n: usize, m: usize) -> Result<()> {
        if self.classes.len() != m + 1 {
            return Err(Error::DimensionMismatch(format!(
                "{} structure classes for a degree-{m} polynomial",
                self.classes.len()
            )));
        }
        self.classes.iter().try_for_each(|c| c.validate(n))
    }
}
