//! Eigenvalue condition numbers for matrix polynomials.
//!
//! For a simple eigenvalue with unit eigenvectors `x`, `y` and weights
//! `w_0..w_m` the unstructured condition number is
//!
//! ```text
//! kappa(lambda) = w(|lambda|) / |y^H P'(lambda) x|,   w(t) = sum_j w_j t^j
//! ```
//!
//! and the structured one replaces `w_j` by `||y x^H|_{S_j}||_F w_j`.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{eigen_triplets, CVector, ComplexMatrix, EigenTriplet, MatrixPolynomial};
use crate::structures::{StructureClass, StructureSet};
use crate::util::fmt_real;

/// Nonnegative coefficient weights `[w_0, ..., w_m]`.
///
/// `w_j` bounds the Frobenius norm of the perturbation of `A_j`; `w_j = 0`
/// keeps `A_j` fixed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Weights(Vec<f64>);

impl Weights {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("weights must not be empty".into()));
        }
        if values.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidInput(format!(
                "weights must be finite and nonnegative, got {values:?}"
            )));
        }
        if values.iter().all(|&w| w == 0.0) {
            return Err(Error::InvalidInput("at least one weight must be positive".into()));
        }
        Ok(Self(values))
    }

    /// All weights equal to one.
    pub fn ones(m: usize) -> Self {
        Self(vec![1.0; m + 1])
    }

    /// `w_j = ||A_j||_F`, relative perturbations.
    pub fn coefficient_norms(p: &MatrixPolynomial) -> Result<Self> {
        Self::new(p.coeffs().iter().map(ComplexMatrix::frobenius_norm).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, j: usize) -> f64 {
        self.0[j]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.0.iter().map(|w| w * c).collect())
    }

    pub fn check_degree(&self, m: usize) -> Result<()> {
        if self.0.len() != m + 1 {
            return Err(Error::DimensionMismatch(format!(
                "{} weights for a degree-{m} polynomial",
                self.0.len()
            )));
        }
        Ok(())
    }
}

impl TryFrom<Vec<f64>> for Weights {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Weights> for Vec<f64> {
    fn from(w: Weights) -> Self {
        w.0
    }
}

/// `w(t) = sum_j w_j t^j`.
pub fn weight_poly(w: &Weights, t: f64) -> f64 {
    w.values().iter().rev().fold(0.0, |acc, wj| acc * t + wj)
}

/// `sum_j ||y x^H|_{S_j}||_F w_j t^j`.
pub fn structured_weight_poly(w: &Weights, s: &StructureSet, x: &CVector, y: &CVector, t: f64) -> f64 {
    let yx = ComplexMatrix::outer(y, x);
    let mut acc = 0.0;
    for j in (0..w.len()).rev() {
        let factor = if w.get(j) == 0.0 {
            0.0
        } else {
            s.get(j).projection_norm(&yx)
        };
        acc = acc * t + factor * w.get(j);
    }
    acc
}

fn derivative_term(p: &MatrixPolynomial, trip: &EigenTriplet) -> Result<f64> {
    let d = p.eval_derivative(trip.lambda).bilinear(&trip.y, &trip.x).norm();
    if !trip.simple || d == 0.0 {
        return Err(Error::NotSimple {
            lambda: trip.lambda,
            derivative: d,
        });
    }
    Ok(d)
}

/// `w(|lambda|) / |y^H P'(lambda) x|`.
pub fn kappa(p: &MatrixPolynomial, w: &Weights, trip: &EigenTriplet) -> Result<f64> {
    w.check_degree(p.degree())?;
    let d = derivative_term(p, trip)?;
    Ok(weight_poly(w, trip.lambda.norm()) / d)
}

/// Structured counterpart of [`kappa`]; never exceeds it.
pub fn kappa_structured(p: &MatrixPolynomial, w: &Weights, s: &StructureSet, trip: &EigenTriplet) -> Result<f64> {
    w.check_degree(p.degree())?;
    s.validate(p.order(), p.degree())?;
    let d = derivative_term(p, trip)?;
    Ok(structured_weight_poly(w, s, &trip.x, &trip.y, trip.lambda.norm()) / d)
}

/// Smallest `|y^H x|` accepted by the single-matrix condition numbers.
pub const SINGLE_SIMPLE_TOL: f64 = 1e-14;

fn single_denominator(lambda: Complex64, x: &CVector, y: &CVector) -> Result<f64> {
    let d = y.dotc(x).norm();
    if !(d > SINGLE_SIMPLE_TOL) {
        return Err(Error::NotSimple { lambda, derivative: d });
    }
    Ok(d)
}

/// Standard eigenvalue condition number `1 / |y^H x|` of a single matrix.
///
/// `_m` is the matrix the triplet belongs to; only the eigenvectors enter.
pub fn kappa_single(_m: &ComplexMatrix, lambda: Complex64, x: &CVector, y: &CVector) -> Result<f64> {
    Ok(1.0 / single_denominator(lambda, x, y)?)
}

/// `||y x^H|_S||_F / |y^H x|`.
pub fn kappa_single_structured(
    _m: &ComplexMatrix,
    s: StructureClass,
    lambda: Complex64,
    x: &CVector,
    y: &CVector,
) -> Result<f64> {
    let d = single_denominator(lambda, x, y)?;
    Ok(s.projection_norm(&ComplexMatrix::outer(y, x)) / d)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConditionRow {
    /// 1-based position in the canonical eigenvalue order.
    pub index: usize,
    pub lambda: Complex64,
    pub kappa: Option<f64>,
    pub kappa_structured: Option<f64>,
    pub simple: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConditionTable {
    pub rows: Vec<ConditionRow>,
}

impl ConditionTable {
    pub const CSV_HEADER: &'static str = "index,re,im,kappa,kappa_structured,simple";

    pub fn eigenvalues(&self) -> Vec<Complex64> {
        self.rows.iter().map(|r| r.lambda).collect()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{}", Self::CSV_HEADER)?;
        let opt = |v: Option<f64>| v.map(fmt_real).unwrap_or_default();
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                r.index,
                fmt_real(r.lambda.re),
                fmt_real(r.lambda.im),
                opt(r.kappa),
                opt(r.kappa_structured),
                r.simple
            )?;
        }
        Ok(())
    }
}

/// Condition table from precomputed triplets; non-simple rows carry no values.
pub fn condition_table_for(
    p: &MatrixPolynomial,
    w: &Weights,
    s: Option<&StructureSet>,
    triplets: &[EigenTriplet],
) -> Result<ConditionTable> {
    w.check_degree(p.degree())?;
    if let Some(s) = s {
        s.validate(p.order(), p.degree())?;
    }
    let rows = triplets
        .par_iter()
        .enumerate()
        .map(|(i, t)| {
            if !t.simple {
                return Ok(ConditionRow {
                    index: i + 1,
                    lambda: t.lambda,
                    kappa: None,
                    kappa_structured: None,
                    simple: false,
                });
            }
            let k = kappa(p, w, t)?;
            let ks = s.map(|s| kappa_structured(p, w, s, t)).transpose()?;
            Ok(ConditionRow {
                index: i + 1,
                lambda: t.lambda,
                kappa: Some(k),
                kappa_structured: ks,
                simple: true,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConditionTable { rows })
}

/// One row per eigenvalue in canonical order.
pub fn condition_table(p: &MatrixPolynomial, w: &Weights, s: Option<&StructureSet>) -> Result<ConditionTable> {
    let triplets = eigen_triplets(p)?;
    condition_table_for(p, w, s, &triplets)
}
