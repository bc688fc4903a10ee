//! Rough distance-from-defectivity estimates.
//!
//! To first order the pseudospectral component around a simple eigenvalue
//! `lambda_i` is a disk of radius `kappa_i eps`. Two disks touch when
//! `|lambda_i - lambda_j| = (kappa_i + kappa_j) eps`, so the smallest such
//! `eps` over all pairs estimates how far the polynomial is from one with a
//! multiple eigenvalue. The minimizing pair is the pair expected to
//! coalesce first.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::conditioning::{condition_table_for, kappa_single, kappa_single_structured, ConditionTable, Weights};
use crate::error::{Error, Result};
use crate::numkernel::{eigen_triplets, matrix_triplets, ComplexMatrix, EigenTriplet, MatrixPolynomial};
use crate::structures::{StructureClass, StructureSet};
use crate::util::fmt_real;

/// Relative tolerance for listing tied minimizing pairs.
pub const PAIR_TIE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct DefectivityReport {
    /// `min_{i != j} |lambda_i - lambda_j| / (kappa_i + kappa_j)`.
    pub epsilon: f64,
    /// 1-based index pairs `(i, j)`, `i < j`, attaining the minimum.
    pub pairs: Vec<(usize, usize)>,
    pub structured: bool,
    /// 1-based indices left out because they are not simple.
    pub excluded: Vec<usize>,
}

impl DefectivityReport {
    /// First minimizing pair in index order.
    pub fn primary_pair(&self) -> (usize, usize) {
        self.pairs[0]
    }
}

/// Pairwise estimate over `(index, lambda, kappa)` entries.
fn estimate_indexed(entries: &[(usize, Complex64, f64)], total: usize) -> Result<DefectivityReport> {
    if entries.len() < 2 {
        return Err(Error::DegenerateSpectrum {
            usable: entries.len(),
            total,
        });
    }
    let mut ratios = Vec::with_capacity(entries.len() * (entries.len() - 1) / 2);
    for (a, &(i, li, ki)) in entries.iter().enumerate() {
        for &(j, lj, kj) in &entries[a + 1..] {
            ratios.push(((i.min(j), i.max(j)), (li - lj).norm() / (ki + kj)));
        }
    }
    let epsilon = ratios.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let mut pairs: Vec<(usize, usize)> = ratios
        .iter()
        .filter(|r| r.1 <= epsilon * (1.0 + PAIR_TIE_TOL))
        .map(|r| r.0)
        .collect();
    pairs.sort_unstable();
    Ok(DefectivityReport {
        epsilon,
        pairs,
        structured: false,
        excluded: Vec::new(),
    })
}

/// Estimate from eigenvalues and their (structured or not) condition numbers.
/// Indices in the report are 1-based positions in `eigs`.
pub fn defectivity_estimate(eigs: &[Complex64], kappas: &[f64]) -> Result<DefectivityReport> {
    if eigs.len() != kappas.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} eigenvalues but {} condition numbers",
            eigs.len(),
            kappas.len()
        )));
    }
    if let Some(k) = kappas.iter().find(|k| !(k.is_finite() && **k > 0.0)) {
        return Err(Error::InvalidInput(format!(
            "condition numbers must be positive, got {k}"
        )));
    }
    let entries: Vec<_> = eigs
        .iter()
        .zip(kappas)
        .enumerate()
        .map(|(i, (&l, &k))| (i + 1, l, k))
        .collect();
    estimate_indexed(&entries, eigs.len())
}

/// Estimate from a condition table, skipping non-simple rows.
pub fn estimate_from_table(table: &ConditionTable, structured: bool) -> Result<DefectivityReport> {
    let mut excluded = Vec::new();
    let mut entries = Vec::new();
    for r in &table.rows {
        let k = if structured { r.kappa_structured } else { r.kappa };
        match (r.simple, k) {
            (true, Some(k)) if k > 0.0 => entries.push((r.index, r.lambda, k)),
            _ => excluded.push(r.index),
        }
    }
    let mut report = estimate_indexed(&entries, table.rows.len())?;
    report.structured = structured;
    report.excluded = excluded;
    Ok(report)
}

/// Unstructured estimate for `P` from precomputed triplets.
pub fn defectivity_for(
    p: &MatrixPolynomial,
    w: &Weights,
    s: Option<&StructureSet>,
    triplets: &[EigenTriplet],
) -> Result<DefectivityReport> {
    let table = condition_table_for(p, w, s, triplets)?;
    estimate_from_table(&table, s.is_some())
}

/// Unstructured estimate for `P`.
pub fn unstructured_defectivity_estimate(p: &MatrixPolynomial, w: &Weights) -> Result<DefectivityReport> {
    defectivity_for(p, w, None, &eigen_triplets(p)?)
}

/// Structured estimate for `P`; never below the unstructured one.
pub fn structured_defectivity_estimate(
    p: &MatrixPolynomial,
    w: &Weights,
    s: &StructureSet,
) -> Result<DefectivityReport> {
    defectivity_for(p, w, Some(s), &eigen_triplets(p)?)
}

fn is_normal(a: &ComplexMatrix) -> bool {
    let ah = a.adjoint();
    let comm = &(a * &ah) - &(&ah * a);
    comm.frobenius_norm() <= 1e-12 * a.frobenius_norm().powi(2)
}

/// Largest `eps` for which first-order analysis keeps `0` out of the
/// `w_m eps`-pseudospectrum of the leading coefficient:
/// `min_i |lambda_i(A_m)| / (kappa_i w_m)`.
///
/// Returns `f64::INFINITY` when `w_m = 0` since `A_m` is then never perturbed.
/// Repeated eigenvalues of a normal `A_m` use `kappa = 1` (for structured
/// classes an upper bound); repeated eigenvalues of a non-normal `A_m` give
/// `NotSimple`.
pub fn boundedness_threshold(a_m: &ComplexMatrix, omega_m: f64, s: Option<StructureClass>) -> Result<f64> {
    if !(omega_m >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "omega_m must be nonnegative, got {omega_m}"
        )));
    }
    let poly = MatrixPolynomial::new(vec![a_m.clone()])?;
    crate::numkernel::check_leading(&poly)?;
    if omega_m == 0.0 {
        return Ok(f64::INFINITY);
    }
    if let Some(s) = s {
        s.validate(a_m.rows())?;
    }
    let normal = is_normal(a_m);
    let mut threshold = f64::INFINITY;
    for t in matrix_triplets(a_m)? {
        let k = if !t.simple {
            if !normal {
                return Err(Error::NotSimple {
                    lambda: t.lambda,
                    derivative: t.derivative.norm(),
                });
            }
            1.0
        } else {
            match s {
                Some(s) => kappa_single_structured(a_m, s, t.lambda, &t.x, &t.y)?,
                None => kappa_single(a_m, t.lambda, &t.x, &t.y)?,
            }
        };
        threshold = threshold.min(t.lambda.norm() / (k * omega_m));
    }
    Ok(threshold)
}

impl fmt::Display for DefectivityReport {
    /// `epsilon=<decimal>; pairs=(i,j)[,(i,j)]; structured=<bool>`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self.pairs.iter().map(|(i, j)| format!("({i},{j})")).collect();
        write!(
            f,
            "epsilon={}; pairs={}; structured={}",
            fmt_real(self.epsilon),
            pairs.join(","),
            self.structured
        )
    }
}

impl FromStr for DefectivityReport {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |field: &str, message: String| Error::Parse {
            line: 1,
            field: field.into(),
            message,
        };
        let mut epsilon = None;
        let mut pairs = None;
        let mut structured = None;
        for part in s.trim().split(';') {
            let (key, value) = part
                .trim()
                .split_once('=')
                .ok_or_else(|| bad("record", format!("expected key=value, got `{part}`")))?;
            match key {
                "epsilon" => epsilon = Some(value.parse::<f64>().map_err(|e| bad("epsilon", e.to_string()))?),
                "pairs" => {
                    let mut out = Vec::new();
                    for chunk in value.split("),") {
                        let inner = chunk.trim().trim_start_matches('(').trim_end_matches(')');
                        let (i, j) = inner
                            .split_once(',')
                            .ok_or_else(|| bad("pairs", format!("malformed pair `{chunk}`")))?;
                        let i = i.trim().parse().map_err(|_| bad("pairs", format!("bad index `{i}`")))?;
                        let j = j.trim().parse().map_err(|_| bad("pairs", format!("bad index `{j}`")))?;
                        out.push((i, j));
                    }
                    pairs = Some(out);
                }
                "structured" => structured = Some(value.parse::<bool>().map_err(|e| bad("structured", e.to_string()))?),
                other => return Err(bad(other, "unknown field".into())),
            }
        }
        Ok(DefectivityReport {
            epsilon: epsilon.ok_or_else(|| bad("epsilon", "missing".into()))?,
            pairs: pairs.ok_or_else(|| bad("pairs", "missing".into()))?,
            structured: structured.ok_or_else(|| bad("structured", "missing".into()))?,
            excluded: Vec::new(),
        })
    }
}
