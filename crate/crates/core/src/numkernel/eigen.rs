use num_complex::Complex64;
use rayon::prelude::*;

use super::matrix::{CVector, ComplexMatrix};
use super::polynomial::MatrixPolynomial;
use super::qz::generalized_eigenvalues;
use super::svd::{near_null_triplet, singular_values};
use crate::error::{Error, Result};

/// Eigenvalue with unit right (`x`) and left (`y`) eigenvectors.
///
/// Phases are fixed so that the largest entry of `x` is real positive and
/// `y^H P'(lambda) x` is real nonnegative; conjugate eigenvalues of a real
/// polynomial then carry conjugate vectors.
#[derive(Clone, Debug)]
pub struct EigenTriplet {
    pub lambda: Complex64,
    pub x: CVector,
    pub y: CVector,
    /// `||P(lambda) x||_2`
    pub residual_right: f64,
    /// `||y^H P(lambda)||_2`
    pub residual_left: f64,
    /// `y^H P'(lambda) x`
    pub derivative: Complex64,
    /// Outcome of the simplicity guard; condition numbers are only defined
    /// for simple eigenvalues.
    pub simple: bool,
}

/// Relative separation below which an eigenvalue counts as multiple.
pub const SEPARATION_TOL: f64 = 1e-8;
/// Relative size of `|y^H P'(lambda) x|` below which an eigenvalue counts as multiple.
pub const DERIVATIVE_TOL: f64 = 1e-12;

/// Checks `sigma_min(A_m) > n eps ||A_m||_F`.
pub fn check_leading(p: &MatrixPolynomial) -> Result<()> {
    let lead = p.leading();
    let sigma_min = singular_values(lead).into_iter().fold(f64::INFINITY, f64::min);
    let threshold = p.order() as f64 * f64::EPSILON * lead.frobenius_norm();
    if !(sigma_min > threshold) {
        return Err(Error::SingularLeadingCoefficient { sigma_min, threshold });
    }
    Ok(())
}

/// Sorts by real part descending; values whose real parts agree to
/// `1e-10 (1 + |z|)` are ordered by imaginary part descending, then by
/// magnitude.
pub fn canonical_sort(values: &mut [Complex64]) {
    values.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    let mut start = 0;
    while start < values.len() {
        let head = values[start];
        let tol = 1e-10 * (1.0 + head.norm());
        let mut end = start + 1;
        while end < values.len() && (head.re - values[end].re).abs() <= tol {
            end += 1;
        }
        values[start..end].sort_by(|a, b| {
            b.im.total_cmp(&a.im)
                .then(a.norm().total_cmp(&b.norm()))
                .then(b.re.total_cmp(&a.re))
        });
        start = end;
    }
}

/// All `m n` eigenvalues in canonical order, via the companion pencil and QZ.
pub fn polyeig(p: &MatrixPolynomial) -> Result<Vec<Complex64>> {
    check_leading(p)?;
    let pencil = p.companion_linearize()?;
    let mut eigs = generalized_eigenvalues(&pencil.a, &pencil.b)?;
    canonical_sort(&mut eigs);
    Ok(eigs)
}

/// Distance from each value to the nearest other value.
pub fn separations(values: &[Complex64]) -> Vec<f64> {
    values
        .iter()
        .enumerate()
        .map(|(i, a)| {
            values
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, b)| (a - b).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

fn phase_fix(x: &mut CVector) {
    if let Some(big) = x.iter().cloned().max_by(|a, b| a.norm().total_cmp(&b.norm())) {
        if big.norm() > 0.0 {
            let ph = big.conj() / big.norm();
            for v in x.iter_mut() {
                *v *= ph;
            }
        }
    }
}

/// Triplet for one eigenvalue with the simplicity guard evaluated against
/// the given separation.
pub fn triplet_at(p: &MatrixPolynomial, lambda: Complex64, separation: f64) -> Result<EigenTriplet> {
    let value = p.eval(lambda);
    let sv = near_null_triplet(&value)?;
    let mut x = sv.v;
    phase_fix(&mut x);
    let mut y = sv.u;
    let dp = p.eval_derivative(lambda);
    let d = dp.bilinear(&y, &x);
    if d.norm() > 0.0 {
        // make y^H P' x real nonnegative
        let ph = d / d.norm();
        for v in y.iter_mut() {
            *v *= ph;
        }
    }
    let derivative = dp.bilinear(&y, &x);
    let residual_right = value.mul_vec(&x).norm();
    let residual_left = value.adjoint().mul_vec(&y).norm();
    let simple =
        separation > SEPARATION_TOL * (1.0 + lambda.norm()) && derivative.norm() > DERIVATIVE_TOL * dp.frobenius_norm();
    Ok(EigenTriplet {
        lambda,
        x,
        y,
        residual_right,
        residual_left,
        derivative,
        simple,
    })
}

/// Eigen-triplets for all eigenvalues, in the order of [`polyeig`].
///
/// Eigenvectors are the singular vectors of `P(lambda)` for its smallest
/// singular value.
pub fn eigen_triplets(p: &MatrixPolynomial) -> Result<Vec<EigenTriplet>> {
    let eigs = polyeig(p)?;
    triplets_for(p, &eigs)
}

/// Eigen-triplets for a precomputed spectrum.
pub fn triplets_for(p: &MatrixPolynomial, eigs: &[Complex64]) -> Result<Vec<EigenTriplet>> {
    let seps = separations(eigs);
    eigs.par_iter()
        .zip(seps.par_iter())
        .map(|(&lambda, &sep)| triplet_at(p, lambda, sep))
        .collect()
}

/// Eigen-triplets of a single square matrix `A`, through the pencil `z I - A`.
pub fn matrix_triplets(a: &ComplexMatrix) -> Result<Vec<EigenTriplet>> {
    let n = a.rows();
    let p = MatrixPolynomial::new(vec![a.scale_real(-1.0), ComplexMatrix::identity(n)])?;
    eigen_triplets(&p)
}

/// Residual bound used to validate triplets on well-scaled problems:
/// `1e-8 max_j ||A_j||_F max(1, |lambda|^m)`.
pub fn residual_tolerance(p: &MatrixPolynomial, lambda: Complex64) -> f64 {
    1e-8 * p.max_coeff_norm() * lambda.norm().powi(p.degree() as i32).max(1.0)
}
