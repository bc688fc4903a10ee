use nalgebra::{DMatrix, DVectorView};
use num_complex::Complex64;

use super::matrix::{CVector, ComplexMatrix};
use crate::error::{Error, Result};

/// Smallest singular value with its unit singular vectors: `M v = sigma u`.
#[derive(Clone, Debug)]
pub struct SingularTriplet {
    pub sigma: f64,
    pub u: CVector,
    pub v: CVector,
}

/// Real `2n x 2n` matrix `[[A, -B], [B, A]]` of `M = A + iB`.
///
/// nalgebra's complex SVD can lose accuracy on nearly singular matrices,
/// while its real SVD does not; the embedding has the singular values of
/// `M`, each twice, and `[a; b] <-> a + ib` maps its singular vectors back.
fn real_embedding(m: &ComplexMatrix) -> DMatrix<f64> {
    let (r, c) = (m.rows(), m.cols());
    DMatrix::from_fn(2 * r, 2 * c, |i, j| {
        let z = m[(i % r, j % c)];
        match (i < r, j < c) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

fn fold(v: DVectorView<'_, f64>) -> CVector {
    let n = v.len() / 2;
    CVector::from_fn(n, |i, _| Complex64::new(v[i], v[i + n]))
}

/// Singular values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let mut sv: Vec<f64> = real_embedding(m).singular_values().iter().cloned().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv.into_iter().step_by(2).collect()
}

/// Smallest singular triplet from a full SVD.
pub fn smallest_singular_triplet(m: &ComplexMatrix) -> Result<SingularTriplet> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "smallest singular triplet needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let svd = real_embedding(m).svd(true, true);
    let (k, sigma) = svd
        .singular_values
        .iter()
        .cloned()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty matrix");
    let u = fold(svd.u.as_ref().expect("requested").column(k));
    let v = fold(svd.v_t.as_ref().expect("requested").row(k).transpose().column(0));
    // Each folded vector has norm 1 already; normalize against rounding.
    let (u, v) = (u.unscale(u.norm()), v.unscale(v.norm()));
    Ok(SingularTriplet { sigma, u, v })
}

fn normalized(v: CVector) -> Option<CVector> {
    let norm = v.norm();
    if norm.is_finite() && norm > 0.0 {
        Some(v.unscale(norm))
    } else {
        None
    }
}

/// Inverse iteration on `M^H M` through LU factors of `M` and `M^H`.
///
/// Meant for nearly singular matrices (`M = P(lambda)` at a computed
/// eigenvalue), where one or two steps converge. Returns `None` when the
/// iteration does not settle, so the caller can fall back to the SVD.
fn inverse_iteration(m: &ComplexMatrix) -> Option<SingularTriplet> {
    let n = m.rows();
    let lu = m.as_inner().clone().lu();
    let lu_h = m.as_inner().adjoint().lu();
    let mut u = normalized(CVector::from_fn(n, |i, _| {
        Complex64::new(1.0 + 0.37 * ((i * 7 + 3) % 11) as f64, 0.21 * ((i * 5 + 1) % 13) as f64)
    }))?;
    let mut prev_sigma = f64::INFINITY;
    for _ in 0..12 {
        let x = lu.solve(&u)?;
        let xnorm = x.norm();
        let v = normalized(x)?;
        let y = lu_h.solve(&v)?;
        u = normalized(y)?;
        let sigma = 1.0 / xnorm;
        let mv = m.mul_vec(&v);
        let resid = (&mv - &u * Complex64::new(sigma, 0.0)).norm();
        let scale = m.frobenius_norm().max(f64::MIN_POSITIVE);
        let converged = resid <= 1e-13 * scale || (sigma - prev_sigma).abs() <= 1e-14 * scale;
        prev_sigma = sigma;
        if converged {
            // u comes from the solve with M^H, not from M v: for nearly
            // singular M the product M v is dominated by rounding.
            return Some(SingularTriplet { sigma, u, v });
        }
    }
    None
}

/// Dimension above which the LU-based iteration replaces the full SVD.
const DENSE_SVD_LIMIT: usize = 40;

/// Smallest singular triplet of a matrix known to be close to singular.
///
/// Same contract as [`smallest_singular_triplet`]; large orders use
/// inverse iteration and fall back to the SVD if it fails.
pub fn near_null_triplet(m: &ComplexMatrix) -> Result<SingularTriplet> {
    if m.rows() > DENSE_SVD_LIMIT && m.is_square() {
        if let Some(t) = inverse_iteration(m) {
            return Ok(t);
        }
    }
    smallest_singular_triplet(m)
}
