//! Complex single-shift QZ for the generalized eigenvalues of a dense pencil.
//!
//! Only eigenvalues are produced; the unitary factors are not accumulated.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

type Mat = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Plane rotation `[[c, s], [-conj(s), c]]` with real `c`.
#[derive(Clone, Copy, Debug)]
struct Rotation {
    c: f64,
    s: Complex64,
}

impl Rotation {
    /// Rotation mapping `(f, g)` to `(r, 0)`.
    fn zeroing(f: Complex64, g: Complex64) -> Self {
        if g == ZERO {
            return Rotation { c: 1.0, s: ZERO };
        }
        if f == ZERO {
            return Rotation {
                c: 0.0,
                s: g.conj() / g.norm(),
            };
        }
        let fa = f.norm();
        let norm = fa.hypot(g.norm());
        let phase = f / fa;
        Rotation {
            c: fa / norm,
            s: phase * g.conj() / norm,
        }
    }

    /// Left-multiplies rows `p`, `q` over the given columns.
    fn rows(&self, m: &mut Mat, p: usize, q: usize, cols: std::ops::RangeInclusive<usize>) {
        for j in cols {
            let x = m[(p, j)];
            let y = m[(q, j)];
            m[(p, j)] = x * self.c + self.s * y;
            m[(q, j)] = -self.s.conj() * x + y * self.c;
        }
    }

    /// Right-multiplies columns `p`, `q` over the given rows. Built with
    /// `zeroing(m[r,q], m[r,p])` it annihilates `m[r,p]`.
    fn cols(&self, m: &mut Mat, p: usize, q: usize, rows: std::ops::RangeInclusive<usize>) {
        for i in rows {
            let x = m[(i, p)];
            let y = m[(i, q)];
            m[(i, p)] = x * self.c - self.s.conj() * y;
            m[(i, q)] = self.s * x + y * self.c;
        }
    }
}

fn frobenius(m: &Mat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Reduces `(a, b)` to Hessenberg-triangular form in place.
fn hessenberg_triangular(a: &mut Mat, b: &mut Mat) {
    let n = a.nrows();
    let qr = std::mem::replace(b, Mat::zeros(0, 0)).qr();
    let q = qr.q();
    *b = qr.r();
    *a = q.adjoint() * &*a;
    for i in 1..n {
        for j in 0..i {
            b[(i, j)] = ZERO;
        }
    }
    if n < 3 {
        return;
    }
    for j in 0..n - 2 {
        for i in (j + 2..n).rev() {
            let rot = Rotation::zeroing(a[(i - 1, j)], a[(i, j)]);
            rot.rows(a, i - 1, i, j..=n - 1);
            a[(i, j)] = ZERO;
            rot.rows(b, i - 1, i, i - 1..=n - 1);
            let rot = Rotation::zeroing(b[(i, i)], b[(i, i - 1)]);
            rot.cols(b, i - 1, i, 0..=i);
            b[(i, i - 1)] = ZERO;
            rot.cols(a, i - 1, i, 0..=n - 1);
        }
    }
}

/// Eigenvalue of the trailing 2x2 pencil closest to its last diagonal ratio.
fn wilkinson_shift(h: &Mat, t: &Mat, k: usize) -> Complex64 {
    let sa = [h[(k - 1, k - 1)], h[(k - 1, k)], h[(k, k - 1)], h[(k, k)]]
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let sb = [t[(k - 1, k - 1)], t[(k - 1, k)], t[(k, k)]]
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let (a11, a12, a21, a22) = (
        h[(k - 1, k - 1)] / sa,
        h[(k - 1, k)] / sa,
        h[(k, k - 1)] / sa,
        h[(k, k)] / sa,
    );
    let (b11, b12, b22) = (t[(k - 1, k - 1)] / sb, t[(k - 1, k)] / sb, t[(k, k)] / sb);
    // det([a] - mu [b]) = qa mu^2 + qb mu + qc
    let qa = b11 * b22;
    let qb = -(a11 * b22 + a22 * b11 - a21 * b12);
    let qc = a11 * a22 - a12 * a21;
    let disc = (qb * qb - qa * qc * 4.0).sqrt();
    let sign = if (qb.conj() * disc).re >= 0.0 { 1.0 } else { -1.0 };
    let q = -(qb + disc * sign) * 0.5;
    let target = a22 / b22;
    let mut best = target;
    let mut best_dist = f64::INFINITY;
    for mu in [q / qa, qc / q] {
        if mu.re.is_finite() && mu.im.is_finite() {
            let d = (mu - target).norm();
            if d < best_dist {
                best = mu;
                best_dist = d;
            }
        }
    }
    best * (sa / sb)
}

/// Generalized eigenvalues `z` with `det(a - z b) = 0`, for nonsingular `b`.
///
/// Returns them in the order they deflate; callers sort.
pub fn generalized_eigenvalues(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let n = a.rows();
    if !a.is_square() || b.rows() != n || b.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "pencil blocks are {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    // A common scale leaves eigenvalues unchanged and keeps magnitudes near one.
    let scale = a.frobenius_norm().max(b.frobenius_norm());
    let inv = if scale > 0.0 { 1.0 / scale } else { 1.0 };
    let mut h = a.as_inner() * Complex64::new(inv, 0.0);
    let mut t = b.as_inner() * Complex64::new(inv, 0.0);
    hessenberg_triangular(&mut h, &mut t);

    let ulp = f64::EPSILON;
    let safmin = f64::MIN_POSITIVE;
    let hnorm = frobenius(&h).max(safmin);
    let tnorm = frobenius(&t).max(safmin);
    let btol = (ulp * tnorm).max(safmin);

    let mut eigs = vec![ZERO; n];
    if n == 0 {
        return Ok(eigs);
    }
    let max_iter = 30 * n.max(10);
    let mut total = 0usize;
    let mut since_deflation = 0usize;
    let mut ihi = n - 1;
    loop {
        if ihi == 0 {
            if t[(0, 0)].norm() <= btol {
                return Err(Error::SingularLeadingCoefficient {
                    sigma_min: t[(0, 0)].norm() * scale,
                    threshold: btol * scale,
                });
            }
            eigs[0] = h[(0, 0)] / t[(0, 0)];
            break;
        }
        let mut ilo = 0;
        for k in (1..=ihi).rev() {
            let local = h[(k, k)].norm() + h[(k - 1, k - 1)].norm();
            let tol = if local > 0.0 { ulp * local } else { ulp * hnorm }.max(safmin);
            if h[(k, k - 1)].norm() <= tol {
                h[(k, k - 1)] = ZERO;
                ilo = k;
                break;
            }
        }
        if ilo == ihi {
            if t[(ihi, ihi)].norm() <= btol {
                return Err(Error::SingularLeadingCoefficient {
                    sigma_min: t[(ihi, ihi)].norm() * scale,
                    threshold: btol * scale,
                });
            }
            eigs[ihi] = h[(ihi, ihi)] / t[(ihi, ihi)];
            ihi -= 1;
            since_deflation = 0;
            continue;
        }
        if let Some(k) = (ilo..=ihi).find(|&k| t[(k, k)].norm() <= btol) {
            return Err(Error::SingularLeadingCoefficient {
                sigma_min: t[(k, k)].norm() * scale,
                threshold: btol * scale,
            });
        }
        total += 1;
        since_deflation += 1;
        if total > max_iter {
            return Err(Error::NoConvergence { iterations: total });
        }

        let shift = if since_deflation.is_multiple_of(10) {
            // exceptional shift to break cycles
            h[(ihi, ihi)] / t[(ihi, ihi)]
                + Complex64::new(0.75, 0.5) * (h[(ihi, ihi - 1)] / t[(ihi - 1, ihi - 1)]).norm()
        } else {
            wilkinson_shift(&h, &t, ihi)
        };

        let rot = Rotation::zeroing(h[(ilo, ilo)] - shift * t[(ilo, ilo)], h[(ilo + 1, ilo)]);
        rot.rows(&mut h, ilo, ilo + 1, ilo..=ihi);
        rot.rows(&mut t, ilo, ilo + 1, ilo..=ihi);
        for k in ilo..ihi {
            let rot = Rotation::zeroing(t[(k + 1, k + 1)], t[(k + 1, k)]);
            rot.cols(&mut t, k, k + 1, ilo..=k + 1);
            t[(k + 1, k)] = ZERO;
            rot.cols(&mut h, k, k + 1, ilo..=(k + 2).min(ihi));
            if k + 2 <= ihi {
                let rot = Rotation::zeroing(h[(k + 1, k)], h[(k + 2, k)]);
                rot.rows(&mut h, k + 1, k + 2, k..=ihi);
                h[(k + 2, k)] = ZERO;
                rot.rows(&mut t, k + 1, k + 2, k + 1..=ihi);
            }
        }
    }
    Ok(eigs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn rotation_annihilates() {
        let f = Complex64::new(0.3, -1.2);
        let g = Complex64::new(-2.0, 0.7);
        let r = Rotation::zeroing(f, g);
        let mut m = Mat::from_row_slice(2, 1, &[f, g]);
        r.rows(&mut m, 0, 1, 0..=0);
        assert!(m[(1, 0)].norm() < 1e-15);
        assert!((m[(0, 0)].norm() - f.norm().hypot(g.norm())).abs() < 1e-14);

        let mut row = Mat::from_row_slice(1, 2, &[g, f]);
        Rotation::zeroing(f, g).cols(&mut row, 0, 1, 0..=0);
        assert!(row[(0, 0)].norm() < 1e-15);
    }

    #[test]
    fn diagonal_pencil() {
        let a = ComplexMatrix::diag(&[2.0, 6.0, -3.0]);
        let b = ComplexMatrix::diag(&[1.0, 2.0, 3.0]);
        let e = sorted(generalized_eigenvalues(&a, &b).unwrap());
        let want = [-1.0, 2.0, 3.0];
        for (z, w) in e.iter().zip(want) {
            assert!((z - Complex64::new(w, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn rotation_matrix_has_imaginary_pair() {
        let a = ComplexMatrix::from_real_rows(2, 2, &[0.0, -1.0, 1.0, 0.0]).unwrap();
        let b = ComplexMatrix::identity(2);
        let e = sorted(generalized_eigenvalues(&a, &b).unwrap());
        assert!((e[0] - Complex64::new(0.0, -1.0)).norm() < 1e-14);
        assert!((e[1] - Complex64::new(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn singular_b_is_rejected() {
        let a = ComplexMatrix::identity(2);
        let b = ComplexMatrix::diag(&[1.0, 0.0]);
        assert!(matches!(
            generalized_eigenvalues(&a, &b),
            Err(Error::SingularLeadingCoefficient { .. })
        ));
    }

    #[test]
    fn agrees_with_schur_of_reduced_matrix() {
        // deterministic pseudo-random complex pencil
        let mut state = 12345u64;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let n = 12;
        let a = ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(next(), next()));
        let b = ComplexMatrix::from_fn(n, n, |i, j| {
            Complex64::new(next() * 0.2 + if i == j { 2.0 } else { 0.0 }, next() * 0.2)
        });
        let e = sorted(generalized_eigenvalues(&a, &b).unwrap());
        let reduced = b.as_inner().clone().try_inverse().unwrap() * a.as_inner();
        let oracle = sorted(reduced.schur().eigenvalues().unwrap().iter().cloned().collect());
        for (z, w) in e.iter().zip(&oracle) {
            assert!((z - w).norm() < 1e-11, "{z} vs {w}");
        }
    }
}
