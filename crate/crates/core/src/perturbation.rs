//! Perturbation directions `W(z) = sum_h W_h z^h` with `||W_h||_F <= w_h`.
//!
//! The maximal direction of a simple eigenvalue with eigenvectors `x`, `y`
//! is `W_h = w_h e^{-i h arg(lambda)} y x^H`. Along it the eigenvalue moves at
//! the rate given by its condition number, whatever the extra phase
//! `e^{i theta}` used by [`apply`]. The structured variant replaces `y x^H`
//! by its normalized projection onto `S_h`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::conditioning::Weights;
use crate::error::{Error, Result};
use crate::numkernel::{CVector, ComplexMatrix, EigenTriplet, MatrixPolynomial};
use crate::structures::StructureSet;

/// Number of times a random structured draw with vanishing projection is repeated.
pub const MAX_REDRAWS: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub enum DirectionSource {
    /// Maximal direction of the eigenvalue `lambda`; `zeroed` lists
    /// coefficients whose structured projection vanished.
    Maximal {
        lambda: Complex64,
        structured: bool,
        zeroed: Vec<usize>,
    },
    /// Random rank-one direction drawn from `seed`.
    Random { seed: u64, structured: bool },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PerturbationDirection {
    pub coeffs: Vec<ComplexMatrix>,
    pub source: DirectionSource,
}

impl PerturbationDirection {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn order(&self) -> usize {
        self.coeffs[0].rows()
    }

    /// `||W_h||_F` for each coefficient.
    pub fn norms(&self) -> Vec<f64> {
        self.coeffs.iter().map(ComplexMatrix::frobenius_norm).collect()
    }

    /// `||W_h||_F <= w_h + tol` for every `h`.
    pub fn is_admissible(&self, w: &Weights, tol: f64) -> bool {
        self.coeffs.len() == w.len() && self.norms().iter().zip(w.values()).all(|(n, wh)| *n <= wh + tol)
    }
}

/// `arg(lambda)` with `arg(0) = 0`.
fn phase_angle(lambda: Complex64) -> f64 {
    if lambda.norm() == 0.0 {
        0.0
    } else {
        lambda.arg()
    }
}

/// `W_h = w_h e^{-i h arg(lambda)} y x^H`.
pub fn maximal_direction(trip: &EigenTriplet, w: &Weights) -> PerturbationDirection {
    let yx = ComplexMatrix::outer(&trip.y, &trip.x);
    let arg = phase_angle(trip.lambda);
    let coeffs = (0..w.len())
        .map(|h| yx.scale(Complex64::from_polar(w.get(h), -(h as f64) * arg)))
        .collect();
    PerturbationDirection {
        coeffs,
        source: DirectionSource::Maximal {
            lambda: trip.lambda,
            structured: false,
            zeroed: Vec::new(),
        },
    }
}

/// `W_h = w_h e^{-i h arg(lambda)} (y x^H)|_{S_h} / ||(y x^H)|_{S_h}||_F`.
///
/// Coefficients whose projection vanishes are zero and listed in the source
/// tag; if no coefficient survives the result is `AllZeroDirection`.
pub fn maximal_structured_direction(
    trip: &EigenTriplet,
    w: &Weights,
    s: &StructureSet,
) -> Result<PerturbationDirection> {
    let n = trip.x.len();
    s.validate(n, w.len() - 1)?;
    let yx = ComplexMatrix::outer(&trip.y, &trip.x);
    let arg = phase_angle(trip.lambda);
    let mut zeroed = Vec::new();
    let mut coeffs = Vec::with_capacity(w.len());
    for h in 0..w.len() {
        match s.get(h).normalized_project(&yx) {
            Ok(unit) => coeffs.push(unit.scale(Complex64::from_polar(w.get(h), -(h as f64) * arg))),
            Err(Error::ZeroProjection { .. }) => {
                zeroed.push(h);
                coeffs.push(ComplexMatrix::zeros(n, n));
            }
            Err(e) => return Err(e),
        }
    }
    if coeffs
        .iter()
        .zip(w.values())
        .all(|(c, wh)| *wh == 0.0 || c.frobenius_norm() == 0.0)
    {
        return Err(Error::AllZeroDirection);
    }
    Ok(PerturbationDirection {
        coeffs,
        source: DirectionSource::Maximal {
            lambda: trip.lambda,
            structured: true,
            zeroed,
        },
    })
}

fn complex_normal_vector(rng: &mut ChaCha8Rng, n: usize) -> CVector {
    CVector::from_fn(n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    })
}

fn unit_rank_one(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let u = complex_normal_vector(rng, n);
    let v = complex_normal_vector(rng, n);
    let r = ComplexMatrix::outer(&u, &v);
    let norm = r.frobenius_norm();
    r.scale_real(1.0 / norm)
}

/// `W_h = w_h R_h` with `R_h = u_h v_h^H / ||u_h v_h^H||_F` and `u_h`, `v_h`
/// complex Gaussian vectors from a ChaCha8 stream seeded by `seed`.
pub fn random_direction(w: &Weights, n: usize, seed: u64) -> Result<PerturbationDirection> {
    if n == 0 {
        return Err(Error::InvalidInput("matrix order must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs = (0..w.len())
        .map(|h| unit_rank_one(&mut rng, n).scale_real(w.get(h)))
        .collect();
    Ok(PerturbationDirection {
        coeffs,
        source: DirectionSource::Random {
            seed,
            structured: false,
        },
    })
}

/// `W_h = w_h R_h|_{S_h} / ||R_h|_{S_h}||_F` using the same draws as
/// [`random_direction`]; draws with a vanishing projection are replaced by
/// further draws from the stream, at most [`MAX_REDRAWS`] times.
pub fn random_structured_direction(
    w: &Weights,
    s: &StructureSet,
    n: usize,
    seed: u64,
) -> Result<PerturbationDirection> {
    if n == 0 {
        return Err(Error::InvalidInput("matrix order must be positive".into()));
    }
    s.validate(n, w.len() - 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<ComplexMatrix> = (0..w.len()).map(|_| unit_rank_one(&mut rng, n)).collect();
    let mut coeffs = Vec::with_capacity(w.len());
    for (h, draw) in draws.into_iter().enumerate() {
        if w.get(h) == 0.0 {
            coeffs.push(ComplexMatrix::zeros(n, n));
            continue;
        }
        let mut candidate = draw;
        let mut attempt = 0;
        let unit = loop {
            match s.get(h).normalized_project(&candidate) {
                Ok(u) => break u,
                Err(Error::ZeroProjection { .. }) if attempt < MAX_REDRAWS => {
                    attempt += 1;
                    candidate = unit_rank_one(&mut rng, n);
                }
                Err(Error::ZeroProjection { .. }) => return Err(Error::AllZeroDirection),
                Err(e) => return Err(e),
            }
        };
        coeffs.push(unit.scale_real(w.get(h)));
    }
    Ok(PerturbationDirection {
        coeffs,
        source: DirectionSource::Random { seed, structured: true },
    })
}

/// Coefficients `A_h + eps e^{i theta} W_h`.
pub fn apply(p: &MatrixPolynomial, eps: f64, theta: f64, d: &PerturbationDirection) -> Result<MatrixPolynomial> {
    if d.coeffs.is_empty() || d.order() != p.order() || d.degree() != p.degree() {
        return Err(Error::DimensionMismatch(format!(
            "direction of degree {} and order {} applied to polynomial of degree {} and order {}",
            d.coeffs.len().saturating_sub(1),
            d.coeffs.first().map_or(0, ComplexMatrix::rows),
            p.degree(),
            p.order()
        )));
    }
    p.perturbed(Complex64::from_polar(eps, theta), &d.coeffs)
}

/// Mixes a base seed with a trial index (SplitMix64 finalizer).
pub fn derive_seed(seed: u64, trial: u64) -> u64 {
    let mut z = seed ^ trial.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
