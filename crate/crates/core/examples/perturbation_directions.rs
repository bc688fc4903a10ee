//! The maximal perturbation direction of an eigenvalue moves it at rate
//! kappa; random directions of the same size move it less.
//!
//!     cargo run --example perturbation_directions

use polyps::conditioning::kappa;
use polyps::numkernel::{eigen_triplets, polyeig};
use polyps::perturbation::{apply, maximal_direction, random_direction};
use polyps::problems::gen_random_quadratic;
use polyps::PerturbationDirection;

fn displacement(
    p: &polyps::MatrixPolynomial,
    lambda: num_complex::Complex64,
    d: &PerturbationDirection,
    eps: f64,
) -> f64 {
    let q = apply(p, eps, 0.0, d).expect("matching shapes");
    polyeig(&q)
        .expect("regular polynomial")
        .iter()
        .map(|z| (z - lambda).norm())
        .fold(f64::INFINITY, f64::min)
}

fn main() -> polyps::Result<()> {
    let b = gen_random_quadratic(4, 7)?;
    let eps = 1e-8;
    for t in eigen_triplets(&b.p)? {
        let k = kappa(&b.p, &b.w, &t)?;
        let best = displacement(&b.p, t.lambda, &maximal_direction(&t, &b.w), eps) / eps;
        let random = (0..20)
            .map(|seed| Ok(displacement(&b.p, t.lambda, &random_direction(&b.w, 4, seed)?, eps) / eps))
            .collect::<polyps::Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        println!(
            "{:>24.4}  kappa {k:>9.4}  maximal {best:>9.4}  best random {random:>9.4}",
            t.lambda
        );
    }
    Ok(())
}
