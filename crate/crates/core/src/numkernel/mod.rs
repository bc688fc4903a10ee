//! Dense complex linear algebra: matrices, matrix polynomials, the companion
//! pencil, a QZ eigensolver and singular-vector extraction.

mod eigen;
mod matrix;
mod polynomial;
mod qz;
mod svd;

pub use eigen::{
    canonical_sort, check_leading, eigen_triplets, matrix_triplets, polyeig, residual_tolerance, separations,
    triplet_at, triplets_for, EigenTriplet, DERIVATIVE_TOL, SEPARATION_TOL,
};
pub use matrix::{CVector, ComplexMatrix};
pub use polynomial::{MatrixPolynomial, Pencil};
pub use qz::generalized_eigenvalues;
pub use svd::{near_null_triplet, singular_values, smallest_singular_triplet, SingularTriplet};
