//! Sensitivity analysis and pseudospectrum approximation for matrix
//! polynomials `P(z) = A_0 + A_1 z + ... + A_m z^m`.
//!
//! The crate computes eigenvalues and eigen-triplets through the companion
//! pencil, unstructured and structured eigenvalue condition numbers, a cheap
//! estimate of the distance to the nearest defective polynomial, and point
//! clouds inside the (structured) ε-pseudospectrum obtained from maximal
//! rank-one perturbations of the most sensitive eigenvalue pair.
//!
//! Eigenvalue indices in reports, tables and clouds are 1-based positions in
//! the canonical order (real part descending, then imaginary part
//! descending).

pub mod cli;
pub mod cloud;
pub mod conditioning;
pub mod defectivity;
pub mod error;
pub mod numkernel;
pub mod perturbation;
pub mod problems;
pub mod structures;
pub mod svg;
mod util;

pub use cloud::{Cloud, CloudMeta, CloudPoint};
pub use conditioning::{ConditionTable, Weights};
pub use defectivity::DefectivityReport;
pub use error::{Error, Result};
pub use numkernel::{ComplexMatrix, EigenTriplet, MatrixPolynomial};
pub use perturbation::PerturbationDirection;
pub use problems::ProblemBundle;
pub use structures::{StructureClass, StructureSet};
pub use util::fmt_real;
