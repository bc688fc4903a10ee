//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use polyps::numkernel::polyeig;
use polyps::perturbation::{apply, PerturbationDirection};
use polyps::{ComplexMatrix, MatrixPolynomial, StructureClass};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub fn e(n: usize, i: usize, j: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |a, b| if (a, b) == (i, j) { 1.0.into() } else { 0.0.into() })
}

fn sum(n: usize, cells: impl Iterator<Item = (usize, usize)>, sign: impl Fn(usize, usize) -> f64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    for (i, j) in cells {
        m[(i, j)] += Complex64::new(sign(i, j), 0.0);
    }
    m
}

/// Real-linear basis of the class, deliberately non-orthogonal so the
/// least-squares fit below does not reduce to entry averaging.
pub fn real_basis(class: StructureClass, n: usize) -> Vec<ComplexMatrix> {
    let plain = orthogonal_basis(class, n);
    (0..plain.len())
        .map(|k| {
            if k == 0 {
                plain[0].clone()
            } else {
                &plain[k] + &plain[k - 1].scale_real(0.5)
            }
        })
        .collect()
}

/// Complex-linear classes contribute `B` and `iB` for every complex basis
/// element `B`.
fn orthogonal_basis(class: StructureClass, n: usize) -> Vec<ComplexMatrix> {
    let cells = |pred: &dyn Fn(usize, usize) -> bool| -> Vec<(usize, usize)> {
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| pred(i, j))
            .collect()
    };
    let complex: Vec<ComplexMatrix> = match class {
        StructureClass::Full => cells(&|_, _| true).into_iter().map(|(i, j)| e(n, i, j)).collect(),
        StructureClass::Symmetric => cells(&|i, j| i <= j)
            .into_iter()
            .map(|(i, j)| {
                sum(
                    n,
                    [(i, j), (j, i)].into_iter().take(if i == j { 1 } else { 2 }),
                    |_, _| 1.0,
                )
            })
            .collect(),
        StructureClass::SkewSymmetric => cells(&|i, j| i < j)
            .into_iter()
            .map(|(i, j)| {
                sum(
                    n,
                    [(i, j), (j, i)].into_iter(),
                    move |a, _| if a == i { 1.0 } else { -1.0 },
                )
            })
            .collect(),
        StructureClass::Hermitian => {
            let mut out = Vec::new();
            for i in 0..n {
                out.push(e(n, i, i));
                for j in i + 1..n {
                    out.push(&e(n, i, j) + &e(n, j, i));
                    out.push((&e(n, i, j) - &e(n, j, i)).scale(I));
                }
            }
            return out;
        }
        StructureClass::Tridiagonal => cells(&|i, j| i.abs_diff(j) <= 1)
            .into_iter()
            .map(|(i, j)| e(n, i, j))
            .collect(),
        StructureClass::Banded { lower, upper } => cells(&|i, j| j + lower >= i && i + upper >= j)
            .into_iter()
            .map(|(i, j)| e(n, i, j))
            .collect(),
        StructureClass::Toeplitz => (0..2 * n - 1)
            .map(|d| sum(n, cells(&|i, j| j + n - 1 - i == d).into_iter(), |_, _| 1.0))
            .collect(),
        StructureClass::Hankel => (0..2 * n - 1)
            .map(|s| sum(n, cells(&|i, j| i + j == s).into_iter(), |_, _| 1.0))
            .collect(),
        StructureClass::TridiagonalToeplitz => (0..3)
            .map(|d| sum(n, cells(&|i, j| j + 1 == i + d).into_iter(), |_, _| 1.0))
            .filter(|m| m.frobenius_norm() > 0.0)
            .collect(),
        StructureClass::SymmetricTridiagonalToeplitz => vec![
            ComplexMatrix::identity(n),
            sum(n, cells(&|i, j| i.abs_diff(j) == 1).into_iter(), |_, _| 1.0),
        ]
        .into_iter()
        .filter(|m| m.frobenius_norm() > 0.0)
        .collect(),
    };
    complex.iter().flat_map(|b| [b.clone(), b.scale(I)]).collect()
}

fn re_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (0..a.rows())
        .flat_map(|i| (0..a.cols()).map(move |j| (i, j)))
        .map(|(i, j)| (a[(i, j)].conj() * b[(i, j)]).re)
        .sum()
}

/// Nearest member of the class by real least squares over [`real_basis`].
pub fn least_squares_projection(class: StructureClass, m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.rows();
    let basis = real_basis(class, n);
    let k = basis.len();
    let g = DMatrix::from_fn(k, k, |a, b| re_inner(&basis[a], &basis[b]));
    let rhs = DVector::from_fn(k, |a, _| re_inner(&basis[a], m));
    let c = g.lu().solve(&rhs).expect("basis is linearly independent");
    let mut out = ComplexMatrix::zeros(n, n);
    for (b, ci) in basis.iter().zip(c.iter()) {
        out = &out + &b.scale_real(*ci);
    }
    out
}

pub fn random_complex(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Roots of `c_0 + c_1 z + ... + c_m z^m` by Durand-Kerner iteration.
pub fn scalar_roots(c: &[Complex64]) -> Vec<Complex64> {
    let m = c.len() - 1;
    let lead = c[m];
    let monic: Vec<Complex64> = c.iter().map(|v| v / lead).collect();
    let eval = |z: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a);
    let radius = 1.0 + monic[..m].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..m)
        .map(|k| Complex64::from_polar(radius, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / m as f64))
        .collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for k in 0..m {
            let denom = (0..m)
                .filter(|&j| j != k)
                .fold(Complex64::new(1.0, 0.0), |acc, j| acc * (z[k] - z[j]));
            let step = eval(z[k]) / denom;
            z[k] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * radius {
            break;
        }
    }
    z
}

/// Largest `|lambda(eps) - lambda| / eps` over `phases` equispaced rotations
/// of the direction.
pub fn displacement_rate(
    p: &MatrixPolynomial,
    lambda: Complex64,
    d: &PerturbationDirection,
    eps: f64,
    phases: usize,
) -> f64 {
    (0..phases)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / phases as f64;
            let q = apply(p, eps, theta, d).unwrap();
            let moved = polyeig(&q)
                .unwrap()
                .into_iter()
                .min_by(|a, b| (a - lambda).norm().total_cmp(&(b - lambda).norm()))
                .unwrap();
            (moved - lambda).norm() / eps
        })
        .fold(0.0, f64::max)
}

/// Every structure class at order `n`, including two banded shapes.
pub fn all_classes() -> Vec<StructureClass> {
    let mut v = StructureClass::ALL_FIXED.to_vec();
    v.push(StructureClass::Banded { lower: 1, upper: 2 });
    v.push(StructureClass::Banded { lower: 0, upper: 0 });
    v
}
