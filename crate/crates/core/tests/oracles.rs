//! Eigenvalues and condition numbers against independent computations.

mod common;

use common::{displacement_rate, rng, scalar_roots};
use num_complex::Complex64;
use polyps::conditioning::{condition_table, kappa, kappa_structured};
use polyps::numkernel::{canonical_sort, eigen_triplets, residual_tolerance};
use polyps::perturbation::{maximal_direction, random_direction, random_structured_direction};
use polyps::problems::{gen_example2, gen_mass_spring, gen_random_quadratic};
use polyps::{ComplexMatrix, MatrixPolynomial, StructureSet, Weights};
use rand::Rng;

fn scalar(c: Complex64) -> ComplexMatrix {
    ComplexMatrix::from_fn(1, 1, |_, _| c)
}

#[test]
fn scalar_polynomials_match_root_finder() {
    let mut r = rng(11);
    for degree in 1..=5 {
        let coeffs: Vec<Complex64> = (0..=degree)
            .map(|_| Complex64::new(r.random_range(-2.0..2.0), r.random_range(-2.0..2.0)))
            .collect();
        let p = MatrixPolynomial::new(coeffs.iter().map(|&c| scalar(c)).collect()).unwrap();
        let w = Weights::new((0..=degree).map(|_| r.random_range(0.5..2.0)).collect()).unwrap();

        let mut expected = scalar_roots(&coeffs);
        canonical_sort(&mut expected);
        let table = condition_table(&p, &w, None).unwrap();
        assert_eq!(table.rows.len(), degree);

        for (row, root) in table.rows.iter().zip(&expected) {
            let scale = 1.0 + root.norm();
            assert!((row.lambda - root).norm() < 1e-10 * scale, "{} vs {}", row.lambda, root);
            let dp: Complex64 = coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| c * (j as f64) * root.powi(j as i32 - 1))
                .sum();
            let omega: f64 = w
                .values()
                .iter()
                .enumerate()
                .map(|(j, wj)| wj * root.norm().powi(j as i32))
                .sum();
            let k = omega / dp.norm();
            assert!(
                (row.kappa.unwrap() - k).abs() < 1e-8 * k,
                "kappa {} vs {}",
                row.kappa.unwrap(),
                k
            );
        }
    }
}

#[test]
fn triplet_residuals_are_small_on_builtin_problems() {
    let mut bundles = vec![
        gen_example2(),
        gen_mass_spring(12).unwrap(),
        gen_mass_spring(60).unwrap(),
    ];
    bundles.extend((0..4).map(|seed| gen_random_quadratic(6, seed).unwrap()));
    for b in bundles {
        for t in eigen_triplets(&b.p).unwrap() {
            let tol = residual_tolerance(&b.p, t.lambda);
            assert!(
                t.residual_right <= tol,
                "{}: right residual {} at {}",
                b.id,
                t.residual_right,
                t.lambda
            );
            assert!(
                t.residual_left <= tol,
                "{}: left residual {} at {}",
                b.id,
                t.residual_left,
                t.lambda
            );
            assert!(t.derivative.im.abs() <= 1e-12 * t.derivative.norm());
            assert!(t.derivative.re >= 0.0);
        }
    }
}

/// Modes of the mass-spring chain are sine vectors; each contributes the two
/// roots of `z^2 + 10 t z + 5 t` with `t = 3 - 2 cos(k pi / (n + 1))`.
#[test]
fn mass_spring_matches_closed_form_modes() {
    let n = 60;
    let b = gen_mass_spring(n).unwrap();
    let w = b.w.values().to_vec();
    let mut expected = Vec::new();
    for k in 1..=n {
        let phase = k as f64 * std::f64::consts::PI / (n + 1) as f64;
        let t = 3.0 - 2.0 * phase.cos();
        let mode: Vec<f64> = (1..=n).map(|j| (j as f64 * phase).sin()).collect();
        let norm2: f64 = mode.iter().map(|v| v * v).sum();
        let trace = 1.0;
        let off: f64 = 2.0 * mode.windows(2).map(|p| p[0] * p[1]).sum::<f64>() / norm2;
        let proj = (trace * trace / n as f64 + off * off / (2 * (n - 1)) as f64).sqrt();
        let disc = (100.0 * t * t - 20.0 * t).sqrt();
        for lambda in [(-10.0 * t + disc) / 2.0, (-10.0 * t - disc) / 2.0] {
            let omega = w[0] + w[1] * lambda.abs() + w[2] * lambda * lambda;
            let deriv = (2.0 * lambda + 10.0 * t).abs();
            expected.push((lambda, omega / deriv, omega * proj / deriv));
        }
    }
    expected.sort_by(|a, b| b.0.total_cmp(&a.0));

    let table = condition_table(&b.p, &b.w, Some(&b.s)).unwrap();
    assert_eq!(table.rows.len(), 2 * n);
    for (row, (lambda, k, ks)) in table.rows.iter().zip(&expected) {
        assert!(
            (row.lambda.re - lambda).abs() < 1e-11 * lambda.abs().max(1.0),
            "{} vs {lambda}",
            row.lambda
        );
        assert!(row.lambda.im.abs() < 1e-10);
        assert!(
            (row.kappa.unwrap() - k).abs() < 1e-7 * k,
            "kappa {} vs {k}",
            row.kappa.unwrap()
        );
        let got = row.kappa_structured.unwrap();
        assert!((got - ks).abs() < 1e-7 * ks, "structured kappa {got} vs {ks}");
    }
}

#[test]
fn random_directions_never_beat_the_condition_number() {
    let eps = 1e-7;
    for b in [gen_example2(), gen_random_quadratic(4, 3).unwrap()] {
        let n = b.p.order();
        for t in eigen_triplets(&b.p).unwrap() {
            let k = kappa(&b.p, &b.w, &t).unwrap();
            for draw in 0..12u64 {
                let d = random_direction(&b.w, n, draw).unwrap();
                let rate = displacement_rate(&b.p, t.lambda, &d, eps, 4);
                assert!(
                    rate <= 1.02 * k,
                    "{}: rate {rate} exceeds kappa {k} at {}",
                    b.id,
                    t.lambda
                );
            }
            let best = displacement_rate(&b.p, t.lambda, &maximal_direction(&t, &b.w), eps, 1);
            assert!(best >= 0.98 * k, "{}: maximal rate {best} below kappa {k}", b.id);
        }
    }
}

#[test]
fn structured_random_directions_respect_structured_condition_number() {
    let b = gen_random_quadratic(5, 8).unwrap();
    let eps = 1e-7;
    for t in eigen_triplets(&b.p).unwrap() {
        let ks = kappa_structured(&b.p, &b.w, &b.s, &t).unwrap();
        for draw in 0..8u64 {
            let d = random_structured_direction(&b.w, &b.s, 5, draw).unwrap();
            let rate = displacement_rate(&b.p, t.lambda, &d, eps, 4);
            assert!(
                rate <= 1.02 * ks,
                "rate {rate} exceeds structured kappa {ks} at {}",
                t.lambda
            );
        }
    }
}

#[test]
fn full_structure_reproduces_unstructured_condition_numbers() {
    let b = gen_random_quadratic(5, 2).unwrap();
    let full = StructureSet::full(2);
    for t in eigen_triplets(&b.p).unwrap() {
        let k = kappa(&b.p, &b.w, &t).unwrap();
        let ks = kappa_structured(&b.p, &b.w, &full, &t).unwrap();
        assert!((k - ks).abs() <= 1e-12 * k);
    }
}

/// A first-degree polynomial `A_0 + I z` with weights `(1, 0)` has the
/// eigenvalues of `-A_0` and condition numbers `1 / |y^H x|` for unit
/// eigenvectors.
#[test]
fn pencil_with_identity_reduces_to_standard_eigenproblem() {
    let a = ComplexMatrix::from_real_rows(3, 3, &[2.0, 1.0, 0.0, 0.0, 3.0, 5.0, 0.0, 0.0, -1.0]).unwrap();
    let p = MatrixPolynomial::new(vec![a.scale_real(-1.0), ComplexMatrix::identity(3)]).unwrap();
    let w = Weights::new(vec![1.0, 0.0]).unwrap();
    let table = condition_table(&p, &w, None).unwrap();
    let lams: Vec<f64> = table.rows.iter().map(|r| r.lambda.re).collect();
    assert_eq!(lams.len(), 3);
    for (got, want) in lams.iter().zip([3.0, 2.0, -1.0]) {
        assert!((got - want).abs() < 1e-12);
    }
    // Right and left eigenvectors of the upper triangular matrix by hand.
    let x: [[f64; 3]; 3] = [[1.0, 1.0, 0.0], [1.0, 0.0, 0.0], [5.0 / 12.0, -5.0 / 4.0, 1.0]];
    let y: [[f64; 3]; 3] = [[0.0, 1.0, 5.0 / 4.0], [1.0, -1.0, -5.0 / 3.0], [0.0, 0.0, 1.0]];
    for (i, row) in table.rows.iter().enumerate() {
        let nx = x[i].iter().map(|v| v * v).sum::<f64>().sqrt();
        let ny = y[i].iter().map(|v| v * v).sum::<f64>().sqrt();
        let dot: f64 = x[i].iter().zip(&y[i]).map(|(a, b)| a * b).sum();
        let k = nx * ny / dot.abs();
        assert!(
            (row.kappa.unwrap() - k).abs() < 1e-10 * k,
            "{} vs {k}",
            row.kappa.unwrap()
        );
    }
}

#[test]
fn structured_kappa_for_each_class_is_bounded_by_kappa() {
    let b = gen_random_quadratic(4, 5).unwrap();
    let triplets = eigen_triplets(&b.p).unwrap();
    for class in common::all_classes() {
        let s = StructureSet::uniform(class, 2);
        for t in &triplets {
            let k = kappa(&b.p, &b.w, t).unwrap();
            let ks = kappa_structured(&b.p, &b.w, &s, t).unwrap();
            assert!(ks <= k * (1.0 + 1e-12), "{class}: {ks} > {k}");
            assert!(ks >= 0.0);
        }
    }
}
