mod common;

use num_complex::Complex64;
use polyps::conditioning::{condition_table, Weights};
use polyps::defectivity::{defectivity_estimate, estimate_from_table};
use polyps::numkernel::canonical_sort;
use polyps::perturbation::{derive_seed, random_direction, random_structured_direction};
use polyps::problems::{from_json, to_json};
use polyps::{
    fmt_real, ComplexMatrix, DefectivityReport, MatrixPolynomial, ProblemBundle, StructureClass, StructureSet,
};
use proptest::prelude::*;

fn class_strategy() -> impl Strategy<Value = StructureClass> {
    prop_oneof![
        proptest::sample::select(StructureClass::ALL_FIXED.to_vec()),
        (0usize..3, 0usize..3).prop_map(|(lower, upper)| StructureClass::Banded { lower, upper }),
    ]
}

fn matrix_strategy(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0), n * n).prop_map(move |v| {
        let entries: Vec<Complex64> = v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
        ComplexMatrix::from_row_major(n, n, &entries).unwrap()
    })
}

/// Quadratic with identity-dominated leading coefficient, so it is regular.
fn quadratic_strategy(n: usize) -> impl Strategy<Value = MatrixPolynomial> {
    (matrix_strategy(n), matrix_strategy(n), matrix_strategy(n)).prop_map(move |(a0, a1, a2)| {
        let lead = &ComplexMatrix::identity(n).scale_real(4.0) + &a2.scale_real(0.1);
        MatrixPolynomial::new(vec![a0, a1, lead]).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn projection_is_idempotent_and_real_linear(
        class in class_strategy(),
        a in matrix_strategy(4),
        b in matrix_strategy(4),
        s in -2.0f64..2.0,
    ) {
        let pa = class.project(&a);
        prop_assert!(class.project(&pa).max_abs_diff(&pa) < 1e-12);
        prop_assert!(class.contains(&pa, 1e-12));
        let lhs = class.project(&(&a + &b.scale_real(s)));
        let rhs = &pa + &class.project(&b).scale_real(s);
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        prop_assert!(pa.frobenius_norm() <= a.frobenius_norm() * (1.0 + 1e-12));
    }

    #[test]
    fn projection_matches_least_squares(class in class_strategy(), a in matrix_strategy(3)) {
        let expected = common::least_squares_projection(class, &a);
        prop_assert!(class.project(&a).max_abs_diff(&expected) < 1e-10);
    }

    #[test]
    fn structured_estimates_dominate_unstructured(
        p in quadratic_strategy(3),
        classes in proptest::collection::vec(class_strategy(), 3),
        w in proptest::collection::vec(0.1f64..3.0, 3),
    ) {
        let w = Weights::new(w).unwrap();
        let s = StructureSet::new(classes).unwrap();
        let table = condition_table(&p, &w, Some(&s)).unwrap();
        for r in &table.rows {
            if let (Some(k), Some(ks)) = (r.kappa, r.kappa_structured) {
                prop_assert!(ks <= k * (1.0 + 1e-10));
            }
        }
        if let (Ok(e), Ok(es)) = (estimate_from_table(&table, false), estimate_from_table(&table, true)) {
            prop_assert!(es.epsilon >= e.epsilon * (1.0 - 1e-10));
        }
    }

    #[test]
    fn kappa_scales_with_weights(p in quadratic_strategy(2), c in 0.1f64..10.0) {
        let w = Weights::ones(2);
        let a = condition_table(&p, &w, None).unwrap();
        let b = condition_table(&p, &w.scaled(c).unwrap(), None).unwrap();
        for (x, y) in a.rows.iter().zip(&b.rows) {
            let (kx, ky) = (x.kappa.unwrap(), y.kappa.unwrap());
            prop_assert!((ky - c * kx).abs() <= 1e-9 * ky);
        }
    }

    #[test]
    fn canonical_order_ignores_input_order(
        values in proptest::collection::vec((-5i32..5, -5i32..5), 1..12),
        rotate in 0usize..12,
    ) {
        let mut a: Vec<Complex64> = values.iter().map(|&(r, i)| Complex64::new(r as f64, i as f64)).collect();
        let mut b = a.clone();
        let k = rotate % b.len();
        b.rotate_left(k);
        b.reverse();
        canonical_sort(&mut a);
        canonical_sort(&mut b);
        prop_assert_eq!(&a, &b);
        for pair in a.windows(2) {
            prop_assert!(pair[0].re >= pair[1].re);
        }
    }

    #[test]
    fn estimate_pairs_attain_minimum(
        values in proptest::collection::vec((-10.0f64..10.0, -10.0f64..10.0, 0.1f64..5.0), 2..9),
    ) {
        let eigs: Vec<Complex64> = values.iter().map(|v| Complex64::new(v.0, v.1)).collect();
        let kappas: Vec<f64> = values.iter().map(|v| v.2).collect();
        let report = defectivity_estimate(&eigs, &kappas).unwrap();
        let mut best = f64::INFINITY;
        for i in 0..eigs.len() {
            for j in i + 1..eigs.len() {
                best = best.min((eigs[i] - eigs[j]).norm() / (kappas[i] + kappas[j]));
            }
        }
        prop_assert_eq!(report.epsilon, best);
        for &(i, j) in &report.pairs {
            prop_assert!(i < j);
            let r = (eigs[i - 1] - eigs[j - 1]).norm() / (kappas[i - 1] + kappas[j - 1]);
            prop_assert!(r <= best * (1.0 + 1e-9));
        }
    }

    #[test]
    fn report_text_round_trips(
        epsilon in 1e-12f64..1e3,
        pairs in proptest::collection::vec((1usize..20, 1usize..20), 1..4),
        structured in any::<bool>(),
    ) {
        let pairs: Vec<(usize, usize)> = pairs.into_iter().map(|(a, b)| (a.min(b), a.max(b) + 1)).collect();
        let report = DefectivityReport { epsilon, pairs, structured, excluded: Vec::new() };
        let parsed: DefectivityReport = report.to_string().parse().unwrap();
        prop_assert_eq!(parsed, report);
    }

    #[test]
    fn bundle_json_round_trips(
        p in quadratic_strategy(3),
        classes in proptest::collection::vec(class_strategy(), 3),
        w in proptest::collection::vec(0.1f64..5.0, 3),
    ) {
        let bundle = ProblemBundle::new(p, Weights::new(w).unwrap(), StructureSet::new(classes).unwrap(), "prop").unwrap();
        let back = from_json(&to_json(&bundle)).unwrap();
        prop_assert_eq!(back, bundle);
    }

    #[test]
    fn random_directions_have_weighted_norms(
        seed in any::<u64>(),
        trial in 0u64..1000,
        class in class_strategy(),
        w in proptest::collection::vec(0.1f64..4.0, 3),
    ) {
        let w = Weights::new(w).unwrap();
        let ts = derive_seed(seed, trial);
        prop_assert_eq!(ts, derive_seed(seed, trial));
        let d = random_direction(&w, 3, ts).unwrap();
        prop_assert!(d.is_admissible(&w, 1e-12));
        let s = StructureSet::uniform(class, 2);
        let ds = random_structured_direction(&w, &s, 3, ts).unwrap();
        for (h, (c, wh)) in ds.coeffs.iter().zip(w.values()).enumerate() {
            prop_assert!((c.frobenius_norm() - wh).abs() <= 1e-12 * wh);
            prop_assert!(s.get(h).contains(c, 1e-12));
        }
    }

    #[test]
    fn formatted_reals_parse_back_exactly(v in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
        prop_assert_eq!(fmt_real(v).parse::<f64>().unwrap(), v);
    }
}
