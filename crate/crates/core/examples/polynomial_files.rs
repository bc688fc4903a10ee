//! Builds a polynomial by hand, saves it in the JSON file format, loads it
//! back and analyses it.
//!
//!     cargo run --example polynomial_files -- my-problem.json

use polyps::conditioning::condition_table;
use polyps::problems::{load_polynomial, save_polynomial};
use polyps::{ComplexMatrix, MatrixPolynomial, ProblemBundle, StructureClass, StructureSet, Weights};

fn main() -> polyps::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "gyroscopic.json".into());

    // Gyroscopic system M z^2 + G z + K with skew-symmetric G.
    let m = ComplexMatrix::identity(2);
    let g = ComplexMatrix::from_real_rows(2, 2, &[0.0, 3.0, -3.0, 0.0])?;
    let k = ComplexMatrix::from_real_rows(2, 2, &[2.0, -1.0, -1.0, 2.0])?;
    let p = MatrixPolynomial::new(vec![k, g, m])?;
    let w = Weights::coefficient_norms(&p)?;
    let s = StructureSet::new(vec![
        StructureClass::Symmetric,
        StructureClass::SkewSymmetric,
        StructureClass::Symmetric,
    ])?;
    let bundle = ProblemBundle::new(p, w, s, "gyroscopic")?;
    save_polynomial(&bundle, &path)?;

    let loaded = load_polynomial(&path)?;
    assert_eq!(loaded, bundle);
    println!("wrote and re-read {path} ({})", loaded.id);

    let table = condition_table(&loaded.p, &loaded.w, Some(&loaded.s))?;
    table.write_csv(std::io::stdout())?;
    let purely_imaginary = table.rows.iter().all(|r| r.lambda.re.abs() < 1e-12);
    println!("all eigenvalues on the imaginary axis: {purely_imaginary}");
    Ok(())
}
