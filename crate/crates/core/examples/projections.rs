//! Nearest structured matrices and the structured norm of a rank-one matrix.
//!
//!     cargo run --example projections

use num_complex::Complex64;
use polyps::numkernel::CVector;
use polyps::{ComplexMatrix, StructureClass};

fn show(m: &ComplexMatrix) {
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols())
            .map(|j| {
                let z = m[(i, j)];
                // `+ 0.0` turns negative zeros into positive ones.
                format!("{:>7.3}{:+.3}i", z.re + 0.0, z.im + 0.0)
            })
            .collect();
        println!("  {}", row.join(" "));
    }
}

fn main() {
    let x = CVector::from_vec(
        vec![1.0, 2.0, -1.0, 0.5]
            .into_iter()
            .map(|v| Complex64::new(v, 0.0))
            .collect(),
    );
    let y = CVector::from_vec(vec![Complex64::new(0.5, 1.0), 1.0.into(), 0.0.into(), (-2.0).into()]);
    let yx = ComplexMatrix::outer(&y, &x);
    println!("y x^H, norm {:.4}:", yx.frobenius_norm());
    show(&yx);

    let classes: Vec<StructureClass> = [
        "symmetric",
        "hermitian",
        "toeplitz",
        "tridiagonal-toeplitz",
        "banded:1:0",
    ]
    .iter()
    .map(|s| s.parse().expect("known class"))
    .collect();
    for class in classes {
        let p = class.project(&yx);
        println!("\n{class}: norm {:.4}", p.frobenius_norm());
        show(&p);
    }
}
