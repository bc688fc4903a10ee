//! Eigenvalues, condition numbers and the defectivity estimate of a small
//! quadratic.
//!
//!     cargo run --example condition_numbers

use polyps::conditioning::condition_table;
use polyps::defectivity::unstructured_defectivity_estimate;
use polyps::problems::gen_example2;

fn main() -> polyps::Result<()> {
    let b = gen_example2();
    let table = condition_table(&b.p, &b.w, None)?;

    println!("{:>3}  {:>24}  {:>10}", "i", "lambda", "kappa");
    for row in &table.rows {
        println!(
            "{:>3}  {:>11.4} {:>+11.4}i  {:>10.4}",
            row.index,
            row.lambda.re,
            row.lambda.im,
            row.kappa.unwrap_or(f64::NAN)
        );
    }

    let est = unstructured_defectivity_estimate(&b.p, &b.w)?;
    println!(
        "\ndistance from defectivity ~ {:.4e}, attained by {:?}",
        est.epsilon, est.pairs
    );
    Ok(())
}
