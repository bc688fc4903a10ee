//! Structured versus unstructured sensitivity of a damped mass-spring chain.
//!
//!     cargo run --release --example structured_analysis -- 100

use polyps::conditioning::condition_table;
use polyps::defectivity::estimate_from_table;
use polyps::problems::gen_mass_spring;

fn main() -> polyps::Result<()> {
    let n = std::env::args()
        .nth(1)
        .map_or(Ok(50), |a| a.parse())
        .expect("order must be an integer");
    let b = gen_mass_spring(n)?;
    let table = condition_table(&b.p, &b.w, Some(&b.s))?;

    let ratios: Vec<f64> = table
        .rows
        .iter()
        .filter_map(|r| Some(r.kappa? / r.kappa_structured?))
        .collect();
    let worst = ratios.iter().copied().fold(0.0, f64::max);
    println!(
        "order {n}: {} eigenvalues, largest kappa / kappa_S = {worst:.3}",
        table.rows.len()
    );

    let plain = estimate_from_table(&table, false)?;
    let structured = estimate_from_table(&table, true)?;
    let (i, j) = structured.primary_pair();
    println!("unstructured estimate {:.4e} at {:?}", plain.epsilon, plain.pairs);
    println!(
        "structured estimate   {:.4e} at {:?}",
        structured.epsilon, structured.pairs
    );
    println!(
        "closest pair: {:.12} and {:.12}",
        table.rows[i - 1].lambda.re,
        table.rows[j - 1].lambda.re
    );
    Ok(())
}
