//! Sweeps the maximal perturbation direction of the most sensitive eigenvalue
//! and prints how far each eigenvalue moves.
//!
//!     cargo run --example sensitive_eigenvalue > cloud.svg

use polyps::cloud::single_index_cloud;
use polyps::conditioning::condition_table;
use polyps::problems::gen_example2;
use polyps::svg::cloud_svg;

fn main() -> polyps::Result<()> {
    let b = gen_example2();
    let table = condition_table(&b.p, &b.w, None)?;
    let target = table
        .rows
        .iter()
        .max_by(|a, c| a.kappa.unwrap_or(0.0).total_cmp(&c.kappa.unwrap_or(0.0)))
        .expect("nonempty spectrum");
    let eps = 10f64.powf(-0.8);
    let cloud = single_index_cloud(&b.p, &b.w, target.index, eps, 400, None)?.with_problem_id(&b.id);

    for row in &table.rows {
        eprintln!(
            "lambda_{} = {:.4}: kappa {:>8.4}, moved up to {:.4}",
            row.index,
            row.lambda,
            row.kappa.unwrap_or(f64::NAN),
            cloud.max_displacement_from(row.index)
        );
    }
    print!("{}", cloud_svg(&cloud));
    Ok(())
}
