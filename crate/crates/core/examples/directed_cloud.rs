//! Directed pseudospectrum cloud of a random quadratic next to a random
//! rank-one baseline at the same perturbation size. Writes CSV and SVG files
//! to the directory given as the first argument (default: current directory).
//!
//!     cargo run --release --example directed_cloud -- /tmp

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use polyps::cloud::{approx_pseudospectrum, random_baseline_cloud};
use polyps::problems::gen_random_quadratic;
use polyps::svg::cloud_svg;

fn main() -> polyps::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    let b = gen_random_quadratic(5, 1)?;

    let directed = approx_pseudospectrum(&b.p, &b.w, 500, None)?.with_problem_id(&b.id);
    let eps = directed.meta.epsilon;
    let random = random_baseline_cloud(&b.p, &b.w, 1000, eps, None, 0)?.with_problem_id(&b.id);

    for (name, cloud) in [("directed", &directed), ("random", &random)] {
        cloud.write_csv(BufWriter::new(File::create(dir.join(format!("{name}.csv")))?))?;
        std::fs::write(dir.join(format!("{name}.svg")), cloud_svg(cloud))?;
        println!(
            "{name:>8}: {} points, largest displacement {:.4e}",
            cloud.len(),
            cloud.max_displacement()
        );
    }
    println!("eps = {eps:.4e}, swept eigenvalues {:?}", directed.meta.swept);
    println!(
        "largest residual on a sample of trials: {:.2e}",
        directed.spot_check(&b.p, 97)?
    );
    Ok(())
}
