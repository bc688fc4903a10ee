//! Command-line front end.
//!
//! ```text
//! polyps <eig|cond|defect|cloud|random-cloud|gen>
//!        [--in PATH | --gen example2|mass-spring:N|random:N:SEED]
//!        [--structured] [--epsilon DEC|auto] [--N INT] [--trials INT]
//!        [--index I] [--seed INT] [--out PATH] [--svg PATH]
//! ```
//!
//! Exit codes: 0 on success, 2 for usage and input errors, 3 when a
//! numerical precondition fails (singular leading coefficient, non-simple
//! eigenvalue, vanishing structured direction, ...). Errors are reported on
//! stderr as `error: <Name>: <message>`.
//!
//! `POLYPS_THREADS` caps the number of worker threads.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::cloud::{self, Cloud, PairSelection};
use crate::conditioning::condition_table;
use crate::defectivity::{structured_defectivity_estimate, unstructured_defectivity_estimate};
use crate::error::{Error, Result};
use crate::numkernel::polyeig;
use crate::problems::{generate, load_polynomial, to_json, ProblemBundle};
use crate::svg::cloud_svg;
use crate::util::fmt_real;

#[derive(Parser, Debug)]
#[command(
    name = "polyps",
    version,
    about = "Eigenvalue sensitivity and pseudospectra of matrix polynomials"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Eigenvalues in canonical order (CSV: index,re,im).
    Eig(RunConfig),
    /// Condition number table (CSV).
    Cond(RunConfig),
    /// Distance-from-defectivity estimate and minimizing pairs.
    Defect(RunConfig),
    /// Directed pseudospectrum cloud, or a single-index cloud with --index.
    Cloud(RunConfig),
    /// Random rank-one baseline cloud.
    RandomCloud(RunConfig),
    /// Write a built-in problem to the polynomial file format.
    Gen(RunConfig),
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Polynomial file to read.
    #[arg(long = "in", value_name = "PATH", conflicts_with = "gen")]
    pub input: Option<PathBuf>,
    /// Built-in problem: example2, mass-spring:N or random:N:SEED.
    #[arg(long, value_name = "SPEC")]
    pub gen: Option<String>,
    /// Use the bundle's structure set.
    #[arg(long)]
    pub structured: bool,
    /// Perturbation size, or `auto` for the defectivity estimate.
    #[arg(long, value_name = "DEC|auto")]
    pub epsilon: Option<String>,
    /// Phases per directed sweep.
    #[arg(long = "N", value_name = "INT", default_value_t = cloud::DEFAULT_N)]
    pub n: usize,
    /// Random-baseline trials.
    #[arg(long, value_name = "INT", default_value_t = cloud::DEFAULT_TRIALS)]
    pub trials: usize,
    /// 1-based eigenvalue index for a single-index cloud.
    #[arg(long, value_name = "I")]
    pub index: Option<usize>,
    /// Sweep every minimizing pair instead of the first one.
    #[arg(long)]
    pub all_pairs: bool,
    #[arg(long, value_name = "INT", default_value_t = 0)]
    pub seed: u64,
    /// Output file (stdout when absent). Clouds also get `<PATH>.meta.json`.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// SVG scatter of the cloud.
    #[arg(long, value_name = "PATH")]
    pub svg: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Epsilon {
    Auto,
    Value(f64),
}

fn parse_epsilon(s: Option<&str>) -> Result<Epsilon> {
    match s {
        None | Some("auto") => Ok(Epsilon::Auto),
        Some(v) => {
            let e: f64 = v
                .parse()
                .map_err(|_| Error::InvalidInput(format!("--epsilon expects a decimal or `auto`, got `{v}`")))?;
            if !(e.is_finite() && e >= 0.0) {
                return Err(Error::InvalidInput(format!(
                    "--epsilon must be finite and nonnegative, got {v}"
                )));
            }
            Ok(Epsilon::Value(e))
        }
    }
}

impl RunConfig {
    fn bundle(&self) -> Result<ProblemBundle> {
        match (&self.input, &self.gen) {
            (Some(path), _) => load_polynomial(path),
            (None, Some(spec)) => generate(spec),
            (None, None) => Err(Error::InvalidInput("one of --in or --gen is required".into())),
        }
    }

    fn epsilon(&self) -> Result<Epsilon> {
        parse_epsilon(self.epsilon.as_deref())
    }

    fn explicit_epsilon(&self, cmd: &str) -> Result<()> {
        if self.epsilon.is_some() {
            return Err(Error::InvalidInput(format!(
                "--epsilon is only accepted by cloud commands, not `{cmd}`"
            )));
        }
        Ok(())
    }
}

fn open_out(
    path: Option<&Path>,
    stdout: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
) -> Result<()> {
    match path {
        Some(p) => {
            let mut f = BufWriter::new(File::create(p)?);
            body(&mut f)?;
            f.flush()?;
        }
        None => body(stdout)?,
    }
    Ok(())
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

fn emit_cloud(cfg: &RunConfig, cloud: &Cloud, stdout: &mut dyn Write) -> Result<()> {
    open_out(cfg.out.as_deref(), stdout, |w| cloud.write_csv(w))?;
    let meta = cloud.meta_json();
    match &cfg.out {
        Some(out) => std::fs::write(sidecar_path(out), meta + "\n")?,
        None => eprintln!("{meta}"),
    }
    if let Some(svg) = &cfg.svg {
        std::fs::write(svg, cloud_svg(cloud))?;
    }
    Ok(())
}

/// Run one parsed command, writing primary output to `stdout` when no
/// `--out` is given.
pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Eig(cfg) => {
            cfg.explicit_epsilon("eig")?;
            let b = cfg.bundle()?;
            let eigs = polyeig(&b.p)?;
            open_out(cfg.out.as_deref(), stdout, |w| {
                writeln!(w, "index,re,im")?;
                for (i, z) in eigs.iter().enumerate() {
                    writeln!(w, "{},{},{}", i + 1, fmt_real(z.re), fmt_real(z.im))?;
                }
                Ok(())
            })
        }
        Command::Cond(cfg) => {
            cfg.explicit_epsilon("cond")?;
            let b = cfg.bundle()?;
            let table = condition_table(&b.p, &b.w, cfg.structured.then_some(&b.s))?;
            open_out(cfg.out.as_deref(), stdout, |w| table.write_csv(w))
        }
        Command::Defect(cfg) => {
            cfg.explicit_epsilon("defect")?;
            let b = cfg.bundle()?;
            let report = if cfg.structured {
                structured_defectivity_estimate(&b.p, &b.w, &b.s)?
            } else {
                unstructured_defectivity_estimate(&b.p, &b.w)?
            };
            open_out(cfg.out.as_deref(), stdout, |w| writeln!(w, "{report}"))
        }
        Command::Cloud(cfg) => {
            let b = cfg.bundle()?;
            let s = cfg.structured.then_some(&b.s);
            let cloud = match (cfg.index, cfg.epsilon()?) {
                (Some(_), Epsilon::Auto) => {
                    return Err(Error::InvalidInput("--index requires an explicit --epsilon".into()))
                }
                (Some(i), Epsilon::Value(e)) => cloud::single_index_cloud(&b.p, &b.w, i, e, cfg.n, s)?,
                (None, eps) => {
                    let eps = match eps {
                        Epsilon::Auto => None,
                        Epsilon::Value(e) => Some(e),
                    };
                    let sel = if cfg.all_pairs {
                        PairSelection::All
                    } else {
                        PairSelection::First
                    };
                    cloud::directed_cloud(&b.p, &b.w, s, cfg.n, eps, sel)?
                }
            };
            emit_cloud(cfg, &cloud.with_problem_id(b.id), stdout)
        }
        Command::RandomCloud(cfg) => {
            let b = cfg.bundle()?;
            let s = cfg.structured.then_some(&b.s);
            let (eps, report) = match cfg.epsilon()? {
                Epsilon::Value(e) => (e, None),
                Epsilon::Auto => {
                    let r = match s {
                        Some(s) => structured_defectivity_estimate(&b.p, &b.w, s)?,
                        None => unstructured_defectivity_estimate(&b.p, &b.w)?,
                    };
                    (r.epsilon, Some(r))
                }
            };
            let mut cloud =
                cloud::random_baseline_cloud(&b.p, &b.w, cfg.trials, eps, s, cfg.seed)?.with_problem_id(b.id);
            if let Some(r) = report {
                cloud.meta.estimate = Some(r.epsilon);
                cloud.meta.pairs = r.pairs;
            }
            emit_cloud(cfg, &cloud, stdout)
        }
        Command::Gen(cfg) => {
            cfg.explicit_epsilon("gen")?;
            let b = cfg.bundle()?;
            open_out(cfg.out.as_deref(), stdout, |w| writeln!(w, "{}", to_json(&b)))
        }
    }
}

/// Apply `POLYPS_THREADS` to the global worker pool.
pub fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("POLYPS_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::InvalidInput(format!("POLYPS_THREADS must be a positive integer, got `{v}`")))?;
        // Only fails if the pool already exists, in which case it is kept.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        3
    } else {
        2
    }
}

/// Parse process arguments, run, and return the exit code.
pub fn main_entry() -> i32 {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match configure_threads().and_then(|()| execute(&cli, &mut lock)) {
        Ok(()) => 0,
        // A closed downstream pipe (`polyps gen ... | head`) is not a failure.
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            exit_code(&e)
        }
    }
}
