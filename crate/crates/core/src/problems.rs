//! Built-in test problems and the polynomial file format.
//!
//! File format (UTF-8 JSON):
//!
//! ```text
//! {"n": 3, "m": 2,
//!  "coefficients": [[[re, im], ...n*n row-major...], ...m+1 entries, A_0 first],
//!  "weights": [w0, ..., wm],
//!  "structures": ["full", "symmetric", ...],
//!  "id": "optional label"}
//! ```
//!
//! Floats are written as shortest round-trip decimals, so save followed by
//! load reproduces a bundle bit for bit.

use std::path::Path;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::conditioning::Weights;
use crate::error::{Error, Result};
use crate::numkernel::{check_leading, ComplexMatrix, MatrixPolynomial};
use crate::structures::{StructureClass, StructureSet};

/// Attempts at drawing a nonsingular leading coefficient.
const MAX_LEADING_DRAWS: usize = 8;

/// A polynomial together with the weights and structures it is analysed with.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemBundle {
    pub p: MatrixPolynomial,
    pub w: Weights,
    pub s: StructureSet,
    pub id: String,
}

impl ProblemBundle {
    pub fn new(p: MatrixPolynomial, w: Weights, s: StructureSet, id: impl Into<String>) -> Result<Self> {
        w.check_degree(p.degree())?;
        s.validate(p.order(), p.degree())?;
        Ok(ProblemBundle { p, w, s, id: id.into() })
    }

    /// Bundle with unit weights and no structure.
    pub fn unstructured(p: MatrixPolynomial, id: impl Into<String>) -> Self {
        let m = p.degree();
        ProblemBundle {
            p,
            w: Weights::ones(m),
            s: StructureSet::full(m),
            id: id.into(),
        }
    }
}

fn tridiag(n: usize, sub: f64, diag: f64, sup: f64) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| {
        let v = if i == j {
            diag
        } else if j == i + 1 {
            sup
        } else if i == j + 1 {
            sub
        } else {
            0.0
        };
        Complex64::new(v, 0.0)
    })
}

/// The 3x3 quadratic with tabulated eigenvalues and condition numbers.
pub fn gen_example2() -> ProblemBundle {
    let a2 = [17.6, 1.28, 2.89, 1.28, 0.824, 0.413, 2.89, 0.413, 0.725];
    let a1 = [7.66, 2.45, 2.1, 0.23, 1.04, 0.223, 0.6, 0.756, 0.658];
    let a0 = [121.0, 18.9, 15.9, 0.0, 2.7, 0.145, 11.9, 3.64, 15.5];
    let coeffs = [a0, a1, a2]
        .iter()
        .map(|a| ComplexMatrix::from_real_rows(3, 3, a).expect("finite 3x3"))
        .collect();
    let p = MatrixPolynomial::new(coeffs).expect("square coefficients");
    ProblemBundle::unstructured(p, "example2")
}

/// Damped mass-spring chain `M z^2 + C z + K` with `M = I`,
/// `C = 10 tridiag(-1, 3, -1)`, `K = 5 tridiag(-1, 3, -1)`.
///
/// Weights are the coefficient norms and every coefficient is treated as
/// symmetric tridiagonal Toeplitz.
pub fn gen_mass_spring(n: usize) -> Result<ProblemBundle> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "mass-spring order must be at least 2, got {n}"
        )));
    }
    let m = ComplexMatrix::identity(n);
    let c = tridiag(n, -10.0, 30.0, -10.0);
    let k = tridiag(n, -5.0, 15.0, -5.0);
    let p = MatrixPolynomial::new(vec![k, c, m])?;
    let w = Weights::coefficient_norms(&p)?;
    let s = StructureSet::uniform(StructureClass::SymmetricTridiagonalToeplitz, 2);
    ProblemBundle::new(p, w, s, format!("mass-spring:{n}"))
}

/// Seeded random quadratic: dense standard normal `A_0`, `A_1` and a real
/// tridiagonal Toeplitz `A_2` with standard normal diagonal values.
/// Weights are the coefficient norms.
pub fn gen_random_quadratic(n: usize, seed: u64) -> Result<ProblemBundle> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "random quadratic order must be at least 2, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut normal = || -> f64 { StandardNormal.sample(&mut rng) };
    let a0 = ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(normal(), 0.0));
    let a1 = ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(normal(), 0.0));
    let mut last = None;
    for _ in 0..MAX_LEADING_DRAWS {
        let (d, sup, sub) = (normal(), normal(), normal());
        let p = MatrixPolynomial::new(vec![a0.clone(), a1.clone(), tridiag(n, sub, d, sup)])?;
        match check_leading(&p) {
            Ok(()) => {
                let w = Weights::coefficient_norms(&p)?;
                let s = StructureSet::new(vec![
                    StructureClass::Full,
                    StructureClass::Full,
                    StructureClass::TridiagonalToeplitz,
                ])?;
                return ProblemBundle::new(p, w, s, format!("random-quadratic:{n}:{seed}"));
            }
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one draw"))
}

/// Resolve a generator spec: `example2`, `mass-spring:N` or `random:N:SEED`.
pub fn generate(spec: &str) -> Result<ProblemBundle> {
    let bad = |msg: &str| Error::InvalidInput(format!("bad generator spec `{spec}`: {msg}"));
    let parts: Vec<&str> = spec.split(':').collect();
    let int = |s: &str| {
        s.parse::<u64>()
            .map_err(|_| bad(&format!("`{s}` is not a nonnegative integer")))
    };
    match parts.as_slice() {
        ["example2"] => Ok(gen_example2()),
        ["mass-spring", n] => gen_mass_spring(int(n)? as usize),
        ["random", n, seed] | ["random-quadratic", n, seed] => gen_random_quadratic(int(n)? as usize, int(seed)?),
        _ => Err(bad("expected example2, mass-spring:N or random:N:SEED")),
    }
}

#[derive(Serialize, Deserialize)]
struct FileRecord {
    n: usize,
    m: usize,
    coefficients: Vec<Vec<[f64; 2]>>,
    weights: Vec<f64>,
    structures: Vec<String>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    id: String,
}

/// 1-based line of the first occurrence of `needle`, or 1.
fn line_of(text: &str, needle: &str) -> usize {
    text.find(needle)
        .map(|pos| text[..pos].matches('\n').count() + 1)
        .unwrap_or(1)
}

fn field_error(text: &str, field: &str, message: String) -> Error {
    Error::Parse {
        line: line_of(text, &format!("\"{field}\"")),
        field: field.into(),
        message,
    }
}

/// Serialize a bundle to the JSON file format.
pub fn to_json(b: &ProblemBundle) -> String {
    let record = FileRecord {
        n: b.p.order(),
        m: b.p.degree(),
        coefficients: b
            .p
            .coeffs()
            .iter()
            .map(|a| a.row_major().iter().map(|z| [z.re, z.im]).collect())
            .collect(),
        weights: b.w.values().to_vec(),
        structures: b.s.classes().iter().map(|c| c.to_string()).collect(),
        id: b.id.clone(),
    };
    serde_json::to_string_pretty(&record).expect("plain data")
}

/// Parse the JSON file format.
pub fn from_json(text: &str) -> Result<ProblemBundle> {
    let record: FileRecord = serde_json::from_str(text).map_err(|e| {
        let msg = e.to_string();
        let field = ["coefficients", "weights", "structures", "n", "m", "id"]
            .into_iter()
            .find(|f| msg.contains(&format!("`{f}`")))
            .unwrap_or("record");
        Error::Parse {
            line: e.line(),
            field: field.into(),
            message: msg,
        }
    })?;
    let (n, m) = (record.n, record.m);
    if record.coefficients.len() != m + 1 {
        return Err(field_error(
            text,
            "coefficients",
            format!(
                "expected m+1 = {} coefficients, found {}",
                m + 1,
                record.coefficients.len()
            ),
        ));
    }
    let mut coeffs = Vec::with_capacity(m + 1);
    for (j, entries) in record.coefficients.iter().enumerate() {
        if entries.len() != n * n {
            return Err(field_error(
                text,
                "coefficients",
                format!(
                    "coefficient {j} has {} entries, expected n*n = {}",
                    entries.len(),
                    n * n
                ),
            ));
        }
        let z: Vec<Complex64> = entries.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
        coeffs.push(ComplexMatrix::from_row_major(n, n, &z)?);
    }
    if record.weights.len() != m + 1 {
        return Err(field_error(
            text,
            "weights",
            format!("expected {} weights, found {}", m + 1, record.weights.len()),
        ));
    }
    if record.structures.len() != m + 1 {
        return Err(field_error(
            text,
            "structures",
            format!("expected {} structure tags, found {}", m + 1, record.structures.len()),
        ));
    }
    let classes = record
        .structures
        .iter()
        .map(|tag| {
            tag.parse::<StructureClass>().map_err(|_| Error::Parse {
                line: line_of(text, &format!("\"{tag}\"")),
                field: "structures".into(),
                message: format!("unknown structure tag `{tag}`"),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let w = Weights::new(record.weights).map_err(|e| field_error(text, "weights", e.to_string()))?;
    let p = MatrixPolynomial::new(coeffs)?;
    ProblemBundle::new(p, w, StructureSet::new(classes)?, record.id)
}

pub fn save_polynomial(b: &ProblemBundle, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_json(b) + "\n")?;
    Ok(())
}

pub fn load_polynomial(path: impl AsRef<Path>) -> Result<ProblemBundle> {
    from_json(&std::fs::read_to_string(path)?)
}
