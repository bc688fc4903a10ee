//! Point clouds inside the (structured) ε-pseudospectrum.
//!
//! Each trial is one perturbed polynomial `P + eps e^{i theta} W`; the cloud
//! holds the spectra of all trials. Directed clouds sweep `theta` over
//! `2 pi k / N`, `k = 0..N`, along the maximal directions of chosen
//! eigenvalues. Random-baseline clouds use a fresh random rank-one
//! direction per trial.
//!
//! Trials are evaluated as a deterministic parallel map; point order follows
//! trial order regardless of scheduling.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conditioning::Weights;
use crate::defectivity::{defectivity_for, DefectivityReport};
use crate::error::{Error, Result};
use crate::numkernel::{eigen_triplets, polyeig, smallest_singular_triplet, EigenTriplet, MatrixPolynomial};
use crate::perturbation::{
    apply, derive_seed, maximal_direction, maximal_structured_direction, random_direction, random_structured_direction,
    PerturbationDirection,
};
use crate::structures::StructureSet;
use crate::util::fmt_real;

/// Default number of phases per directed sweep.
pub const DEFAULT_N: usize = 500;
/// Default number of random-baseline trials.
pub const DEFAULT_TRIALS: usize = 10_000;

/// Which perturbation produced a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointSource {
    /// Maximal direction of the eigenvalue with this 1-based index.
    Directed {
        index: usize,
        structured: bool,
    },
    Random {
        structured: bool,
    },
}

impl std::fmt::Display for PointSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PointSource::Directed {
                index,
                structured: false,
            } => write!(f, "max:{index}"),
            PointSource::Directed {
                index,
                structured: true,
            } => write!(f, "smax:{index}"),
            PointSource::Random { structured: false } => f.write_str("random"),
            PointSource::Random { structured: true } => f.write_str("srandom"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CloudPoint {
    pub z: Complex64,
    /// 0-based trial number; identifies the perturbed polynomial.
    pub trial: usize,
    pub theta: f64,
    pub source: PointSource,
    /// 1-based index of the nearest eigenvalue of the unperturbed polynomial.
    pub origin: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CloudMeta {
    pub kind: String,
    pub epsilon: f64,
    /// Phases per sweep (directed) or number of trials (random).
    #[serde(rename = "N")]
    pub n_phases: usize,
    pub trials: usize,
    pub structured: bool,
    pub weights: Vec<f64>,
    pub problem: String,
    /// Eigenvalue indices whose maximal directions were swept.
    pub swept: Vec<usize>,
    /// Defectivity estimate and minimizing pairs, when one was computed.
    pub estimate: Option<f64>,
    pub pairs: Vec<(usize, usize)>,
    pub seed: Option<u64>,
}

/// How each trial's perturbed polynomial is rebuilt.
#[derive(Clone, Debug)]
enum Recipe {
    Directed {
        directions: Vec<(usize, PerturbationDirection)>,
    },
    Random {
        seed: u64,
        weights: Weights,
        structures: Option<StructureSet>,
    },
}

#[derive(Clone, Debug)]
pub struct Cloud {
    pub points: Vec<CloudPoint>,
    pub meta: CloudMeta,
    /// Spectrum of the unperturbed polynomial in canonical order.
    pub eigenvalues: Vec<Complex64>,
    recipe: Recipe,
}

/// Directed sweeps for the first minimizing pair or for every reported pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PairSelection {
    #[default]
    First,
    All,
}

fn theta(k: usize, n: usize) -> f64 {
    2.0 * PI * k as f64 / n as f64
}

fn nearest(eigs: &[Complex64], z: Complex64) -> usize {
    eigs.iter()
        .enumerate()
        .min_by(|a, b| (a.1 - z).norm().total_cmp(&(b.1 - z).norm()))
        .map(|(i, _)| i + 1)
        .unwrap_or(0)
}

impl Cloud {
    pub const CSV_HEADER: &'static str = "re,im,trial,theta,source";

    pub fn with_problem_id(mut self, id: impl Into<String>) -> Self {
        self.meta.problem = id.into();
        self
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn trials(&self) -> usize {
        self.meta.trials
    }

    /// Theta and perturbation of a trial.
    fn trial_setup(&self, trial: usize) -> Result<(f64, PerturbationDirection)> {
        if trial >= self.meta.trials {
            return Err(Error::InvalidInput(format!(
                "trial {trial} out of range (cloud has {})",
                self.meta.trials
            )));
        }
        match &self.recipe {
            Recipe::Directed { directions, .. } => {
                let n = self.meta.n_phases;
                let (_, d) = &directions[trial / n];
                Ok((theta(trial % n, n), d.clone()))
            }
            Recipe::Random {
                seed,
                weights,
                structures,
            } => {
                let n_order = self.eigenvalues.len() / (weights.len() - 1).max(1);
                let s = derive_seed(*seed, trial as u64);
                let d = match structures {
                    Some(st) => random_structured_direction(weights, st, n_order, s)?,
                    None => random_direction(weights, n_order, s)?,
                };
                Ok((theta(trial, self.meta.trials), d))
            }
        }
    }

    /// The perturbed polynomial whose spectrum produced the points of `trial`.
    pub fn perturbed_polynomial(&self, p: &MatrixPolynomial, trial: usize) -> Result<MatrixPolynomial> {
        let (th, d) = self.trial_setup(trial)?;
        apply(p, self.meta.epsilon, th, &d)
    }

    /// `sigma_min(Q(z)) / sum_j ||Q_j||_F |z|^j` for the point's own
    /// perturbed polynomial `Q`.
    pub fn point_residual(&self, p: &MatrixPolynomial, point: usize) -> Result<f64> {
        let pt = &self.points[point];
        let q = self.perturbed_polynomial(p, pt.trial)?;
        let sv = smallest_singular_triplet(&q.eval(pt.z))?;
        Ok(sv.sigma / q.norm_scale(pt.z))
    }

    /// Largest [`Cloud::point_residual`] over every `stride`-th point.
    pub fn spot_check(&self, p: &MatrixPolynomial, stride: usize) -> Result<f64> {
        let idx: Vec<usize> = (0..self.points.len()).step_by(stride.max(1)).collect();
        let res = idx
            .par_iter()
            .map(|&i| self.point_residual(p, i))
            .collect::<Result<Vec<_>>>()?;
        Ok(res.into_iter().fold(0.0, f64::max))
    }

    /// Smallest distance between a point attributed to eigenvalue `i` and one
    /// attributed to eigenvalue `j` (1-based).
    pub fn origin_gap(&self, i: usize, j: usize) -> f64 {
        let a: Vec<Complex64> = self.points.iter().filter(|p| p.origin == i).map(|p| p.z).collect();
        let b: Vec<Complex64> = self.points.iter().filter(|p| p.origin == j).map(|p| p.z).collect();
        let mut best = f64::INFINITY;
        for za in &a {
            for zb in &b {
                best = best.min((za - zb).norm());
            }
        }
        best
    }

    /// Largest distance of a point from the eigenvalue it is attributed to.
    pub fn max_displacement(&self) -> f64 {
        self.points
            .iter()
            .map(|p| (p.z - self.eigenvalues[p.origin - 1]).norm())
            .fold(0.0, f64::max)
    }

    /// Largest displacement among points attributed to eigenvalue `i`.
    pub fn max_displacement_from(&self, i: usize) -> f64 {
        self.points
            .iter()
            .filter(|p| p.origin == i)
            .map(|p| (p.z - self.eigenvalues[i - 1]).norm())
            .fold(0.0, f64::max)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{}", Self::CSV_HEADER)?;
        for p in &self.points {
            writeln!(
                out,
                "{},{},{},{},{}",
                fmt_real(p.z.re),
                fmt_real(p.z.im),
                p.trial,
                fmt_real(p.theta),
                p.source
            )?;
        }
        Ok(())
    }

    pub fn meta_json(&self) -> String {
        serde_json::to_string_pretty(&self.meta).expect("meta is plain data")
    }
}

/// Spectra of all trials with provenance.
fn run_trials(
    p: &MatrixPolynomial,
    eigs: &[Complex64],
    trials: usize,
    setup: impl Fn(usize) -> Result<(f64, PerturbationDirection, PointSource)> + Sync,
    eps: f64,
) -> Result<Vec<CloudPoint>> {
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|t| {
            let (th, d, source) = setup(t)?;
            let q = apply(p, eps, th, &d)?;
            let spec = polyeig(&q)?;
            Ok(spec
                .into_iter()
                .map(|z| CloudPoint {
                    z,
                    trial: t,
                    theta: th,
                    source,
                    origin: nearest(eigs, z),
                })
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_trial.into_iter().flatten().collect())
}

fn check_inputs(p: &MatrixPolynomial, w: &Weights, s: Option<&StructureSet>, n: usize) -> Result<()> {
    w.check_degree(p.degree())?;
    if let Some(s) = s {
        s.validate(p.order(), p.degree())?;
    }
    if n == 0 {
        return Err(Error::InvalidInput("N must be at least 1".into()));
    }
    Ok(())
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps.is_finite() && eps >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "epsilon must be finite and nonnegative, got {eps}"
        )));
    }
    Ok(())
}

fn direction_for(trip: &EigenTriplet, w: &Weights, s: Option<&StructureSet>) -> Result<PerturbationDirection> {
    match s {
        Some(s) => maximal_structured_direction(trip, w, s),
        None => Ok(maximal_direction(trip, w)),
    }
}

fn directed_sweeps(
    p: &MatrixPolynomial,
    w: &Weights,
    s: Option<&StructureSet>,
    triplets: &[EigenTriplet],
    indices: Vec<usize>,
    n: usize,
    eps: f64,
    kind: &str,
    report: Option<&DefectivityReport>,
) -> Result<Cloud> {
    check_eps(eps)?;
    let structured = s.is_some();
    let directions = indices
        .iter()
        .map(|&i| {
            let t = &triplets[i - 1];
            if !t.simple {
                return Err(Error::NotSimple {
                    lambda: t.lambda,
                    derivative: t.derivative.norm(),
                });
            }
            Ok((i, direction_for(t, w, s)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let eigs: Vec<Complex64> = triplets.iter().map(|t| t.lambda).collect();
    let trials = directions.len() * n;
    let points = run_trials(
        p,
        &eigs,
        trials,
        |t| {
            let (idx, d) = &directions[t / n];
            Ok((
                theta(t % n, n),
                d.clone(),
                PointSource::Directed {
                    index: *idx,
                    structured,
                },
            ))
        },
        eps,
    )?;
    Ok(Cloud {
        points,
        meta: CloudMeta {
            kind: kind.into(),
            epsilon: eps,
            n_phases: n,
            trials,
            structured,
            weights: w.values().to_vec(),
            problem: String::new(),
            swept: indices,
            estimate: report.map(|r| r.epsilon),
            pairs: report.map(|r| r.pairs.clone()).unwrap_or_default(),
            seed: None,
        },
        eigenvalues: eigs,
        recipe: Recipe::Directed { directions },
    })
}

/// Directed cloud for the most sensitive pair (or all tied pairs).
///
/// With `eps = None` the defectivity estimate is used as `eps`.
pub fn directed_cloud(
    p: &MatrixPolynomial,
    w: &Weights,
    s: Option<&StructureSet>,
    n: usize,
    eps: Option<f64>,
    selection: PairSelection,
) -> Result<Cloud> {
    check_inputs(p, w, s, n)?;
    let triplets = eigen_triplets(p)?;
    let report = defectivity_for(p, w, s, &triplets)?;
    let mut indices = Vec::new();
    let chosen: &[(usize, usize)] = match selection {
        PairSelection::First => &report.pairs[..1],
        PairSelection::All => &report.pairs,
    };
    for &(i, j) in chosen {
        for k in [i, j] {
            if !indices.contains(&k) {
                indices.push(k);
            }
        }
    }
    let kind = if s.is_some() { "structured-directed" } else { "directed" };
    directed_sweeps(
        p,
        w,
        s,
        &triplets,
        indices,
        n,
        eps.unwrap_or(report.epsilon),
        kind,
        Some(&report),
    )
}

/// Unstructured directed cloud: `2 N` perturbed spectra along the maximal
/// directions of the most sensitive pair.
pub fn approx_pseudospectrum(p: &MatrixPolynomial, w: &Weights, n: usize, eps: Option<f64>) -> Result<Cloud> {
    directed_cloud(p, w, None, n, eps, PairSelection::First)
}

/// Structured counterpart of [`approx_pseudospectrum`].
pub fn approx_structured_pseudospectrum(
    p: &MatrixPolynomial,
    w: &Weights,
    s: &StructureSet,
    n: usize,
    eps: Option<f64>,
) -> Result<Cloud> {
    directed_cloud(p, w, Some(s), n, eps, PairSelection::First)
}

/// `N` perturbed spectra along the maximal direction of eigenvalue `index`
/// (1-based, canonical order).
pub fn single_index_cloud(
    p: &MatrixPolynomial,
    w: &Weights,
    index: usize,
    eps: f64,
    n: usize,
    s: Option<&StructureSet>,
) -> Result<Cloud> {
    check_inputs(p, w, s, n)?;
    let triplets = eigen_triplets(p)?;
    if index == 0 || index > triplets.len() {
        return Err(Error::InvalidInput(format!(
            "eigenvalue index {index} out of range 1..={}",
            triplets.len()
        )));
    }
    directed_sweeps(p, w, s, &triplets, vec![index], n, eps, "single-index", None)
}

/// Random rank-one baseline: trial `k` uses `theta_k = 2 pi k / trials` and a
/// fresh random direction seeded by `(seed, k)`.
pub fn random_baseline_cloud(
    p: &MatrixPolynomial,
    w: &Weights,
    trials: usize,
    eps: f64,
    s: Option<&StructureSet>,
    seed: u64,
) -> Result<Cloud> {
    check_inputs(p, w, s, trials)?;
    check_eps(eps)?;
    let eigs = polyeig(p)?;
    let structured = s.is_some();
    let order = p.order();
    let points = run_trials(
        p,
        &eigs,
        trials,
        |t| {
            let ts = derive_seed(seed, t as u64);
            let d = match s {
                Some(s) => random_structured_direction(w, s, order, ts)?,
                None => random_direction(w, order, ts)?,
            };
            Ok((theta(t, trials), d, PointSource::Random { structured }))
        },
        eps,
    )?;
    Ok(Cloud {
        points,
        meta: CloudMeta {
            kind: if structured { "structured-random" } else { "random" }.into(),
            epsilon: eps,
            n_phases: trials,
            trials,
            structured,
            weights: w.values().to_vec(),
            problem: String::new(),
            swept: Vec::new(),
            estimate: None,
            pairs: Vec::new(),
            seed: Some(seed),
        },
        eigenvalues: eigs,
        recipe: Recipe::Random {
            seed,
            weights: w.clone(),
            structures: s.cloned(),
        },
    })
}
