//! Randomized validity sweep over density matrices and Hermitian triples.
//!
//! Each trial draws a density matrix and three observables from its own
//! seeded stream, so the summary is independent of thread scheduling. On
//! composite dimensions every other trial uses a bipartite split with
//! `z1, z2` acting on the first factor and `z3` on the second, which puts
//! the trial in the commuting-third regime.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

use crate::bounds::{BoundReport, VIOLATION_REL_TOL};
use crate::config::PhysConfig;
use crate::error::Result;
use crate::moments::{covariance_matrices, gram_psd_check, PSD_REL_TOL};
use crate::state::{random_density_matrix_with, random_hermitian_with, rng_for, Observable, State};

pub const HISTOGRAM_BINS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub seed: u64,
    pub trials: usize,
    /// Trial `i` uses `dims[i % dims.len()]`.
    pub dims: Vec<usize>,
    pub rel_tol: f64,
}

impl SweepConfig {
    pub fn new(seed: u64, trials: usize, dims: Vec<usize>) -> Self {
        SweepConfig {
            seed,
            trials,
            dims,
            rel_tol: VIOLATION_REL_TOL,
        }
    }
}

/// Result of one random instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub index: usize,
    pub dim: usize,
    pub commuting: bool,
    pub report: BoundReport,
    pub det_f: f64,
    /// `det F / (X11 X22 X33)`.
    pub det_f_rel: f64,
    pub psd_passed: bool,
    /// Largest `(bound − product)/product` over all bounds; negative when every bound holds.
    pub max_rel_excess: f64,
    /// `(name, relative excess)` for each inequality broken beyond tolerance.
    pub violations: Vec<(String, f64)>,
}

fn smallest_factor(n: usize) -> Option<usize> {
    (2..n).find(|k| k * k <= n && n.is_multiple_of(*k))
}

/// Runs trial `index` of the sweep seeded by `seed` in dimension `dim`.
pub fn run_trial(seed: u64, index: usize, dim: usize, rel_tol: f64) -> Result<TrialOutcome> {
    let mut rng = rng_for(seed, index as u64);
    let rho = random_density_matrix_with(&mut rng, dim)?;
    let split = if index % 2 == 1 { smallest_factor(dim) } else { None };
    let obs: Vec<Observable> = match split {
        Some(da) => {
            let db = dim / da;
            let ia = DMatrix::<Complex64>::identity(da, da);
            let ib = DMatrix::<Complex64>::identity(db, db);
            let h1 = random_hermitian_with(&mut rng, da, 1.0, "z1")?;
            let h2 = random_hermitian_with(&mut rng, da, 1.0, "z2")?;
            let h3 = random_hermitian_with(&mut rng, db, 1.0, "z3")?;
            vec![
                Observable::matrix("z1", h1.matrix_op().unwrap().kronecker(&ib))?,
                Observable::matrix("z2", h2.matrix_op().unwrap().kronecker(&ib))?,
                Observable::matrix("z3", ia.kronecker(h3.matrix_op().unwrap()))?,
            ]
        }
        None => (1..=3)
            .map(|k| random_hermitian_with(&mut rng, dim, 1.0, &format!("z{k}")))
            .collect::<Result<_>>()?,
    };
    let state = State::Fock(rho);
    let mp = covariance_matrices(&state, &obs, &PhysConfig::default())?;
    let report = BoundReport::from_moments(&mp, None)?;
    let cert = gram_psd_check(&mp, PSD_REL_TOL);
    let det_scale = mp.x(0, 0) * mp.x(1, 1) * mp.x(2, 2);

    let mut violations: Vec<(String, f64)> = report
        .violations(rel_tol)
        .into_iter()
        .map(|(n, e)| (n.to_string(), e / report.product))
        .collect();
    if let Some(res) = report.det3_residual {
        if res < -rel_tol * det_scale {
            violations.push(("det3".into(), -res / det_scale));
        }
    }
    if cert.det_f < -PSD_REL_TOL * det_scale {
        violations.push(("det_f".into(), -cert.det_f / det_scale));
    }
    if let Some(nb) = report.new_bound {
        if nb < report.rs - rel_tol * report.product {
            violations.push(("new_below_rs".into(), (report.rs - nb) / report.product));
        }
    }
    let max_rel_excess = report
        .bounds()
        .iter()
        .map(|(_, b)| (b - report.product) / report.product)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(TrialOutcome {
        index,
        dim,
        commuting: report.commuting_bound.is_some(),
        det_f: cert.det_f,
        det_f_rel: cert.det_f / det_scale,
        psd_passed: cert.passed,
        max_rel_excess,
        violations,
        report,
    })
}

/// Aggregate over all trials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub seed: u64,
    pub trials: usize,
    pub commuting_trials: usize,
    /// Number of evaluations per inequality.
    pub checked: BTreeMap<String, usize>,
    pub violations: usize,
    pub violation_kinds: BTreeMap<String, usize>,
    pub max_rel_excess: f64,
    pub min_det_f_rel: f64,
    /// Trials where the coupled bound is strictly above `G12`.
    pub new_above_rs: usize,
    /// Histogram of `best_bound / product` over `[0, 1]`.
    pub tightness_histogram: [usize; HISTOGRAM_BINS],
}

impl SweepSummary {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<(SweepSummary, Vec<TrialOutcome>)> {
    let dims = if cfg.dims.is_empty() { vec![6] } else { cfg.dims.clone() };
    let outcomes: Vec<TrialOutcome> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_trial(cfg.seed, i, dims[i % dims.len()], cfg.rel_tol))
        .collect::<Result<_>>()?;

    let mut checked = BTreeMap::new();
    let mut kinds = BTreeMap::new();
    let mut hist = [0usize; HISTOGRAM_BINS];
    let mut summary_violations = 0;
    let mut max_rel_excess = f64::NEG_INFINITY;
    let mut min_det_f_rel = f64::INFINITY;
    let mut new_above_rs = 0;
    let mut bump = |k: &str| *checked.entry(k.to_string()).or_insert(0) += 1;
    for o in &outcomes {
        for name in ["robertson", "rs", "correlation", "det3", "det_f", "new"] {
            bump(name);
        }
        if o.commuting {
            bump("commuting");
        }
        summary_violations += o.violations.len();
        for (k, _) in &o.violations {
            *kinds.entry(k.clone()).or_insert(0) += 1;
        }
        max_rel_excess = max_rel_excess.max(o.max_rel_excess);
        let r = &o.report;
        if let Some(nb) = r.new_bound {
            if nb > r.rs * (1.0 + 1e-12) {
                new_above_rs += 1;
            }
        }
        let ratio = (r.best_bound / r.product).clamp(0.0, 1.0);
        let bin = ((ratio * HISTOGRAM_BINS as f64) as usize).min(HISTOGRAM_BINS - 1);
        hist[bin] += 1;
        min_det_f_rel = min_det_f_rel.min(o.det_f_rel);
    }
    Ok((
        SweepSummary {
            seed: cfg.seed,
            trials: outcomes.len(),
            commuting_trials: outcomes.iter().filter(|o| o.commuting).count(),
            checked,
            violations: summary_violations,
            violation_kinds: kinds,
            max_rel_excess,
            min_det_f_rel,
            new_above_rs,
            tightness_histogram: hist,
        },
        outcomes,
    ))
}
