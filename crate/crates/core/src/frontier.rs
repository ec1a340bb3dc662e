//! Exact purity-bounded frontier `Φ(μ)` over diagonal Fock mixtures.
//!
//! For `ρ = Σ pₙ|n><n|` one has `σ_xx = σ_pp = ħ(<n> + ½)` and `σ_xp = 0`,
//! so the frontier is `Φ(μ) = 2·min<n> + 1`, minimised over
//! `Σpₙ = 1`, `Σpₙ² = μ`, `pₙ ≥ 0`. Stationarity of the Lagrangian makes the
//! minimiser a decreasing linear profile `pₙ = α − βn` on `{0, ..., N−1}`;
//! both constraints then fix `α` and `β` for each support size `N`.

use serde::Serialize;

use crate::bounds::{check_mu, phi_asymptotic, phi_tilde};
use crate::error::{Error, Result};
use crate::format::sig;

pub const DEFAULT_MAX_LEVELS: usize = 256;

pub const FRONTIER_CSV_HEADER: [&str; 7] = [
    "mu",
    "phi_exact",
    "phi_tilde",
    "phi_asym",
    "support",
    "abs_diff_lead",
    "scaled_diff_lead",
];

/// Linear profile on `n` levels with purity `mu`, or `None` if infeasible.
fn linear_profile(mu: f64, n: usize) -> Option<(f64, f64)> {
    let nf = n as f64;
    let excess = mu - 1.0 / nf;
    if excess < -1e-15 {
        return None;
    }
    let beta = if n == 1 {
        0.0
    } else {
        (excess.max(0.0) * 12.0 / (nf * (nf * nf - 1.0))).sqrt()
    };
    let alpha = 1.0 / nf + beta * (nf - 1.0) / 2.0;
    let last = alpha - beta * (nf - 1.0);
    (last >= -1e-15).then_some((alpha, beta))
}

/// Minimum mean occupation at purity `mu` and the minimising weights.
pub fn min_mean_occupation(mu: f64, max_levels: usize) -> Result<(f64, Vec<f64>)> {
    let mu = check_mu(mu)?;
    if mu < 1.0 / max_levels as f64 {
        return Err(Error::Truncation(format!(
            "purity {mu} needs more than {max_levels} levels"
        )));
    }
    let mut best: Option<(f64, usize, f64, f64)> = None;
    for n in 1..=max_levels {
        let Some((alpha, beta)) = linear_profile(mu, n) else {
            continue;
        };
        let nf = n as f64;
        let s1 = nf * (nf - 1.0) / 2.0;
        let s2 = (nf - 1.0) * nf * (2.0 * nf - 1.0) / 6.0;
        let occ = alpha * s1 - beta * s2;
        if best.is_none_or(|(b, ..)| occ < b - 1e-15) {
            best = Some((occ, n, alpha, beta));
        }
    }
    let (_, n, alpha, beta) = best.ok_or_else(|| Error::Truncation(format!("no feasible support for purity {mu}")))?;
    let probs: Vec<f64> = (0..n).map(|k| (alpha - beta * k as f64).max(0.0)).collect();
    let occ = probs.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
    Ok((occ, probs))
}

/// `Φ(μ) = 2·min<n> + 1`.
pub fn phi_exact(mu: f64) -> Result<f64> {
    Ok(2.0 * min_mean_occupation(mu, DEFAULT_MAX_LEVELS)?.0 + 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrontierPoint {
    pub mu: f64,
    pub phi_exact: f64,
    pub phi_tilde: f64,
    pub phi_asym: f64,
    pub support_size: usize,
    pub probs: Vec<f64>,
}

impl FrontierPoint {
    pub fn at(mu: f64) -> Result<Self> {
        let (occ, probs) = min_mean_occupation(mu, DEFAULT_MAX_LEVELS)?;
        Ok(FrontierPoint {
            mu,
            phi_exact: 2.0 * occ + 1.0,
            phi_tilde: phi_tilde(mu)?,
            phi_asym: phi_asymptotic(mu)?,
            support_size: probs.len(),
            probs,
        })
    }

    /// `|Φ − 8/(9μ)|`.
    pub fn abs_diff_lead(&self) -> f64 {
        (self.phi_exact - 8.0 / (9.0 * self.mu)).abs()
    }

    /// `μ·|Φ − 8/(9μ)|`.
    pub fn scaled_diff_lead(&self) -> f64 {
        self.mu * self.abs_diff_lead()
    }

    pub fn csv_record(&self) -> Vec<String> {
        vec![
            sig(self.mu),
            sig(self.phi_exact),
            sig(self.phi_tilde),
            sig(self.phi_asym),
            self.support_size.to_string(),
            sig(self.abs_diff_lead()),
            sig(self.scaled_diff_lead()),
        ]
    }
}

/// `steps` evenly spaced purities from `mu_min` to `mu_max` inclusive.
pub fn frontier_table(mu_min: f64, mu_max: f64, steps: usize) -> Result<Vec<FrontierPoint>> {
    if !(mu_min > 0.0 && mu_min <= mu_max && mu_max <= 1.0) || steps == 0 {
        return Err(Error::Domain(format!(
            "need 0 < mu_min <= mu_max <= 1 and steps >= 1, got [{mu_min}, {mu_max}] x {steps}"
        )));
    }
    (0..steps)
        .map(|i| {
            let mu = if steps == 1 {
                mu_min
            } else {
                mu_min + (mu_max - mu_min) * i as f64 / (steps - 1) as f64
            };
            FrontierPoint::at(mu)
        })
        .collect()
}
