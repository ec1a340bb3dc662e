//! Lower bounds on the uncertainty product `Δz1·Δz2`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::PhysConfig;
use crate::error::{Error, Result};
use crate::moments::{covariance_matrices, MomentPair};
use crate::state::{Observable, State};

/// Tolerance below which a radicand is treated as zero rather than negative.
const RADICAND_REL_TOL: f64 = 1e-12;
/// `|Y13|, |Y23|` below this (relative) count as commuting.
const COMMUTING_REL_TOL: f64 = 1e-12;
/// Relative tolerance for declaring a bound violated.
pub const VIOLATION_REL_TOL: f64 = 1e-9;

fn check_pair(mp: &MomentPair, i: usize, j: usize) -> Result<()> {
    if i == j || i >= mp.len() || j >= mp.len() {
        return Err(Error::Domain(format!(
            "need two distinct indices below {}, got ({i}, {j})",
            mp.len()
        )));
    }
    Ok(())
}

fn check_triple(mp: &MomentPair) -> Result<()> {
    if mp.len() != 3 {
        return Err(Error::Domain(format!("need three observables, got {}", mp.len())));
    }
    Ok(())
}

/// `G_ij² = X_ij² + Y_ij²`.
fn g_sqr(mp: &MomentPair, i: usize, j: usize) -> f64 {
    mp.x(i, j) * mp.x(i, j) + mp.y(i, j) * mp.y(i, j)
}

/// Robertson bound `|Y_ij| = ½|<[z_i, z_j]>|`.
pub fn robertson_bound(mp: &MomentPair, i: usize, j: usize) -> Result<f64> {
    check_pair(mp, i, j)?;
    Ok(mp.y(i, j).abs())
}

/// Robertson–Schrödinger bound `G_ij = sqrt(X_ij² + Y_ij²)`.
pub fn rs_bound(mp: &MomentPair, i: usize, j: usize) -> Result<f64> {
    check_pair(mp, i, j)?;
    Ok(g_sqr(mp, i, j).sqrt())
}

/// Correlation coefficient `r = X_ij / sqrt(X_ii X_jj)` and the bound
/// `Y_ij² / (1 - r²)` on the variance product `σ_iσ_j` (for a position and
/// momentum pair this is `ħ²/(4(1 - r²))`).
pub fn correlation_form(mp: &MomentPair, i: usize, j: usize) -> Result<(f64, f64)> {
    check_pair(mp, i, j)?;
    let var = mp.x(i, i) * mp.x(j, j);
    if !(var > 0.0) {
        return Err(Error::Degenerate(format!(
            "zero variance in ({}, {})",
            mp.labels()[i],
            mp.labels()[j]
        )));
    }
    let r = mp.x(i, j) / var.sqrt();
    let one_minus = 1.0 - r * r;
    if !(one_minus > 0.0) {
        return Err(Error::Degenerate(format!("|r| = {} is not below 1", r.abs())));
    }
    Ok((r, mp.y(i, j) * mp.y(i, j) / one_minus))
}

/// `X11X22X33 − [X11G23² + X22G13² + X33G12² + 2(X12Y23Y31 + X23Y31Y12
/// + X31Y12Y23 − X12X23X31)]`, which equals `det(X + iY)`.
pub fn triple_det_residual(mp: &MomentPair) -> Result<f64> {
    check_triple(mp)?;
    let (x11, x22, x33) = (mp.x(0, 0), mp.x(1, 1), mp.x(2, 2));
    let (x12, x23, x31) = (mp.x(0, 1), mp.x(1, 2), mp.x(2, 0));
    let (y12, y23, y31) = (mp.y(0, 1), mp.y(1, 2), mp.y(2, 0));
    let lhs = x11 * x22 * x33;
    let rhs = x11 * g_sqr(mp, 1, 2)
        + x22 * g_sqr(mp, 0, 2)
        + x33 * g_sqr(mp, 0, 1)
        + 2.0 * (x12 * y23 * y31 + x23 * y31 * y12 + x31 * y12 * y23 - x12 * x23 * x31);
    Ok(lhs - rhs)
}

/// Coupled bound from three observables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoupledBound {
    /// `Ω = |G13 G23| / X33`.
    pub omega: f64,
    /// `Γ = [X12(Y23Y31 − X23X31) + Y12(X23Y31 + Y23X31)] / X33`.
    pub gamma: f64,
    /// `G12² + Ω² + 2Γ`.
    pub radicand: f64,
    /// `sqrt(radicand) + Ω`, or `None` when the radicand is negative and
    /// the determinant inequality puts no constraint on `Δz1Δz2`.
    pub bound: Option<f64>,
}

impl CoupledBound {
    pub fn is_vacuous(&self) -> bool {
        self.bound.is_none()
    }
}

/// `Δz1Δz2 ≥ sqrt(G12² + Ω² + 2Γ) + Ω`.
pub fn coupled_bound(mp: &MomentPair) -> Result<CoupledBound> {
    check_triple(mp)?;
    let x33 = mp.x(2, 2);
    let threshold = 1e-12 * mp.scale();
    if !(x33 > threshold) {
        return Err(Error::DeterministicThird { x33, threshold });
    }
    let (x12, x23, x31) = (mp.x(0, 1), mp.x(1, 2), mp.x(2, 0));
    let (y12, y23, y31) = (mp.y(0, 1), mp.y(1, 2), mp.y(2, 0));
    let omega = (g_sqr(mp, 0, 2) * g_sqr(mp, 1, 2)).sqrt() / x33;
    let gamma = (x12 * (y23 * y31 - x23 * x31) + y12 * (x23 * y31 + y23 * x31)) / x33;
    // G12² + Ω² + 2Γ = (G12 − Ω)² + 2(|z| − Re z)/X33, z = F12 F23 F31
    let f = |i: usize, j: usize| Complex64::new(mp.x(i, j), mp.y(i, j));
    let z = f(0, 1) * f(1, 2) * f(2, 0);
    let g12 = g_sqr(mp, 0, 1).sqrt();
    let excess = if z.re > 0.0 {
        z.im * z.im / (z.norm() + z.re)
    } else {
        z.norm() - z.re
    };
    let radicand = (g12 - omega).powi(2) + 2.0 * excess / x33;
    let tol = RADICAND_REL_TOL * (mp.x(0, 0) * mp.x(1, 1)).max(g_sqr(mp, 0, 1));
    let bound = if radicand >= 0.0 {
        Some(radicand.sqrt() + omega)
    } else if radicand >= -tol {
        Some(omega)
    } else {
        None
    };
    Ok(CoupledBound {
        omega,
        gamma,
        radicand,
        bound,
    })
}

fn commuting_tol(mp: &MomentPair, i: usize) -> f64 {
    COMMUTING_REL_TOL * (mp.x(i, i) * mp.x(2, 2)).sqrt().max(f64::MIN_POSITIVE)
}

/// True when `z3` commutes with `z1` and `z2` within tolerance.
pub fn third_commutes(mp: &MomentPair) -> bool {
    mp.len() == 3 && mp.y(0, 2).abs() <= commuting_tol(mp, 0) && mp.y(1, 2).abs() <= commuting_tol(mp, 1)
}

/// Commuting-third form
/// `Δz1Δz2 ≥ sqrt(Y12² + (X12 − X13X23/X33)²) + |X13X23|/X33`.
pub fn coupled_bound_commuting(mp: &MomentPair) -> Result<f64> {
    check_triple(mp)?;
    if !third_commutes(mp) {
        return Err(Error::WrongRegime(format!(
            "third observable does not commute (Y13 = {:e}, Y23 = {:e})",
            mp.y(0, 2),
            mp.y(1, 2)
        )));
    }
    let x33 = mp.x(2, 2);
    let threshold = 1e-12 * mp.scale();
    if !(x33 > threshold) {
        return Err(Error::WrongRegime(format!("X33 = {x33:e} is not positive")));
    }
    let coupling = mp.x(0, 2) * mp.x(1, 2) / x33;
    let shifted = mp.x(0, 1) - coupling;
    Ok((mp.y(0, 1) * mp.y(0, 1) + shifted * shifted).sqrt() + coupling.abs())
}

/// Every bound for `(z1, z2)` with an optional coupled observable `z3`.
///
/// `product`, the bounds and `slack` are on the uncertainty scale `Δz1Δz2`;
/// `variance_product` and `corr_bound` are on the variance scale `σ1σ2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub labels: Vec<String>,
    pub product: f64,
    pub variance_product: f64,
    pub heisenberg: Option<f64>,
    pub robertson: f64,
    pub rs: f64,
    pub corr_coeff_r: Option<f64>,
    pub corr_bound: Option<f64>,
    pub new_bound: Option<f64>,
    pub new_bound_vacuous: Option<bool>,
    pub omega: Option<f64>,
    pub gamma: Option<f64>,
    pub commuting_bound: Option<f64>,
    pub det3_residual: Option<f64>,
    pub best_bound: f64,
    pub slack: f64,
}

impl BoundReport {
    /// Builds the report from moments of `(z1, z2)` or `(z1, z2, z3)`.
    ///
    /// `heisenberg` is `ħ/2` and only supplied for a canonical pair.
    pub fn from_moments(mp: &MomentPair, heisenberg: Option<f64>) -> Result<Self> {
        if !(mp.len() == 2 || mp.len() == 3) {
            return Err(Error::Domain(format!("need 2 or 3 observables, got {}", mp.len())));
        }
        let variance_product = mp.x(0, 0) * mp.x(1, 1);
        let product = variance_product.sqrt();
        let robertson = robertson_bound(mp, 0, 1)?;
        let rs = rs_bound(mp, 0, 1)?;
        let (corr_coeff_r, corr_bound) = match correlation_form(mp, 0, 1) {
            Ok((r, b)) => (Some(r), Some(b)),
            Err(_) => (None, None),
        };
        let mut report = BoundReport {
            labels: mp.labels().to_vec(),
            product,
            variance_product,
            heisenberg,
            robertson,
            rs,
            corr_coeff_r,
            corr_bound,
            new_bound: None,
            new_bound_vacuous: None,
            omega: None,
            gamma: None,
            commuting_bound: None,
            det3_residual: None,
            best_bound: 0.0,
            slack: 0.0,
        };
        if mp.len() == 3 {
            let cb = coupled_bound(mp)?;
            report.new_bound = cb.bound;
            report.new_bound_vacuous = Some(cb.is_vacuous());
            report.omega = Some(cb.omega);
            report.gamma = Some(cb.gamma);
            report.det3_residual = Some(triple_det_residual(mp)?);
            if third_commutes(mp) {
                report.commuting_bound = Some(coupled_bound_commuting(mp)?);
            }
        }
        report.best_bound = report.bounds().into_iter().map(|(_, v)| v).fold(0.0, f64::max);
        report.slack = product - report.best_bound;
        Ok(report)
    }

    /// All applicable bounds on the uncertainty scale.
    pub fn bounds(&self) -> Vec<(&'static str, f64)> {
        let mut out = vec![("robertson", self.robertson), ("rs", self.rs)];
        if let Some(h) = self.heisenberg {
            out.push(("heisenberg", h));
        }
        if let Some(b) = self.new_bound {
            out.push(("new", b));
        }
        if let Some(b) = self.commuting_bound {
            out.push(("commuting", b));
        }
        out
    }

    /// Inequalities broken by more than `rel_tol` of their natural scale,
    /// as `(name, excess)`. Empty for every physical state.
    pub fn violations(&self, rel_tol: f64) -> Vec<(&'static str, f64)> {
        let mut out: Vec<(&'static str, f64)> = self
            .bounds()
            .into_iter()
            .map(|(name, b)| (name, b - self.product))
            .filter(|(_, excess)| *excess > rel_tol * self.product)
            .collect();
        if let Some(cb) = self.corr_bound {
            let excess = cb - self.variance_product;
            if excess > rel_tol * self.variance_product {
                out.push(("correlation", excess));
            }
        }
        out
    }
}

/// Evaluates every bound for `(z1, z2)` given optional `z3` in `state`.
pub fn bound_report(
    state: &State,
    z1: &Observable,
    z2: &Observable,
    z3: Option<&Observable>,
    cfg: &PhysConfig,
) -> Result<BoundReport> {
    let mut obs = vec![z1.clone(), z2.clone()];
    obs.extend(z3.cloned());
    let mp = covariance_matrices(state, &obs, cfg)?;
    let hbar = match state {
        State::Gaussian(g) => g.hbar(),
        _ => cfg.hbar,
    };
    let heisenberg = Observable::canonical_pair(z1, z2).then_some(hbar / 2.0);
    BoundReport::from_moments(&mp, heisenberg)
}

/// Purities within `1e-12` above one, as measured on pure states, count as one.
pub(crate) fn check_mu(mu: f64) -> Result<f64> {
    if mu > 1.0 && mu <= 1.0 + 1e-12 {
        return Ok(1.0);
    }
    if !(mu > 0.0 && mu <= 1.0) {
        return Err(Error::Domain(format!("purity must lie in (0, 1], got {mu}")));
    }
    Ok(mu)
}

/// `Φ̃(μ) = (4 + sqrt(16 + 9μ²)) / (9μ)`.
pub fn phi_tilde(mu: f64) -> Result<f64> {
    let mu = check_mu(mu)?;
    Ok((4.0 + (16.0 + 9.0 * mu * mu).sqrt()) / (9.0 * mu))
}

/// Small-purity expansion `8/(9μ)·(1 + 9μ²/64)`.
pub fn phi_asymptotic(mu: f64) -> Result<f64> {
    let mu = check_mu(mu)?;
    Ok(8.0 / (9.0 * mu) * (1.0 + 9.0 * mu * mu / 64.0))
}

/// `(ħ/2)·Φ̃(μ)`, the purity-bounded floor on `sqrt(σ_xxσ_pp − σ_xp²)`.
pub fn purity_bound(mu: f64, cfg: &PhysConfig) -> Result<f64> {
    Ok(cfg.hbar / 2.0 * phi_tilde(mu)?)
}
