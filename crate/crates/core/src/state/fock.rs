use nalgebra::DMatrix;
use num_complex::Complex64;

use super::observable::{Observable, Quadrature};
use crate::config::PhysConfig;
use crate::error::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-10;
const EIG_TOL: f64 = 1e-10;
/// Maximum population allowed on the highest retained number state.
pub const TRUNCATION_TOL: f64 = 1e-8;

/// Density matrix in a truncated number basis `|0>, ..., |dim-1>`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockMixedState {
    rho: DMatrix<Complex64>,
}

impl FockMixedState {
    /// Checks Hermiticity, unit trace and positivity.
    ///
    /// Truncation adequacy is a separate check ([`Self::check_truncation`]):
    /// a generic finite-dimensional density matrix is a valid state, the
    /// tail condition only matters once the basis is read as an oscillator.
    pub fn new(rho: DMatrix<Complex64>) -> Result<Self> {
        let dim = rho.nrows();
        if dim == 0 || rho.ncols() != dim {
            return Err(Error::InvalidState(format!(
                "density matrix must be square and non-empty, got {}x{}",
                rho.nrows(),
                rho.ncols()
            )));
        }
        if rho.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState("non-finite density matrix entry".into()));
        }
        let herm = (&rho - rho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!(
                "density matrix not Hermitian (max deviation {herm:.3e})"
            )));
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let min_eig = rho.clone().symmetric_eigenvalues().min();
        if min_eig < -EIG_TOL {
            return Err(Error::InvalidState(format!(
                "density matrix not positive (min eigenvalue {min_eig:.3e})"
            )));
        }
        Ok(FockMixedState { rho })
    }

    /// Pure state `|ψ><ψ|`, normalising the amplitudes.
    pub fn pure(amplitudes: &[Complex64]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let n = amplitudes.len();
        let rho = DMatrix::from_fn(n, n, |i, j| amplitudes[i] * amplitudes[j].conj() / (norm * norm));
        Self::new(rho)
    }

    pub fn number_state(n: usize, dim: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::Truncation(format!("level {n} outside dimension {dim}")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[n] = Complex64::new(1.0, 0.0);
        Self::pure(&amps)
    }

    /// Coherent state `e^{-|α|²/2} Σ αⁿ/√n! |n>` truncated to `dim` levels.
    pub fn coherent(alpha: Complex64, dim: usize) -> Result<Self> {
        let mut amps = Vec::with_capacity(dim);
        let mut c = Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
        for n in 0..dim {
            amps.push(c);
            c = c * alpha / ((n + 1) as f64).sqrt();
        }
        let state = Self::pure(&amps)?;
        state.check_truncation()?;
        Ok(state)
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn rho(&self) -> &DMatrix<Complex64> {
        &self.rho
    }

    /// Population of the highest retained level must stay below 1e-8.
    pub fn check_truncation(&self) -> Result<()> {
        let top = self.rho[(self.dim() - 1, self.dim() - 1)].re;
        if top >= TRUNCATION_TOL {
            return Err(Error::Truncation(format!(
                "top-level occupation {top:.3e} >= {TRUNCATION_TOL:e}; enlarge the basis"
            )));
        }
        Ok(())
    }

    /// Same state in a larger basis, padded with empty levels.
    pub fn embed(&self, dim: usize) -> Result<Self> {
        if dim < self.dim() {
            return Err(Error::Truncation(format!(
                "cannot embed dimension {} into {dim}",
                self.dim()
            )));
        }
        let mut rho = DMatrix::zeros(dim, dim);
        rho.view_mut((0, 0), (self.dim(), self.dim())).copy_from(&self.rho);
        Ok(FockMixedState { rho })
    }

    /// `Tr(ρ A)`.
    pub fn expectation(&self, op: &DMatrix<Complex64>) -> Complex64 {
        (&self.rho * op).trace()
    }

    /// `Tr(ρ²)`; equals `Σ|ρ_ij|²` for Hermitian `ρ`.
    pub fn purity(&self) -> f64 {
        self.rho.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn mean_occupation(&self) -> f64 {
        (0..self.dim()).map(|n| n as f64 * self.rho[(n, n)].re).sum()
    }
}

/// Diagonal mixture `Σ pₙ |n><n|`.
///
/// The basis carries one empty level above the last weight so the
/// truncation condition holds and quadrature moments are exact.
pub fn make_fock_mixture(probs: &[f64]) -> Result<FockMixedState> {
    if probs.is_empty() {
        return Err(Error::InvalidState("empty probability vector".into()));
    }
    if let Some(p) = probs.iter().find(|p| !(**p >= 0.0) || !p.is_finite()) {
        return Err(Error::InvalidState(format!("negative or non-finite weight {p}")));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidState(format!("weights sum to {total}, expected 1")));
    }
    let dim = probs.len() + 1;
    let mut rho = DMatrix::zeros(dim, dim);
    for (n, p) in probs.iter().enumerate() {
        rho[(n, n)] = Complex64::new(*p, 0.0);
    }
    FockMixedState::new(rho)
}

/// Lowering operator `a` with `a|n> = √n |n-1>`.
pub fn annihilation(dim: usize) -> DMatrix<Complex64> {
    let mut a = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// Position and momentum `x = √(ħ/2)(a + a†)`, `p = i√(ħ/2)(a† − a)`.
///
/// `[x, p] = iħ` holds exactly except in the last row and column.
pub fn quadrature_observables(dim: usize, cfg: &PhysConfig) -> Result<(Observable, Observable)> {
    if dim < 2 {
        return Err(Error::Domain(format!("quadrature basis needs dim >= 2, got {dim}")));
    }
    let a = annihilation(dim);
    let ad = a.adjoint();
    let s = (cfg.hbar / 2.0).sqrt();
    let x = (&a + &ad) * Complex64::new(s, 0.0);
    let p = (&ad - &a) * Complex64::new(0.0, s);
    Ok((
        Observable::truncated_quadrature("x", x, Quadrature::Position)?,
        Observable::truncated_quadrature("p", p, Quadrature::Momentum)?,
    ))
}
