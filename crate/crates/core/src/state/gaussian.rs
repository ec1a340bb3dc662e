use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::config::PhysConfig;
use crate::error::{Error, Result};

/// Gaussian state of `n` modes in `(q1, p1, q2, p2, ...)` ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
    hbar: f64,
}

impl GaussianState {
    /// Validates symmetry and the physicality condition `σ + (iħ/2)J ⪰ 0`.
    pub fn new(mean: Vec<f64>, cov: DMatrix<f64>, hbar: f64) -> Result<Self> {
        if !(hbar > 0.0) {
            return Err(Error::InvalidState(format!("hbar must be positive, got {hbar}")));
        }
        let dim = cov.nrows();
        if dim == 0 || !dim.is_multiple_of(2) || cov.ncols() != dim {
            return Err(Error::InvalidState(format!(
                "covariance must be 2n x 2n, got {}x{}",
                cov.nrows(),
                cov.ncols()
            )));
        }
        if mean.len() != dim {
            return Err(Error::InvalidState(format!(
                "mean has length {}, expected {dim}",
                mean.len()
            )));
        }
        if cov.iter().chain(mean.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidState("non-finite entry".into()));
        }
        let scale = 1.0 + cov.amax();
        let asym = (&cov - cov.transpose()).amax();
        if asym > 1e-12 * scale {
            return Err(Error::InvalidState(format!(
                "covariance not symmetric (max asymmetry {asym:.3e})"
            )));
        }
        let state = GaussianState {
            mean: DVector::from_vec(mean),
            cov,
            hbar,
        };
        let min_eig = state.uncertainty_min_eigenvalue();
        let tol = 1e-10 * state.cov.trace().abs();
        if min_eig < -tol {
            return Err(Error::InvalidState(format!(
                "covariance violates sigma + (i hbar/2) J >= 0 (min eigenvalue {min_eig:.3e})"
            )));
        }
        Ok(state)
    }

    /// Minimum-uncertainty vacuum: `σ = (ħ/2)·I`.
    pub fn vacuum(n_modes: usize, cfg: &PhysConfig) -> Self {
        let dim = 2 * n_modes.max(1);
        GaussianState {
            mean: DVector::zeros(dim),
            cov: DMatrix::identity(dim, dim) * (cfg.hbar / 2.0),
            hbar: cfg.hbar,
        }
    }

    /// Block-diagonal symplectic form with `J_{q_k p_k} = 1`.
    pub fn symplectic_form(n_modes: usize) -> DMatrix<f64> {
        let mut j = DMatrix::zeros(2 * n_modes, 2 * n_modes);
        for k in 0..n_modes {
            j[(2 * k, 2 * k + 1)] = 1.0;
            j[(2 * k + 1, 2 * k)] = -1.0;
        }
        j
    }

    /// Smallest eigenvalue of the Hermitian matrix `σ + (iħ/2)J`.
    pub fn uncertainty_min_eigenvalue(&self) -> f64 {
        let j = Self::symplectic_form(self.n_modes());
        let half = self.hbar / 2.0;
        let h = DMatrix::from_fn(self.cov.nrows(), self.cov.ncols(), |r, c| {
            Complex64::new(self.cov[(r, c)], half * j[(r, c)])
        });
        h.symmetric_eigenvalues().min()
    }

    /// Uncorrelated joint state of `self` followed by `other`.
    pub fn direct_sum(&self, other: &GaussianState) -> Result<Self> {
        if (self.hbar - other.hbar).abs() > 1e-15 * self.hbar {
            return Err(Error::InvalidState("hbar mismatch in direct sum".into()));
        }
        let (a, b) = (self.cov.nrows(), other.cov.nrows());
        let mut cov = DMatrix::zeros(a + b, a + b);
        cov.view_mut((0, 0), (a, a)).copy_from(&self.cov);
        cov.view_mut((a, a), (b, b)).copy_from(&other.cov);
        let mean = self.mean.iter().chain(other.mean.iter()).copied().collect();
        GaussianState::new(mean, cov, self.hbar)
    }

    pub fn n_modes(&self) -> usize {
        self.cov.nrows() / 2
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// `(σ_xx, σ_pp, σ_xp)` of mode `k`.
    pub fn mode_moments(&self, k: usize) -> (f64, f64, f64) {
        let (q, p) = (2 * k, 2 * k + 1);
        (self.cov[(q, q)], self.cov[(p, p)], self.cov[(q, p)])
    }
}

/// Equilibrium state of an oscillator with frequency `omega` at temperature `temp`.
///
/// Each quadrature variance carries the factor `coth(ħω / 2k_BT)`; `temp = 0`
/// gives the ground state.
pub fn make_thermal(omega: f64, temp: f64, cfg: &PhysConfig) -> Result<GaussianState> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::Domain(format!("omega must be positive, got {omega}")));
    }
    if !(temp >= 0.0 && temp.is_finite()) {
        return Err(Error::Domain(format!("temperature must be >= 0, got {temp}")));
    }
    let coth = if temp == 0.0 {
        1.0
    } else {
        let arg = cfg.hbar * omega / (2.0 * cfg.kb * temp);
        1.0 / arg.tanh()
    };
    let sxx = cfg.hbar / (2.0 * omega) * coth;
    let spp = cfg.hbar * omega / 2.0 * coth;
    GaussianState::new(
        vec![0.0, 0.0],
        DMatrix::from_row_slice(2, 2, &[sxx, 0.0, 0.0, spp]),
        cfg.hbar,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn thermal_product_follows_coth() {
        let cfg = PhysConfig::default();
        let ground = make_thermal(1.0, 0.0, &cfg).unwrap();
        let (sxx, spp, sxp) = ground.mode_moments(0);
        assert_eq!(sxx * spp, 0.25);
        assert_eq!(sxp, 0.0);

        let warm = make_thermal(1.0, 1.0, &cfg).unwrap();
        let (sxx, spp, _) = warm.mode_moments(0);
        // coth(0.5) = 2.163953413738653
        assert_relative_eq!(sxx * spp, 2.163953413738653f64.powi(2) / 4.0, max_relative = 1e-14);
        assert_relative_eq!(sxx * spp, 1.170665, epsilon = 1e-4);

        let hot = make_thermal(1.0, 10.0, &cfg).unwrap();
        let (sxx, spp, _) = hot.mode_moments(0);
        assert!(sxx * spp > 25.0 * 0.25);
    }

    #[test]
    fn thermal_frequency_only_rescales_quadratures() {
        let cfg = PhysConfig::default();
        let a = make_thermal(1.0, 2.0, &cfg).unwrap();
        let b = make_thermal(3.0, 6.0, &cfg).unwrap();
        let (ax, ap, _) = a.mode_moments(0);
        let (bx, bp, _) = b.mode_moments(0);
        assert_relative_eq!(ax * ap, bx * bp, max_relative = 1e-14);
    }

    #[test]
    fn rejects_unphysical_covariance() {
        let cov = DMatrix::from_row_slice(2, 2, &[0.1, 0.0, 0.0, 0.1]);
        assert!(matches!(
            GaussianState::new(vec![0.0, 0.0], cov, 1.0),
            Err(Error::InvalidState(_))
        ));
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.2, 0.1, 1.0]);
        assert!(GaussianState::new(vec![0.0, 0.0], asym, 1.0).is_err());
        let odd = DMatrix::identity(3, 3);
        assert!(GaussianState::new(vec![0.0; 3], odd, 1.0).is_err());
    }

    #[test]
    fn vacuum_saturates_physicality() {
        let v = GaussianState::vacuum(2, &PhysConfig::default());
        assert!(v.uncertainty_min_eigenvalue().abs() < 1e-14);
        let t = make_thermal(1.0, 0.0, &PhysConfig::default()).unwrap();
        let joint = t.direct_sum(&GaussianState::vacuum(1, &PhysConfig::default())).unwrap();
        assert_eq!(joint.n_modes(), 2);
    }
}
