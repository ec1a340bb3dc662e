//! Seeded generators of physical states and observables for randomized sweeps.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::f64::consts::PI;

use super::{FockMixedState, GaussianState, Observable};
use crate::config::PhysConfig;
use crate::error::Result;

/// Deterministic generator for `(seed, stream)`; sweeps give each trial
/// its own stream so results do not depend on scheduling.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) / 2f64.sqrt()
}

fn rotation(n_modes: usize, mode: usize, theta: f64) -> DMatrix<f64> {
    let mut s = DMatrix::identity(2 * n_modes, 2 * n_modes);
    let (sin, cos) = theta.sin_cos();
    let (q, p) = (2 * mode, 2 * mode + 1);
    s[(q, q)] = cos;
    s[(q, p)] = sin;
    s[(p, q)] = -sin;
    s[(p, p)] = cos;
    s
}

fn squeezer(n_modes: usize, mode: usize, r: f64) -> DMatrix<f64> {
    let mut s = DMatrix::identity(2 * n_modes, 2 * n_modes);
    s[(2 * mode, 2 * mode)] = (-r).exp();
    s[(2 * mode + 1, 2 * mode + 1)] = r.exp();
    s
}

fn beam_splitter(n_modes: usize, m: usize, theta: f64) -> DMatrix<f64> {
    let mut s = DMatrix::identity(2 * n_modes, 2 * n_modes);
    let (sin, cos) = theta.sin_cos();
    for k in 0..2 {
        let (i, j) = (2 * m + k, 2 * (m + 1) + k);
        s[(i, i)] = cos;
        s[(j, j)] = cos;
        s[(i, j)] = sin;
        s[(j, i)] = -sin;
    }
    s
}

/// `σ = (ħ/2)·S·diag(2n̄_k + 1)·Sᵀ` with `S` a product of random rotations,
/// squeezers (`|r| ≤ 1`) and beam splitters, and `n̄_k ∈ [0, 2]`.
pub fn random_gaussian_state_with<R: Rng + ?Sized>(
    rng: &mut R,
    n_modes: usize,
    cfg: &PhysConfig,
) -> Result<GaussianState> {
    let n = n_modes.max(1);
    let mut s = DMatrix::identity(2 * n, 2 * n);
    for layer in 0..2 {
        for m in 0..n {
            s = rotation(n, m, rng.random_range(0.0..2.0 * PI)) * s;
            if layer == 0 {
                s = squeezer(n, m, rng.random_range(-1.0..1.0)) * s;
            }
        }
        for m in 0..n.saturating_sub(1) {
            s = beam_splitter(n, m, rng.random_range(0.0..2.0 * PI)) * s;
        }
    }
    let mut thermal = DMatrix::zeros(2 * n, 2 * n);
    for m in 0..n {
        let occ: f64 = rng.random_range(0.0..2.0);
        thermal[(2 * m, 2 * m)] = 2.0 * occ + 1.0;
        thermal[(2 * m + 1, 2 * m + 1)] = 2.0 * occ + 1.0;
    }
    let mut cov = &s * thermal * s.transpose() * (cfg.hbar / 2.0);
    cov = (&cov + cov.transpose()) * 0.5;
    let mean = (0..2 * n).map(|_| rng.random_range(-2.0..2.0)).collect();
    GaussianState::new(mean, cov, cfg.hbar)
}

pub fn random_gaussian_state(seed: u64, n_modes: usize, cfg: &PhysConfig) -> Result<GaussianState> {
    random_gaussian_state_with(&mut rng_for(seed, 0), n_modes, cfg)
}

/// `ρ = GG†/Tr(GG†)` with `G` a `dim × k` complex Ginibre matrix and the
/// rank `k` uniform in `1..=dim`, so purities cover the whole range.
pub fn random_density_matrix_with<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<FockMixedState> {
    let dim = dim.max(1);
    let rank = rng.random_range(1..=dim);
    let g = DMatrix::from_fn(dim, rank, |_, _| complex_normal(rng));
    let mut rho = &g * g.adjoint();
    let tr = rho.trace();
    rho /= tr;
    rho = (&rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
    FockMixedState::new(rho)
}

pub fn random_density_matrix(seed: u64, dim: usize) -> Result<FockMixedState> {
    random_density_matrix_with(&mut rng_for(seed, 0), dim)
}

/// `scale·(G + G†)/2` with `G` complex Ginibre.
pub fn random_hermitian_with<R: Rng + ?Sized>(rng: &mut R, dim: usize, scale: f64, label: &str) -> Result<Observable> {
    let dim = dim.max(1);
    let g = DMatrix::from_fn(dim, dim, |_, _| complex_normal(rng));
    let h = (&g + g.adjoint()) * Complex64::new(0.5 * scale, 0.0);
    Observable::matrix(label, h)
}

pub fn random_hermitian(seed: u64, dim: usize, scale: f64) -> Result<Observable> {
    random_hermitian_with(&mut rng_for(seed, 0), dim, scale, "h")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_contracts() {
        let cfg = PhysConfig::default();
        let g = random_gaussian_state(0, 1, &cfg).unwrap();
        assert!(g.uncertainty_min_eigenvalue() >= -1e-10 * g.cov().trace());
        random_gaussian_state(3, 2, &cfg).unwrap();

        let rho = random_density_matrix(7, 4).unwrap();
        let eig = rho.rho().clone().symmetric_eigenvalues();
        assert!(eig.iter().all(|&e| e >= -1e-12));
        assert!((rho.rho().trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn generators_are_deterministic() {
        let cfg = PhysConfig::default();
        assert_eq!(
            random_density_matrix(7, 4).unwrap(),
            random_density_matrix(7, 4).unwrap()
        );
        assert_eq!(
            random_gaussian_state(7, 2, &cfg).unwrap(),
            random_gaussian_state(7, 2, &cfg).unwrap()
        );
        assert_eq!(
            random_hermitian(7, 3, 1.0).unwrap(),
            random_hermitian(7, 3, 1.0).unwrap()
        );
        assert_ne!(
            random_density_matrix(7, 4).unwrap(),
            random_density_matrix(8, 4).unwrap()
        );
    }
}
