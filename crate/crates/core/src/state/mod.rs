//! Quantum states and observables on which the bounds are evaluated.
//!
//! Three representations are supported: Gaussian states (mean vector and
//! covariance matrix), density matrices in a truncated oscillator number
//! basis, and pure wavefunctions sampled on a uniform 1D or 2D grid.

mod fock;
mod gaussian;
mod grid;
mod observable;
mod random;

pub use fock::{make_fock_mixture, quadrature_observables, FockMixedState};
pub use gaussian::{make_thermal, GaussianState};
pub use grid::{
    make_correlated_coherent, make_entangled_gaussian, Axis, GridWavefunction, DEFAULT_GRID_POINTS, GRID_HALF_WIDTH_SD,
};
pub use observable::{Observable, ObservableRepr, Quadrature};
pub use random::{
    random_density_matrix, random_density_matrix_with, random_gaussian_state, random_gaussian_state_with,
    random_hermitian, random_hermitian_with, rng_for,
};

/// Any state the moment machinery accepts.
#[derive(Debug, Clone)]
pub enum State {
    Gaussian(GaussianState),
    Fock(FockMixedState),
    Grid(GridWavefunction),
}

impl State {
    pub fn kind(&self) -> &'static str {
        match self {
            State::Gaussian(_) => "gaussian",
            State::Fock(_) => "fock",
            State::Grid(_) => "grid",
        }
    }
}

impl From<GaussianState> for State {
    fn from(s: GaussianState) -> Self {
        State::Gaussian(s)
    }
}

impl From<FockMixedState> for State {
    fn from(s: FockMixedState) -> Self {
        State::Fock(s)
    }
}

impl From<GridWavefunction> for State {
    fn from(s: GridWavefunction) -> Self {
        State::Grid(s)
    }
}
