//! Moment and covariance toolkit for quantum uncertainty relations.
//!
//! The crate computes the symmetric/antisymmetric second-moment matrices
//! `X` and `Y` of a list of observables, checks positivity of the Gram
//! matrix `F = X + iY`, and evaluates a ladder of lower bounds on the
//! uncertainty product `Δz1·Δz2`:
//!
//! - Heisenberg `ħ/2` (canonical pairs only),
//! - Robertson `|Y12|`,
//! - Robertson–Schrödinger `G12 = sqrt(X12² + Y12²)`,
//! - the coupled bound obtained from the three-observable determinant
//!   inequality, `sqrt(G12² + Ω² + 2Γ) + Ω`,
//! - its specialisation for a third observable commuting with the first two.
//!
//! It also ships the closed-form two-mode entangled Gaussian family that
//! saturates the commuting-case bound, and the exact purity-bounded frontier
//! `Φ(μ)` computed over diagonal Fock mixtures.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod config;
pub mod entangled;
pub mod error;
pub mod format;
pub mod frontier;
pub mod io;
pub mod moments;
pub mod state;
pub mod sweep;

pub use bounds::{
    bound_report, correlation_form, coupled_bound, coupled_bound_commuting, phi_asymptotic, phi_tilde, purity_bound,
    rs_bound, triple_det_residual, BoundReport, CoupledBound,
};
pub use config::PhysConfig;
pub use entangled::{
    analytic_covariances, example_purity, saturation_residual, saturation_scan, ExampleParams, ScanRow,
};
pub use error::{Error, Result};
pub use frontier::{frontier_table, min_mean_occupation, phi_exact, FrontierPoint};
pub use moments::{covariance_matrices, gram_psd_check, purity, reduced_moments, MomentPair, PsdCertificate};
pub use state::{
    make_correlated_coherent, make_entangled_gaussian, make_fock_mixture, make_thermal, quadrature_observables,
    random_density_matrix, random_gaussian_state, random_hermitian, Axis, FockMixedState, GaussianState,
    GridWavefunction, Observable, ObservableRepr, Quadrature, State,
};

pub use num_complex::Complex64;
