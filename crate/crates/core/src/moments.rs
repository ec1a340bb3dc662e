//! Second-moment matrices of observable lists and their positivity.
//!
//! For observables `z_1..z_N` the real matrices
//! `X_mn = ½<{δz_m, δz_n}>` and `Y_mn = (1/2i)<[z_m, z_n]>` combine into the
//! Hermitian Gram matrix `F = X + iY = <δz_m δz_n>`, which is positive
//! semidefinite for every state.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::PhysConfig;
use crate::error::{Error, Result};
use crate::state::{GaussianState, GridWavefunction, Observable, ObservableRepr, Quadrature, State};

/// Means and the `(X, Y)` moment matrices of an observable list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MomentPairJson", into = "MomentPairJson")]
pub struct MomentPair {
    labels: Vec<String>,
    means: Vec<f64>,
    x: DMatrix<f64>,
    y: DMatrix<f64>,
}

#[derive(Serialize, Deserialize)]
struct MomentPairJson {
    labels: Vec<String>,
    means: Vec<f64>,
    #[serde(rename = "X")]
    x: Vec<Vec<f64>>,
    #[serde(rename = "Y")]
    y: Vec<Vec<f64>>,
}

fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn from_rows(rows: &[Vec<f64>], n: usize, what: &str) -> Result<DMatrix<f64>> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidState(format!("{what} must be {n}x{n}")));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

impl From<MomentPair> for MomentPairJson {
    fn from(mp: MomentPair) -> Self {
        MomentPairJson {
            x: to_rows(&mp.x),
            y: to_rows(&mp.y),
            labels: mp.labels,
            means: mp.means,
        }
    }
}

impl TryFrom<MomentPairJson> for MomentPair {
    type Error = Error;

    fn try_from(j: MomentPairJson) -> Result<Self> {
        let n = j.labels.len();
        let x = from_rows(&j.x, n, "X")?;
        let y = from_rows(&j.y, n, "Y")?;
        MomentPair::new(j.labels, j.means, x, y)
    }
}

impl MomentPair {
    /// Checks shapes, symmetry of `X`, antisymmetry of `Y` and `X_nn ≥ 0`.
    ///
    /// Positivity of `X + iY` is deliberately not enforced here; that is what
    /// [`gram_psd_check`] reports.
    pub fn new(labels: Vec<String>, means: Vec<f64>, x: DMatrix<f64>, y: DMatrix<f64>) -> Result<Self> {
        let n = labels.len();
        if n == 0 || means.len() != n || x.shape() != (n, n) || y.shape() != (n, n) {
            return Err(Error::InvalidState(format!(
                "moment pair shapes disagree with {n} labels"
            )));
        }
        if x.iter().chain(y.iter()).chain(means.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidState("non-finite moment".into()));
        }
        let scale = x.amax().max(y.amax()).max(f64::MIN_POSITIVE);
        let asym = (&x - x.transpose()).amax();
        let sym = (&y + y.transpose()).amax();
        if asym > 1e-12 * scale || sym > 1e-12 * scale {
            return Err(Error::InvalidState(format!(
                "X must be symmetric and Y antisymmetric (deviations {asym:.3e}, {sym:.3e})"
            )));
        }
        if let Some(i) = (0..n).find(|&i| x[(i, i)] < 0.0) {
            return Err(Error::InvalidState(format!("negative variance X[{i}][{i}]")));
        }
        Ok(MomentPair { labels, means, x, y })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn x_matrix(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn y_matrix(&self) -> &DMatrix<f64> {
        &self.y
    }

    pub fn x(&self, i: usize, j: usize) -> f64 {
        self.x[(i, j)]
    }

    pub fn y(&self, i: usize, j: usize) -> f64 {
        self.y[(i, j)]
    }

    /// `Tr X`, the natural scale for relative tolerances.
    pub fn scale(&self) -> f64 {
        self.x.trace()
    }

    /// `F = X + iY`.
    pub fn gram(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.len(), self.len(), |i, j| {
            Complex64::new(self.x[(i, j)], self.y[(i, j)])
        })
    }

    /// Moments of the sub-list `idx` (in that order).
    pub fn select(&self, idx: &[usize]) -> Result<MomentPair> {
        if idx.iter().any(|&i| i >= self.len()) {
            return Err(Error::Domain("moment index out of range".into()));
        }
        let k = idx.len();
        MomentPair::new(
            idx.iter().map(|&i| self.labels[i].clone()).collect(),
            idx.iter().map(|&i| self.means[i]).collect(),
            DMatrix::from_fn(k, k, |a, b| self.x[(idx[a], idx[b])]),
            DMatrix::from_fn(k, k, |a, b| self.y[(idx[a], idx[b])]),
        )
    }

    /// Moments of `(λ_1 z_1, ..., λ_N z_N)`.
    pub fn rescaled(&self, factors: &[f64]) -> Result<MomentPair> {
        if factors.len() != self.len() {
            return Err(Error::Domain("one factor per observable required".into()));
        }
        let n = self.len();
        MomentPair::new(
            self.labels.clone(),
            self.means.iter().zip(factors).map(|(m, f)| m * f).collect(),
            DMatrix::from_fn(n, n, |i, j| self.x[(i, j)] * factors[i] * factors[j]),
            DMatrix::from_fn(n, n, |i, j| self.y[(i, j)] * factors[i] * factors[j]),
        )
    }
}

/// Outcome of the positivity test on `F = X + iY`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsdCertificate {
    pub min_eigenvalue: f64,
    pub det_f: f64,
    pub passed: bool,
    pub tolerance_used: f64,
}

/// Computes `X` and `Y` for `obs` in `state`.
pub fn covariance_matrices(state: &State, obs: &[Observable], cfg: &PhysConfig) -> Result<MomentPair> {
    if obs.is_empty() {
        return Err(Error::Domain("at least one observable required".into()));
    }
    let labels: Vec<String> = obs.iter().map(|o| o.label().to_string()).collect();
    let n = obs.len();
    let mut means = vec![0.0; n];
    let mut x = DMatrix::zeros(n, n);
    let mut y = DMatrix::zeros(n, n);

    match state {
        State::Gaussian(g) => {
            let dim = 2 * g.n_modes();
            let coeffs = obs
                .iter()
                .map(|o| match o.repr() {
                    ObservableRepr::Linear(c) if c.len() == dim => Ok(nalgebra::DVector::from_column_slice(c)),
                    _ => Err(Error::Incompatible(o.label().to_string())),
                })
                .collect::<Result<Vec<_>>>()?;
            let j = GaussianState::symplectic_form(g.n_modes());
            let half = g.hbar() / 2.0;
            for m in 0..n {
                means[m] = coeffs[m].dot(g.mean());
                for k in m..n {
                    let xv = (coeffs[m].transpose() * g.cov() * &coeffs[k])[(0, 0)];
                    x[(m, k)] = xv;
                    x[(k, m)] = xv;
                    if k != m {
                        let yv = half * (coeffs[m].transpose() * &j * &coeffs[k])[(0, 0)];
                        y[(m, k)] = yv;
                        y[(k, m)] = -yv;
                    }
                }
            }
        }
        State::Fock(f) => {
            let mut ops = Vec::with_capacity(n);
            for o in obs {
                match o.repr() {
                    ObservableRepr::Matrix {
                        op,
                        truncated_quadrature,
                        ..
                    } if op.nrows() == f.dim() => {
                        if *truncated_quadrature {
                            f.check_truncation()?;
                        }
                        ops.push(op);
                    }
                    _ => return Err(Error::Incompatible(o.label().to_string())),
                }
            }
            // ρA_m is reused for every <A_m A_k>.
            let rho_ops: Vec<DMatrix<Complex64>> = ops.iter().map(|a| f.rho() * *a).collect();
            for m in 0..n {
                means[m] = rho_ops[m].trace().re;
            }
            for m in 0..n {
                for k in m..n {
                    let second = trace_of_product(&rho_ops[m], ops[k]);
                    let xv = second.re - means[m] * means[k];
                    x[(m, k)] = xv;
                    x[(k, m)] = xv;
                    if k != m {
                        y[(m, k)] = second.im;
                        y[(k, m)] = -second.im;
                    }
                }
            }
        }
        State::Grid(psi) => {
            let specs = obs
                .iter()
                .map(|o| match o.repr() {
                    ObservableRepr::Grid { axis, kind } if *axis < psi.axes().len() => Ok((*axis, *kind)),
                    _ => Err(Error::Incompatible(o.label().to_string())),
                })
                .collect::<Result<Vec<_>>>()?;
            let applied: Vec<Vec<Complex64>> = specs
                .iter()
                .map(|&(axis, kind)| psi.apply(axis, kind, cfg.hbar))
                .collect();
            for m in 0..n {
                means[m] = psi.inner(psi.amplitudes(), &applied[m]).re;
            }
            for m in 0..n {
                for k in m..n {
                    let xv = psi.inner(&applied[m], &applied[k]).re - means[m] * means[k];
                    x[(m, k)] = xv;
                    x[(k, m)] = xv;
                    if k != m {
                        let yv = canonical_commutator(specs[m], specs[k], cfg.hbar);
                        y[(m, k)] = yv;
                        y[(k, m)] = -yv;
                    }
                }
            }
        }
    }
    MomentPair::new(labels, means, x, y)
}

/// `Tr(AB)` without forming the product.
fn trace_of_product(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Complex64 {
    let n = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// `(1/2i)<[z_m, z_k]>` for grid quadratures: `[x_a, p_b] = iħδ_ab`.
fn canonical_commutator(m: (usize, Quadrature), k: (usize, Quadrature), hbar: f64) -> f64 {
    if m.0 != k.0 {
        return 0.0;
    }
    match (m.1, k.1) {
        (Quadrature::Position, Quadrature::Momentum) => hbar / 2.0,
        (Quadrature::Momentum, Quadrature::Position) => -hbar / 2.0,
        _ => 0.0,
    }
}

/// Eigen-decomposes `F = X + iY`; passes iff `λ_min ≥ −rel_tol·Tr X`.
pub fn gram_psd_check(mp: &MomentPair, rel_tol: f64) -> PsdCertificate {
    let eig = mp.gram().symmetric_eigenvalues();
    let min_eigenvalue = eig.min();
    let det_f = eig.iter().product();
    let tolerance_used = rel_tol * mp.scale().abs();
    PsdCertificate {
        min_eigenvalue,
        det_f,
        passed: min_eigenvalue >= -tolerance_used,
        tolerance_used,
    }
}

/// Default relative tolerance of [`gram_psd_check`].
pub const PSD_REL_TOL: f64 = 1e-10;

/// `μ = Tr ρ²`. Grid states are pure by construction and return exactly 1;
/// Gaussian states use `μ = (ħ/2)ⁿ / sqrt(det σ)`.
pub fn purity(state: &State) -> f64 {
    match state {
        State::Grid(_) => 1.0,
        State::Fock(f) => f.purity(),
        State::Gaussian(g) => {
            let n = g.n_modes() as i32;
            (g.hbar() / 2.0).powi(n) / g.cov().determinant().sqrt()
        }
    }
}

/// Moments of one mode of a two-mode grid state and the purity of its
/// reduced density matrix `ρ(x, x') = ∫ψ(x, y)ψ*(x', y)dy`.
///
/// Purity is the trapezoid double integral `∫∫|ρ(x, x')|²dx dx'`. The
/// returned Gaussian state holds the kept mode's first and second moments.
pub fn reduced_moments(psi: &GridWavefunction, keep: usize, cfg: &PhysConfig) -> Result<(GaussianState, f64)> {
    if psi.axes().len() != 2 || keep > 1 {
        return Err(Error::Domain(
            "reduced moments need a two-mode grid and keep in {0, 1}".into(),
        ));
    }
    let norm = psi.norm_sqr();
    if (norm - 1.0).abs() > 1e-6 {
        return Err(Error::Accuracy(format!("norm drifted to {norm}")));
    }
    let obs = [
        Observable::grid("x", keep, Quadrature::Position),
        Observable::grid("p", keep, Quadrature::Momentum),
    ];
    let mp = covariance_matrices(&State::Grid(psi.clone()), &obs, cfg)?;
    let cov = DMatrix::from_row_slice(2, 2, &[mp.x(0, 0), mp.x(0, 1), mp.x(1, 0), mp.x(1, 1)]);
    let reduced = GaussianState::new(mp.means().to_vec(), cov, cfg.hbar)?;

    // Φ[k, t] = sqrt(w_k w_t) ψ(k, t); μ = ‖ΦΦ†‖²_F, done with two real products.
    let (ax, ay) = (psi.axes()[0], psi.axes()[1]);
    let (nk, nt) = if keep == 0 {
        (ax.count, ay.count)
    } else {
        (ay.count, ax.count)
    };
    let (wk, wt) = if keep == 0 {
        (ax.weights(), ay.weights())
    } else {
        (ay.weights(), ax.weights())
    };
    let amps = psi.amplitudes();
    let at = |k: usize, t: usize| {
        if keep == 0 {
            amps[k * ay.count + t]
        } else {
            amps[t * ay.count + k]
        }
    };
    let mut c = DMatrix::<f64>::zeros(nk, 2 * nt);
    let mut e = DMatrix::<f64>::zeros(nk, 2 * nt);
    for k in 0..nk {
        for t in 0..nt {
            let z = at(k, t) * (wk[k] * wt[t]).sqrt();
            c[(k, t)] = z.re;
            c[(k, nt + t)] = z.im;
            e[(k, t)] = z.im;
            e[(k, nt + t)] = -z.re;
        }
    }
    let ct = c.transpose();
    let re = &c * &ct;
    let im = &e * &ct;
    let trace = re.trace();
    if (trace - 1.0).abs() > 1e-6 {
        return Err(Error::Accuracy(format!("reduced trace drifted to {trace}")));
    }
    let mu = re.iter().chain(im.iter()).map(|v| v * v).sum::<f64>();
    Ok((reduced, mu))
}
