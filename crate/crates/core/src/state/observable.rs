use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{fock, State};
use crate::config::PhysConfig;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    Position,
    Momentum,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ObservableRepr {
    /// Hermitian matrix in the number basis. Quadratures built from ladder
    /// matrices are flagged so the state's truncation is checked before use;
    /// `quadrature` names the unscaled quadrature they represent.
    Matrix {
        op: DMatrix<Complex64>,
        truncated_quadrature: bool,
        quadrature: Option<Quadrature>,
    },
    /// Position or momentum along one axis of a grid wavefunction.
    Grid { axis: usize, kind: Quadrature },
    /// Real linear form `Σ c_k r_k` in the canonical quadratures `(q1, p1, ...)`.
    Linear(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    label: String,
    repr: ObservableRepr,
}

impl Observable {
    pub fn matrix(label: impl Into<String>, op: DMatrix<Complex64>) -> Result<Self> {
        Self::checked_matrix(label.into(), op, None)
    }

    pub(crate) fn truncated_quadrature(label: &str, op: DMatrix<Complex64>, kind: Quadrature) -> Result<Self> {
        Self::checked_matrix(label.to_string(), op, Some(kind))
    }

    fn checked_matrix(label: String, op: DMatrix<Complex64>, quadrature: Option<Quadrature>) -> Result<Self> {
        if op.nrows() == 0 || op.nrows() != op.ncols() {
            return Err(Error::InvalidObservable {
                label,
                reason: format!("matrix must be square, got {}x{}", op.nrows(), op.ncols()),
            });
        }
        let scale = 1.0 + op.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let dev = (&op - op.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if dev > 1e-12 * scale || op.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidObservable {
                label,
                reason: format!("not Hermitian (max deviation {dev:.3e})"),
            });
        }
        Ok(Observable {
            label,
            repr: ObservableRepr::Matrix {
                op,
                truncated_quadrature: quadrature.is_some(),
                quadrature,
            },
        })
    }

    pub fn grid(label: impl Into<String>, axis: usize, kind: Quadrature) -> Self {
        Observable {
            label: label.into(),
            repr: ObservableRepr::Grid { axis, kind },
        }
    }

    pub fn linear(label: impl Into<String>, coeffs: Vec<f64>) -> Result<Self> {
        let label = label.into();
        if coeffs.is_empty() || !coeffs.len().is_multiple_of(2) || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidObservable {
                label,
                reason: "linear form needs 2n finite coefficients".into(),
            });
        }
        Ok(Observable {
            label,
            repr: ObservableRepr::Linear(coeffs),
        })
    }

    /// Canonical quadrature of one mode as a linear form over `n_modes`.
    pub fn mode_quadrature(label: impl Into<String>, n_modes: usize, mode: usize, kind: Quadrature) -> Result<Self> {
        let label = label.into();
        if mode >= n_modes {
            return Err(Error::UnknownObservable(label));
        }
        let mut c = vec![0.0; 2 * n_modes];
        c[2 * mode + usize::from(kind == Quadrature::Momentum)] = 1.0;
        Self::linear(label, c)
    }

    /// Resolves `x`, `p` (`px`, `p_x`), `y`, `py` (`p_y`) against a state.
    pub fn from_label(label: &str, state: &State, cfg: &PhysConfig) -> Result<Self> {
        let (mode, kind) = match label {
            "x" | "q1" => (0, Quadrature::Position),
            "p" | "px" | "p_x" | "p1" => (0, Quadrature::Momentum),
            "y" | "q2" => (1, Quadrature::Position),
            "py" | "p_y" | "p2" => (1, Quadrature::Momentum),
            _ => return Err(Error::UnknownObservable(label.to_string())),
        };
        match state {
            State::Gaussian(g) => Self::mode_quadrature(label, g.n_modes(), mode, kind),
            State::Grid(g) => {
                if mode >= g.axes().len() {
                    return Err(Error::UnknownObservable(label.to_string()));
                }
                Ok(Self::grid(label, mode, kind))
            }
            State::Fock(f) => {
                if mode != 0 {
                    return Err(Error::UnknownObservable(label.to_string()));
                }
                let (x, p) = fock::quadrature_observables(f.dim(), cfg)?;
                let mut obs = if kind == Quadrature::Position { x } else { p };
                obs.label = label.to_string();
                Ok(obs)
            }
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn repr(&self) -> &ObservableRepr {
        &self.repr
    }

    pub fn matrix_op(&self) -> Option<&DMatrix<Complex64>> {
        match &self.repr {
            ObservableRepr::Matrix { op, .. } => Some(op),
            _ => None,
        }
    }

    /// `λ·z` for matrix and linear observables.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        let repr = match &self.repr {
            ObservableRepr::Matrix {
                op,
                truncated_quadrature,
                quadrature,
            } => ObservableRepr::Matrix {
                op: op * Complex64::new(lambda, 0.0),
                truncated_quadrature: *truncated_quadrature,
                quadrature: quadrature.filter(|_| lambda == 1.0),
            },
            ObservableRepr::Linear(c) => ObservableRepr::Linear(c.iter().map(|v| v * lambda).collect()),
            ObservableRepr::Grid { .. } => {
                return Err(Error::InvalidObservable {
                    label: self.label.clone(),
                    reason: "grid quadratures cannot be rescaled".into(),
                })
            }
        };
        Ok(Observable {
            label: self.label.clone(),
            repr,
        })
    }

    /// True when `(a, b)` is a position/momentum pair of the same mode,
    /// the only case where the Heisenberg floor `ħ/2` applies.
    pub fn canonical_pair(a: &Observable, b: &Observable) -> bool {
        match (&a.repr, &b.repr) {
            (ObservableRepr::Grid { axis: ia, kind: ka }, ObservableRepr::Grid { axis: ib, kind: kb }) => {
                ia == ib && ka != kb
            }
            (
                ObservableRepr::Matrix {
                    op: oa,
                    quadrature: Some(ka),
                    ..
                },
                ObservableRepr::Matrix {
                    op: ob,
                    quadrature: Some(kb),
                    ..
                },
            ) => oa.nrows() == ob.nrows() && ka != kb,
            (ObservableRepr::Linear(ca), ObservableRepr::Linear(cb)) => {
                let unit = |c: &[f64]| {
                    let nz: Vec<usize> = (0..c.len()).filter(|&i| c[i] != 0.0).collect();
                    (nz.len() == 1 && c[nz[0]] == 1.0).then(|| nz[0])
                };
                match (unit(ca), unit(cb)) {
                    (Some(i), Some(j)) => i / 2 == j / 2 && i != j,
                    _ => false,
                }
            }
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::GaussianState;

    #[test]
    fn labels_resolve_per_representation() {
        let cfg = PhysConfig::default();
        let g: State = GaussianState::vacuum(2, &cfg).into();
        let x = Observable::from_label("x", &g, &cfg).unwrap();
        let p = Observable::from_label("p_x", &g, &cfg).unwrap();
        let y = Observable::from_label("y", &g, &cfg).unwrap();
        assert!(Observable::canonical_pair(&x, &p));
        assert!(!Observable::canonical_pair(&x, &y));
        assert!(Observable::from_label("z", &g, &cfg).is_err());

        let one: State = GaussianState::vacuum(1, &cfg).into();
        assert!(Observable::from_label("y", &one, &cfg).is_err());
    }

    #[test]
    fn rejects_non_hermitian_matrix() {
        let mut m = DMatrix::from_element(2, 2, Complex64::new(0.0, 0.0));
        m[(0, 1)] = Complex64::new(1.0, 0.0);
        assert!(Observable::matrix("bad", m).is_err());
    }

    #[test]
    fn fock_quadratures_are_canonical_until_rescaled() {
        let cfg = PhysConfig::default();
        let (x, p) = fock::quadrature_observables(6, &cfg).unwrap();
        assert!(Observable::canonical_pair(&x, &p));
        assert!(!Observable::canonical_pair(&x, &x));
        assert!(!Observable::canonical_pair(&x.scaled(2.0).unwrap(), &p));
        let plain = Observable::matrix("x", x.matrix_op().unwrap().clone()).unwrap();
        assert!(!Observable::canonical_pair(&plain, &p));
    }
}
