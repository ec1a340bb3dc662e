//! JSON state files accepted by the command-line tool.
//!
//! ```json
//! {"type":"gaussian","hbar":1.0,"mean":[0,0],"cov":[[0.5,0],[0,0.5]]}
//! {"type":"fock_mixture","probs":[0.6,0.3,0.1]}
//! {"type":"grid_psi","axes":[{"origin":-10,"step":0.05,"count":401}],"re":[..],"im":[..]}
//! {"type":"entangled_gaussian","a":1,"c":1,"b_re":0.5,"b_im":0.5}
//! ```
//!
//! Any of these may carry `"observables": ["x", "p", {"re": [[..]], "im": [[..]]}]`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Deserialize;

use crate::config::PhysConfig;
use crate::error::{Error, Result};
use crate::state::{
    make_entangled_gaussian, make_fock_mixture, Axis, GaussianState, GridWavefunction, Observable, State,
};

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum StateSpec {
    Gaussian {
        hbar: Option<f64>,
        mean: Vec<f64>,
        cov: Vec<Vec<f64>>,
    },
    FockMixture {
        probs: Vec<f64>,
    },
    GridPsi {
        axes: Vec<Axis>,
        re: Vec<f64>,
        im: Vec<f64>,
    },
    EntangledGaussian {
        a: f64,
        c: f64,
        b_re: f64,
        b_im: f64,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ObservableSpec {
    Label(String),
    Matrix {
        label: Option<String>,
        re: Vec<Vec<f64>>,
        #[serde(default)]
        im: Option<Vec<Vec<f64>>>,
    },
}

#[derive(Debug, Clone, Deserialize)]
pub struct StateFile {
    #[serde(flatten)]
    pub state: StateSpec,
    #[serde(default)]
    pub observables: Option<Vec<ObservableSpec>>,
}

impl StateFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn square(rows: &[Vec<f64>], what: &str) -> Result<DMatrix<f64>> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidState(format!("{what} must be a non-empty square matrix")));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

impl StateSpec {
    pub fn build(&self, cfg: &PhysConfig) -> Result<State> {
        match self {
            StateSpec::Gaussian { hbar, mean, cov } => {
                let cov = square(cov, "cov")?;
                Ok(GaussianState::new(mean.clone(), cov, hbar.unwrap_or(cfg.hbar))?.into())
            }
            StateSpec::FockMixture { probs } => Ok(make_fock_mixture(probs)?.into()),
            StateSpec::GridPsi { axes, re, im } => {
                if re.len() != im.len() {
                    return Err(Error::InvalidState("re and im lengths differ".into()));
                }
                let amps = re.iter().zip(im).map(|(r, i)| Complex64::new(*r, *i)).collect();
                Ok(GridWavefunction::new(axes.clone(), amps)?.into())
            }
            StateSpec::EntangledGaussian { a, c, b_re, b_im } => {
                Ok(make_entangled_gaussian(*a, *c, Complex64::new(*b_re, *b_im), None, cfg)?.into())
            }
        }
    }

    /// The `ħ` the built state uses.
    pub fn hbar(&self, cfg: &PhysConfig) -> f64 {
        match self {
            StateSpec::Gaussian { hbar: Some(h), .. } => *h,
            _ => cfg.hbar,
        }
    }
}

impl ObservableSpec {
    pub fn resolve(&self, state: &State, cfg: &PhysConfig, index: usize) -> Result<Observable> {
        match self {
            ObservableSpec::Label(l) => Observable::from_label(l, state, cfg),
            ObservableSpec::Matrix { label, re, im } => {
                let label = label.clone().unwrap_or_else(|| format!("z{}", index + 1));
                let re = square(re, &label)?;
                let im = match im {
                    Some(rows) => square(rows, &label)?,
                    None => DMatrix::zeros(re.nrows(), re.ncols()),
                };
                if im.shape() != re.shape() {
                    return Err(Error::InvalidObservable {
                        label,
                        reason: "re and im shapes differ".into(),
                    });
                }
                let op = DMatrix::from_fn(re.nrows(), re.ncols(), |i, j| Complex64::new(re[(i, j)], im[(i, j)]));
                Observable::matrix(label, op)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_state_kind() {
        let cfg = PhysConfig::default();
        let g = StateFile::parse(r#"{"type":"gaussian","hbar":2.0,"mean":[0,0],"cov":[[1,0],[0,1]]}"#).unwrap();
        assert!(matches!(g.state.build(&cfg).unwrap(), State::Gaussian(_)));
        assert_eq!(g.state.hbar(&cfg), 2.0);

        let f = StateFile::parse(r#"{"type":"fock_mixture","probs":[0.5,0.5],"observables":["x","p"]}"#).unwrap();
        assert!(matches!(f.state.build(&cfg).unwrap(), State::Fock(_)));
        assert_eq!(f.observables.unwrap().len(), 2);

        let e = StateFile::parse(r#"{"type":"entangled_gaussian","a":1,"c":1,"b_re":0.5,"b_im":0.5}"#).unwrap();
        assert!(matches!(e.state.build(&cfg).unwrap(), State::Grid(_)));
    }

    #[test]
    fn inline_matrix_observables() {
        let cfg = PhysConfig::default();
        let f = StateFile::parse(
            r#"{"type":"fock_mixture","probs":[1.0],
                "observables":[{"re":[[0,1],[1,0]]},{"label":"sy","re":[[0,0],[0,0]],"im":[[0,-1],[1,0]]}]}"#,
        )
        .unwrap();
        let state = f.state.build(&cfg).unwrap();
        let obs = f.observables.unwrap();
        let a = obs[0].resolve(&state, &cfg, 0).unwrap();
        let b = obs[1].resolve(&state, &cfg, 1).unwrap();
        assert_eq!(a.label(), "z1");
        assert_eq!(b.label(), "sy");
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(StateFile::parse("{not json"), Err(Error::Parse(_))));
        assert!(StateFile::parse(r#"{"type":"teapot"}"#).is_err());
        let cfg = PhysConfig::default();
        let bad = StateFile::parse(r#"{"type":"gaussian","mean":[0,0],"cov":[[0.1,0],[0,0.1]]}"#).unwrap();
        assert!(matches!(bad.state.build(&cfg), Err(Error::InvalidState(_))));
        let nn = StateFile::parse(r#"{"type":"entangled_gaussian","a":1,"c":1,"b_re":1.1,"b_im":0}"#).unwrap();
        assert!(matches!(nn.state.build(&cfg), Err(Error::NonNormalizable(_))));
    }
}
