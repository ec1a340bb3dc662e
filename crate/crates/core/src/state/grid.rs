use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::observable::Quadrature;
use crate::config::PhysConfig;
use crate::error::{Error, Result};

pub const DEFAULT_GRID_POINTS: usize = 512;
/// Auto-selected grids span the mean ± this many standard deviations.
pub const GRID_HALF_WIDTH_SD: f64 = 10.0;
const MAX_GRID_POINTS: usize = 4096;
/// Nyquist wavenumber is kept this many times above the 10σ momentum extent.
const NYQUIST_MARGIN: f64 = 3.0;
const NORM_TOL: f64 = 1e-8;
const TAIL_TOL: f64 = 1e-10;

/// Eighth-order central first-derivative weights for offsets 1..=4.
const D1: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];

/// Uniform grid axis: `origin + i·step` for `i < count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub origin: f64,
    pub step: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(origin: f64, step: f64, count: usize) -> Result<Self> {
        if !(step > 0.0 && step.is_finite() && origin.is_finite()) || count < 3 {
            return Err(Error::InvalidState(format!(
                "axis needs positive step and >= 3 points (step {step}, count {count})"
            )));
        }
        Ok(Axis { origin, step, count })
    }

    /// `count` points symmetric about `center`.
    pub fn centered(center: f64, half_width: f64, count: usize) -> Result<Self> {
        Self::new(center - half_width, 2.0 * half_width / (count - 1) as f64, count)
    }

    /// Axis for a state with position mean/sd and wavenumber mean/sd.
    ///
    /// Extent is `mean ± 10 sd`; the step keeps the Nyquist wavenumber a
    /// factor `NYQUIST_MARGIN` above `|k̄| + 10 k_sd`; never fewer than
    /// [`DEFAULT_GRID_POINTS`] points.
    pub fn auto(mean: f64, sd: f64, k_mean: f64, k_sd: f64) -> Result<Self> {
        let half = GRID_HALF_WIDTH_SD * sd;
        let k_max = k_mean.abs() + GRID_HALF_WIDTH_SD * k_sd;
        let max_step = PI / (NYQUIST_MARGIN * k_max);
        let needed = (2.0 * half / max_step).ceil() as usize + 1;
        let count = needed.max(DEFAULT_GRID_POINTS);
        if count > MAX_GRID_POINTS {
            return Err(Error::Domain(format!(
                "state needs {count} grid points per axis (limit {MAX_GRID_POINTS})"
            )));
        }
        Self::centered(mean, half, count)
    }

    pub fn coord(&self, i: usize) -> f64 {
        self.origin + i as f64 * self.step
    }

    pub fn coords(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.coord(i))
    }

    /// Trapezoid weights along the axis.
    pub fn weights(&self) -> Vec<f64> {
        let mut w = vec![self.step; self.count];
        w[0] *= 0.5;
        w[self.count - 1] *= 0.5;
        w
    }
}

/// Pure state sampled on a 1D or 2D uniform grid, row-major (last axis fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct GridWavefunction {
    axes: Vec<Axis>,
    amps: Vec<Complex64>,
}

impl GridWavefunction {
    /// Validates trapezoid norm `1 ± 1e-8` and tail containment.
    pub fn new(axes: Vec<Axis>, amps: Vec<Complex64>) -> Result<Self> {
        let psi = Self::unchecked(axes, amps)?;
        let norm = psi.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("grid norm is {norm}, expected 1")));
        }
        psi.check_tails()?;
        Ok(psi)
    }

    /// Samples `f` on the grid and normalises numerically.
    pub fn from_fn(axes: Vec<Axis>, f: impl Fn(&[f64]) -> Complex64) -> Result<Self> {
        let amps = match axes.as_slice() {
            [ax] => ax.coords().map(|x| f(&[x])).collect(),
            [ax, ay] => ax
                .coords()
                .flat_map(|x| ay.coords().map(move |y| (x, y)))
                .map(|(x, y)| f(&[x, y]))
                .collect(),
            _ => return Err(Error::InvalidState("grid must have 1 or 2 axes".into())),
        };
        let mut psi = Self::unchecked(axes, amps)?;
        let norm = psi.norm_sqr();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidState(format!("cannot normalise (norm {norm})")));
        }
        let s = 1.0 / norm.sqrt();
        psi.amps.iter_mut().for_each(|z| *z *= s);
        psi.check_tails()?;
        Ok(psi)
    }

    fn unchecked(axes: Vec<Axis>, amps: Vec<Complex64>) -> Result<Self> {
        if axes.is_empty() || axes.len() > 2 {
            return Err(Error::InvalidState(format!(
                "grid must have 1 or 2 axes, got {}",
                axes.len()
            )));
        }
        for ax in &axes {
            Axis::new(ax.origin, ax.step, ax.count)?;
        }
        let n: usize = axes.iter().map(|a| a.count).product();
        if amps.len() != n {
            return Err(Error::InvalidState(format!(
                "expected {n} amplitudes, got {}",
                amps.len()
            )));
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState("non-finite amplitude".into()));
        }
        Ok(GridWavefunction { axes, amps })
    }

    fn check_tails(&self) -> Result<()> {
        let peak = self.amps.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let mut boundary: f64 = 0.0;
        let strides = self.strides();
        for (idx, z) in self.amps.iter().enumerate() {
            let on_edge = self.axes.iter().zip(&strides).any(|(ax, &s)| {
                let i = (idx / s) % ax.count;
                i == 0 || i == ax.count - 1
            });
            if on_edge {
                boundary = boundary.max(z.norm());
            }
        }
        if boundary >= TAIL_TOL * peak {
            return Err(Error::GridTooSmall { boundary, peak });
        }
        Ok(())
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn strides(&self) -> Vec<usize> {
        match self.axes.as_slice() {
            [_] => vec![1],
            [_, ay] => vec![ay.count, 1],
            _ => unreachable!("validated at construction"),
        }
    }

    /// Tensor-product trapezoid weights, aligned with the amplitudes.
    pub fn weights(&self) -> Vec<f64> {
        match self.axes.as_slice() {
            [ax] => ax.weights(),
            [ax, ay] => {
                let wy = ay.weights();
                ax.weights()
                    .into_iter()
                    .flat_map(|wx| wy.iter().map(move |w| wx * w))
                    .collect()
            }
            _ => unreachable!("validated at construction"),
        }
    }

    /// `∫|ψ|²` by the trapezoid rule.
    pub fn norm_sqr(&self) -> f64 {
        self.weights()
            .iter()
            .zip(&self.amps)
            .map(|(w, z)| w * z.norm_sqr())
            .sum()
    }

    /// `∫ conj(u) v` by the trapezoid rule.
    pub fn inner(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        self.weights()
            .iter()
            .zip(u.iter().zip(v))
            .map(|(w, (a, b))| a.conj() * b * *w)
            .sum()
    }

    /// `∂ψ/∂x_axis` from an eighth-order central stencil; samples beyond the
    /// grid are taken as zero.
    pub fn derivative(&self, axis: usize) -> Vec<Complex64> {
        let ax = self.axes[axis];
        let stride = self.strides()[axis];
        let h = ax.step;
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (idx, slot) in out.iter_mut().enumerate() {
            let i = (idx / stride) % ax.count;
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, c) in D1.iter().enumerate() {
                let off = k + 1;
                let fwd = if i + off < ax.count {
                    self.amps[idx + off * stride]
                } else {
                    Complex64::new(0.0, 0.0)
                };
                let bwd = if i >= off {
                    self.amps[idx - off * stride]
                } else {
                    Complex64::new(0.0, 0.0)
                };
                acc += (fwd - bwd) * *c;
            }
            *slot = acc / h;
        }
        out
    }

    /// `ẑψ` for a position (multiplication) or momentum (`-iħ∂`) quadrature.
    pub fn apply(&self, axis: usize, kind: Quadrature, hbar: f64) -> Vec<Complex64> {
        match kind {
            Quadrature::Position => {
                let ax = self.axes[axis];
                let stride = self.strides()[axis];
                self.amps
                    .iter()
                    .enumerate()
                    .map(|(idx, z)| z * ax.coord((idx / stride) % ax.count))
                    .collect()
            }
            Quadrature::Momentum => {
                let f = Complex64::new(0.0, -hbar);
                self.derivative(axis).into_iter().map(|d| d * f).collect()
            }
        }
    }
}

/// Correlated coherent state
/// `ψ(x) = (2πσ_x)^{-1/4} exp[-x²(1 - i r/√(1-r²))/(4σ_x) + αx/√σ_x - (α² + |α|²)/2]`.
///
/// Its position variance is `sigma_x` and its correlation coefficient is `r`,
/// so `σ_xσ_p = ħ²/(4(1 - r²))`.
pub fn make_correlated_coherent(
    sigma_x: f64,
    r: f64,
    alpha: Complex64,
    grid: Option<Axis>,
    _cfg: &PhysConfig,
) -> Result<GridWavefunction> {
    if !(sigma_x > 0.0 && sigma_x.is_finite()) {
        return Err(Error::Domain(format!("sigma_x must be positive, got {sigma_x}")));
    }
    if !(r.abs() < 1.0) {
        return Err(Error::Domain(format!("r must lie in (-1, 1), got {r}")));
    }
    let kappa = r / (1.0 - r * r).sqrt();
    let sqrt_sx = sigma_x.sqrt();
    let axis = match grid {
        Some(ax) => ax,
        None => {
            let x_mean = 2.0 * sqrt_sx * alpha.re;
            let k_mean = kappa * x_mean / (2.0 * sigma_x) + alpha.im / sqrt_sx;
            let k_sd = 1.0 / (2.0 * (sigma_x * (1.0 - r * r)).sqrt());
            Axis::auto(x_mean, sqrt_sx, k_mean, k_sd)?
        }
    };
    let quad = Complex64::new(1.0, -kappa) / (4.0 * sigma_x);
    let constant = -(alpha * alpha + alpha.norm_sqr()) / 2.0;
    let prefactor = (2.0 * PI * sigma_x).powf(-0.25);
    GridWavefunction::from_fn(vec![axis], |pt| {
        let x = pt[0];
        (-quad * x * x + alpha * x / sqrt_sx + constant).exp() * prefactor
    })
}

/// Two-mode Gaussian `ψ(x, y) ∝ exp(-a x²/2 - b x y - c y²/2)` with real
/// `a, c > 0` and complex `b`; normalisable iff `D = ac - Re(b)² > 0`.
pub fn make_entangled_gaussian(
    a: f64,
    c: f64,
    b: Complex64,
    grid: Option<[Axis; 2]>,
    _cfg: &PhysConfig,
) -> Result<GridWavefunction> {
    if !(a > 0.0 && c > 0.0 && a.is_finite() && c.is_finite()) {
        return Err(Error::Domain(format!("a and c must be positive, got a={a}, c={c}")));
    }
    let d = a * c - b.re * b.re;
    if !(d > 0.0) {
        return Err(Error::NonNormalizable(d));
    }
    let [ax, ay] = match grid {
        Some(axes) => axes,
        None => {
            let spread = (d + b.im * b.im) / (2.0 * d);
            [
                Axis::auto(0.0, (c / (2.0 * d)).sqrt(), 0.0, (a * spread).sqrt())?,
                Axis::auto(0.0, (a / (2.0 * d)).sqrt(), 0.0, (c * spread).sqrt())?,
            ]
        }
    };
    GridWavefunction::from_fn(vec![ax, ay], |pt| {
        let (x, y) = (pt[0], pt[1]);
        (-(b * x * y) - 0.5 * a * x * x - 0.5 * c * y * y).exp()
    })
}
