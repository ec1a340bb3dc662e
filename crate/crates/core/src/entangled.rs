//! Closed forms for the two-mode Gaussian `ψ(x, y) ∝ exp(-a x²/2 - b x y - c y²/2)`.
//!
//! With `D = ac − Re(b)²` the moments of `(x, p_x, y)` are
//!
//! ```text
//! X11 = c/2D            X22 = aħ²(D + Im²b)/2D     X12 = ħ Re(b) Im(b)/2D
//! X33 = a/2D            X13 = −Re(b)/2D            X23 = −aħ Im(b)/2D
//! Y12 = ħ/2             Y13 = Y23 = 0
//! ```
//!
//! and `X12 = X13·X23/X33` identically, so the commuting-third bound reads
//! `Δx·Δp ≥ ħ/2 + |σ_xp|`, with equality exactly on `|Re b| = |Im b|`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::bounds::{coupled_bound_commuting, rs_bound};
use crate::config::PhysConfig;
use crate::error::{Error, Result};
use crate::format::sig;
use crate::moments::MomentPair;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExampleParams {
    pub a: f64,
    pub c: f64,
    pub b: Complex64,
}

impl ExampleParams {
    pub fn new(a: f64, c: f64, b: Complex64) -> Result<Self> {
        if !(a > 0.0 && c > 0.0 && a.is_finite() && c.is_finite()) {
            return Err(Error::Domain(format!("a and c must be positive, got a={a}, c={c}")));
        }
        if !(b.re.is_finite() && b.im.is_finite()) {
            return Err(Error::Domain("b must be finite".into()));
        }
        let p = ExampleParams { a, c, b };
        if !(p.d() > 0.0) {
            return Err(Error::NonNormalizable(p.d()));
        }
        Ok(p)
    }

    /// `D = ac − Re(b)²`.
    pub fn d(&self) -> f64 {
        self.a * self.c - self.b.re * self.b.re
    }
}

/// Moment pair for `(x, p_x, y)`.
pub fn analytic_covariances(p: &ExampleParams, cfg: &PhysConfig) -> MomentPair {
    let (a, c, re, im, h) = (p.a, p.c, p.b.re, p.b.im, cfg.hbar);
    let d = p.d();
    let x11 = c / (2.0 * d);
    let x22 = a * h * h / (2.0 * d) * (d + im * im);
    let x12 = h / (2.0 * d) * re * im;
    let x33 = a / (2.0 * d);
    let x13 = -re / (2.0 * d);
    let x23 = -a * h / (2.0 * d) * im;
    let x = DMatrix::from_row_slice(3, 3, &[x11, x12, x13, x12, x22, x23, x13, x23, x33]);
    let mut y = DMatrix::zeros(3, 3);
    y[(0, 1)] = h / 2.0;
    y[(1, 0)] = -h / 2.0;
    MomentPair::new(vec!["x".into(), "p_x".into(), "y".into()], vec![0.0; 3], x, y)
        .expect("closed-form moments are structurally valid")
}

/// Purity of the `x` marginal: `μ = sqrt((ac − Re²b) / (ac + Im²b))`.
pub fn example_purity(p: &ExampleParams) -> f64 {
    (p.d() / (p.a * p.c + p.b.im * p.b.im)).sqrt()
}

/// `Δx·Δp − (ħ/2 + |σ_xp|)`; zero on the saturation locus `|Re b| = |Im b|`.
pub fn saturation_residual(p: &ExampleParams, cfg: &PhysConfig) -> f64 {
    let mp = analytic_covariances(p, cfg);
    (mp.x(0, 0) * mp.x(1, 1)).sqrt() - (cfg.hbar / 2.0 + mp.x(0, 1).abs())
}

pub const SCAN_CSV_HEADER: [&str; 8] = [
    "re_b",
    "im_b",
    "valid",
    "product",
    "rs_bound",
    "eq18_bound",
    "residual",
    "purity",
];

/// One point of a saturation scan; numeric fields are `None` where `D ≤ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub re_b: f64,
    pub im_b: f64,
    pub valid: bool,
    pub product: Option<f64>,
    pub rs_bound: Option<f64>,
    pub eq18_bound: Option<f64>,
    pub residual: Option<f64>,
    pub purity: Option<f64>,
}

impl ScanRow {
    pub fn csv_record(&self) -> Vec<String> {
        let opt = |v: Option<f64>| v.map(sig).unwrap_or_default();
        vec![
            sig(self.re_b),
            sig(self.im_b),
            if self.valid { "ok" } else { "nonnormalizable" }.to_string(),
            opt(self.product),
            opt(self.rs_bound),
            opt(self.eq18_bound),
            opt(self.residual),
            opt(self.purity),
        ]
    }
}

/// Evaluates the product, both bounds, residual and purity at each `b`.
pub fn saturation_scan(a: f64, c: f64, re_grid: &[f64], im_grid: &[f64], cfg: &PhysConfig) -> Result<Vec<ScanRow>> {
    if !(a > 0.0 && c > 0.0) {
        return Err(Error::Domain(format!("a and c must be positive, got a={a}, c={c}")));
    }
    let mut rows = Vec::with_capacity(re_grid.len() * im_grid.len());
    for &re in re_grid {
        for &im in im_grid {
            let row = match ExampleParams::new(a, c, Complex64::new(re, im)) {
                Ok(p) => {
                    let mp = analytic_covariances(&p, cfg);
                    ScanRow {
                        re_b: re,
                        im_b: im,
                        valid: true,
                        product: Some((mp.x(0, 0) * mp.x(1, 1)).sqrt()),
                        rs_bound: Some(rs_bound(&mp, 0, 1)?),
                        eq18_bound: Some(coupled_bound_commuting(&mp)?),
                        residual: Some(saturation_residual(&p, cfg)),
                        purity: Some(example_purity(&p)),
                    }
                }
                Err(Error::NonNormalizable(_)) => ScanRow {
                    re_b: re,
                    im_b: im,
                    valid: false,
                    product: None,
                    rs_bound: None,
                    eq18_bound: None,
                    residual: None,
                    purity: None,
                },
                Err(e) => return Err(e),
            };
            rows.push(row);
        }
    }
    Ok(rows)
}

/// `min, min + step, ..., max` with values rounded to 1e-12 so that
/// nominal grid points (such as 0.5) are hit exactly.
pub fn linear_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(max >= min) || !min.is_finite() || !max.is_finite() {
        return Err(Error::Domain(format!("bad grid [{min}, {max}] step {step}")));
    }
    let n = ((max - min) / step + 1e-9).floor() as usize + 1;
    Ok((0..n)
        .map(|i| ((min + i as f64 * step) * 1e12).round() / 1e12)
        .collect())
}
