//! Fits of smoothed counts to `c₁ X log X + c₂ X`, residual diagnostics, and
//! the contour extraction of `c₁` from the Eisenstein residue integrand.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;

use crate::counting::CountSample;
use crate::error::{Error, Result};
use crate::series::{CuspContinuation, ShiftConfig};
use crate::specfun::{gamma_c, zeta_star};

/// Conditioning above which a fit is refused.
pub const MAX_CONDITION: f64 = 1e12;

/// Least-squares fit of the main terms with its residuals.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticFit {
    pub h: u64,
    pub c1_hat: f64,
    pub c2_hat: f64,
    /// `(X, data - fit)` in sample order.
    pub residuals: Vec<(f64, f64)>,
    /// Log-log slope of `|residual|`; `None` when fewer than four residuals are nonzero.
    pub error_exponent: Option<f64>,
    /// 2-norm condition number of the column-scaled design matrix.
    pub condition_number: f64,
}

/// Solves `min ||A c - y||` for the two columns `X log X`, `X` by Householder QR
/// on the column-scaled matrix. Returns `(c₁, c₂, condition)`.
fn least_squares(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    let n = xs.len();
    let mut a: Vec<[f64; 2]> = xs.iter().map(|&x| [x * x.ln(), x]).collect();
    let mut scale = [0.0f64; 2];
    for (j, s) in scale.iter_mut().enumerate() {
        *s = a.iter().map(|r| r[j] * r[j]).sum::<f64>().sqrt();
        if *s == 0.0 {
            return Err(Error::IllConditioned {
                condition: f64::INFINITY,
            });
        }
    }
    for r in a.iter_mut() {
        r[0] /= scale[0];
        r[1] /= scale[1];
    }
    let mut y = ys.to_vec();
    let mut rdiag = [0.0f64; 2];
    for k in 0..2 {
        let norm = (k..n).map(|i| a[i][k] * a[i][k]).sum::<f64>().sqrt();
        let alpha = if a[k][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..n).map(|i| a[i][k]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|t| t * t).sum();
        if vnorm2 > 0.0 {
            for j in k..2 {
                let dot: f64 = a[k..].iter().zip(&v).map(|(r, vi)| r[j] * vi).sum();
                let f = 2.0 * dot / vnorm2;
                for (r, vi) in a[k..].iter_mut().zip(&v) {
                    r[j] -= f * vi;
                }
            }
            let dot: f64 = y[k..].iter().zip(&v).map(|(yi, vi)| yi * vi).sum();
            let f = 2.0 * dot / vnorm2;
            for (yi, vi) in y[k..].iter_mut().zip(&v) {
                *yi -= f * vi;
            }
        }
        rdiag[k] = a[k][k];
    }
    let r01 = a[0][1];
    // singular values of the 2x2 triangle [[r00, r01], [0, r11]]
    let (r00, r11) = (rdiag[0], rdiag[1]);
    let fro2 = r00 * r00 + r01 * r01 + r11 * r11;
    let det = (r00 * r11).abs();
    let disc = (fro2 * fro2 - 4.0 * det * det).max(0.0).sqrt();
    let smax = ((fro2 + disc) / 2.0).sqrt();
    let smin = if det == 0.0 { 0.0 } else { det / smax };
    let condition = if smin == 0.0 {
        f64::INFINITY
    } else {
        smax / smin
    };
    if !(condition <= MAX_CONDITION) {
        return Err(Error::IllConditioned { condition });
    }
    let c2 = y[1] / r11;
    let c1 = (y[0] - r01 * c2) / r00;
    Ok((c1 / scale[0], c2 / scale[1], condition))
}

fn check_samples(samples: &[CountSample]) -> Result<()> {
    if samples.len() < 4 {
        return Err(Error::InsufficientData {
            needed: 4,
            got: samples.len(),
        });
    }
    let mut xs: Vec<f64> = samples.iter().map(|s| s.x).collect();
    xs.sort_by(f64::total_cmp);
    if xs.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Domain("fit samples need distinct X"));
    }
    if !(xs[0] > 0.0) || xs[xs.len() - 1] < 10.0 * xs[0] {
        return Err(Error::Domain(
            "fit samples must span at least a decade in X",
        ));
    }
    Ok(())
}

/// Least squares of the smoothed values against `{X log X, X}`.
pub fn fit_main_terms(h: u64, samples: &[CountSample]) -> Result<AsymptoticFit> {
    check_samples(samples)?;
    let xs: Vec<f64> = samples.iter().map(|s| s.x).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.smoothed).collect();
    let (c1, c2, condition) = least_squares(&xs, &ys)?;
    let residuals: Vec<(f64, f64)> = xs
        .iter()
        .zip(&ys)
        .map(|(&x, &y)| (x, y - (c1 * x * x.ln() + c2 * x)))
        .collect();
    let mut fit = AsymptoticFit {
        h,
        c1_hat: c1,
        c2_hat: c2,
        residuals,
        error_exponent: None,
        condition_number: condition,
    };
    fit.error_exponent = match error_exponent(&fit) {
        Ok(e) if e.is_finite() => Some(e),
        _ => None,
    };
    Ok(fit)
}

/// Least-squares slope of `log |r(X)|` against `log X` over nonzero residuals.
/// All-zero residuals give `-∞`.
pub fn error_exponent(fit: &AsymptoticFit) -> Result<f64> {
    let pts: Vec<(f64, f64)> = fit
        .residuals
        .iter()
        .filter(|(_, r)| *r != 0.0)
        .map(|&(x, r)| (x.ln(), r.abs().ln()))
        .collect();
    if pts.is_empty() && !fit.residuals.is_empty() {
        return Ok(f64::NEG_INFINITY);
    }
    if pts.len() < 4 {
        return Err(Error::InsufficientData {
            needed: 4,
            got: pts.len(),
        });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Ok(sxy / sxx)
}

/// `ĉ₁` refitted with each sample left out in turn.
#[derive(Debug, Clone, PartialEq)]
pub struct LeaveOneOut {
    pub c1_full: f64,
    pub c1_dropped: Vec<f64>,
    /// `max_i |ĉ₁⁽⁻ⁱ⁾ - ĉ₁| / |ĉ₁|`.
    pub max_rel_variation: f64,
}

pub fn leave_one_out(h: u64, samples: &[CountSample]) -> Result<LeaveOneOut> {
    let full = fit_main_terms(h, samples)?;
    let mut dropped = Vec::with_capacity(samples.len());
    for i in 0..samples.len() {
        let rest: Vec<CountSample> = samples
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, s)| *s)
            .collect();
        dropped.push(fit_main_terms(h, &rest)?.c1_hat);
    }
    let denom = full.c1_hat.abs();
    let max_rel_variation = dropped
        .iter()
        .map(|c| (c - full.c1_hat).abs() / denom)
        .fold(0.0, f64::max);
    Ok(LeaveOneOut {
        c1_full: full.c1_hat,
        c1_dropped: dropped,
        max_rel_variation,
    })
}

/// Number of contour nodes for Laurent extraction.
pub const CONTOUR_NODES: usize = 64;
/// Contour radii; the second one only checks stability.
pub const CONTOUR_RADII: [f64; 2] = [0.05, 0.025];
/// Largest `2r`-smooth index kept in the continuation of `D_∞`.
pub const CONTINUATION_LIMIT: u64 = 1 << 16;

/// `c₁` from the double pole at `v = 0` of the residue integrand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidueC1 {
    pub h: u64,
    /// Coefficient of `v^{-2}` at the first radius.
    pub value: Complex64,
    /// The same coefficient at the second radius.
    pub check: Complex64,
    /// Coefficient of `v^{-1}`, the matching `X` term.
    pub simple_part: Complex64,
    /// False when `D_0 = D_∞` was assumed rather than supplied.
    pub verified: bool,
}

impl ResidueC1 {
    pub fn radius_spread(&self) -> f64 {
        (self.value - self.check).norm() / self.value.norm()
    }
}

/// `e^{iπ/4} π^{3/2} ζ*(1+v) (1 + f₀) D_∞(3/4 + v/2) 2^{1/2-v} Γ(1/2+v) / Γ(1/2+v/2)`,
/// with `D_0 = f₀ · D_∞`.
fn residue_integrand(cont: &CuspContinuation, d0: Complex64, v: Complex64) -> Result<Complex64> {
    let zs = zeta_star(v + 1.0)?.value;
    let d = cont.d_infinity(v * 0.5 + 0.75)?.value;
    let g = gamma_c(v + 0.5)?.value / gamma_c(v * 0.5 + 0.5)?.value;
    let two = ((0.5 - v) * 2f64.ln()).exp();
    let phase = Complex64::from_polar(PI.powf(1.5), PI / 4.0);
    Ok(phase * zs * (d0 + 1.0) * d * two * g)
}

/// Laurent coefficients `(a₋₂, a₋₁)` at 0 from the trapezoid rule on `|v| = r`.
fn laurent_tail(cont: &CuspContinuation, d0: Complex64, r: f64) -> Result<(Complex64, Complex64)> {
    let mut a2 = Complex64::new(0.0, 0.0);
    let mut a1 = Complex64::new(0.0, 0.0);
    for j in 0..CONTOUR_NODES {
        let theta = 2.0 * PI * (j as f64 + 0.5) / CONTOUR_NODES as f64;
        let v = Complex64::from_polar(r, theta);
        let g = residue_integrand(cont, d0, v)?;
        a2 += g * v * v;
        a1 += g * v;
    }
    let n = CONTOUR_NODES as f64;
    Ok((a2 / n, a1 / n))
}

/// `c₁(h)` for square `h`: the `v^{-2}` coefficient of the residue integrand.
pub fn residue_c1(h: u64, cfg: &ShiftConfig) -> Result<ResidueC1> {
    let r = crate::arith::isqrt(h);
    if h == 0 || r * r != h {
        return Err(Error::Domain(
            "residue_c1 needs a square h; otherwise the pole at v = 0 is simple",
        ));
    }
    let cont = CuspContinuation::new(h, CONTINUATION_LIMIT)?;
    let d0 = cfg.d0();
    let (value, simple_part) = laurent_tail(&cont, d0, CONTOUR_RADII[0])?;
    let (check, _) = laurent_tail(&cont, d0, CONTOUR_RADII[1])?;
    Ok(ResidueC1 {
        h,
        value,
        check,
        simple_part,
        verified: cfg.d0_factor.is_some(),
    })
}
