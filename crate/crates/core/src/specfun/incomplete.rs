use num_complex::Complex64;
use num_traits::Float;

use super::active_region;
use crate::error::{Error, Result};
use crate::quad::{integrate, uniform_points, QuadratureConfig};
use crate::value::ComplexVal;

/// `∫_a^b y^{s-1} e^{-y} dy/y`. Equal limits give zero.
pub fn truncated_gamma(s: Complex64, a: f64, b: f64) -> Result<ComplexVal> {
    truncated_gamma_with(s, a, b, &QuadratureConfig::default())
}

pub(crate) fn truncated_gamma_with(
    s: Complex64,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<ComplexVal> {
    if !(a > 0.0 && b > 0.0) || !a.is_finite() || b.is_nan() {
        return Err(Error::Domain("truncated_gamma needs 0 < a <= b"));
    }
    if a > b {
        return Err(Error::Domain("truncated_gamma needs a <= b"));
    }
    if a == b {
        return Ok(ComplexVal::new(Complex64::new(0.0, 0.0), 0.0));
    }
    let (lo, hi) = (a.ln(), b.ln().min((120.0 + 4.0 * s.norm()).ln()));
    if hi <= lo {
        // the whole interval sits where e^{-y} is below underflow
        return Ok(ComplexVal::new(Complex64::new(0.0, 0.0), 0.0));
    }
    let sm1 = s - 1.0;
    let log_mag = |x: f64| sm1.re * x - x.exp();
    let (x0, x1) = active_region(
        log_mag,
        lo,
        hi,
        ((hi - lo) / 400.0).max(0.05),
        cfg.log_threshold(),
    );
    let (x0, x1) = (x0.max(lo), x1.min(hi));
    let osc = if s.im != 0.0 { 2.0 / s.im.abs() } else { 1.0 };
    let pts = uniform_points(x0, x1, osc.min(1.0));
    let r = integrate(|x| (sm1 * x - x.exp()).exp(), &pts, cfg)?;
    Ok(ComplexVal::new(
        r.value,
        r.abs_err + 4.0 * f64::EPSILON * r.value.norm(),
    ))
}
