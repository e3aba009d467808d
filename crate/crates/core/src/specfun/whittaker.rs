use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use super::active_region;
use super::gamma::ln_gamma;
use crate::error::{Error, Result};
use crate::quad::{integrate, merge_points, uniform_points, QuadratureConfig};
use crate::value::ComplexVal;

/// `W_{κ,μ}(x) = exp(log_prefactor) · integral`, kept apart so callers can
/// fold the prefactor into their own exponent without overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WhittakerParts {
    pub log_prefactor: Complex64,
    pub integral: Complex64,
    pub rel_err: f64,
}

impl WhittakerParts {
    pub fn value(&self) -> Complex64 {
        self.log_prefactor.exp() * self.integral
    }
}

/// Whittaker `W_{κ,μ}(x)` from
/// `e^{-x/2} x^κ / Γ(μ-κ+1/2) ∫_0^∞ e^{-t} t^{μ-κ-1/2} (1+t/x)^{μ+κ-1/2} dt`,
/// using `W_{κ,μ} = W_{κ,-μ}` to work with `Re μ >= 0`.
pub fn whittaker_w(kappa: f64, mu: Complex64, x: f64) -> Result<ComplexVal> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain("whittaker_w needs finite x > 0"));
    }
    let parts = whittaker_log_parts(kappa, mu, x.ln(), &QuadratureConfig::default())?;
    let value = parts.value();
    Ok(ComplexVal::new(value, value.norm() * parts.rel_err))
}

/// Log-domain evaluation at `x = exp(ln_x)`; `x` itself may underflow.
///
/// With `t = e^τ`, `(1 + t/x)^b = x^{-b} (x + t)^b`, and the factor
/// `max(x, 1)^b` is moved into the prefactor so the integral stays O(1).
pub fn whittaker_log_parts(
    kappa: f64,
    mu: Complex64,
    ln_x: f64,
    cfg: &QuadratureConfig,
) -> Result<WhittakerParts> {
    if !ln_x.is_finite() {
        return Err(Error::Domain("whittaker_w needs finite ln x"));
    }
    let mu = if mu.re < 0.0 || (mu.re == 0.0 && mu.im < 0.0) {
        -mu
    } else {
        mu
    };
    let a = mu - kappa - 0.5;
    let b = mu + kappa - 0.5;
    let ap1 = a + 1.0;
    if !(ap1.re > 0.0) {
        return Err(Error::Region {
            constraint: "Re(|μ| - κ + 1/2) > 0 for the Whittaker integral",
        });
    }
    let x = ln_x.exp();
    let scale = ln_x.max(0.0);
    let ln_x_plus = move |tau: f64| {
        if tau > ln_x {
            tau + (ln_x - tau).exp().ln_1p()
        } else {
            ln_x + (tau - ln_x).exp().ln_1p()
        }
    };
    let log_mag = |tau: f64| -tau.exp() + ap1.re * tau + b.re * (ln_x_plus(tau) - scale);
    let threshold = cfg.log_threshold();

    let knee = ln_x.min(0.0) - 3.0;
    let top = (60.0 + 4.0 * (a.norm() + b.norm())).ln();
    // between ln x and 0 the exponent is linear with slope Re(a+1+b); below
    // the knee with slope Re(a+1). Only the part near the peak is scanned.
    let lo_scan = knee.max(-150.0);
    let step = ((top - lo_scan) / 240.0).max(0.125);
    let n = ((top - lo_scan) / step).ceil() as usize;
    let peak = (0..=n)
        .map(|i| log_mag(lo_scan + (top - lo_scan) * i as f64 / n as f64))
        .fold(f64::NEG_INFINITY, f64::max);
    let (scan_lo, t_hi) = active_region(log_mag, lo_scan, top, step, threshold);
    let excess = log_mag(lo_scan) - (peak + threshold);
    let t_lo = if excess <= 0.0 {
        scan_lo
    } else {
        let mid_slope = ap1.re + b.re;
        let span = lo_scan - knee;
        if mid_slope > 0.0 && excess < mid_slope * span {
            lo_scan - excess / mid_slope - 2.0
        } else {
            let left = excess - mid_slope * span;
            knee - left / ap1.re - 2.0
        }
    };

    let osc = 2.0 / (mu.im.abs() + 0.5);
    let mut pts = Vec::new();
    let mid = 0.0f64.clamp(t_lo, t_hi);
    if t_lo < mid {
        let deep = (4.0 / ap1.norm()).clamp(0.5, 8.0);
        pts.extend(uniform_points(t_lo, mid, deep.min(osc * 2.0)));
    }
    if mid < t_hi {
        pts.extend(uniform_points(mid, t_hi, 0.5f64.min(osc)));
    }
    if ln_x > t_lo && ln_x < t_hi {
        pts.push(ln_x);
    }
    let pts = merge_points(pts);
    let r = integrate(
        |tau| (ap1 * tau + b * (ln_x_plus(tau) - scale) - tau.exp()).exp(),
        &pts,
        cfg,
    )?;
    let log_prefactor =
        Complex64::new(-0.5 * x, 0.0) + (0.5 - mu) * ln_x + b * scale - ln_gamma(ap1)?;
    let rel_err = r.abs_err / r.value.norm() + 8.0 * f64::EPSILON * (1.0 + log_prefactor.norm());
    Ok(WhittakerParts {
        log_prefactor,
        integral: r.value,
        rel_err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel_k;
    use core::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn exponential_case() {
        let w = whittaker_w(0.0, c(0.5, 0.0), 2.0).unwrap().value;
        assert!((w.re - (-1.0f64).exp()).abs() < 1e-14);
        assert!(w.im.abs() < 1e-15);
    }

    #[test]
    fn frozen_values() {
        let cases = [
            (0.25, c(0.0, 0.3), 3.0, c(0.281_502_863_545_624_4, 0.0)),
            (0.25, c(0.1, 0.0), 1e-6, c(0.006_943_018_999_874_573, 0.0)),
            (0.25, c(0.4, 0.0), 50.0, c(3.700_113_254_082_239e-11, 0.0)),
            (
                -0.7,
                c(0.2, 1.0),
                0.3,
                c(0.154_874_821_264_234_8, 0.088_720_475_528_882_92),
            ),
            (0.25, c(0.0, 0.0), 1e-3, c(0.087_026_794_492_401_87, 0.0)),
        ];
        for (kappa, mu, x, expect) in cases {
            let w = whittaker_w(kappa, mu, x).unwrap();
            assert!(
                (w.value - expect).norm() <= 1e-10 * expect.norm(),
                "W_({kappa},{mu})({x}) = {}",
                w.value
            );
            assert_eq!(w, whittaker_w(kappa, -mu, x).unwrap());
        }
    }

    #[test]
    fn bessel_identity_at_zero_kappa() {
        // W_{0,μ}(2y) = sqrt(2y/π) K_μ(y)
        let pts = [
            (c(0.1, 0.0), 0.05),
            (c(0.35, 0.4), 0.7),
            (c(1.2, 0.0), 2.0),
            (c(0.0, 1.1), 1.5),
            (c(2.5, -0.3), 4.0),
            (c(0.05, 0.05), 9.0),
            (c(0.7, 0.0), 0.01),
            (c(0.45, 2.0), 3.3),
            (c(3.0, 0.0), 12.0),
            (c(0.25, 0.0), 0.3),
        ];
        for (mu, y) in pts {
            let w = whittaker_w(0.0, mu, 2.0 * y).unwrap().value;
            let k = bessel_k(mu, y).unwrap().value * (2.0 * y / PI).sqrt();
            assert!(
                (w - k).norm() <= 1e-10 * k.norm(),
                "μ={mu} y={y}: {w} vs {k}"
            );
        }
    }

    #[test]
    fn underflowing_argument_in_log_form() {
        // W_{κ,μ}(x) ~ Γ(2μ)/Γ(1/2+μ-κ) x^{1/2-μ} as x -> 0
        let (kappa, mu) = (0.25, c(0.3, 0.0));
        let ln_x = -2000.0;
        let p = whittaker_log_parts(kappa, mu, ln_x, &QuadratureConfig::default()).unwrap();
        let lead = crate::specfun::gamma_c(mu * 2.0).unwrap().value
            / crate::specfun::gamma_c(mu + 0.5 - kappa).unwrap().value;
        let ratio = (p.log_prefactor - (0.5 - mu) * ln_x).exp() * p.integral / lead;
        assert!((ratio - 1.0).norm() < 1e-10, "{ratio}");
    }

    #[test]
    fn region_violation() {
        assert!(matches!(
            whittaker_w(1.0, c(0.2, 0.0), 1.0),
            Err(Error::Region { .. })
        ));
    }
}
