use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::quad::{integrate, merge_points, uniform_points, QuadratureConfig};
use crate::value::ComplexVal;

/// `K_ν(x) = ∫_0^∞ e^{-x cosh t} cosh(νt) dt` for real `x > 0`.
///
/// The two exponentials of `cosh(νt)` are combined with `-x cosh t` before
/// exponentiating, and added in a fixed order, so `K_ν` and `K_{-ν}` agree bit for bit.
pub fn bessel_k(nu: Complex64, x: f64) -> Result<ComplexVal> {
    bessel_k_with(nu, x, &QuadratureConfig::default())
}

pub(crate) fn bessel_k_with(nu: Complex64, x: f64, cfg: &QuadratureConfig) -> Result<ComplexVal> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain("bessel_k needs finite x > 0"));
    }
    let a = nu.re.abs();
    let envelope = |t: f64| -x * t.cosh() + a * t;
    let t_peak = (a / x).asinh();
    let top = envelope(t_peak);
    let cut = top + cfg.log_threshold();
    let mut t_hi = t_peak + 1.0;
    while envelope(t_hi) > cut {
        t_hi = t_peak + 2.0 * (t_hi - t_peak);
    }
    // left of the peak the envelope increases, so bisect for its cut crossing
    let t_lo = if envelope(0.0) >= cut {
        0.0
    } else {
        let (mut lo, mut hi) = (0.0, t_peak);
        for _ in 0..60 {
            let m = 0.5 * (lo + hi);
            if envelope(m) < cut {
                lo = m;
            } else {
                hi = m;
            }
        }
        lo
    };
    let osc = if nu.im != 0.0 {
        2.0 / nu.im.abs()
    } else {
        f64::INFINITY
    };
    let mut pts = uniform_points(t_lo, t_hi, ((t_hi - t_lo) / 24.0).min(osc));
    if t_peak > t_lo {
        pts.push(t_peak);
    }
    let pts = merge_points(pts);
    let r = integrate(
        |t| {
            let base = -x * t.cosh();
            let plus = (nu * t + base).exp();
            let minus = (-nu * t + base).exp();
            (plus + minus) * 0.5
        },
        &pts,
        cfg,
    )?;
    let err = r.abs_err + r.value.norm() * 4.0 * f64::EPSILON * (1.0 + top.abs());
    Ok(ComplexVal::new(r.value, err))
}

/// `∫_0^∞ y^{s-1} e^{-shift·y} K_ν(y) dy`, by quadrature over `log y` with
/// `K_ν` itself evaluated by [`bessel_k`]. Needs `Re s > |Re ν|` and `shift > -1`.
pub fn bessel_k_mellin(s: Complex64, nu: Complex64, shift: f64) -> Result<ComplexVal> {
    bessel_k_mellin_with(s, nu, shift, &QuadratureConfig::default())
}

pub(crate) fn bessel_k_mellin_with(
    s: Complex64,
    nu: Complex64,
    shift: f64,
    cfg: &QuadratureConfig,
) -> Result<ComplexVal> {
    let margin = s.re - nu.re.abs();
    if !(margin > 0.0) {
        return Err(Error::Region {
            constraint: "Re s > |Re ν| for the Mellin transform of K_ν",
        });
    }
    if !(shift > -1.0) {
        return Err(Error::Region {
            constraint: "exponential shift > -1",
        });
    }
    let rate = 1.0 + shift;
    let a = nu.re.abs();
    // rough log-size of the integrand in x = ln y
    let log_mag = |x: f64| s.re * x - rate * x.exp() - a * x.min(0.0) - 0.5 * x.max(0.0);
    let threshold = cfg.log_threshold() - 5.0;
    let x_lo = -(threshold.abs() + 10.0) / margin - 5.0;
    let peak = (0..=400)
        .map(|i| log_mag(x_lo + (8.0 - x_lo) * i as f64 / 400.0))
        .fold(f64::NEG_INFINITY, f64::max);
    let mut x_hi = 1.0;
    while log_mag(x_hi) > peak + threshold {
        x_hi += 0.5;
    }
    let osc = 3.0 / (s.im.abs() + nu.im.abs() + 0.5);
    let knee = (-2.0f64).min(x_hi - 1.0);
    let mut pts = uniform_points(x_lo, knee, (4.0 / margin.max(0.5)).min(osc).max(0.25));
    pts.extend(uniform_points(knee, x_hi, 0.5f64.min(osc)));
    let pts = merge_points(pts);
    let inner = QuadratureConfig {
        rel_tol: cfg.rel_tol * 0.1,
        ..*cfg
    };
    let mut failure = None;
    let r = integrate(
        |x| {
            let y = x.exp();
            match bessel_k_with(nu, y, &inner) {
                Ok(k) => (s * x - shift * y).exp() * k.value,
                Err(e) => {
                    failure.get_or_insert(e);
                    Complex64::new(0.0, 0.0)
                }
            }
        },
        &pts,
        cfg,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(ComplexVal::new(
        r.value,
        r.abs_err + 8.0 * f64::EPSILON * r.value.norm(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn half_order_closed_form() {
        for x in [0.01, 0.3, 1.0, 4.0, 30.0] {
            let k = bessel_k(c(0.5, 0.0), x).unwrap().value;
            let expect = (PI / (2.0 * x)).sqrt() * (-x).exp();
            assert!((k.re - expect).abs() <= 1e-12 * expect, "x={x}");
        }
    }

    #[test]
    fn frozen_values() {
        let cases = [
            (c(0.0, 0.0), 1.0, c(0.421_024_438_240_708_33, 0.0)),
            (
                c(0.3, 0.2),
                2.5,
                c(0.062_870_530_181_055_1, 0.001_289_367_907_145_154_6),
            ),
            (c(5.0, 0.0), 0.01, c(3_839_976_000_099.999, 0.0)),
            (c(20.0, 0.0), 3.0, c(16_254_643_952_204.366, 0.0)),
            (c(0.0, 1.5), 0.7, c(0.200_531_290_664_807_37, 0.0)),
        ];
        for (nu, x, expect) in cases {
            let k = bessel_k(nu, x).unwrap();
            assert!(
                (k.value - expect).norm() <= 1e-11 * expect.norm(),
                "K_{nu}({x}) = {}",
                k.value
            );
        }
    }

    #[test]
    fn even_in_order_exactly() {
        for (nu, x) in [(c(0.37, 0.0), 0.2), (c(2.5, -1.0), 3.0), (c(0.1, 4.0), 1.0)] {
            assert_eq!(bessel_k(nu, x).unwrap(), bessel_k(-nu, x).unwrap());
        }
    }

    #[test]
    fn large_argument_asymptotic() {
        let x = 30.0;
        let k = bessel_k(c(0.8, 0.0), x).unwrap().value.re;
        let ratio = k * (2.0 * x / PI).sqrt() * x.exp();
        assert!((ratio - 1.0).abs() < 0.01);
    }

    #[test]
    fn domain() {
        assert!(bessel_k(c(0.0, 0.0), 0.0).is_err());
        assert!(bessel_k(c(0.0, 0.0), -1.0).is_err());
    }
}
