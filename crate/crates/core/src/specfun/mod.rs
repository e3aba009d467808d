//! Complex special functions from series and integral representations.

mod bessel;
mod gamma;
mod incomplete;
mod whittaker;
mod zeta;

use num_traits::Float;

pub use bessel::{bessel_k, bessel_k_mellin};
pub use gamma::{gamma_c, ln_gamma, recip_gamma, sin_pi};
pub use incomplete::truncated_gamma;
pub(crate) use whittaker::whittaker_log_parts;
pub use whittaker::{whittaker_w, WhittakerParts};
pub use zeta::{dirichlet_l, riemann_zeta, zeta_star};

/// Scans `log_mag` on a grid over `[lo, hi]` and returns the sub-interval where
/// it stays within `threshold` (negative) of the grid maximum, padded by one step.
pub(crate) fn active_region<F: Fn(f64) -> f64>(
    log_mag: F,
    lo: f64,
    hi: f64,
    step: f64,
    threshold: f64,
) -> (f64, f64) {
    let n = (((hi - lo) / step).ceil() as usize).max(2);
    let h = (hi - lo) / n as f64;
    let mut best = f64::NEG_INFINITY;
    for i in 0..=n {
        let v = log_mag(lo + h * i as f64);
        if v > best {
            best = v;
        }
    }
    let cut = best + threshold;
    let mut first: Option<usize> = None;
    let mut last = 0;
    for i in 0..=n {
        if log_mag(lo + h * i as f64) >= cut {
            if first.is_none() {
                first = Some(i);
            }
            last = i;
        }
    }
    let first = first.unwrap_or(0).saturating_sub(1);
    let last = (last + 1).min(n);
    (lo + h * first as f64, lo + h * last as f64)
}
