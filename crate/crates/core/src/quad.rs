//! Adaptive 21-point Gauss-Kronrod quadrature on finite intervals.
//!
//! Semi-infinite integrals are handled by callers, who pick a finite cutoff
//! from an analytic envelope of their integrand and hand in breakpoints.
//! Interval contributions are summed in left-to-right order with Neumaier
//! compensation, so results do not depend on the refinement history.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};

// Kronrod nodes and weights as tabulated, digits beyond f64 kept for reference.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Tolerances and limits for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Integrand envelopes are cut where they fall below `rel_tol * tail_cutoff` of the peak.
    pub tail_cutoff: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-300,
            rel_tol: 1e-13,
            max_subdivisions: 4000,
            tail_cutoff: 0.1,
        }
    }
}

impl QuadratureConfig {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::Domain("quadrature tolerances must be positive"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Domain("max_subdivisions must be positive"));
        }
        Ok(())
    }

    /// Natural-log threshold below which an integrand envelope counts as negligible.
    pub fn log_threshold(&self) -> f64 {
        (self.rel_tol * self.tail_cutoff).ln() - 3.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub abs_err: f64,
    pub evaluations: usize,
    pub intervals: usize,
}

#[derive(Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
    settled: bool,
}

struct ByError(Panel);

impl PartialEq for ByError {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for ByError {}
impl PartialOrd for ByError {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for ByError {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .err
            .total_cmp(&other.0.err)
            .then(other.0.a.total_cmp(&self.0.a))
    }
}

fn kronrod21<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[10];
    let mut res_g = Complex64::new(0.0, 0.0);
    let mut fv1 = [Complex64::new(0.0, 0.0); 10];
    let mut fv2 = [Complex64::new(0.0, 0.0); 10];
    let mut res_abs = fc.norm() * WGK[10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += (f1 + f2) * WGK[j];
        res_abs += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            res_g += (f1 + f2) * WG[j / 2];
        }
    }
    let mean = res_k * 0.5;
    let mut res_asc = WGK[10] * (fc - mean).norm();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).norm() + (fv2[j] - mean).norm());
    }
    let hl = half.abs();
    let res_asc = res_asc * hl;
    let res_abs = res_abs * hl;
    let diff = ((res_k - res_g) * half).norm();
    let mut err = diff;
    if res_asc != 0.0 && diff != 0.0 {
        err = res_asc * (200.0 * diff / res_asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * res_abs;
    let settled = err <= floor || !err.is_finite() && res_abs == 0.0;
    Panel {
        a,
        b,
        value: res_k * half,
        err: err.max(floor),
        settled,
    }
}

fn neumaier(values: impl Iterator<Item = Complex64>) -> Complex64 {
    let (mut sr, mut cr, mut si, mut ci) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for v in values {
        let t = sr + v.re;
        cr += if sr.abs() >= v.re.abs() {
            (sr - t) + v.re
        } else {
            (v.re - t) + sr
        };
        sr = t;
        let t = si + v.im;
        ci += if si.abs() >= v.im.abs() {
            (si - t) + v.im
        } else {
            (v.im - t) + si
        };
        si = t;
    }
    Complex64::new(sr + cr, si + ci)
}

/// Compensated sum of a sequence of complex numbers in the given order.
pub fn compensated_sum(values: impl Iterator<Item = Complex64>) -> Complex64 {
    neumaier(values)
}

/// Integrates `f` over `[points[0], points[last]]`, starting from the panels
/// delimited by `points` (which must be strictly increasing).
pub fn integrate<F>(mut f: F, points: &[f64], cfg: &QuadratureConfig) -> Result<QuadResult>
where
    F: FnMut(f64) -> Complex64,
{
    cfg.validate()?;
    if points.len() < 2 {
        return Err(Error::Domain("integration needs at least two breakpoints"));
    }
    if points.windows(2).any(|w| !(w[0] < w[1])) || points.iter().any(|p| !p.is_finite()) {
        return Err(Error::Domain(
            "breakpoints must be finite and strictly increasing",
        ));
    }
    let mut heap = BinaryHeap::new();
    let mut done: Vec<Panel> = Vec::new();
    let mut evaluations = 0usize;
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0f64;
    for w in points.windows(2) {
        let p = kronrod21(&mut f, w[0], w[1]);
        evaluations += 21;
        total += p.value;
        err += p.err;
        if p.settled {
            done.push(p);
        } else {
            heap.push(ByError(p));
        }
    }
    let mut subdivisions = 0usize;
    loop {
        if !total.re.is_finite() || !total.im.is_finite() {
            return Err(Error::NoConvergence {
                what: "quadrature (non-finite integrand)",
                estimate: total,
                error: f64::INFINITY,
            });
        }
        let tol = cfg.abs_tol.max(cfg.rel_tol * total.norm());
        let Some(ByError(worst)) = heap.pop() else {
            return Ok(finish(done, evaluations, err));
        };
        if err <= tol {
            done.push(worst);
            done.extend(heap.drain().map(|p| p.0));
            return Ok(finish(done, evaluations, err));
        }
        if subdivisions >= cfg.max_subdivisions {
            return Err(Error::NoConvergence {
                what: "adaptive quadrature",
                estimate: total,
                error: err,
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) {
            done.push(Panel {
                settled: true,
                ..worst
            });
            continue;
        }
        subdivisions += 1;
        total -= worst.value;
        err -= worst.err;
        for p in [
            kronrod21(&mut f, worst.a, mid),
            kronrod21(&mut f, mid, worst.b),
        ] {
            evaluations += 21;
            total += p.value;
            err += p.err;
            if p.settled {
                done.push(p);
            } else {
                heap.push(ByError(p));
            }
        }
        // refresh the running sums occasionally to stop drift
        if subdivisions % 256 == 0 {
            total = neumaier(
                done.iter()
                    .map(|p| p.value)
                    .chain(heap.iter().map(|p| p.0.value)),
            );
            err =
                done.iter().map(|p| p.err).sum::<f64>() + heap.iter().map(|p| p.0.err).sum::<f64>();
        }
    }
}

fn finish(mut panels: Vec<Panel>, evaluations: usize, err: f64) -> QuadResult {
    panels.sort_unstable_by(|x, y| x.a.total_cmp(&y.a));
    QuadResult {
        value: neumaier(panels.iter().map(|p| p.value)),
        abs_err: err,
        evaluations,
        intervals: panels.len(),
    }
}

/// Evenly spaced breakpoints covering `[a, b]` with pieces no longer than `max_len`.
pub fn uniform_points(a: f64, b: f64, max_len: f64) -> Vec<f64> {
    let n = (((b - a) / max_len).ceil() as usize).max(1);
    (0..=n)
        .map(|i| {
            if i == n {
                b
            } else {
                a + (b - a) * i as f64 / n as f64
            }
        })
        .collect()
}

/// Merges sorted breakpoint lists, dropping near-duplicates.
pub fn merge_points(mut pts: Vec<f64>) -> Vec<f64> {
    pts.sort_unstable_by(|x, y| x.total_cmp(y));
    let mut out: Vec<f64> = Vec::with_capacity(pts.len());
    for p in pts {
        match out.last() {
            Some(&q) if p - q <= 1e-12 * (1.0 + q.abs()) => {}
            _ => out.push(p),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn polynomial_exact() {
        let r = integrate(
            |x| re(x.powi(7) - 3.0 * x * x),
            &[0.0, 2.0],
            &QuadratureConfig::default(),
        )
        .unwrap();
        assert!((r.value.re - (256.0 / 8.0 - 8.0)).abs() < 1e-13);
    }

    #[test]
    fn oscillatory_complex() {
        // ∫_0^{2π} x e^{5ix} dx = 2π/(5i)
        let r = integrate(
            |x| Complex64::new(0.0, 5.0 * x).exp() * x,
            &[0.0, 2.0 * PI],
            &QuadratureConfig::default(),
        )
        .unwrap();
        let expect = Complex64::new(0.0, -2.0 * PI / 5.0);
        assert!((r.value - expect).norm() < 1e-12, "{}", r.value);
    }

    #[test]
    fn endpoint_singularity() {
        // ∫_0^1 x^{-1/2} dx = 2
        let r = integrate(
            |x| re(x.powf(-0.5)),
            &[0.0, 1.0],
            &QuadratureConfig::with_rel_tol(1e-10),
        )
        .unwrap();
        assert!((r.value.re - 2.0).abs() < 1e-9);
    }

    #[test]
    fn deterministic_across_breakpoint_lists() {
        let f = |x: f64| re((-x * x).exp() * (3.0 * x).cos());
        let a = integrate(f, &[-6.0, 6.0], &QuadratureConfig::default()).unwrap();
        let b = integrate(f, &[-6.0, 6.0], &QuadratureConfig::default()).unwrap();
        assert_eq!(a.value, b.value);
        let exact = PI.sqrt() * (-9.0f64 / 4.0).exp();
        assert!((a.value.re - exact).abs() < 1e-13);
    }

    #[test]
    fn rejects_bad_points() {
        let cfg = QuadratureConfig::default();
        assert!(integrate(re, &[1.0], &cfg).is_err());
        assert!(integrate(re, &[1.0, 0.0], &cfg).is_err());
    }
}
