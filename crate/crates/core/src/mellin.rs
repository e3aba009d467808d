//! The Whittaker–Mellin family
//! `M_k(s, z, δ) = ∫_0^∞ y^{s-1} e^{y(1-δ)} W_{k/2,z}(2y) dy/y`,
//! its truncation to `[2πh/Y, 2πhY]`, the `δ → 0` closed form and its residues.
//!
//! All quadrature runs in `x = ln y`, with `W` taken in log-parts form so the
//! integrand can be followed far into the `y → 0` end, where it behaves like
//! `e^{(s-1/2∓z)x}`. Near the abscissa of convergence this end is long but
//! smooth, and is covered with long panels.

use alloc::vec::Vec;
use core::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::quad::{integrate, merge_points, uniform_points, QuadratureConfig};
use crate::specfun::{gamma_c, recip_gamma, whittaker_log_parts};
use crate::value::ComplexVal;

/// Parameters of `M_k(s, z, δ)`; `k` is the weight and `δ` the damping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MellinParams {
    pub s: Complex64,
    pub z: Complex64,
    pub k: f64,
    pub delta: f64,
}

impl MellinParams {
    pub fn new(s: Complex64, z: Complex64, k: f64, delta: f64) -> Self {
        Self { s, z, k, delta }
    }

    fn kappa(&self) -> f64 {
        0.5 * self.k
    }

    /// `z` with the sign that makes `Re z >= 0`; `M_k` is even in `z`.
    fn mu(&self) -> Complex64 {
        let z = self.z;
        if z.re < 0.0 || (z.re == 0.0 && z.im < 0.0) {
            -z
        } else {
            z
        }
    }

    fn check_finite(&self) -> Result<()> {
        let ok = self.s.re.is_finite()
            && self.s.im.is_finite()
            && self.z.re.is_finite()
            && self.z.im.is_finite()
            && self.k.is_finite()
            && self.delta.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::Domain("Mellin parameters must be finite"))
        }
    }
}

/// Integration window `[2πh/Y, 2πhY]` of the truncated transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationWindow {
    pub y: f64,
    pub h: u64,
}

impl TruncationWindow {
    pub fn new(y: f64, h: u64) -> Result<Self> {
        if !(y >= 1.0) || !y.is_finite() {
            return Err(Error::Domain("truncation window needs finite Y >= 1"));
        }
        if h == 0 {
            return Err(Error::Domain("truncation window needs h >= 1"));
        }
        Ok(Self { y, h })
    }

    /// Window bounds in `ln y`.
    pub fn log_bounds(&self) -> (f64, f64) {
        let centre = (2.0 * PI * self.h as f64).ln();
        let half = self.y.ln();
        (centre - half, centre + half)
    }
}

/// Default accuracy for Mellin quadrature; the Whittaker factor inside is
/// evaluated ten times tighter.
pub fn mellin_quadrature() -> QuadratureConfig {
    QuadratureConfig::with_rel_tol(1e-11)
}

/// Integrand of `M_k` in `x = ln y`, evaluated without forming `y^{s-1}` or
/// `W` separately.
struct Integrand {
    params: MellinParams,
    inner: QuadratureConfig,
    failure: core::cell::RefCell<Option<Error>>,
    worst_rel: core::cell::Cell<f64>,
}

impl Integrand {
    fn new(params: MellinParams, cfg: &QuadratureConfig) -> Self {
        Self {
            params,
            inner: QuadratureConfig {
                rel_tol: cfg.rel_tol * 0.1,
                ..*cfg
            },
            failure: core::cell::RefCell::new(None),
            worst_rel: core::cell::Cell::new(0.0),
        }
    }

    fn eval(&self, x: f64) -> Complex64 {
        let p = &self.params;
        match whittaker_log_parts(p.kappa(), p.z, x + LN_2, &self.inner) {
            Ok(parts) => {
                if parts.rel_err > self.worst_rel.get() {
                    self.worst_rel.set(parts.rel_err);
                }
                let y = x.exp();
                let expo = (p.s - 1.0) * x + y * (1.0 - p.delta) + parts.log_prefactor;
                expo.exp() * parts.integral
            }
            Err(e) => {
                self.failure.borrow_mut().get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        }
    }

    fn finish(&self, value: Complex64, abs_err: f64) -> Result<ComplexVal> {
        if let Some(e) = self.failure.borrow_mut().take() {
            return Err(e);
        }
        let err = abs_err + value.norm() * self.worst_rel.get();
        Ok(ComplexVal::new(value, err))
    }
}

fn oscillation_len(p: &MellinParams) -> f64 {
    2.0 / (p.s.im.abs() + p.z.im.abs() + 0.5)
}

/// `M_k(s, z, δ)` by quadrature. Needs `δ > 0` and `Re s > 1/2 + |Re z|`.
pub fn m_k(params: &MellinParams) -> Result<ComplexVal> {
    m_k_with(params, &mellin_quadrature())
}

pub fn m_k_with(params: &MellinParams, cfg: &QuadratureConfig) -> Result<ComplexVal> {
    params.check_finite()?;
    cfg.validate()?;
    if !(params.delta > 0.0) {
        return Err(Error::Domain("m_k needs delta > 0"));
    }
    let mu = params.mu();
    let margin = params.s.re - 0.5 - mu.re;
    if !(margin > 0.0) {
        return Err(Error::Region {
            constraint: "Re s > 1/2 + |Re z| for the Mellin integral",
        });
    }
    if !(mu.re - params.kappa() + 0.5 > 0.0) {
        return Err(Error::Region {
            constraint: "Re(|z| - k/2 + 1/2) > 0 for the Whittaker integral",
        });
    }
    let thr = cfg.log_threshold().abs();

    // y → 0: |integrand| ~ e^{margin·x}, plus a log factor when z = 0
    let x_lo = -3.0 - (thr + 15.0) / margin;
    // y → ∞: |integrand| ~ 2^κ e^{(σ-1+κ)x - δe^x}
    let grow = params.s.re - 1.0 + params.kappa();
    let env = |x: f64| grow * x - params.delta * x.exp();
    let mut x_hi = 0.0f64;
    let mut best = env(0.0);
    loop {
        x_hi += 0.25;
        let e = env(x_hi);
        best = best.max(e);
        if e < best - thr - 5.0 && e < env(0.0) - thr - 5.0 {
            break;
        }
    }

    let lam_a = (params.s - 0.5 - mu).norm();
    let lam_b = (params.s - 0.5 + mu).norm();
    // the x^{1/2+z} branch is negligible below x_mid
    let x_mid = if mu.re > 0.0 {
        (-3.0 - (thr + 10.0) / (2.0 * mu.re)).max(x_lo)
    } else {
        x_lo
    };
    let osc = oscillation_len(params);
    let mut pts = Vec::new();
    if x_lo < x_mid {
        pts.extend(uniform_points(x_lo, x_mid, (4.0 / lam_a).clamp(0.5, 5e4)));
    }
    pts.extend(uniform_points(
        x_mid,
        -3.0,
        (4.0 / lam_a.max(lam_b)).clamp(0.25, 4.0),
    ));
    pts.extend(uniform_points(-3.0, x_hi, 0.5f64.min(osc)));
    let pts = merge_points(pts);

    let f = Integrand::new(*params, cfg);
    let r = integrate(|x| f.eval(x), &pts, cfg)?;
    f.finish(r.value, r.abs_err)
}

/// `M_{Y,h,k}(s, z, δ)`: the same integral over `[2πh/Y, 2πhY]`. Here `δ = 0`
/// is allowed and `s` is unrestricted.
pub fn m_truncated(params: &MellinParams, window: TruncationWindow) -> Result<ComplexVal> {
    m_truncated_with(params, window, &mellin_quadrature())
}

pub fn m_truncated_with(
    params: &MellinParams,
    window: TruncationWindow,
    cfg: &QuadratureConfig,
) -> Result<ComplexVal> {
    params.check_finite()?;
    cfg.validate()?;
    if !(params.delta >= 0.0) {
        return Err(Error::Domain("m_truncated needs delta >= 0"));
    }
    let (lo, hi) = window.log_bounds();
    if lo == hi {
        return Ok(ComplexVal::exact(Complex64::new(0.0, 0.0)));
    }
    let pts = uniform_points(lo, hi, 0.5f64.min(oscillation_len(params)));
    let f = Integrand::new(*params, cfg);
    let r = integrate(|x| f.eval(x), &pts, cfg)?;
    f.finish(r.value, r.abs_err)
}

/// The `δ → 0` closed form
/// `2^{1-s} Γ(s-1/2-z) Γ(s-1/2+z) Γ(1-s-k/2) / (Γ(1/2-k/2+z) Γ(1/2-k/2-z))`,
/// valid as the limit of `M_k` for `Re s < 1 - k/2`.
pub fn m_k_limit_form(s: Complex64, z: Complex64, k: f64) -> Result<ComplexVal> {
    if !(s.re < 1.0 - 0.5 * k) {
        return Err(Error::Region {
            constraint: "Re s < 1 - k/2 for the δ → 0 limit",
        });
    }
    let g1 = gamma_c(s - 0.5 - z)?;
    let g2 = gamma_c(s - 0.5 + z)?;
    let g3 = gamma_c(1.0 - s - 0.5 * k)?;
    let r1 = recip_gamma(0.5 - 0.5 * k + z)?;
    let r2 = recip_gamma(0.5 - 0.5 * k - z)?;
    let two = ComplexVal::exact(Complex64::new(2.0, 0.0).powc(1.0 - s));
    Ok(two * g1 * g2 * g3 * r1 * r2)
}

/// Leading large-`y` correction `2^{k/2} Γ(s-1+k/2) δ^{1-s-k/2}` separating
/// `M_k(δ)` from its limit form when `Re s > 1 - k/2` is not available for
/// direct continuation; for `Re s < 1 - k/2` it is the dominant part of
/// `M_k(δ) - M_k(0)`.
pub fn m_k_delta_correction(s: Complex64, k: f64, delta: f64) -> Result<ComplexVal> {
    if !(delta > 0.0) {
        return Err(Error::Domain("delta correction needs delta > 0"));
    }
    let kappa = 0.5 * k;
    let g = gamma_c(s - 1.0 + kappa)?;
    let pw = Complex64::new(delta, 0.0).powc(1.0 - s - kappa) * 2f64.powf(kappa);
    Ok(g * ComplexVal::exact(pw))
}

/// Aitken extrapolation of a geometric ladder `M(δ), M(δ/r), M(δ/r²)` to `δ → 0`.
pub fn extrapolate_ladder(values: [Complex64; 3]) -> Result<Complex64> {
    let [a, b, c] = values;
    let denom = a + c - b * 2.0;
    if denom.norm() <= 1e-14 * (a.norm() + b.norm() + c.norm()) {
        return Ok(c);
    }
    let out = (a * c - b * b) / denom;
    if out.re.is_finite() && out.im.is_finite() {
        Ok(out)
    } else {
        Err(Error::IllConditioned {
            condition: f64::INFINITY,
        })
    }
}

/// Which of the two pole series: `s = 1/2 - ℓ + z` or `s = 1/2 - ℓ - z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoleBranch {
    Plus,
    Minus,
}

impl PoleBranch {
    pub fn sign(self) -> f64 {
        match self {
            PoleBranch::Plus => 1.0,
            PoleBranch::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoleOrder {
    Simple,
    Double,
}

/// A pole of the limit form. `leading` is the residue for a simple pole and
/// `None` for a double pole, whose Laurent coefficients are not evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidueValue {
    pub location: Complex64,
    pub order: PoleOrder,
    pub leading: Option<ComplexVal>,
}

fn is_nonneg_integer(w: Complex64) -> bool {
    let r = w.re.round();
    r >= 0.0 && (w.re - r).abs() <= 1e-12 * (1.0 + r) && w.im.abs() <= 1e-12
}

/// Residue of the limit form at `s = 1/2 - ℓ ± z`:
/// `(-1)^ℓ 2^{1/2+ℓ∓z} Γ(1/2∓z-k/2+ℓ) Γ(±2z-ℓ) / (ℓ! Γ(1/2-k/2+z) Γ(1/2-k/2-z))`.
///
/// `Γ(1/2∓z-k/2+ℓ) / Γ(1/2-k/2∓z)` is taken as a Pochhammer product, so the
/// residue vanishes exactly when `1/2 - k/2 ± z` is a pole of Γ.
pub fn m_k_residue(ell: u32, z: Complex64, k: f64, branch: PoleBranch) -> Result<ResidueValue> {
    let sg = branch.sign();
    let l = ell as f64;
    let location = Complex64::new(0.5 - l, 0.0) + z * sg;
    if is_nonneg_integer(Complex64::new(l, 0.0) - z * (2.0 * sg)) {
        return Ok(ResidueValue {
            location,
            order: PoleOrder::Double,
            leading: None,
        });
    }
    let sign = if ell % 2 == 0 { 1.0 } else { -1.0 };
    let mut factorial = 1.0;
    for j in 2..=ell {
        factorial *= j as f64;
    }
    // Γ(a+ℓ)/Γ(a) with a = 1/2 - k/2 ∓ z is the Pochhammer symbol (a)_ℓ
    let a = Complex64::new(0.5 - 0.5 * k, 0.0) - z * sg;
    let mut poch = Complex64::new(1.0, 0.0);
    for j in 0..ell {
        poch *= a + j as f64;
    }
    let two = Complex64::new(2.0, 0.0).powc(0.5 + l - z * sg);
    let g = gamma_c(z * (2.0 * sg) - l)?;
    let r = recip_gamma(0.5 - 0.5 * k + z * sg)?;
    let leading = ComplexVal::exact(two * poch * (sign / factorial)) * g * r;
    Ok(ResidueValue {
        location,
        order: PoleOrder::Simple,
        leading: Some(leading),
    })
}

/// Approach to the rightmost pole `s₀ = 1/2 + |z|` (ℓ = 0) along the real ray
/// `s = s₀ + η`, reporting `η·M_k(s₀+η, δ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleLimit {
    pub pole: Complex64,
    /// `(η, η·M_k(s₀+η))` at the smallest step.
    pub eta: f64,
    pub quotient: ComplexVal,
    /// Linear extrapolation `2q(η) - q(2η)` removing the `O(η)` term.
    pub extrapolated: Complex64,
}

pub fn pole_limit(
    z: Complex64,
    k: f64,
    branch: PoleBranch,
    delta: f64,
    eta: f64,
) -> Result<PoleLimit> {
    let pole = Complex64::new(0.5, 0.0) + z * branch.sign();
    if !((z * branch.sign()).re > 0.0) {
        return Err(Error::Region {
            constraint: "the pole must be the rightmost one, Re(±z) > 0",
        });
    }
    if !(eta > 0.0) {
        return Err(Error::Domain("pole_limit needs eta > 0"));
    }
    let q = |e: f64| -> Result<ComplexVal> {
        let p = MellinParams::new(pole + e, z, k, delta);
        Ok(m_k(&p)?.scale(Complex64::new(e, 0.0)))
    };
    let near = q(eta)?;
    let far = q(2.0 * eta)?;
    Ok(PoleLimit {
        pole,
        eta,
        quotient: near,
        extrapolated: near.value * 2.0 - far.value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn elementary_case() {
        // W_{0,1/2}(2y) = e^{-y}, so the integral is ∫ e^{-δy} dy = 1/δ
        let v = m_k(&MellinParams::new(c(2.0, 0.0), c(0.5, 0.0), 0.0, 0.1)).unwrap();
        assert!(rel(v.value, c(10.0, 0.0)) < 1e-10, "{v:?}");
        assert!(v.abs_err < 1e-8);
    }

    #[test]
    fn frozen_values() {
        let cases = [
            (
                c(1.6, 0.0),
                c(0.0, 0.25),
                0.5,
                0.05,
                c(16.573_192_144_804_84, 0.0),
            ),
            (
                c(1.3, 0.0),
                c(0.2, 0.0),
                0.5,
                0.3,
                c(3.636820009297088, 0.0),
            ),
            (
                c(0.9, 0.0),
                c(0.1, 0.2),
                0.0,
                0.01,
                c(8.076422291778003, 1.024728372311367),
            ),
        ];
        for (s, z, k, d, want) in cases {
            let got = m_k(&MellinParams::new(s, z, k, d)).unwrap().value;
            assert!(rel(got, want) < 1e-9, "{s} {z}: {got} vs {want}");
        }
    }

    #[test]
    fn even_in_z() {
        let p = MellinParams::new(c(1.4, 0.3), c(0.2, 0.4), 0.5, 0.1);
        let q = MellinParams { z: -p.z, ..p };
        let a = m_k(&p).unwrap().value;
        let b = m_k(&q).unwrap().value;
        assert!(rel(a, b) < 1e-12);
    }

    #[test]
    fn region_and_domain_errors() {
        let p = MellinParams::new(c(0.6, 0.0), c(0.2, 0.0), 0.0, 0.1);
        assert!(matches!(m_k(&p), Err(Error::Region { .. })));
        let p = MellinParams::new(c(2.0, 0.0), c(0.2, 0.0), 0.0, 0.0);
        assert!(matches!(m_k(&p), Err(Error::Domain(_))));
        assert!(matches!(
            m_k_limit_form(c(0.9, 0.0), c(0.1, 0.0), 0.5),
            Err(Error::Region { .. })
        ));
        assert!(TruncationWindow::new(0.5, 1).is_err());
    }

    #[test]
    fn truncation() {
        let p = MellinParams::new(c(2.0, 0.0), c(0.5, 0.0), 0.0, 0.1);
        let w = TruncationWindow::new(1.0, 1).unwrap();
        assert_eq!(m_truncated(&p, w).unwrap().value, c(0.0, 0.0));
        let w = TruncationWindow::new(100.0, 1).unwrap();
        let v = m_truncated(&p, w).unwrap().value;
        assert!(rel(v, c(9.937365126247784, 0.0)) < 1e-10, "{v}");
        assert!(v.re < 10.0);
    }

    #[test]
    fn truncation_gap_shrinks() {
        let p = MellinParams::new(c(1.3, 0.2), c(0.15, 0.1), 0.5, 0.2);
        let full = m_k(&p).unwrap().value;
        let gaps: Vec<f64> = [10.0, 30.0, 100.0]
            .iter()
            .map(|&y| {
                let w = TruncationWindow::new(y, 1).unwrap();
                (m_truncated(&p, w).unwrap().value - full).norm()
            })
            .collect();
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{gaps:?}");
    }

    #[test]
    fn limit_form_values() {
        let v = m_k_limit_form(c(0.75, 0.0), c(0.0, 0.0), 0.0)
            .unwrap()
            .value;
        let g = gamma_c(c(0.25, 0.0)).unwrap().value.re;
        let want = 2f64.powf(0.25) * g * g * g / PI;
        assert!((v.re - want).abs() < 1e-13 * want && v.im.abs() < 1e-13);
        let a = m_k_limit_form(c(0.6, 0.1), c(0.1, 0.3), 0.5).unwrap().value;
        let b = m_k_limit_form(c(0.6, 0.1), c(-0.1, -0.3), 0.5)
            .unwrap()
            .value;
        assert!(rel(a, b) < 1e-14);
    }

    #[test]
    fn residue_values() {
        let r = m_k_residue(0, c(0.3, 0.0), 0.0, PoleBranch::Plus).unwrap();
        assert_eq!(r.order, PoleOrder::Simple);
        let want = 2f64.powf(0.2) * gamma_c(c(0.6, 0.0)).unwrap().value.re
            / gamma_c(c(0.8, 0.0)).unwrap().value.re;
        assert!((r.leading.unwrap().value.re - want).abs() < 1e-13);
        assert!((r.location - c(0.8, 0.0)).norm() < 1e-15);

        let z = c(0.17, 0.4);
        let a = m_k_residue(0, z, 0.5, PoleBranch::Plus).unwrap();
        let b = m_k_residue(0, -z, 0.5, PoleBranch::Minus).unwrap();
        assert!(rel(a.leading.unwrap().value, b.leading.unwrap().value) < 1e-14);
        assert_eq!(a.location, b.location);

        let d = m_k_residue(1, c(0.5, 0.0), 0.0, PoleBranch::Plus).unwrap();
        assert_eq!(d.order, PoleOrder::Double);
        assert!(d.leading.is_none());
        // Γ(1/2 - k/2 - z) = Γ(0) cancels against the numerator
        let r = m_k_residue(0, c(0.25, 0.0), 0.5, PoleBranch::Plus).unwrap();
        assert!((r.leading.unwrap().value.re - 2f64.powf(0.25)).abs() < 1e-14);
        // 1/Γ(1/2 - k/2 + z) = 1/Γ(0) kills the residue
        let zero = m_k_residue(0, c(-0.25, 0.0), 0.5, PoleBranch::Plus).unwrap();
        assert_eq!(zero.leading.unwrap().value, c(0.0, 0.0));
    }

    #[test]
    fn ladder_extrapolation_is_exact_on_geometric_data() {
        let l = c(1.5, -0.5);
        let r = c(0.3, 0.1);
        let vals = [l + r, l + r * r, l + r * r * r];
        assert!((extrapolate_ladder(vals).unwrap() - l).norm() < 1e-14);
    }

    #[test]
    fn pole_limit_approaches_residue() {
        let z = c(0.3, 0.0);
        let res = m_k_residue(0, z, 0.0, PoleBranch::Plus)
            .unwrap()
            .leading
            .unwrap()
            .value;
        let p = pole_limit(z, 0.0, PoleBranch::Plus, 1e-6, 1e-4).unwrap();
        assert!(rel(p.quotient.value, res) < 1e-3);
        assert!(rel(p.extrapolated, res) < 1e-5);
        assert!(pole_limit(z, 0.0, PoleBranch::Minus, 1e-6, 1e-4).is_err());
    }

    #[test]
    fn small_delta_matches_limit_after_correction() {
        let (s, z) = (c(0.75, 0.0), c(0.0, 0.0));
        let lim = m_k_limit_form(s, z, 0.0).unwrap().value;
        let m = m_k(&MellinParams::new(s, z, 0.0, 1e-4)).unwrap().value;
        let corr = m_k_delta_correction(s, 0.0, 1e-4).unwrap().value;
        assert!(rel(m - corr, lim) < 1e-5);
    }
}
