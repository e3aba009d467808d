//! The shifted-convolution Dirichlet series
//! `Σ_{a,c>=1} τ(h+4ac) a^{-(s+v/2-1/4)} c^{-(s-v/2-1/4)}`, its Gamma-weighted
//! forms, the finite correction terms that sit next to it, and the Fourier
//! coefficient `D_∞` of the half-integral-weight Eisenstein series.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;

use crate::arith::{
    factorize, gauss_sum, isqrt, kronecker, sigma_minus_v, tau, Factorizer, TrialDivision,
};
use crate::error::{Error, Result};
use crate::mellin::{m_k, MellinParams};
use crate::quad::compensated_sum;
use crate::specfun::{bessel_k, bessel_k_mellin, gamma_c, riemann_zeta, zeta_star};
use crate::value::{ComplexVal, SeriesValue};

/// Shift `h`, damping `δ`, cutoff `Y` and truncation lengths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftConfig {
    pub h: u64,
    pub delta: f64,
    pub y: f64,
    /// Largest `m = ac` kept in the shifted series.
    pub terms: u64,
    /// Largest `n` kept in the Gauss-sum series for `D_∞`.
    pub gauss_terms: u64,
    /// `D_0 = factor · D_∞`. `None` means the factor was not supplied and 1 is used.
    pub d0_factor: Option<Complex64>,
}

impl ShiftConfig {
    pub fn new(h: u64) -> Result<Self> {
        if h == 0 {
            return Err(Error::Domain("shift h must be >= 1"));
        }
        Ok(Self {
            h,
            delta: 0.0,
            y: 1.0,
            terms: 100_000,
            gauss_terms: 10_000,
            d0_factor: None,
        })
    }

    pub fn with_delta(self, delta: f64) -> Self {
        Self { delta, ..self }
    }

    pub fn with_terms(self, terms: u64) -> Self {
        Self { terms, ..self }
    }

    pub fn with_gauss_terms(self, gauss_terms: u64) -> Self {
        Self {
            gauss_terms,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.h == 0 {
            return Err(Error::Domain("shift h must be >= 1"));
        }
        if !(self.delta >= 0.0) || !self.delta.is_finite() {
            return Err(Error::Domain("delta must be finite and >= 0"));
        }
        if !(self.y >= 1.0) {
            return Err(Error::Domain("Y must be >= 1"));
        }
        Ok(())
    }

    pub fn d0(&self) -> Complex64 {
        self.d0_factor.unwrap_or(Complex64::new(1.0, 0.0))
    }
}

fn cpow(base: f64, e: Complex64) -> Complex64 {
    (e * base.ln()).exp()
}

fn check_series_region(s: Complex64, v: Complex64) -> Result<f64> {
    let rho = s.re - 0.25 - 0.5 * v.re.abs();
    if !(rho > 1.0) {
        return Err(Error::Region {
            constraint: "Re s > 5/4 + |Re v|/2 for the shifted series",
        });
    }
    Ok(rho)
}

/// The `m = (b² - h)/4` with `1 <= m <= N`, i.e. exactly the `m` with
/// `τ(4m + h) != 0`, in increasing order.
fn square_shifts(h: u64, n: u64) -> Result<Vec<u64>> {
    let top = 4u128 * n as u128 + h as u128;
    if top > u64::MAX as u128 {
        return Err(Error::Overflow("4N + h exceeds u64"));
    }
    let b_max = isqrt(top as u64);
    let mut out = Vec::new();
    for b in (isqrt(h) + 1)..=b_max {
        let sq = b * b;
        if (sq - h) % 4 == 0 {
            out.push((sq - h) / 4);
        }
    }
    Ok(out)
}

/// Bound on `Σ_{m > N} τ(4m+h) |a^{-α} c^{-β}|` summed over `ac = m`.
///
/// With `ρ = σ - 1/4 - |Re v|/2`, each `m` contributes at most
/// `d(m) m^{-ρ} <= 2 m^{1/2-ρ}`, and `m >= ((b - √h)/2)²` for `b² = 4m + h`.
/// Comparing the sum over `b > b₀` with an integral gives
/// `8 ((b₀ - √h)/2)^{2-2ρ} / (2ρ - 2)`.
fn series_tail(h: u64, n: u64, rho: f64) -> f64 {
    let b0 = isqrt(4 * n + h) as f64;
    let gap = (b0 - (h as f64).sqrt()) / 2.0;
    if gap <= 0.0 {
        return f64::INFINITY;
    }
    8.0 * gap.powf(2.0 - 2.0 * rho) / (2.0 * rho - 2.0)
}

/// `Σ_{m<=N} τ(h+4m) σ_{-v}(m) m^{v/2} m^{-(s-1/4)}`, which is the shifted series
/// with `ac = m` grouped.
pub fn shifted_dirichlet(s: Complex64, v: Complex64, cfg: &ShiftConfig) -> Result<SeriesValue> {
    shifted_dirichlet_with(s, v, cfg, &TrialDivision)
}

pub fn shifted_dirichlet_with<F: Factorizer + ?Sized>(
    s: Complex64,
    v: Complex64,
    cfg: &ShiftConfig,
    factorizer: &F,
) -> Result<SeriesValue> {
    cfg.validate()?;
    let rho = check_series_region(s, v)?;
    let ms = square_shifts(cfg.h, cfg.terms)?;
    let mut err = 0.0;
    let mut terms = Vec::with_capacity(ms.len());
    for &m in &ms {
        let sig = sigma_minus_v(m, v, factorizer)?;
        let w = cpow(m as f64, v * 0.5 - s + 0.25) * 2.0;
        let t = sig.scale(w);
        err += t.abs_err + t.value.norm() * 4.0 * f64::EPSILON * (1.0 + s.norm());
        terms.push(t.value);
    }
    Ok(SeriesValue {
        value: ComplexVal::new(compensated_sum(terms.into_iter()), err),
        tail_bound: series_tail(cfg.h, cfg.terms, rho),
        terms_used: cfg.terms,
    })
}

/// The same truncated series summed over pairs `(a, c)` with `ac <= N`.
/// Slower; kept as an independent route.
pub fn shifted_dirichlet_pairs(
    s: Complex64,
    v: Complex64,
    cfg: &ShiftConfig,
) -> Result<SeriesValue> {
    cfg.validate()?;
    let rho = check_series_region(s, v)?;
    let alpha = s + v * 0.5 - 0.25;
    let beta = s - v * 0.5 - 0.25;
    let mut terms = Vec::new();
    for a in 1..=cfg.terms {
        let pa = cpow(a as f64, -alpha);
        for c in 1..=cfg.terms / a {
            let t = u64::from(tau(cfg.h + 4 * a * c));
            if t != 0 {
                terms.push(pa * cpow(c as f64, -beta) * t as f64);
            }
        }
    }
    let mag: f64 = terms.iter().map(|t| t.norm()).sum();
    Ok(SeriesValue {
        value: ComplexVal::new(
            compensated_sum(terms.into_iter()),
            mag * 4.0 * f64::EPSILON * (1.0 + s.norm()),
        ),
        tail_bound: series_tail(cfg.h, cfg.terms, rho),
        terms_used: cfg.terms,
    })
}

/// `(16π)^{3/4-s} Γ(s-1/4+v/2) Γ(s-1/4-v/2) / Γ(s+1/4)`.
pub fn gamma_prefactor(s: Complex64, v: Complex64) -> Result<ComplexVal> {
    let g1 = gamma_c(s - 0.25 + v * 0.5)?;
    let g2 = gamma_c(s - 0.25 - v * 0.5)?;
    let g3 = gamma_c(s + 0.25)?;
    let inv = ComplexVal::new(g3.value.inv(), g3.rel_err() / g3.value.norm());
    let base = ComplexVal::exact(cpow(16.0 * PI, 0.75 - s));
    Ok(base * g1 * g2 * inv)
}

fn scale_series(series: SeriesValue, factor: ComplexVal) -> SeriesValue {
    SeriesValue {
        value: series.value * factor,
        tail_bound: series.tail_bound * (factor.value.norm() + factor.abs_err),
        terms_used: series.terms_used,
    }
}

/// The shifted series times [`gamma_prefactor`]; the `δ → 0`, `Y → ∞` limit
/// of the Eisenstein inner product.
pub fn dirichlet_with_prefactor(
    s: Complex64,
    v: Complex64,
    cfg: &ShiftConfig,
) -> Result<SeriesValue> {
    let series = shifted_dirichlet(s, v, cfg)?;
    Ok(scale_series(series, gamma_prefactor(s, v)?))
}

/// `ε ↦ ∫_0^∞ y^{s-5/4} e^{-y(1+ε)} K_{v/2}(y) dy`.
///
/// Small `ε` uses the Taylor series in `ε` whose coefficients are the moments
/// at `ε = 0`, each found by quadrature; `|e^{-εy} - Σ_{j<=J} (-εy)^j/j!| <=
/// (εy)^{J+1}/(J+1)!` bounds the remainder by the next real moment.
struct DampedBesselWeight {
    s: Complex64,
    nu: Complex64,
    moments: Vec<ComplexVal>,
    real_moments: Vec<f64>,
}

const TAYLOR_LIMIT: f64 = 0.05;
const TAYLOR_TERMS: usize = 14;

impl DampedBesselWeight {
    fn new(s: Complex64, v: Complex64) -> Self {
        Self {
            s: s - 0.25,
            nu: v * 0.5,
            moments: Vec::new(),
            real_moments: Vec::new(),
        }
    }

    fn moment(&mut self, j: usize) -> Result<ComplexVal> {
        while self.moments.len() <= j {
            let k = self.moments.len() as f64;
            self.moments
                .push(bessel_k_mellin(self.s + k, self.nu, 1.0)?);
        }
        Ok(self.moments[j])
    }

    fn real_moment(&mut self, j: usize) -> Result<f64> {
        while self.real_moments.len() <= j {
            let k = self.real_moments.len() as f64;
            let m = bessel_k_mellin(
                Complex64::new(self.s.re + k, 0.0),
                Complex64::new(self.nu.re.abs(), 0.0),
                1.0,
            )?;
            self.real_moments.push(m.value.re + m.abs_err);
        }
        Ok(self.real_moments[j])
    }

    /// Real-part majorant of the weight, valid for every `ε >= 0`.
    fn bound(&mut self) -> Result<f64> {
        self.real_moment(0)
    }

    fn eval(&mut self, eps: f64) -> Result<ComplexVal> {
        if eps > TAYLOR_LIMIT {
            return bessel_k_mellin(self.s, self.nu, 1.0 + eps);
        }
        let mut acc = Vec::with_capacity(TAYLOR_TERMS);
        let mut coeff = 1.0;
        let mut err = 0.0;
        for j in 0..TAYLOR_TERMS {
            let m = self.moment(j)?;
            acc.push(m.value * coeff);
            err += m.abs_err * coeff.abs();
            coeff *= -eps / (j + 1) as f64;
        }
        err += coeff.abs() * self.real_moment(TAYLOR_TERMS)?;
        Ok(ComplexVal::new(compensated_sum(acc.into_iter()), err))
    }
}

/// `4 (8π)^{1/4-s} Σ_{m<=N} τ(4m+h) σ_{-v}(m) m^{v/2-s+1/4} W(δh/4m)` with
/// `W` the damped Bessel weight; tends to [`dirichlet_with_prefactor`] as `δ → 0`.
pub fn frak_d(s: Complex64, v: Complex64, cfg: &ShiftConfig) -> Result<SeriesValue> {
    cfg.validate()?;
    let rho = check_series_region(s, v)?;
    if !(cfg.delta > 0.0) {
        return Err(Error::Domain("frak_d needs delta > 0"));
    }
    let mut weight = DampedBesselWeight::new(s, v);
    let mut terms = Vec::new();
    let mut err = 0.0;
    for m in square_shifts(cfg.h, cfg.terms)? {
        let sig = sigma_minus_v(m, v, &TrialDivision)?;
        let w = weight.eval(cfg.delta * cfg.h as f64 / (4.0 * m as f64))?;
        let t = (sig * w).scale(cpow(m as f64, v * 0.5 - s + 0.25) * 2.0);
        err += t.abs_err;
        terms.push(t.value);
    }
    let pre = cpow(8.0 * PI, 0.25 - s) * 4.0;
    let sum = compensated_sum(terms.into_iter());
    Ok(SeriesValue {
        value: ComplexVal::new(
            sum * pre,
            (err + sum.norm() * 8.0 * f64::EPSILON) * pre.norm(),
        ),
        tail_bound: series_tail(cfg.h, cfg.terms, rho) * weight.bound()? * pre.norm(),
        terms_used: cfg.terms,
    })
}

/// `4 Σ_{m=1}^{⌊h/4⌋} τ(h-4m) σ_{-v}(m) m^{v/2} (8πm)^{1/4-s} √(π/2)
/// M_0(s+1/4, v/2, δh/4m)`: the `Y → ∞` limit of the terms with `4m < h`.
/// The `m = h/4` term has `τ(0) = 1`.
pub fn finite_shift_term(s: Complex64, v: Complex64, cfg: &ShiftConfig) -> Result<ComplexVal> {
    cfg.validate()?;
    let mut total = ComplexVal::new(Complex64::new(0.0, 0.0), 0.0);
    for m in 1..=cfg.h / 4 {
        let t = u64::from(tau(cfg.h - 4 * m));
        if t == 0 {
            continue;
        }
        if !(cfg.delta > 0.0) {
            return Err(Error::Domain("finite_shift_term needs delta > 0"));
        }
        let mf = m as f64;
        let sig = sigma_minus_v(m, v, &TrialDivision)?;
        let mellin = m_k(&MellinParams::new(
            s + 0.25,
            v * 0.5,
            0.0,
            cfg.delta * cfg.h as f64 / (4.0 * mf),
        ))?;
        let scale = cpow(mf, v * 0.5)
            * cpow(8.0 * PI * mf, 0.25 - s)
            * (4.0 * t as f64 * (PI / 2.0).sqrt());
        total = total + (sig * mellin).scale(scale);
    }
    Ok(total)
}

/// `τ(h) 4^{3/4-s} (δhπ)^{1/4-s-v/2} (ζ*(1+v) Γ(s-1/4+v/2) + (δhπ)^v ζ*(v) Γ(s-1/4-v/2))`:
/// the `Y → ∞` limit of the constant-term contribution.
pub fn zero_coeff_term(s: Complex64, v: Complex64, cfg: &ShiftConfig) -> Result<ComplexVal> {
    cfg.validate()?;
    let t = u64::from(tau(cfg.h));
    if t == 0 {
        return Ok(ComplexVal::exact(Complex64::new(0.0, 0.0)));
    }
    if !(cfg.delta > 0.0) {
        return Err(Error::Domain("zero_coeff_term needs delta > 0"));
    }
    let x = cfg.delta * cfg.h as f64 * PI;
    let first = zeta_star(v + 1.0)? * gamma_c(s - 0.25 + v * 0.5)?;
    let second = (zeta_star(v)? * gamma_c(s - 0.25 - v * 0.5)?).scale(cpow(x, v));
    let outer = cpow(x, 0.25 - s - v * 0.5) * cpow(4.0, 0.75 - s) * t as f64;
    Ok((first + second).scale(outer))
}

/// `g_h(4n)` for `n = 1..=N`, the coefficients of `D_∞(u; h)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussCoefficients {
    pub h: u64,
    values: Vec<ComplexVal>,
}

impl GaussCoefficients {
    pub fn compute(h: u64, n: u64) -> Result<Self> {
        let values = (1..=n)
            .map(|k| gauss_sum(h, 4 * k).map(|g| g.value))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { h, values })
    }

    pub fn from_values(h: u64, values: Vec<ComplexVal>) -> Self {
        Self { h, values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[ComplexVal] {
        &self.values
    }

    /// `Σ_{n<=N} g_h(4n) (4n)^{-2u}`, tail bounded with `|g_h(c)| <= c`.
    pub fn dirichlet(&self, u: Complex64) -> Result<SeriesValue> {
        if !(u.re > 1.5) {
            return Err(Error::Region {
                constraint: "Re u > 3/2 for the Gauss-sum series",
            });
        }
        let mut err = 0.0;
        let terms: Vec<Complex64> = self
            .values
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let c = 4.0 * (i + 1) as f64;
                let w = cpow(c, -u * 2.0);
                err += g.abs_err * w.norm()
                    + (g.value * w).norm() * 4.0 * f64::EPSILON * (1.0 + u.norm());
                g.value * w
            })
            .collect();
        let n = self.values.len() as f64;
        let sigma = 2.0 * u.re;
        let tail = if self.values.is_empty() {
            4f64.powf(1.0 - sigma) * (1.0 + 1.0 / (sigma - 2.0))
        } else {
            4f64.powf(1.0 - sigma) * n.powf(2.0 - sigma) / (sigma - 2.0)
        };
        Ok(SeriesValue {
            value: ComplexVal::new(compensated_sum(terms.into_iter()), err),
            tail_bound: tail,
            terms_used: self.values.len() as u64,
        })
    }
}

/// `D_∞(u; h) = Σ_{n<=N} g_h(4n) / (4n)^{2u}` with `N = cfg.gauss_terms`.
pub fn d_cusp_series(u: Complex64, cfg: &ShiftConfig) -> Result<SeriesValue> {
    cfg.validate()?;
    if !(u.re > 1.5) {
        return Err(Error::Region {
            constraint: "Re u > 3/2 for the Gauss-sum series",
        });
    }
    GaussCoefficients::compute(cfg.h, cfg.gauss_terms)?.dirichlet(u)
}

/// The explicit factor `F_∞(s; h)`:
/// `h^{s+1/4} π^{s-3/2} cos π(1/4 - h/2) / (ζ*(4s-1) (2^{4s-1} - 1) √(2π))`
/// times, for each `p^l ∥ h` with `p` odd,
/// `Σ_{i<=⌊(l-1)/2⌋} p^{-4(s-1/2)i} + [l even] p^{-2l(s-1/2)} (1 - (h/p^l | p) p^{-(2s-1/2)})^{-1}`.
pub fn f_infinity(s: Complex64, h: u64) -> Result<ComplexVal> {
    if h == 0 {
        return Err(Error::Domain("f_infinity needs h >= 1"));
    }
    let zs = zeta_star(s * 4.0 - 1.0)?;
    let two = cpow(2.0, s * 4.0 - 1.0) - 1.0;
    if two.norm() == 0.0 {
        return Err(Error::Pole { at: s });
    }
    let hf = h as f64;
    let mut pre = cpow(hf, s + 0.25) * cpow(PI, s - 1.5) * (PI * (0.25 - hf / 2.0)).cos()
        / (two * (2.0 * PI).sqrt());
    for &(p, l) in factorize(h)?.factors() {
        if p == 2 {
            continue;
        }
        let pf = p as f64;
        let mut local = Complex64::new(0.0, 0.0);
        for i in 0..=((l - 1) / 2) {
            local += cpow(pf, -(s - 0.5) * (4.0 * i as f64));
        }
        if l % 2 == 0 {
            let rest = (h / p.pow(l)) as i64;
            let chi = kronecker(rest, p as i64) as f64;
            let inner = Complex64::new(1.0, 0.0) - cpow(pf, -(s * 2.0 - 0.5)) * chi;
            local += cpow(pf, -(s - 0.5) * (2.0 * l as f64)) / inner;
        }
        pre *= local;
    }
    let inv = ComplexVal::new(zs.value.inv(), zs.rel_err() / zs.value.norm());
    Ok(inv.scale(pre))
}

/// Fourier coefficient `a_v(n, y)` of the completed weight-zero Eisenstein series:
/// `ζ*(1+v) y^{1/2+v/2} + ζ*(v) y^{1/2-v/2}` for `n = 0`, otherwise
/// `2 y^{1/2} σ_{-v}(|n|) |n|^{v/2} K_{v/2}(2π|n|y)`.
pub fn eisenstein_fourier_coeff(n: i64, y: f64, v: Complex64) -> Result<ComplexVal> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::Domain("eisenstein_fourier_coeff needs finite y > 0"));
    }
    if n == 0 {
        let a = zeta_star(v + 1.0)?.scale(cpow(y, v * 0.5 + 0.5));
        let b = zeta_star(v)?.scale(cpow(y, -v * 0.5 + 0.5));
        return Ok(a + b);
    }
    let m = n.unsigned_abs();
    let sig = sigma_minus_v(m, v, &TrialDivision)?;
    let k = bessel_k(v * 0.5, 2.0 * PI * m as f64 * y)?;
    Ok((sig * k).scale(cpow(m as f64, v * 0.5) * (2.0 * y.sqrt())))
}

/// Continuation of `D_∞(u; h)` for square `h = r²` through
/// `D_∞(u) = 4^{-2u} L(w) H(w) / ζ(2w)`, `w = 2u - 1/2`, where
/// `L(w) = ζ(w) Π_{p | 2r} (1 - p^{-w})` and `H(w) = Σ C(n) n^{-w}` runs over
/// the `2r`-smooth `n`. Here `C(n) = Σ_{k² | n} g_h(4n/k²) / √(n/k²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CuspContinuation {
    pub h: u64,
    primes: Vec<u64>,
    coeffs: Vec<(u64, Complex64)>,
    /// Largest smooth `n` kept in `H`.
    pub max_n: u64,
}

impl CuspContinuation {
    pub fn new(h: u64, max_n: u64) -> Result<Self> {
        let r = isqrt(h);
        if h == 0 || r * r != h {
            return Err(Error::Domain("the cusp continuation needs a square h"));
        }
        let mut primes: Vec<u64> = factorize(2 * r)?
            .factors()
            .iter()
            .map(|&(p, _)| p)
            .collect();
        primes.sort_unstable();
        // 2r-smooth numbers up to max_n
        let mut smooth = alloc::vec![1u64];
        for &p in &primes {
            let mut next = Vec::new();
            for &n in &smooth {
                let mut x = n;
                while x <= max_n {
                    next.push(x);
                    x = match x.checked_mul(p) {
                        Some(y) => y,
                        None => break,
                    };
                }
            }
            smooth = next;
        }
        smooth.sort_unstable();
        let mut a_vals = Vec::with_capacity(smooth.len());
        for &n in &smooth {
            let g = gauss_sum(h, 4 * n)?.value.value;
            a_vals.push(g / (n as f64).sqrt());
        }
        let lookup = |n: u64| -> Complex64 {
            match smooth.binary_search(&n) {
                Ok(i) => a_vals[i],
                Err(_) => Complex64::new(0.0, 0.0),
            }
        };
        let mut coeffs = Vec::with_capacity(smooth.len());
        for &n in &smooth {
            let mut c = Complex64::new(0.0, 0.0);
            let mut k = 1u64;
            while k * k <= n {
                if n % (k * k) == 0 {
                    c += lookup(n / (k * k));
                }
                k += 1;
            }
            coeffs.push((n, c));
        }
        Ok(Self {
            h,
            primes,
            coeffs,
            max_n,
        })
    }

    pub fn coefficients(&self) -> &[(u64, Complex64)] {
        &self.coeffs
    }

    /// `H(w)`, truncated at `max_n`.
    pub fn h_factor(&self, w: Complex64) -> Complex64 {
        compensated_sum(self.coeffs.iter().map(|&(n, c)| c * cpow(n as f64, -w)))
    }

    /// `L(w, (4h/·)) = ζ(w) Π_{p | 2r} (1 - p^{-w})`.
    pub fn l_factor(&self, w: Complex64) -> Result<ComplexVal> {
        let mut euler = Complex64::new(1.0, 0.0);
        for &p in &self.primes {
            euler *= Complex64::new(1.0, 0.0) - cpow(p as f64, -w);
        }
        Ok(riemann_zeta(w)?.scale(euler))
    }

    pub fn d_infinity(&self, u: Complex64) -> Result<ComplexVal> {
        let w = u * 2.0 - 0.5;
        let l = self.l_factor(w)?;
        let z2 = riemann_zeta(w * 2.0)?;
        let inv = ComplexVal::new(z2.value.inv(), z2.rel_err() / z2.value.norm());
        Ok((l * inv).scale(self.h_factor(w) * cpow(4.0, -u * 2.0)))
    }
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
    fn vanishing_residues() {
        for h in [2u64, 3, 6, 7, 11, 14] {
            let cfg = ShiftConfig::new(h)
                .unwrap()
                .with_terms(2000)
                .with_delta(0.01);
            let s = c(2.0, 0.3);
            let v = c(0.2, 0.1);
            assert_eq!(
                shifted_dirichlet(s, v, &cfg).unwrap().value.value,
                c(0.0, 0.0)
            );
            assert_eq!(frak_d(s, v, &cfg).unwrap().value.value, c(0.0, 0.0));
            assert_eq!(zero_coeff_term(s, v, &cfg).unwrap().value, c(0.0, 0.0));
            if h < 4 {
                assert_eq!(finite_shift_term(s, v, &cfg).unwrap().value, c(0.0, 0.0));
            }
        }
    }

    #[test]
    fn shifted_series_frozen() {
        let cfg = ShiftConfig::new(1).unwrap();
        let d = shifted_dirichlet(c(2.0, 0.0), c(0.0, 0.0), &cfg).unwrap();
        assert!((d.value.value.re - 1.8884865964737334).abs() < 1e-13);
        assert!(d.tail_bound < 1e-2 && d.tail_bound > 0.0);
        let p = dirichlet_with_prefactor(c(2.0, 0.0), c(0.0, 0.0), &cfg).unwrap();
        assert!(rel(p.value.value, c(0.010519270151160599, 0.0)) < 1e-13);

        let cfg = ShiftConfig::new(4).unwrap().with_terms(10_000);
        let d = shifted_dirichlet(c(2.3, 0.4), c(0.3, -0.2), &cfg).unwrap();
        assert!(
            rel(
                d.value.value,
                c(0.468_262_819_692_062_1, -0.35004700245351166)
            ) < 1e-13
        );
    }

    #[test]
    fn grouped_and_pair_sums_agree() {
        for h in [1u64, 4, 5, 8, 12] {
            let cfg = ShiftConfig::new(h).unwrap().with_terms(3000);
            let (s, v) = (c(1.9, 0.7), c(0.4, -0.3));
            let a = shifted_dirichlet(s, v, &cfg).unwrap().value.value;
            let b = shifted_dirichlet_pairs(s, v, &cfg).unwrap().value.value;
            assert!(rel(a, b) < 1e-13, "h={h}: {a} vs {b}");
        }
    }

    #[test]
    fn tail_bound_covers_the_gap() {
        let (s, v) = (c(1.6, 0.0), c(0.2, 0.0));
        let short = ShiftConfig::new(5).unwrap().with_terms(200);
        let long = short.with_terms(200_000);
        let a = shifted_dirichlet(s, v, &short).unwrap();
        let b = shifted_dirichlet(s, v, &long).unwrap();
        let gap = (a.value.value - b.value.value).norm();
        assert!(gap <= a.tail_bound, "{gap} > {}", a.tail_bound);
    }

    #[test]
    fn even_in_v() {
        let cfg = ShiftConfig::new(4).unwrap().with_terms(5000);
        let s = c(2.1, 0.2);
        let v = c(0.3, 0.5);
        let a = dirichlet_with_prefactor(s, v, &cfg).unwrap().value.value;
        let b = dirichlet_with_prefactor(s, -v, &cfg).unwrap().value.value;
        assert!(rel(a, b) < 1e-13);
    }

    #[test]
    fn region_errors() {
        let cfg = ShiftConfig::new(1).unwrap();
        assert!(matches!(
            shifted_dirichlet(c(1.3, 0.0), c(0.2, 0.0), &cfg),
            Err(Error::Region { .. })
        ));
        assert!(matches!(
            d_cusp_series(c(1.4, 0.0), &cfg),
            Err(Error::Region { .. })
        ));
        assert!(ShiftConfig::new(0).is_err());
    }

    #[test]
    fn frak_d_tends_to_prefactor_form() {
        let cfg = ShiftConfig::new(1).unwrap().with_terms(20_000);
        let (s, v) = (c(2.0, 0.0), c(0.0, 0.0));
        let target = dirichlet_with_prefactor(s, v, &cfg).unwrap().value.value;
        let gaps: Vec<f64> = [1e-2, 1e-3, 1e-4, 1e-7]
            .iter()
            .map(|&d| (frak_d(s, v, &cfg.with_delta(d)).unwrap().value.value - target).norm())
            .collect();
        assert!(gaps.windows(2).all(|w| w[0] > w[1]), "{gaps:?}");
        assert!(gaps[3] < 1e-6 * target.norm());
    }

    #[test]
    fn finite_and_zero_terms_frozen() {
        let (s, v) = (c(2.0, 0.0), c(0.5, 0.0));
        let cfg = ShiftConfig::new(1).unwrap().with_delta(0.01);
        assert_eq!(finite_shift_term(s, v, &cfg).unwrap().value, c(0.0, 0.0));
        let f5 = finite_shift_term(s, v, &ShiftConfig { h: 5, ..cfg }).unwrap();
        assert!(rel(f5.value, c(7.682829524325763, 0.0)) < 1e-9, "{f5:?}");
        let f8 = finite_shift_term(s, v, &ShiftConfig { h: 8, ..cfg }).unwrap();
        assert!(rel(f8.value, c(7.328575322697645, 0.0)) < 1e-9, "{f8:?}");
        let z4 = zero_coeff_term(s, v, &ShiftConfig { h: 4, ..cfg }).unwrap();
        assert!(rel(z4.value, c(2.4004469164092736, 0.0)) < 1e-12);
        assert_eq!(
            zero_coeff_term(s, v, &ShiftConfig { h: 5, ..cfg })
                .unwrap()
                .value,
            c(0.0, 0.0)
        );
    }

    #[test]
    fn zero_coeff_scaling_in_delta() {
        let (s, v) = (c(2.0, 0.0), c(0.5, 0.0));
        let cfg = ShiftConfig::new(4).unwrap().with_delta(0.02);
        let a = zero_coeff_term(s, v, &cfg).unwrap().value;
        let b = zero_coeff_term(s, v, &cfg.with_delta(0.01)).unwrap().value;
        // split by hand into the two δ-powers and compare
        let x = |d: f64| d * 4.0 * PI;
        let p1 = zeta_star(v + 1.0).unwrap().value * gamma_c(s - 0.25 + v * 0.5).unwrap().value;
        let p2 = zeta_star(v).unwrap().value * gamma_c(s - 0.25 - v * 0.5).unwrap().value;
        let model = |d: f64| {
            (p1 * cpow(x(d), 0.25 - s - v * 0.5) + p2 * cpow(x(d), 0.25 - s + v * 0.5))
                * cpow(4.0, 0.75 - s)
                * 2.0
        };
        assert!(rel(a, model(0.02)) < 1e-13 && rel(b, model(0.01)) < 1e-13);
    }

    #[test]
    fn gauss_series_frozen() {
        let cfg = ShiftConfig::new(1).unwrap().with_gauss_terms(1000);
        let d = d_cusp_series(c(3.0, 0.0), &cfg).unwrap();
        assert!(
            rel(
                d.value.value,
                c(0.00025557898115206726, 0.00025557898115206726)
            ) < 1e-12
        );
        let cfg = ShiftConfig::new(4).unwrap().with_gauss_terms(1000);
        let d = d_cusp_series(c(3.0, 0.0), &cfg).unwrap();
        assert!(
            rel(
                d.value.value,
                c(0.0002450115187263046, 0.0002450115187263046)
            ) < 1e-12
        );
        assert!(d.tail_bound < 1e-12);
        let empty = d_cusp_series(c(3.0, 0.0), &cfg.with_gauss_terms(0)).unwrap();
        assert_eq!(empty.value.value, c(0.0, 0.0));
    }

    #[test]
    fn f_infinity_values() {
        let f = f_infinity(c(1.0, 0.0), 9).unwrap().value;
        assert!(rel(f, c(2.107492250988823, 0.0)) < 1e-12);
        let f = f_infinity(c(2.5, 1.0), 45).unwrap().value;
        assert!(rel(f, c(-62.876_345_219_385_61, 1457.9073454079476)) < 1e-11);
        // odd prime to the first power: the local factor is 1
        let p = f_infinity(c(2.0, 0.0), 7).unwrap().value;
        let one = f_infinity(c(2.0, 0.0), 1).unwrap().value;
        let scale = 7f64.powf(2.25) * (PI * (0.25 - 3.5)).cos() / (PI * (0.25 - 0.5)).cos();
        assert!(rel(p, one * scale) < 1e-13);
    }

    #[test]
    fn eisenstein_coefficients() {
        let a = eisenstein_fourier_coeff(2, 0.5, c(1.0, 0.0)).unwrap().value;
        assert!(rel(a, c(0.002801164097561983, 0.0)) < 1e-12);
        let z = eisenstein_fourier_coeff(0, 1.0, c(2.0, 0.0)).unwrap().value;
        assert!(rel(z, c(0.714912073613884, 0.0)) < 1e-12);
        let v = c(0.3, 0.8);
        let p = eisenstein_fourier_coeff(1, 0.7, v).unwrap().value;
        let m = eisenstein_fourier_coeff(1, 0.7, -v).unwrap().value;
        assert!(rel(p, m) < 1e-13);
        assert!(eisenstein_fourier_coeff(0, 1.0, c(0.0, 0.0)).is_err());
    }

    #[test]
    fn continuation_matches_direct_series() {
        for h in [1u64, 4, 9] {
            let cont = CuspContinuation::new(h, 1 << 16).unwrap();
            let coeffs = GaussCoefficients::compute(h, 1500).unwrap();
            for u in [c(2.0, 0.0), c(2.5, 1.0)] {
                let direct = coeffs.dirichlet(u).unwrap();
                let via = cont.d_infinity(u).unwrap().value;
                assert!(
                    rel(via, direct.value.value) < 1e-8,
                    "h={h} u={u}: {via} vs {:?}",
                    direct.value
                );
            }
        }
        assert!(CuspContinuation::new(5, 100).is_err());
    }
}
