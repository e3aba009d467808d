use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;

use super::gamma::{gamma_c, sin_pi};
use crate::arith::kronecker;
use crate::error::{Error, Result};
use crate::quad::compensated_sum;
use crate::value::{ComplexVal, SeriesValue};

/// `B_{2k} / (2k)!` for the Euler-Maclaurin correction terms.
const EM: [f64; 20] = [
    0.083_333_333_333_333_33,
    -0.001_388_888_888_888_889,
    3.306_878_306_878_307e-5,
    -8.267_195_767_195_768e-7,
    2.087_675_698_786_81e-8,
    -5.284_190_138_687_493e-10,
    1.338_253_653_068_467_9e-11,
    -3.389_680_296_322_582_7e-13,
    8.586_062_056_277_845e-15,
    -2.174_868_698_558_062e-16,
    5.509_002_828_360_229_5e-18,
    -1.395_446_468_581_252_2e-19,
    3.534_707_039_629_467e-21,
    -8.953_517_427_037_546e-23,
    2.267_952_452_337_683e-24,
    -5.744_790_668_872_202e-26,
    1.455_172_475_614_865e-27,
    -3.685_994_940_665_310_3e-29,
    9.336_734_257_095_045e-31,
    -2.365_022_415_700_63e-32,
];

/// Riemann zeta by Euler-Maclaurin summation for `Re s >= -1`, functional
/// equation below that.
pub fn riemann_zeta(s: Complex64) -> Result<ComplexVal> {
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole { at: s });
    }
    if s.re < -1.0 {
        let one_minus = Complex64::new(1.0, 0.0) - s;
        let z = riemann_zeta(one_minus)?;
        let g = gamma_c(one_minus)?;
        let factor = (s * 2.0f64.ln()).exp() * (s * PI.ln() - PI.ln()).exp() * sin_pi(s * 0.5);
        return Ok((z * g).scale(factor));
    }
    let n = 10 + ((s.norm() + 30.0) / PI).ceil() as u64;
    let nf = n as f64;
    let ln_n = nf.ln();
    let head = compensated_sum((1..n).map(|k| (-s * (k as f64).ln()).exp()));
    let head_mag: f64 = (1..n).map(|k| (k as f64).powf(-s.re)).sum();
    let n_pow = (-s * ln_n).exp();
    let mut acc = head + n_pow * nf / (s - 1.0) + n_pow * 0.5;
    // rising factorial s(s+1)...(s+2k-2) times N^{-s-2k+1}
    let mut rising = s * n_pow / nf;
    let mut last = f64::INFINITY;
    for (k, c) in EM.iter().enumerate() {
        let term = rising * *c;
        acc += term;
        last = term.norm();
        if last <= f64::EPSILON * 1e-2 * acc.norm() {
            break;
        }
        let j = 2.0 * k as f64;
        rising *= (s + j + 1.0) * (s + j + 2.0) / (nf * nf);
    }
    let err = last + 4.0 * f64::EPSILON * (head_mag + acc.norm()) * (1.0 + s.norm() * ln_n);
    Ok(ComplexVal::new(acc, err))
}

/// Completed zeta `π^{-w/2} Γ(w/2) ζ(w)`; uses `ζ*(w) = ζ*(1-w)` only for `Re w < 0`.
pub fn zeta_star(w: Complex64) -> Result<ComplexVal> {
    if w == Complex64::new(0.0, 0.0) || w == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole { at: w });
    }
    if w.re < 0.0 {
        return zeta_star(Complex64::new(1.0, 0.0) - w);
    }
    let half = w * 0.5;
    let g = gamma_c(half)?;
    let z = riemann_zeta(w)?;
    Ok((g * z).scale((-half * PI.ln()).exp()))
}

/// `Σ_{n<=N} (4h/n) n^{-s}` with the tail bounded by `N^{1-σ}/(σ-1)`.
pub fn dirichlet_l(s: Complex64, h: u64, n_terms: u64) -> Result<SeriesValue> {
    if s.re <= 1.0 {
        return Err(Error::Region {
            constraint: "Re s > 1 for direct summation of L(s, (4h/.))",
        });
    }
    if h == 0 {
        return Err(Error::Domain("dirichlet_l needs h >= 1"));
    }
    let modulus = i64::try_from(4 * h as u128).map_err(|_| Error::Overflow("4h exceeds i64"))?;
    let mut mag = 0.0;
    let sum = compensated_sum((1..=n_terms).filter_map(|n| {
        let chi = kronecker(modulus, n as i64);
        if chi == 0 {
            return None;
        }
        let t = (-s * (n as f64).ln()).exp() * chi as f64;
        mag += t.norm();
        Some(t)
    }));
    // the empty sum leaves the whole series, bounded by 1 + 1/(σ-1)
    let n0 = n_terms.max(1) as f64;
    let tail = if n_terms == 0 {
        1.0 + 1.0 / (s.re - 1.0)
    } else {
        n0.powf(1.0 - s.re) / (s.re - 1.0)
    };
    Ok(SeriesValue {
        value: ComplexVal::new(sum, 4.0 * f64::EPSILON * mag * (1.0 + s.norm())),
        tail_bound: tail,
        terms_used: n_terms,
    })
}
