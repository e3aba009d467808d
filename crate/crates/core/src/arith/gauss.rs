use core::f64::consts::TAU;

use num_complex::Complex64;
use num_traits::Float;

use super::factor::{Factorizer, MAX_FACTOR_INPUT};
use super::symbols::jacobi;
use crate::error::{Error, Result};
use crate::value::ComplexVal;

/// `g_h(c)` together with its arguments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussSumRecord {
    pub h: u64,
    pub c: u64,
    pub value: ComplexVal,
}

/// Theta-multiplier factor for odd `d`: 1 when `d ≡ 1 (mod 4)`, `i` when `d ≡ 3 (mod 4)`.
pub fn epsilon_d(d: i64) -> Result<Complex64> {
    match d.rem_euclid(4) {
        1 => Ok(Complex64::new(1.0, 0.0)),
        3 => Ok(Complex64::new(0.0, 1.0)),
        _ => Err(Error::Domain("epsilon_d needs odd d")),
    }
}

/// `Σ_{d mod c, d odd} ε_d (c/d) e(dh/c)`, summed over `d = 1, 3, 5, ... < c`
/// (and `d = 1` when `c = 1`).
pub fn gauss_sum(h: u64, c: u64) -> Result<GaussSumRecord> {
    if c == 0 {
        return Err(Error::Domain("Gauss sum modulus must be positive"));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let mut terms = 0u64;
    let hc = h % c;
    let mut d = 1u64;
    loop {
        let sym = jacobi(c as i64, d)?;
        if sym != 0 {
            let eps = if d % 4 == 1 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 1.0)
            };
            let r = ((d as u128 * hc as u128) % c as u128) as f64;
            let (sin, cos) = (TAU * r / c as f64).sin_cos();
            acc += eps * Complex64::new(cos, sin) * sym as f64;
            terms += 1;
        }
        d += 2;
        if d >= c {
            break;
        }
    }
    Ok(GaussSumRecord {
        h,
        c,
        value: ComplexVal::new(acc, 4.0 * terms.max(1) as f64 * f64::EPSILON),
    })
}

/// `σ_{-v}(m) = Σ_{d|m} d^{-v}` by direct divisor enumeration.
pub fn sigma_minus_v<F: Factorizer + ?Sized>(
    m: u64,
    v: Complex64,
    factorizer: &F,
) -> Result<ComplexVal> {
    if m == 0 {
        return Err(Error::Domain("sigma_minus_v needs m >= 1"));
    }
    if m > MAX_FACTOR_INPUT {
        return Err(Error::Overflow("divisor enumeration bound 2^50 exceeded"));
    }
    let mut divs = factorizer.factorize(m)?.divisors();
    divs.sort_unstable();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut mag = 0.0;
    for d in &divs {
        let term = (-v * (*d as f64).ln()).exp();
        mag += term.norm();
        acc += term;
    }
    let err = mag * f64::EPSILON * (4.0 + v.norm() * (m as f64).ln().max(1.0));
    Ok(ComplexVal::new(acc, err))
}

#[cfg(test)]
mod tests {
    use super::super::factor::TrialDivision;
    use super::*;
    use proptest::prelude::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1.0)
    }

    #[test]
    fn epsilon_values() {
        assert_eq!(epsilon_d(1).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(epsilon_d(3).unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(epsilon_d(7).unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(epsilon_d(-1).unwrap(), Complex64::new(0.0, 1.0));
        assert!(epsilon_d(4).is_err());
    }

    #[test]
    fn gauss_small_moduli() {
        let g = gauss_sum(1, 4).unwrap().value.value;
        assert!(close(g, Complex64::new(1.0, 1.0), 1e-15));
        for h in 0..10u64 {
            let g = gauss_sum(h, 2).unwrap().value.value;
            let expect = if h % 2 == 0 { 1.0 } else { -1.0 };
            assert!(close(g, Complex64::new(expect, 0.0), 1e-15));
        }
        assert!(close(
            gauss_sum(5, 1).unwrap().value.value,
            Complex64::new(1.0, 0.0),
            0.0
        ));
    }

    #[test]
    fn gauss_mod_8_four_terms() {
        // d = 1, 3, 5, 7 with (8/d) = 1, -1, -1, 1
        let e = |k: f64| Complex64::from_polar(1.0, TAU * k / 8.0);
        let i = Complex64::new(0.0, 1.0);
        let expect = e(1.0) - i * e(3.0) - e(5.0) + i * e(7.0);
        assert!(close(gauss_sum(1, 8).unwrap().value.value, expect, 1e-14));
    }

    #[test]
    fn gauss_mod_4n_for_unit_shift() {
        // with h = 1: g(4n) = (1+i)√n for odd squarefree n,
        // (1+i)·2√n when n = 2·(odd squarefree), zero otherwise
        let one_i = Complex64::new(1.0, 1.0);
        let squarefree = |n: u64| (2..=n).all(|p| n % (p * p) != 0);
        for n in 1..200u64 {
            let g = gauss_sum(1, 4 * n).unwrap().value.value;
            let expect = if n % 2 == 1 && squarefree(n) {
                one_i * (n as f64).sqrt()
            } else if n % 4 == 2 && squarefree(n / 2) {
                one_i * 2.0 * (n as f64).sqrt()
            } else {
                Complex64::new(0.0, 0.0)
            };
            assert!(
                (g - expect).norm() < 1e-11 * (n as f64),
                "n={n}: {g} vs {expect}"
            );
        }
    }

    #[test]
    fn sigma_examples() {
        let f = TrialDivision;
        assert_eq!(
            sigma_minus_v(6, Complex64::new(0.0, 0.0), &f)
                .unwrap()
                .value
                .re,
            4.0
        );
        let s = sigma_minus_v(4, Complex64::new(1.0, 0.0), &f)
            .unwrap()
            .value;
        assert!(close(s, Complex64::new(1.75, 0.0), 1e-15));
        assert!(sigma_minus_v(0, Complex64::new(1.0, 0.0), &f).is_err());
    }

    #[test]
    fn sigma_12_complex() {
        // Σ_{d|12} d^{-(1+i)}, frozen from a 30-digit evaluation
        let s = sigma_minus_v(12, Complex64::new(1.0, 1.0), &TrialDivision)
            .unwrap()
            .value;
        let expect = Complex64::new(1.479_564_613_931_229_8, -1.075_585_677_127_076_8);
        assert!(close(s, expect, 1e-14), "{s}");
    }

    proptest! {
        #[test]
        fn gauss_bounded_by_modulus(h in 1u64..50, c in 1u64..400) {
            let g = gauss_sum(h, c).unwrap().value.value;
            prop_assert!(g.norm() <= c as f64 + 1e-9);
        }

        #[test]
        fn sigma_multiplicative(
            m in 1u64..5000, n in 1u64..5000,
            vr in -2.0f64..2.0, vi in -5.0f64..5.0,
        ) {
            prop_assume!(gcd(m, n) == 1);
            let v = Complex64::new(vr, vi);
            let f = TrialDivision;
            let lhs = sigma_minus_v(m * n, v, &f).unwrap().value;
            let rhs = sigma_minus_v(m, v, &f).unwrap().value * sigma_minus_v(n, v, &f).unwrap().value;
            // magnitude scale Σ|d^{-v}| guards against cancellation
            let scale = sigma_minus_v(m * n, Complex64::new(vr, 0.0), &f).unwrap().value.re;
            prop_assert!((lhs - rhs).norm() <= 1e-12 * scale.max(rhs.norm()));
        }
    }

    fn gcd(mut a: u64, mut b: u64) -> u64 {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    }
}
