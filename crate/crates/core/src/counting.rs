//! Exact counts of `b² - 4ac = h`: the sharp box count, the literal triple
//! count, the exponentially smoothed sum and the norm-ball count.
//!
//! Everything is driven by the values `m = (b² - h)/4`, which run over exactly
//! the `m` with `τ(4m + h) != 0`. Their factorizations come from a sieve over
//! `b`: an odd prime `p` divides `b² - h` iff `b ≡ ±√h (mod p)`.

use alloc::vec::Vec;

use num_traits::Float;

use crate::arith::{isqrt, primes_up_to, sqrt_mod_prime, tau};
use crate::error::{Error, Result};

/// Largest box scale accepted, so that `4X² + h` and the sieve stay in range.
pub const MAX_BOX: u64 = 1 << 30;

/// One row of counting data at box scale `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountSample {
    pub x: f64,
    /// `sharp_count(h, ⌊x⌋)`.
    pub sharp: u64,
    pub smoothed: f64,
    pub smoothed_tail_bound: f64,
}

/// `m = (b² - h)/4` and its prime factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftEntry {
    pub b: u64,
    pub m: u64,
    pub factors: Vec<(u64, u32)>,
}

impl ShiftEntry {
    /// Divisors of `m`, unsorted.
    pub fn divisors(&self) -> Vec<u64> {
        let count: usize = self.factors.iter().map(|&(_, e)| e as usize + 1).product();
        let mut out = Vec::with_capacity(count);
        out.push(1u64);
        for &(p, e) in &self.factors {
            let len = out.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    out.push(out[i] * pk);
                }
            }
        }
        out
    }
}

fn check_h(h: u64) -> Result<()> {
    if h == 0 {
        return Err(Error::Domain("h must be >= 1"));
    }
    if h > 1 << 40 {
        return Err(Error::Overflow("h above 2^40"));
    }
    Ok(())
}

/// Every `b > √h` with `b <= b_max` and `b² ≡ h (mod 4)`, with `m = (b²-h)/4` factored.
pub fn shift_sieve(h: u64, b_max: u64) -> Result<Vec<ShiftEntry>> {
    check_h(h)?;
    if b_max > 2 * MAX_BOX + 2 {
        return Err(Error::Overflow("sieve range above 2^31"));
    }
    if h % 4 == 2 || h % 4 == 3 {
        return Ok(Vec::new());
    }
    let b_first = {
        let mut b = isqrt(h) + 1;
        while b <= b_max && (b * b - h) % 4 != 0 {
            b += 1;
        }
        b
    };
    if b_first > b_max {
        return Ok(Vec::new());
    }
    // b runs over one residue class mod 2
    let len = ((b_max - b_first) / 2 + 1) as usize;
    let b_at = |i: usize| b_first + 2 * i as u64;
    let mut rest: Vec<u64> = (0..len).map(|i| (b_at(i) * b_at(i) - h) / 4).collect();
    let mut factors: Vec<Vec<(u64, u32)>> = alloc::vec![Vec::new(); len];
    for (r, f) in rest.iter_mut().zip(factors.iter_mut()) {
        let e = r.trailing_zeros();
        if e > 0 {
            *r >>= e;
            f.push((2, e));
        }
    }
    let m_max = rest.iter().copied().max().unwrap_or(1);
    for p in primes_up_to(isqrt(m_max)).into_iter().skip(1) {
        let Some(root) = sqrt_mod_prime(h % p, p) else {
            continue;
        };
        // b_first + 2i ≡ ±root (mod p)  ⇔  i ≡ (±root - b_first)·2⁻¹
        let inv2 = p.div_ceil(2);
        let mut starts = [((root + p - b_first % p) % p) * inv2 % p, 0];
        starts[1] = ((p - root) % p + p - b_first % p) % p * inv2 % p;
        let roots = if root == 0 { 1 } else { 2 };
        for &start in &starts[..roots] {
            let mut i = start as usize;
            while i < len {
                let mut e = 0u32;
                while rest[i] % p == 0 {
                    rest[i] /= p;
                    e += 1;
                }
                if e > 0 {
                    factors[i].push((p, e));
                }
                i += p as usize;
            }
        }
    }
    Ok((0..len)
        .map(|i| {
            let mut f = core::mem::take(&mut factors[i]);
            if rest[i] > 1 {
                f.push((rest[i], 1));
            }
            f.sort_unstable_by_key(|&(p, _)| p);
            let b = b_at(i);
            ShiftEntry {
                b,
                m: (b * b - h) / 4,
                factors: f,
            }
        })
        .filter(|e| e.m >= 1)
        .collect())
}

/// `Σ_{a,c=1}^X τ(4ac + h)`.
pub fn sharp_count(h: u64, x: u64) -> Result<u64> {
    check_h(h)?;
    if x == 0 || x > MAX_BOX {
        return Err(Error::Domain("box scale must be in [1, 2^30]"));
    }
    let b_max = isqrt(4 * x * x + h);
    let mut total = 0u64;
    for e in shift_sieve(h, b_max)? {
        let pairs = e
            .divisors()
            .into_iter()
            .filter(|&a| a <= x && e.m / a <= x)
            .count() as u64;
        total += 2 * pairs;
    }
    Ok(total)
}

/// `sharp_count` by the double loop over `a, c <= X`.
pub fn sharp_count_naive(h: u64, x: u64) -> Result<u64> {
    check_h(h)?;
    if x > 1 << 16 {
        return Err(Error::Domain("naive count limited to X <= 2^16"));
    }
    let mut total = 0u64;
    for a in 1..=x {
        for c in 1..=x {
            total += u64::from(tau(4 * a * c + h));
        }
    }
    Ok(total)
}

/// `#{(a, b, c) : a, c >= 1, b >= 1, a <= X, b <= 2X, c <= X, b² - 4ac = h}`.
///
/// Each such triple accounts for the two values `±b` weighted by `τ = 2`, so
/// `2·triple_count = sharp_count` whenever no `b > 2X` can occur, i.e. for `h <= 4X`.
pub fn triple_count(h: u64, x: u64) -> Result<u64> {
    check_h(h)?;
    if x == 0 || x > 1 << 16 {
        return Err(Error::Domain("triple count limited to 1 <= X <= 2^16"));
    }
    let mut total = 0u64;
    for a in 1..=x {
        for b in 1..=2 * x {
            let sq = b * b;
            if sq <= h || (sq - h) % (4 * a) != 0 {
                continue;
            }
            let c = (sq - h) / (4 * a);
            if c >= 1 && c <= x {
                total += 1;
            }
        }
    }
    Ok(total)
}

/// Neumaier-compensated running sum of nonnegative reals.
#[derive(Debug, Clone, Copy, Default)]
struct Accumulator {
    sum: f64,
    comp: f64,
}

impl Accumulator {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Cutoff constant: pairs with `a + c > 1.5·X·ln(1/eps)` are left to the tail bound.
pub const SMOOTH_CUTOFF: f64 = 1.5;

fn smooth_cutoff(x: f64, eps: f64) -> f64 {
    SMOOTH_CUTOFF * x * (1.0 / eps).ln().max(1.0)
}

/// `Σ_{a+c > T} τ(4ac+h) e^{-(a+c)/X} <= 2 Σ_{n >= N} n q^n`
/// `= 2 q^N (N(1-q) + q) / (1-q)²` with `q = e^{-1/X}`, `N = ⌊T⌋ + 1`.
fn smooth_tail(x: f64, cutoff: f64) -> f64 {
    let q = (-1.0 / x).exp();
    let n = cutoff.floor() + 1.0;
    let one_minus_q = -(-1.0 / x).exp_m1();
    2.0 * q.powf(n) * (n * one_minus_q + q) / (one_minus_q * one_minus_q)
}

/// `Σ_{a,c>=1} τ(h+4ac) e^{-(a+c)/X}` for several `X` in one sieve pass.
/// Each sample carries the bound for the pairs beyond the cutoff.
pub fn smoothed_sums(h: u64, xs: &[f64], eps: f64) -> Result<Vec<CountSample>> {
    check_h(h)?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain("eps must lie in (0, 1)"));
    }
    for &x in xs {
        if !(x > 0.0) || !x.is_finite() || x > MAX_BOX as f64 / 64.0 {
            return Err(Error::Domain("smoothing scale X must lie in (0, 2^24]"));
        }
    }
    let cutoffs: Vec<f64> = xs.iter().map(|&x| smooth_cutoff(x, eps)).collect();
    let t_max = cutoffs.iter().copied().fold(0.0, f64::max);
    // a + c <= T forces ac <= T²/4, so b² = 4ac + h <= T² + h
    let b_max = isqrt((t_max * t_max) as u64 + h) + 1;
    let mut acc = alloc::vec![Accumulator::default(); xs.len()];
    let inv: Vec<f64> = xs.iter().map(|&x| -1.0 / x).collect();
    for e in shift_sieve(h, b_max)? {
        if (e.m as f64) > t_max * t_max / 4.0 {
            continue;
        }
        for a in e.divisors() {
            let n = (a + e.m / a) as f64;
            for j in 0..xs.len() {
                if n <= cutoffs[j] {
                    acc[j].add(2.0 * (n * inv[j]).exp());
                }
            }
        }
    }
    xs.iter()
        .enumerate()
        .map(|(j, &x)| {
            let sharp = if x >= 1.0 {
                sharp_count(h, x.floor() as u64)?
            } else {
                0
            };
            Ok(CountSample {
                x,
                sharp,
                smoothed: acc[j].total(),
                smoothed_tail_bound: smooth_tail(x, cutoffs[j]),
            })
        })
        .collect()
}

pub fn smoothed_sum(h: u64, x: f64, eps: f64) -> Result<CountSample> {
    Ok(smoothed_sums(h, &[x], eps)?.remove(0))
}

/// The smoothed sum by a double loop over `a, c <= limit`.
pub fn smoothed_sum_naive(h: u64, x: f64, limit: u64) -> Result<f64> {
    check_h(h)?;
    if limit > 1 << 14 {
        return Err(Error::Domain("naive smoothed sum limited to 2^14 per side"));
    }
    let mut acc = Accumulator::default();
    for a in 1..=limit {
        for c in 1..=limit {
            let t = u64::from(tau(h + 4 * a * c));
            if t != 0 {
                acc.add(t as f64 * (-((a + c) as f64) / x).exp());
            }
        }
    }
    Ok(acc.total())
}

/// `#{(a, b, c) ∈ Z³ : b² - 4ac = h, a² + b² + c² <= R²}` with all signs allowed.
pub fn norm_ball_count(h: i64, radius: f64) -> Result<u64> {
    if h == 0 {
        return Err(Error::Domain("norm_ball_count needs h != 0"));
    }
    if !(radius >= 0.0) || radius > 1e6 {
        return Err(Error::Domain("radius must lie in [0, 1e6]"));
    }
    let r2 = radius * radius;
    let r = radius.floor() as i64;
    let mut total = 0u64;
    for a in -r..=r {
        for c in -r..=r {
            let sq = 4 * a * c + h;
            if sq < 0 {
                continue;
            }
            let b = isqrt(sq as u64) as i64;
            if b * b != sq {
                continue;
            }
            if ((a * a + b * b + c * c) as f64) <= r2 {
                total += if b == 0 { 1 } else { 2 };
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_examples() {
        assert_eq!(sharp_count(3, 100).unwrap(), 0);
        assert_eq!(sharp_count(1, 5).unwrap(), 16);
        assert_eq!(sharp_count(4, 3).unwrap(), 4);
        assert_eq!(triple_count(3, 10).unwrap(), 0);
        assert_eq!(triple_count(1, 5).unwrap(), 8);
        assert_eq!(triple_count(4, 3).unwrap(), 2);
        assert!(sharp_count(0, 5).is_err());
    }

    #[test]
    fn sieve_factorizations_are_exact() {
        for h in [1u64, 4, 5, 8, 17, 100] {
            for e in shift_sieve(h, 3000).unwrap() {
                assert_eq!(e.b * e.b - h, 4 * e.m);
                let prod: u64 = e.factors.iter().map(|&(p, k)| p.pow(k)).product();
                assert_eq!(prod, e.m);
                for &(p, _) in &e.factors {
                    assert!(crate::arith::factorize(p).unwrap().factors() == [(p, 1)]);
                }
            }
        }
    }

    #[test]
    fn sieve_matches_naive_exhaustively() {
        for h in 1..=20u64 {
            for x in 1..=300u64 {
                assert_eq!(
                    sharp_count(h, x).unwrap(),
                    sharp_count_naive(h, x).unwrap(),
                    "h={h} X={x}"
                );
            }
        }
    }

    #[test]
    fn vanishing_classes() {
        for h in (1..=100u64).filter(|h| h % 4 == 2 || h % 4 == 3) {
            for x in [1u64, 7, 50, 200] {
                assert_eq!(sharp_count(h, x).unwrap(), 0);
            }
        }
    }

    #[test]
    fn triple_identity_inside_regime() {
        for h in 1..=20u64 {
            for x in 1..=60u64 {
                let t = triple_count(h, x).unwrap();
                let s = sharp_count(h, x).unwrap();
                if h <= 4 * x {
                    assert_eq!(2 * t, s, "h={h} X={x}");
                } else {
                    assert!(2 * t <= s);
                }
            }
        }
        // b = 5 > 2X escapes the triple count
        assert_eq!(sharp_count(9, 2).unwrap(), 2);
        assert_eq!(triple_count(9, 2).unwrap(), 0);
    }

    #[test]
    fn smoothed_against_double_loop() {
        let s = smoothed_sum(1, 100.0, 1e-12).unwrap();
        let naive = smoothed_sum_naive(1, 100.0, 3000).unwrap();
        assert!((s.smoothed - naive).abs() <= 1e-9 * naive + s.smoothed_tail_bound);
        assert!(s.smoothed_tail_bound < 1e-6);
        assert_eq!(s.sharp, sharp_count(1, 100).unwrap());
        let z = smoothed_sum(3, 100.0, 1e-12).unwrap();
        assert_eq!(z.smoothed, 0.0);
        assert!(smoothed_sum(1, 1e-3, 1e-12).unwrap().smoothed < 1e-300);
    }

    #[test]
    fn batched_matches_single() {
        let xs = [20.0, 45.5, 90.0];
        let batch = smoothed_sums(4, &xs, 1e-10).unwrap();
        for (x, b) in xs.iter().zip(&batch) {
            let one = smoothed_sum(4, *x, 1e-10).unwrap();
            assert!((one.smoothed - b.smoothed).abs() <= 1e-12 * one.smoothed);
        }
    }

    #[test]
    fn tail_bound_is_honest() {
        for h in [1u64, 5, 8] {
            let coarse = smoothed_sum(h, 40.0, 1e-3).unwrap();
            let fine = smoothed_sum(h, 40.0, 1e-4).unwrap();
            assert!((fine.smoothed - coarse.smoothed).abs() <= coarse.smoothed_tail_bound);
        }
    }

    #[test]
    fn norm_ball() {
        assert_eq!(norm_ball_count(1, 2.0).unwrap(), 10);
        assert_eq!(norm_ball_count(5, 1.0).unwrap(), 0);
        let mut last = 0;
        for r in 0..30 {
            let n = norm_ball_count(5, r as f64).unwrap();
            assert!(n >= last);
            last = n;
        }
        assert!(norm_ball_count(0, 3.0).is_err());
    }

    proptest! {
        #[test]
        fn smoothed_monotone_in_x(h in 1u64..40, x in 1.0f64..60.0, dx in 0.0f64..20.0) {
            let a = smoothed_sum(h, x, 1e-10).unwrap();
            let b = smoothed_sum(h, x + dx, 1e-10).unwrap();
            prop_assert!(b.smoothed + b.smoothed_tail_bound >= a.smoothed);
        }

        #[test]
        fn sharp_count_matches_naive(h in 1u64..200, x in 1u64..120) {
            prop_assert_eq!(sharp_count(h, x).unwrap(), sharp_count_naive(h, x).unwrap());
        }
    }
}
