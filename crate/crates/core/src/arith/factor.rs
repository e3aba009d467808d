use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Largest integer accepted by divisor enumeration.
pub const MAX_FACTOR_INPUT: u64 = 1 << 50;

/// Prime factorization as `(prime, exponent)` pairs with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Builds from pairs, merging repeats and sorting. Zero exponents are dropped.
    pub fn from_pairs(mut pairs: Vec<(u64, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_unstable_by_key(|&(p, _)| p);
        let mut factors: Vec<(u64, u32)> = Vec::with_capacity(pairs.len());
        for (p, e) in pairs {
            match factors.last_mut() {
                Some(last) if last.0 == p => last.1 += e,
                _ => factors.push((p, e)),
            }
        }
        Self { factors }
    }

    pub fn one() -> Self {
        Self::default()
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    /// Removes `p^e` from the factorization; errors if not present.
    pub fn without(&self, p: u64, e: u32) -> Result<Self> {
        let mut factors = self.factors.clone();
        let idx = factors
            .iter()
            .position(|&(q, _)| q == p)
            .ok_or(Error::Domain("prime not present in factorization"))?;
        if factors[idx].1 < e {
            return Err(Error::Domain("exponent exceeds factorization"));
        }
        factors[idx].1 -= e;
        if factors[idx].1 == 0 {
            factors.remove(idx);
        }
        Ok(Self { factors })
    }

    pub fn product(&self) -> u128 {
        self.factors
            .iter()
            .fold(1u128, |acc, &(p, e)| acc * (p as u128).pow(e))
    }

    pub fn divisor_count(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64 + 1).product()
    }

    /// All positive divisors, unsorted.
    pub fn divisors(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.divisor_count() as usize);
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

/// Source of factorizations; implementations may cache.
pub trait Factorizer {
    fn factorize(&self, n: u64) -> Result<Factorization>;
}

/// Plain trial division, no caching.
#[derive(Debug, Clone, Copy, Default)]
pub struct TrialDivision;

impl Factorizer for TrialDivision {
    fn factorize(&self, n: u64) -> Result<Factorization> {
        factorize(n)
    }
}

pub fn factorize(mut n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Domain("cannot factor zero"));
    }
    if n > MAX_FACTOR_INPUT {
        return Err(Error::Overflow("factorization input above 2^50"));
    }
    let mut factors = Vec::new();
    for p in [2u64, 3] {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    }
    let mut p = 5u64;
    let mut step = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
        p += step;
        step = 6 - step;
    }
    if n > 1 {
        factors.push((n, 1));
    }
    Ok(Factorization { factors })
}

pub fn divisors(n: u64) -> Result<Vec<u64>> {
    let mut d = factorize(n)?.divisors();
    d.sort_unstable();
    Ok(d)
}

/// Primes `<= n` by the sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}
