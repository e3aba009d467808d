use std::collections::HashMap;
use std::sync::RwLock;

use discrep_core::arith::{factorize, Factorization, Factorizer};

/// Trial-division factorizer that remembers every answer. Safe to share
/// between rayon workers; a poisoned lock only costs the cache.
#[derive(Debug, Default)]
pub struct MemoFactorizer {
    cache: RwLock<HashMap<u64, Factorization>>,
}

impl MemoFactorizer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.cache.read().map(|c| c.len()).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Factorizer for MemoFactorizer {
    fn factorize(&self, n: u64) -> discrep_core::Result<Factorization> {
        if let Ok(cache) = self.cache.read() {
            if let Some(f) = cache.get(&n) {
                return Ok(f.clone());
            }
        }
        let f = factorize(n)?;
        if let Ok(mut cache) = self.cache.write() {
            cache.insert(n, f.clone());
        }
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rayon::prelude::*;

    #[test]
    fn agrees_with_trial_division_under_contention() {
        let memo = MemoFactorizer::new();
        (1..2000u64).into_par_iter().for_each(|n| {
            let a = memo.factorize(n % 500 + 1).unwrap();
            assert_eq!(a, factorize(n % 500 + 1).unwrap());
        });
        assert_eq!(memo.len(), 500);
    }
}
