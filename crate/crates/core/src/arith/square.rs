/// Value of the theta-coefficient `tau(n)`: 1 at zero, 2 at nonzero squares,
/// 0 elsewhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareIndicator(u8);

impl SquareIndicator {
    pub const ZERO: Self = Self(0);
    pub const ORIGIN: Self = Self(1);
    pub const SQUARE: Self = Self(2);

    pub fn value(self) -> u8 {
        self.0
    }
}

impl From<SquareIndicator> for u64 {
    fn from(t: SquareIndicator) -> u64 {
        t.0 as u64
    }
}

/// Floor of the square root by integer Newton iteration.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let bits = 64 - n.leading_zeros();
    // 2^ceil(bits/2) is an overestimate, so the iteration decreases monotonically.
    let mut x: u64 = 1 << bits.div_ceil(2);
    loop {
        let y = (x + n / x) / 2;
        if y >= x {
            return x;
        }
        x = y;
    }
}

pub fn is_square(n: u64) -> bool {
    let r = isqrt(n);
    r * r == n
}

pub fn tau(n: u64) -> SquareIndicator {
    if n == 0 {
        SquareIndicator::ORIGIN
    } else if is_square(n) {
        SquareIndicator::SQUARE
    } else {
        SquareIndicator::ZERO
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_values() {
        assert_eq!(tau(0).value(), 1);
        assert_eq!(tau(4).value(), 2);
        assert_eq!(tau(3).value(), 0);
        assert_eq!(tau(1).value(), 2);
    }

    #[test]
    fn isqrt_at_power_boundaries() {
        for k in 1..32u64 {
            let r = (1u64 << k) + 12345 % (1 << k);
            assert_eq!(isqrt(r * r), r);
            assert_eq!(isqrt(r * r - 1), r - 1);
        }
        assert_eq!(isqrt(u64::MAX), (1u64 << 32) - 1);
        let big = (1u64 << 31) - 1;
        assert!(is_square(big * big));
        assert!(!is_square(big * big + 1));
        assert!(!is_square(big * big - 1));
    }

    #[test]
    fn partial_sums_count_squares() {
        let mut acc = 1u64;
        for n in 1..=1_000_000u64 {
            acc += u64::from(tau(n));
            assert_eq!(acc, 2 * isqrt(n) + 1, "N = {n}");
        }
    }

    proptest! {
        #[test]
        fn isqrt_brackets(n in any::<u64>()) {
            let r = isqrt(n) as u128;
            prop_assert!(r * r <= n as u128);
            prop_assert!((r + 1) * (r + 1) > n as u128);
        }

        #[test]
        fn squares_near_2_62(r in (1u64 << 30)..(1u64 << 31)) {
            prop_assert_eq!(tau(r * r).value(), 2);
            prop_assert_eq!(tau(r * r + 1).value(), 0);
            prop_assert_eq!(tau(r * r - 1).value(), 0);
        }
    }
}
