use crate::error::{Error, Result};

/// Jacobi symbol `(a/n)` for odd positive `n`.
pub fn jacobi(a: i64, n: u64) -> Result<i8> {
    if n % 2 == 0 {
        return Err(Error::Domain("Jacobi symbol needs an odd positive modulus"));
    }
    let mut a = (a as i128).rem_euclid(n as i128) as u64;
    let mut n = n;
    let mut sign = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                sign = -sign;
            }
        }
        core::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    Ok(if n == 1 { sign } else { 0 })
}

/// Kronecker symbol `(a/n)` extended to all integers `n`.
pub fn kronecker(a: i64, n: i64) -> i8 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut sign = 1i8;
    let mut m = n.unsigned_abs();
    if n < 0 && a < 0 {
        sign = -sign;
    }
    let twos = m.trailing_zeros();
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        m >>= twos;
        if twos % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            sign = -sign;
        }
    }
    // m is odd and positive here
    sign * jacobi(a, m).expect("odd modulus")
}
