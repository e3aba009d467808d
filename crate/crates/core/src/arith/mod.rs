//! Exact integer arithmetic: square detection, factorization, divisor sums,
//! quadratic symbols and the half-integral-weight Gauss sums.

mod factor;
mod gauss;
mod modular;
mod square;
mod symbols;

pub use factor::{
    divisors, factorize, primes_up_to, Factorization, Factorizer, TrialDivision, MAX_FACTOR_INPUT,
};
pub use gauss::{epsilon_d, gauss_sum, sigma_minus_v, GaussSumRecord};
pub use modular::{mul_mod, pow_mod, sqrt_mod_prime};
pub use square::{is_square, isqrt, tau, SquareIndicator};
pub use symbols::{jacobi, kronecker};
