//! Pinned thresholds for the verification suite. Each one is the bound a
//! check must meet, not a knob; changing one changes what is being verified.

use std::time::Duration;

/// Shift range and box sizes for the congruence check.
pub const VANISHING_MAX_H: u64 = 50;
pub const VANISHING_X: [f64; 2] = [100.0, 1000.0];
/// Truncation level of the smoothed sums used throughout.
pub const SMOOTHING_EPS: f64 = 1e-12;

/// Exhaustive range of the sharp/triple identity.
pub const IDENTITY_MAX_H: u64 = 20;
pub const IDENTITY_MAX_X: u64 = 300;

/// Fit grid `2^7..2^13` and the shifts it is run on.
pub const FIT_EXPONENTS: (i32, i32) = (7, 13);
pub const SQUARE_SHIFTS: [u64; 3] = [1, 4, 16];
pub const NON_SQUARE_SHIFTS: [u64; 2] = [5, 8];
/// Largest leave-one-out relative change of `ĉ₁` for square shifts.
pub const LOO_MAX_VARIATION: f64 = 0.05;
/// Non-square shifts: `|ĉ₁| <= NON_SQUARE_C1_RATIO · max(|ĉ₂|, 1)`.
pub const NON_SQUARE_C1_RATIO: f64 = 0.02;
/// Ceiling on the residual log-log slope (the asymptotic exponent is 1/2).
pub const MAX_ERROR_EXPONENT: f64 = 0.75;

/// Damping at which `M_k` is compared with its `δ → 0` closed form, and the ladder.
pub const MELLIN_DELTA: f64 = 1e-4;
pub const MELLIN_LADDER: [f64; 3] = [1e-2, 1e-3, MELLIN_DELTA];
pub const MELLIN_LIMIT_REL: f64 = 1e-4;

/// Pole-limit quotient against the closed-form residue.
pub const POLE_ETA: f64 = 1e-4;
pub const POLE_DELTA: f64 = 1e-2;
pub const RESIDUE_REL: f64 = 1e-3;

/// Damped series at `δ = 1e-6` against the undamped series with prefactor.
pub const PREFACTOR_DELTA: f64 = 1e-6;
pub const PREFACTOR_REL: f64 = 1e-6;

/// Relative spread of `D_∞ / (L · F_∞)` over `u ∈ {2, 2.5, 3}`.
pub const FACTORIZATION_SPREAD: f64 = 1e-3;
pub const FACTORIZATION_GAUSS_TERMS: u64 = 10_000;
pub const FACTORIZATION_L_TERMS: u64 = 100_000;

/// Residue-route `c₁` against the fitted `ĉ₁`: 10% when the second-cusp
/// factor is supplied, 25% when it was defaulted.
pub const CROSS_ROUTE_REL: f64 = 0.10;
pub const CROSS_ROUTE_REL_UNVERIFIED: f64 = 0.25;
/// Two-radius agreement of the contour extraction.
pub const CONTOUR_SPREAD: f64 = 0.01;

/// Special-function gates.
pub const MELLIN_BESSEL_REL: f64 = 1e-8;
pub const MELLIN_BESSEL_POINTS: usize = 20;
pub const MELLIN_BESSEL_SEED: u64 = 0x6b65_7373_656c;
pub const ZETA_REFLECTION_REL: f64 = 1e-10;
pub const HALF_ORDER_K_REL: f64 = 1e-10;

/// Wall-clock budgets per criterion, for a single core.
pub const BUDGETS: [Duration; 10] = [
    Duration::from_secs(60),
    Duration::from_secs(60),
    Duration::from_secs(600),
    Duration::from_secs(600),
    Duration::from_secs(120),
    Duration::from_secs(120),
    Duration::from_secs(180),
    Duration::from_secs(180),
    Duration::from_secs(300),
    Duration::from_secs(60),
];
