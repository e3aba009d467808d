//! Numerical kernels for checking the two-term asymptotic of the smoothed
//! count of `b^2 - 4ac = h` with `a, c > 0`.
//!
//! Everything here is `no_std` with `alloc`; file formats, the CLI and any
//! shared caches live in the `discrep` crate.
#![no_std]
// Float methods come from `num_traits::Float` (libm); whether rustc counts that
// import as used depends on the toolchain and on whether std is linked.
#![allow(unused_imports)]
// `!(x > 0.0)` is how NaN gets rejected along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod arith;
pub mod counting;
pub mod error;
pub mod fit;
pub mod mellin;
pub mod quad;
pub mod series;
pub mod specfun;
pub mod value;

pub use error::{Error, Result};
pub use value::{ComplexVal, EvalPoint, SeriesValue};

pub use num_complex::Complex64;
