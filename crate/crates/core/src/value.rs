use num_complex::Complex64;

/// A complex value with an absolute error budget attached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexVal {
    pub value: Complex64,
    pub abs_err: f64,
}

impl ComplexVal {
    pub const fn new(value: Complex64, abs_err: f64) -> Self {
        Self { value, abs_err }
    }

    /// A value treated as exact up to its last bit.
    pub fn exact(value: Complex64) -> Self {
        Self {
            value,
            abs_err: value.norm() * f64::EPSILON,
        }
    }

    pub fn real(x: f64) -> Self {
        Self::exact(Complex64::new(x, 0.0))
    }

    pub fn rel_err(&self) -> f64 {
        let n = self.value.norm();
        if n == 0.0 {
            self.abs_err
        } else {
            self.abs_err / n
        }
    }

    pub fn scale(self, factor: Complex64) -> Self {
        Self {
            value: self.value * factor,
            abs_err: self.abs_err * factor.norm(),
        }
    }
}

/// Product with first-order error propagation.
impl core::ops::Mul for ComplexVal {
    type Output = Self;

    fn mul(self, other: ComplexVal) -> Self {
        Self {
            value: self.value * other.value,
            abs_err: self.abs_err * other.value.norm()
                + other.abs_err * self.value.norm()
                + self.abs_err * other.abs_err,
        }
    }
}

impl core::ops::Add for ComplexVal {
    type Output = Self;

    fn add(self, other: ComplexVal) -> Self {
        Self {
            value: self.value + other.value,
            abs_err: self.abs_err + other.abs_err,
        }
    }
}

impl From<Complex64> for ComplexVal {
    fn from(value: Complex64) -> Self {
        Self::exact(value)
    }
}

impl From<f64> for ComplexVal {
    fn from(x: f64) -> Self {
        Self::real(x)
    }
}

/// Complex evaluation parameters; each consumer reads the subset it needs
/// and validates its own region.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EvalPoint {
    pub s: Complex64,
    pub v: Complex64,
    pub u: Complex64,
    pub z: Complex64,
    pub k: f64,
}

/// A truncated series together with a bound on the omitted tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: ComplexVal,
    /// Bound on the omitted tail, from a stated comparison series.
    pub tail_bound: f64,
    pub terms_used: u64,
}

impl SeriesValue {
    /// Total error budget: rounding plus tail.
    pub fn total_err(&self) -> f64 {
        self.value.abs_err + self.tail_bound
    }
}
