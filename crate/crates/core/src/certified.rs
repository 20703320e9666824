//! Complex values carrying an absolute truncation-error bound.
//!
//! The bound covers series truncation only. Floating-point round-off is
//! not tracked: for the radii and genera used here it stays far below the
//! truncation targets, but callers that need round-off control must add
//! their own margin.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

/// A complex value together with an absolute error bound `err >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifiedComplex {
    pub value: Complex64,
    pub err: f64,
}

impl CertifiedComplex {
    pub fn new(value: Complex64, err: f64) -> Self {
        debug_assert!(err >= 0.0 || err.is_nan());
        Self { value, err: err.max(0.0) }
    }

    pub fn exact(value: Complex64) -> Self {
        Self { value, err: 0.0 }
    }

    pub fn real(x: f64) -> Self {
        Self::exact(Complex64::new(x, 0.0))
    }

    pub fn zero() -> Self {
        Self::exact(Complex64::new(0.0, 0.0))
    }

    pub fn one() -> Self {
        Self::exact(Complex64::new(1.0, 0.0))
    }

    pub fn norm(&self) -> f64 {
        self.value.norm()
    }

    /// Relative error bound, `err / |value|` (infinite for a zero value with nonzero err).
    pub fn rel_err(&self) -> f64 {
        if self.err == 0.0 {
            0.0
        } else {
            self.err / self.value.norm()
        }
    }

    /// Multiply by an exactly known constant.
    pub fn scale(self, c: Complex64) -> Self {
        Self::new(self.value * c, self.err * c.norm())
    }

    pub fn scale_real(self, c: f64) -> Self {
        Self::new(self.value * c, self.err * c.abs())
    }

    pub fn powi(self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc * self;
        }
        acc
    }

    /// Product of many factors, accumulated in log space so that long
    /// products neither overflow nor underflow in the intermediate steps.
    pub fn product<I: IntoIterator<Item = CertifiedComplex>>(factors: I) -> Self {
        let mut log_value = Complex64::new(0.0, 0.0);
        let mut log_abs = 0.0;
        let mut log_abs_upper = 0.0;
        let mut zero = false;
        let mut zero_err_sum = 0.0;
        let mut count = 0usize;
        for f in factors {
            count += 1;
            let m = f.value.norm();
            if m == 0.0 {
                zero = true;
                zero_err_sum += f.err;
                log_abs_upper += f.err.ln();
                continue;
            }
            log_value += f.value.ln();
            log_abs += m.ln();
            log_abs_upper += (m + f.err).ln();
        }
        if count == 0 {
            return Self::one();
        }
        if zero {
            let err = if zero_err_sum == 0.0 { 0.0 } else { log_abs_upper.exp() };
            return Self::new(Complex64::new(0.0, 0.0), err);
        }
        let value = log_value.exp();
        // |prod(v+e) - prod v| <= prod(|v|+err) - prod|v|
        let err = log_abs.exp() * (log_abs_upper - log_abs).exp_m1();
        Self::new(value, err)
    }

    /// True when `other` lies within the combined error bounds plus `slack`.
    pub fn agrees_with(&self, other: &CertifiedComplex, slack: f64) -> bool {
        (self.value - other.value).norm() <= self.err + other.err + slack
    }
}

impl From<Complex64> for CertifiedComplex {
    fn from(value: Complex64) -> Self {
        Self::exact(value)
    }
}

impl Add for CertifiedComplex {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.value + rhs.value, self.err + rhs.err)
    }
}

impl Sub for CertifiedComplex {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.value - rhs.value, self.err + rhs.err)
    }
}

impl Neg for CertifiedComplex {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.value, self.err)
    }
}

impl Mul for CertifiedComplex {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let err = self.value.norm() * rhs.err + rhs.value.norm() * self.err + self.err * rhs.err;
        Self::new(self.value * rhs.value, err)
    }
}

impl fmt::Display for CertifiedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.16e} {:+.16e}i) ± {:.3e}", self.value.re, self.value.im, self.err)
    }
}

/// Relative distance `|a - b| / |b|`, falling back to absolute when `b = 0`.
pub fn rel_diff(a: Complex64, b: Complex64) -> f64 {
    let d = (a - b).norm();
    let s = b.norm();
    if s == 0.0 {
        d
    } else {
        d / s
    }
}
