use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Unit roundoff of `f64`.
pub const EPS: f64 = f64::EPSILON / 2.0;

/// A complex value with an absolute error bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexVal {
    pub value: Complex64,
    pub err: f64,
}

impl ComplexVal {
    pub const ZERO: ComplexVal = ComplexVal { value: Complex64::new(0.0, 0.0), err: 0.0 };
    pub const ONE: ComplexVal = ComplexVal { value: Complex64::new(1.0, 0.0), err: 0.0 };

    pub fn new(value: Complex64, err: f64) -> Self {
        ComplexVal { value, err }
    }

    /// An exactly representable value.
    pub fn exact(value: Complex64) -> Self {
        ComplexVal { value, err: 0.0 }
    }

    pub fn real(x: f64) -> Self {
        ComplexVal::exact(Complex64::new(x, 0.0))
    }

    /// A computed value with relative rounding error of a few ulps.
    pub fn rounded(value: Complex64) -> Self {
        ComplexVal { value, err: 4.0 * EPS * value.norm() }
    }

    pub fn is_exact_zero(&self) -> bool {
        self.value == Complex64::new(0.0, 0.0) && self.err == 0.0
    }

    pub fn norm(&self) -> f64 {
        self.value.norm()
    }

    pub fn conj(self) -> Self {
        ComplexVal { value: self.value.conj(), err: self.err }
    }

    /// Multiply by a real scalar known to relative precision `EPS`.
    pub fn scale(self, s: f64) -> Self {
        let value = self.value * s;
        ComplexVal { value, err: self.err * s.abs() + 2.0 * EPS * value.norm() }
    }

    /// Multiply by an exactly known unit-modulus value such as `±1, ±i`.
    pub fn mul_exact_unit(self, u: Complex64) -> Self {
        ComplexVal { value: self.value * u, err: self.err }
    }

    pub fn powi(self, k: i32) -> Self {
        if k == 0 {
            return ComplexVal::ONE;
        }
        let mut acc = ComplexVal::ONE;
        let base = if k < 0 { self.inv() } else { self };
        for _ in 0..k.unsigned_abs() {
            acc = acc * base;
        }
        acc
    }

    /// Reciprocal; the bound assumes `err < |value|`.
    pub fn inv(self) -> Self {
        let r = self.value.norm();
        let value = self.value.inv();
        let rel = if r > self.err { self.err / (r - self.err) } else { f64::INFINITY };
        ComplexVal { value, err: value.norm() * (rel + 4.0 * EPS) }
    }

    /// `|self − other| ≤ err_self + err_other + slack`.
    pub fn agrees_with(&self, other: &ComplexVal, slack: f64) -> bool {
        (self.value - other.value).norm() <= self.err + other.err + slack
    }
}

impl From<Complex64> for ComplexVal {
    fn from(value: Complex64) -> Self {
        ComplexVal::rounded(value)
    }
}

impl Add for ComplexVal {
    type Output = ComplexVal;
    fn add(self, o: ComplexVal) -> ComplexVal {
        let value = self.value + o.value;
        ComplexVal { value, err: self.err + o.err + 2.0 * EPS * value.norm() }
    }
}

impl Sub for ComplexVal {
    type Output = ComplexVal;
    fn sub(self, o: ComplexVal) -> ComplexVal {
        self + (-o)
    }
}

impl Neg for ComplexVal {
    type Output = ComplexVal;
    fn neg(self) -> ComplexVal {
        ComplexVal { value: -self.value, err: self.err }
    }
}

impl Mul for ComplexVal {
    type Output = ComplexVal;
    fn mul(self, o: ComplexVal) -> ComplexVal {
        let value = self.value * o.value;
        let err = self.norm() * o.err + o.norm() * self.err + self.err * o.err + 4.0 * EPS * value.norm();
        ComplexVal { value, err }
    }
}

/// Sum with error bound, in the deterministic pairwise order.
pub fn sum_vals(xs: &[ComplexVal]) -> ComplexVal {
    let values: Vec<Complex64> = xs.iter().map(|x| x.value).collect();
    let value = crate::reduce::pairwise(&values);
    let depth = (xs.len().max(1) as f64).log2().ceil() + 1.0;
    let mag = xs.iter().fold(0.0, |a, x| a + x.value.norm());
    let err = xs.iter().fold(0.0, |a, x| a + x.err) + 2.0 * depth * EPS * mag;
    ComplexVal { value, err }
}
