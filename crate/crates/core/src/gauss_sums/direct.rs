//! Gauss sums straight from the definition.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use super::complex::{ComplexVal, EPS};
use crate::error::{Error, Result};
use crate::gaussint::GaussInt;
use crate::reduce::pairwise;
use crate::symbols::quartic_symbol;

/// Default upper bound on `N(c)` for direct summation.
pub const DEFAULT_DIRECT_CAP: u128 = 1 << 24;

const CHUNK: usize = 1 << 14;

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i64
}

/// Complete residue system mod `c = a + bi`: `{x + yi : 0 ≤ x < N/g, 0 ≤ y < g}`
/// with `g = gcd(a, b)`. The lattice `cZ[i]` has imaginary projection `gZ` and
/// index `N`, so the rectangle is a fundamental domain.
pub fn residue_rectangle(c: GaussInt) -> (i64, i64) {
    let g = gcd_i64(c.re, c.im);
    let n = c.norm() as i64;
    (n / g, g)
}

/// Which character the sum carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Order {
    Quartic,
    Quadratic,
}

fn direct_sum(nu: GaussInt, c: GaussInt, order: Order, cap: u128) -> Result<ComplexVal> {
    if c.is_zero() {
        return Err(Error::ZeroModulus);
    }
    if !c.is_odd() {
        return Err(Error::EvenModulus(c));
    }
    let norm = c.norm();
    if norm > cap {
        return Err(Error::DirectCapExceeded { norm, cap });
    }
    let n = norm as i64;
    let (width, height) = residue_rectangle(c);
    // ě(νd/c) = e(2·Re(ν d c̄)/N); w = ν c̄ reduced mod N componentwise
    let w = GaussInt::new(
        ((nu.re as i128 * c.re as i128 + nu.im as i128 * c.im as i128).rem_euclid(n as i128)) as i64,
        ((nu.im as i128 * c.re as i128 - nu.re as i128 * c.im as i128).rem_euclid(n as i128)) as i64,
    );
    let total = width * height;
    let term = |k: i64| -> Complex64 {
        let (x, y) = (k % width, k / width);
        let d = GaussInt::new(x, y);
        let s = quartic_symbol(d, c).expect("odd modulus");
        let s = match order {
            Order::Quartic => s,
            Order::Quadratic => s.pow(2),
        };
        if s.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        // Re(w d) = w.re·x − w.im·y
        let re = (w.re as i128 * x as i128 - w.im as i128 * y as i128).rem_euclid(n as i128) as i64;
        let t = (2 * re as i128 % n as i128) as f64;
        let (sin, cos) = (TAU * t / n as f64).sin_cos();
        s.to_complex() * Complex64::new(cos, sin)
    };
    let chunks = (total as usize).div_ceil(CHUNK);
    let partial: Vec<Complex64> = (0..chunks)
        .into_par_iter()
        .map(|j| {
            let lo = (j * CHUNK) as i64;
            let hi = (lo + CHUNK as i64).min(total);
            let terms: Vec<Complex64> = (lo..hi).map(term).collect();
            pairwise(&terms)
        })
        .collect();
    let value = pairwise(&partial);
    let t = total as f64;
    Ok(ComplexVal::new(value, t * (6.0 + t.log2().ceil()) * EPS))
}

/// `g₄(ν, c) = Σ_{d mod c} (d/c)₄ ě(νd/c)` by direct summation.
pub fn g4_direct(nu: GaussInt, c: GaussInt) -> Result<ComplexVal> {
    direct_sum(nu, c, Order::Quartic, DEFAULT_DIRECT_CAP)
}

/// `g₂(ν, c) = Σ_{d mod c} (d/c)₂ ě(νd/c)` by direct summation.
pub fn g2_direct(nu: GaussInt, c: GaussInt) -> Result<ComplexVal> {
    direct_sum(nu, c, Order::Quadratic, DEFAULT_DIRECT_CAP)
}

pub fn g4_direct_capped(nu: GaussInt, c: GaussInt, cap: u128) -> Result<ComplexVal> {
    direct_sum(nu, c, Order::Quartic, cap)
}

pub fn g2_direct_capped(nu: GaussInt, c: GaussInt, cap: u128) -> Result<ComplexVal> {
    direct_sum(nu, c, Order::Quadratic, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussint::mod_reduce;
    use std::collections::HashSet;

    fn g(re: i64, im: i64) -> GaussInt {
        GaussInt::new(re, im)
    }

    #[test]
    fn rectangle_is_a_complete_residue_system() {
        for c in [g(-1, 2), g(-3, 0), g(3, 6), g(5, 0), g(-7, 4), g(9, 12), g(1, 0)] {
            let (w, h) = residue_rectangle(c);
            let mut seen = HashSet::new();
            for y in 0..h {
                for x in 0..w {
                    assert!(seen.insert(mod_reduce(g(x, y), c).unwrap()), "{c}");
                }
            }
            assert_eq!(seen.len() as u128, c.norm());
        }
    }

    #[test]
    fn examples() {
        let v = g4_direct(GaussInt::ONE, GaussInt::ONE).unwrap();
        assert!((v.value - Complex64::new(1.0, 0.0)).norm() <= v.err + 1e-15);
        // F_9 with a quartic character: Stickelberger gives (−1)^{(3+1)/4}·3
        let v = g4_direct(GaussInt::ONE, g(-3, 0)).unwrap();
        assert!((v.value - Complex64::new(-3.0, 0.0)).norm() < 1e-12);
        let v = g2_direct(GaussInt::ONE, g(-3, 0)).unwrap();
        assert!((v.value - Complex64::new(3.0, 0.0)).norm() < 1e-12);
        let v = g2_direct(GaussInt::ONE, g(-1, 2)).unwrap();
        assert!((v.value - Complex64::new(-5f64.sqrt(), 0.0)).norm() < 1e-12);
        assert!(matches!(g4_direct(GaussInt::ONE, g(2, 0)), Err(Error::EvenModulus(_))));
        assert!(matches!(g4_direct_capped(GaussInt::ONE, g(101, 0), 100), Err(Error::DirectCapExceeded { .. })));
    }

    #[test]
    fn independent_of_residue_system() {
        // the minimal-norm domain gives the same value
        for c in [g(-1, 2), g(3, 2), g(-3, 0), g(-1, 6), g(-7, 4)] {
            let n = c.norm() as i64;
            let mut acc = Complex64::new(0.0, 0.0);
            let mut seen = HashSet::new();
            for x in -n..=n {
                for y in -n..=n {
                    let r = mod_reduce(g(x, y), c).unwrap();
                    if !seen.insert(r) {
                        continue;
                    }
                    let s = quartic_symbol(r, c).unwrap().to_complex();
                    let z = r.to_complex() / c.to_complex();
                    let ph = TAU * 2.0 * z.re;
                    acc += s * Complex64::new(ph.cos(), ph.sin());
                }
            }
            let v = g4_direct(GaussInt::ONE, c).unwrap();
            assert!((v.value - acc).norm() < 1e-9, "{c}");
        }
    }
}
