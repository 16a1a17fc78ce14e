//! `O(p)` evaluation of `g₄(π)` at degree-one primes.
//!
//! With `N(π) = p` the rational integers `0..p` represent `Z[i]/(π)`, and for
//! rational `t` the trace of `t/π` is `2at/p` where `π = a + bi`. Hence
//! `g₄(π) = Σ_t χ(t) e(2at/p)` with `χ(t) = (t/π)₄` a quartic character of
//! `F_p^×`, fixed by its value at one primitive root. Since `(t/π̄)₄` is the
//! conjugate of `(t/π)₄` for rational `t`, one pass yields both `g₄(π)` and
//! `g₄(π̄)`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::complex::{ComplexVal, EPS};
use crate::error::{Error, Result};
use crate::gaussint::{factor_rational, is_prime_u64, mod_pow, FactorConfig, GaussInt};
use crate::reduce::{CompensatedSum, Precision};

const BLOCK: usize = 1024;

/// Smallest primitive root modulo a prime `p`.
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let fac = factor_rational((p - 1) as u128, &FactorConfig::default()).expect("p−1 factors");
    (2..p)
        .find(|&g| fac.iter().all(|&(q, _)| pow_mod(g, (p - 1) / q as u64, p) != 1))
        .expect("primitive root exists")
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Multiplication by a fixed `w` modulo `p < 2^63` with a precomputed quotient.
struct ShoupMul {
    w: u64,
    w_shoup: u64,
    p: u64,
}

impl ShoupMul {
    fn new(w: u64, p: u64) -> Self {
        ShoupMul { w, w_shoup: (((w as u128) << 64) / p as u128) as u64, p }
    }

    #[inline]
    fn mul(&self, x: u64) -> u64 {
        let q = ((x as u128 * self.w_shoup as u128) >> 64) as u64;
        let r = x.wrapping_mul(self.w).wrapping_sub(q.wrapping_mul(self.p));
        if r >= self.p {
            r - self.p
        } else {
            r
        }
    }
}

/// Exponent `e` with `χ(g) = i^e` for the character `t ↦ (t/π)₄`.
fn character_exponent(g: u64, pi: GaussInt) -> Result<u8> {
    let r = mod_pow(GaussInt::new(g as i64, 0), (pi.norm() - 1) / 4, pi)?;
    (0..4u8)
        .find(|&k| crate::gaussint::mod_reduce(r - GaussInt::unit(k as i64), pi).map(|z| z.is_zero()).unwrap_or(false))
        .ok_or(Error::NotPrime(pi))
}

fn check_degree_one(pi: GaussInt) -> Result<u64> {
    if !pi.is_primary() {
        return Err(Error::NotPrimary(pi));
    }
    let p = u64::try_from(pi.norm()).map_err(|_| Error::Overflow("g4_prime_fast"))?;
    if p % 4 != 1 || !is_prime_u64(p) {
        return Err(Error::WrongPrimeType { pi, expected: 1 });
    }
    if p >= 1 << 40 {
        return Err(Error::Precondition(format!("norm {p} too large for an O(p) sum")));
    }
    Ok(p)
}

/// `(g₄(π), g₄(π̄))` for a primary degree-one prime `π`.
pub fn g4_prime_fast_pair(pi: GaussInt, precision: Precision) -> Result<(ComplexVal, ComplexVal)> {
    let p = check_degree_one(pi)?;
    let g = primitive_root(p);
    let e = character_exponent(g, pi)? as usize;
    let two_a = (2 * pi.re).rem_euclid(p as i64) as u64;

    // cls[r] = exponent of χ((2a)^{-1} r); the walk r_j = 2a·g^j visits every unit once
    let mut cls = vec![0u8; p as usize];
    let step = ShoupMul::new(g, p);
    let mut r = two_a;
    let mut k = 0usize;
    for _ in 0..p - 1 {
        cls[r as usize] = k as u8;
        r = step.mul(r);
        k = (k + e) & 3;
    }

    let pf = p as f64;
    let table: Vec<Complex64> = (0..BLOCK.min(p as usize))
        .map(|s| {
            let (sin, cos) = (TAU * s as f64 / pf).sin_cos();
            Complex64::new(cos, sin)
        })
        .collect();
    let mut acc = [CompensatedSum::new(); 4];
    let mut plain = [Complex64::new(0.0, 0.0); 4];
    for (q, block) in cls.chunks(BLOCK).enumerate() {
        let mut local = [Complex64::new(0.0, 0.0); 4];
        let start = if q == 0 { 1 } else { 0 };
        for s in start..block.len() {
            local[block[s] as usize] += table[s];
        }
        let off = (q * BLOCK) as u64 % p;
        let (sin, cos) = (TAU * off as f64 / pf).sin_cos();
        let base = Complex64::new(cos, sin);
        for c in 0..4 {
            match precision {
                Precision::Double => plain[c] += base * local[c],
                Precision::Compensated => acc[c].add(base * local[c]),
            }
        }
    }
    let sums: [Complex64; 4] = match precision {
        Precision::Double => plain,
        Precision::Compensated => [acc[0].value(), acc[1].value(), acc[2].value(), acc[3].value()],
    };
    let units = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, -1.0),
    ];
    let mut g_pi = Complex64::new(0.0, 0.0);
    let mut g_bar = Complex64::new(0.0, 0.0);
    for c in 0..4 {
        g_pi += units[c] * sums[c];
        g_bar += units[(4 - c) % 4] * sums[c];
    }
    // rounding behaves like a random walk over the p terms; this is an
    // empirical bound, not a worst-case one
    let err = match precision {
        Precision::Double => pf * (8.0 + pf.log2()) * EPS,
        Precision::Compensated => pf * 8.0 * EPS,
    };
    Ok((ComplexVal::new(g_pi, err), ComplexVal::new(g_bar, err)))
}

/// `g₄(π)` for a primary degree-one prime.
pub fn g4_prime_fast(pi: GaussInt) -> Result<ComplexVal> {
    Ok(g4_prime_fast_pair(pi, Precision::Double)?.0)
}
