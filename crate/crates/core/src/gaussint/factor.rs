//! Rational and Gaussian factorization.

use super::{strip_lambda, GaussInt};
use crate::error::{Error, Result};

/// Effort limits for norm factorization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactorConfig {
    /// Trial division runs over primes below this bound.
    pub trial_limit: u64,
    /// Iteration budget per Pollard–Brent attempt.
    pub rho_iterations: u64,
    /// Number of polynomial constants tried before giving up.
    pub rho_attempts: u32,
}

impl Default for FactorConfig {
    fn default() -> Self {
        FactorConfig { trial_limit: 1 << 12, rho_iterations: 1 << 22, rho_attempts: 32 }
    }
}

/// `z = i^unit_exp · λ^lambda_exp · Π π^e`, primes primary and sorted by `(norm, re, im)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit_exp: u8,
    pub lambda_exp: u32,
    pub factors: Vec<(GaussInt, u32)>,
}

impl Factorization {
    pub fn reconstruct(&self) -> Option<GaussInt> {
        let mut z = GaussInt::unit(self.unit_exp as i64);
        z = z.checked_mul(GaussInt::LAMBDA.checked_pow(self.lambda_exp)?)?;
        for &(p, e) in &self.factors {
            z = z.checked_mul(p.checked_pow(e)?)?;
        }
        Some(z)
    }

    pub fn is_squarefree(&self) -> bool {
        self.lambda_exp <= 1 && self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Primary divisors of the odd part, each listed once.
    pub fn odd_divisors(&self) -> Vec<GaussInt> {
        let mut out = vec![GaussInt::ONE];
        for &(p, e) in &self.factors {
            let len = out.len();
            let mut pk = GaussInt::ONE;
            for _ in 0..e {
                pk = pk * p;
                for j in 0..len {
                    out.push(out[j] * pk);
                }
            }
        }
        out
    }
}

fn mul_mod_u64(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

fn pow_mod_u64(mut b: u64, mut e: u64, n: u64) -> u64 {
    let mut acc = 1 % n;
    b %= n;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_u64(acc, b, n);
        }
        b = mul_mod_u64(b, b, n);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for &a in &BASES {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn mul_mod_u128(a: u128, b: u128, n: u128) -> u128 {
    if n <= u64::MAX as u128 {
        return (a % n) * (b % n) % n;
    }
    let (mut a, mut b) = (a % n, b % n);
    let mut acc = 0u128;
    while b > 0 {
        if b & 1 == 1 {
            acc = add_mod_u128(acc, a, n);
        }
        a = add_mod_u128(a, a, n);
        b >>= 1;
    }
    acc
}

fn add_mod_u128(a: u128, b: u128, n: u128) -> u128 {
    let (s, over) = a.overflowing_add(b);
    if over || s >= n {
        s.wrapping_sub(n)
    } else {
        s
    }
}

fn pow_mod_u128(mut b: u128, mut e: u128, n: u128) -> u128 {
    let mut acc = 1 % n;
    b %= n;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_u128(acc, b, n);
        }
        b = mul_mod_u128(b, b, n);
        e >>= 1;
    }
    acc
}

/// Miller–Rabin on 128-bit inputs: deterministic below 2^64, and with the
/// first twenty prime bases above (no known counterexample).
pub fn is_prime_u128(n: u128) -> bool {
    if n <= u64::MAX as u128 {
        return is_prime_u64(n as u64);
    }
    const BASES: [u128; 20] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71];
    for &p in &BASES {
        if n % p == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for &a in &BASES {
        let mut x = pow_mod_u128(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u128(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Pollard–Brent search for a nontrivial factor of composite odd `n`.
fn brent(n: u128, cfg: &FactorConfig) -> Option<u128> {
    for c in 1..=cfg.rho_attempts as u128 {
        let f = |x: u128| add_mod_u128(mul_mod_u128(x, x, n), c, n);
        let (mut y, mut r, mut q) = (2u128, 1u64, 1u128);
        let mut g = 1u128;
        let (mut x, mut ys) = (0u128, 0u128);
        let mut spent = 0u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                let m = 128.min(r - k);
                for _ in 0..m {
                    y = f(y);
                    q = mul_mod_u128(q, x.abs_diff(y), n);
                }
                g = gcd_u128(q, n);
                k += m;
            }
            spent += r;
            r *= 2;
            if spent > cfg.rho_iterations {
                break;
            }
        }
        if g == n {
            // backtrack one step at a time
            loop {
                ys = f(ys);
                g = gcd_u128(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g > 1 && g < n {
            return Some(g);
        }
    }
    None
}

/// Prime factorization of a positive integer, primes ascending.
pub fn factor_rational(n: u128, cfg: &FactorConfig) -> Result<Vec<(u128, u32)>> {
    if n == 0 {
        return Err(Error::ZeroInput);
    }
    let mut out: Vec<(u128, u32)> = Vec::new();
    let mut m = n;
    let push = |out: &mut Vec<(u128, u32)>, p: u128, e: u32| {
        if let Some(entry) = out.iter_mut().find(|(q, _)| *q == p) {
            entry.1 += e;
        } else {
            out.push((p, e));
        }
    };
    let tz = m.trailing_zeros();
    if tz > 0 {
        push(&mut out, 2, tz);
        m >>= tz;
    }
    let mut d = 3u128;
    while d < cfg.trial_limit as u128 && d * d <= m {
        if m % d == 0 {
            let mut e = 0;
            while m % d == 0 {
                m /= d;
                e += 1;
            }
            push(&mut out, d, e);
        }
        d += 2;
    }
    let mut stack = vec![m];
    while let Some(x) = stack.pop() {
        if x == 1 {
            continue;
        }
        if d * d > x || is_prime_u128(x) {
            push(&mut out, x, 1);
            continue;
        }
        if let Some(r) = exact_square_root(x) {
            stack.push(r);
            stack.push(r);
            continue;
        }
        let f = brent(x, cfg).ok_or(Error::FactorizationFailed { norm: n })?;
        stack.push(f);
        stack.push(x / f);
    }
    out.sort_unstable();
    Ok(out)
}

fn exact_square_root(x: u128) -> Option<u128> {
    let r = isqrt(x);
    (r * r == x).then_some(r)
}

/// A square root of −1 modulo a prime `p ≡ 1 (mod 4)`.
pub fn sqrt_minus_one_mod(p: u128) -> Result<u128> {
    if p % 4 != 1 || !is_prime_u128(p) {
        return Err(Error::Precondition(format!("{p} is not a prime congruent to 1 mod 4")));
    }
    let e = (p - 1) / 4;
    for q in 2..p {
        let x = pow_mod_u128(q, e, p);
        if mul_mod_u128(x, x, p) == p - 1 {
            return Ok(x);
        }
    }
    unreachable!("a quadratic non-residue exists below p")
}

/// The primary prime `π = a + bi` with `π·π̄ = p` and `b > 0`, for `p ≡ 1 (mod 4)`.
///
/// Euclid on `(p, x)` with `x² ≡ −1` stops at the first remainder below `√p`,
/// which is one of the two squares in `p = a² + b²`.
pub fn split_prime(p: u128) -> Result<GaussInt> {
    let x = sqrt_minus_one_mod(p)?;
    let root = isqrt(p);
    let (mut r0, mut r1) = (p, x);
    while r1 > root {
        let t = r0 % r1;
        r0 = r1;
        r1 = t;
    }
    let a = r1;
    let b = exact_square_root(p - a * a).expect("Euclid yields a two-squares decomposition");
    let z = GaussInt::new(a as i64, b as i64);
    let mut pi = z.mul_unit(super::primary_unit_exp(z) as i64);
    if pi.im < 0 {
        pi = pi.conj();
    }
    Ok(pi)
}

fn isqrt(x: u128) -> u128 {
    let mut r = (x as f64).sqrt() as u128;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

/// Primality in `Z[i]`: the norm is a rational prime, or `z` is an associate
/// of a rational prime `p ≡ 3 (mod 4)`.
pub fn is_gaussian_prime(z: GaussInt) -> bool {
    let n = z.norm();
    if n < 2 {
        return false;
    }
    if is_prime_u128(n) {
        return true;
    }
    let p = if z.im == 0 {
        z.re.unsigned_abs()
    } else if z.re == 0 {
        z.im.unsigned_abs()
    } else {
        return false;
    };
    p % 4 == 3 && is_prime_u64(p)
}

pub fn factor(z: GaussInt) -> Result<Factorization> {
    factor_with(z, &FactorConfig::default())
}

pub fn factor_with(z: GaussInt, cfg: &FactorConfig) -> Result<Factorization> {
    if z.is_zero() {
        return Err(Error::ZeroInput);
    }
    let (mut rest, lambda_exp) = strip_lambda(z);
    let norm = rest.norm();
    let mut factors = Vec::new();
    for (p, e) in factor_rational(norm, cfg)? {
        if p % 4 == 3 {
            let q = -(p as i64);
            let pe = GaussInt::new(q, 0).pow(e / 2);
            rest = rest.div_exact(pe).expect("inert prime power divides");
            factors.push((GaussInt::new(q, 0), e / 2));
            continue;
        }
        let pi = split_prime(p)?;
        for cand in [pi, pi.conj()] {
            let mut k = 0;
            while let Some(q) = rest.div_exact(cand) {
                rest = q;
                k += 1;
            }
            if k > 0 {
                factors.push((cand, k));
            }
        }
    }
    debug_assert!(rest.is_unit());
    let unit_exp = (0..4u8).find(|&k| GaussInt::unit(k as i64) == rest).expect("unit cofactor");
    factors.sort_by_key(|&(p, _)| p.sort_key());
    Ok(Factorization { unit_exp, lambda_exp, factors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(re: i64, im: i64) -> GaussInt {
        GaussInt::new(re, im)
    }

    fn trial_is_prime(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn miller_rabin_matches_trial_division() {
        for n in 0..20_000u64 {
            assert_eq!(is_prime_u64(n), trial_is_prime(n), "{n}");
        }
        // strong pseudoprimes to several small bases
        for n in [3_215_031_751u64, 2_152_302_898_747, 3_474_749_660_383, 341_550_071_728_321] {
            assert!(!is_prime_u64(n));
        }
        assert!(is_prime_u64(18_446_744_073_709_551_557));
        assert!(is_prime_u128(170_141_183_460_469_231_731_687_303_715_884_105_727));
        assert!(!is_prime_u128(18_446_744_073_709_551_557u128 * 18_446_744_073_709_551_533));
    }

    #[test]
    fn rational_factorization_of_semiprimes() {
        let cfg = FactorConfig::default();
        let n = 1_000_000_007u128 * 998_244_353;
        assert_eq!(factor_rational(n, &cfg).unwrap(), vec![(998_244_353, 1), (1_000_000_007, 1)]);
        let n = 4_294_967_311u128 * 4_294_967_311 * 12;
        assert_eq!(factor_rational(n, &cfg).unwrap(), vec![(2, 2), (3, 1), (4_294_967_311, 2)]);
    }

    #[test]
    fn factor_examples() {
        let f = factor(g(5, 0)).unwrap();
        assert_eq!((f.unit_exp, f.lambda_exp), (0, 0));
        assert_eq!(f.factors, vec![(g(-1, -2), 1), (g(-1, 2), 1)]);
        let f = factor(g(-3, 0)).unwrap();
        assert_eq!((f.unit_exp, f.lambda_exp, f.factors.clone()), (0, 0, vec![(g(-3, 0), 1)]));
        let f = factor(g(2, 0)).unwrap();
        assert_eq!((f.unit_exp, f.lambda_exp, f.factors.len()), (3, 2, 0));
        assert_eq!(GaussInt::LAMBDA * GaussInt::LAMBDA, g(0, 2));
    }

    #[test]
    fn split_prime_norms() {
        for p in (5..5000u64).filter(|&p| p % 4 == 1 && is_prime_u64(p)) {
            let pi = split_prime(p as u128).unwrap();
            assert_eq!(pi.norm(), p as u128);
            assert!(pi.is_primary() && pi.im > 0);
        }
    }

    #[test]
    fn factor_round_trip_small_box() {
        for re in -60..=60 {
            for im in -60..=60 {
                let z = g(re, im);
                if z.is_zero() {
                    continue;
                }
                let f = factor(z).unwrap();
                assert_eq!(f.reconstruct(), Some(z));
                for w in f.factors.windows(2) {
                    assert!(w[0].0.sort_key() < w[1].0.sort_key());
                }
                assert!(f.factors.iter().all(|&(p, _)| p.is_primary() && is_gaussian_prime(p)));
            }
        }
    }

    proptest! {
        #[test]
        fn factor_round_trip(a in -1000i64..=1000, b in -1000i64..=1000) {
            prop_assume!(a != 0 || b != 0);
            let z = g(a, b);
            let f = factor(z).unwrap();
            prop_assert_eq!(f.reconstruct(), Some(z));
        }

        #[test]
        fn factor_round_trip_large(a in -(1i64 << 40)..(1i64 << 40), b in -(1i64 << 40)..(1i64 << 40)) {
            prop_assume!(a != 0 || b != 0);
            let z = g(a, b);
            let f = factor(z).unwrap();
            prop_assert_eq!(f.reconstruct(), Some(z));
        }
    }
}
