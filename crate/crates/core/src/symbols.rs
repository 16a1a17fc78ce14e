//! Quadratic and quartic residue symbols over `Z[i]`.

use std::fmt;
use std::ops::Mul;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussint::{factor, is_gaussian_prime, lambda_digits, mod_pow, mod_reduce, GaussInt};

/// A value in `{0, 1, i, −1, −i}`; `Unit(k)` is `i^k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum SymbolValue {
    Zero,
    Unit(u8),
}

impl SymbolValue {
    pub const ONE: SymbolValue = SymbolValue::Unit(0);

    pub fn unit(k: i64) -> Self {
        SymbolValue::Unit(k.rem_euclid(4) as u8)
    }

    pub fn is_zero(self) -> bool {
        self == SymbolValue::Zero
    }

    /// Exponent `k` of `i^k`, or `None` for zero.
    pub fn exponent(self) -> Option<u8> {
        match self {
            SymbolValue::Zero => None,
            SymbolValue::Unit(k) => Some(k),
        }
    }

    pub fn pow(self, e: u64) -> Self {
        match self {
            SymbolValue::Zero if e == 0 => SymbolValue::ONE,
            SymbolValue::Zero => SymbolValue::Zero,
            SymbolValue::Unit(k) => SymbolValue::Unit(((k as u64 * (e % 4)) % 4) as u8),
        }
    }

    pub fn conj(self) -> Self {
        match self {
            SymbolValue::Zero => SymbolValue::Zero,
            SymbolValue::Unit(k) => SymbolValue::Unit((4 - k) % 4),
        }
    }

    pub fn to_gauss(self) -> GaussInt {
        match self {
            SymbolValue::Zero => GaussInt::ZERO,
            SymbolValue::Unit(k) => GaussInt::unit(k as i64),
        }
    }

    pub fn to_complex(self) -> Complex64 {
        match self {
            SymbolValue::Zero => Complex64::new(0.0, 0.0),
            SymbolValue::Unit(0) => Complex64::new(1.0, 0.0),
            SymbolValue::Unit(1) => Complex64::new(0.0, 1.0),
            SymbolValue::Unit(2) => Complex64::new(-1.0, 0.0),
            SymbolValue::Unit(_) => Complex64::new(0.0, -1.0),
        }
    }

    /// Real value of a quadratic symbol.
    pub fn to_real(self) -> f64 {
        match self {
            SymbolValue::Zero => 0.0,
            SymbolValue::Unit(0) => 1.0,
            SymbolValue::Unit(2) => -1.0,
            SymbolValue::Unit(_) => panic!("symbol is not real"),
        }
    }
}

impl Mul for SymbolValue {
    type Output = SymbolValue;
    fn mul(self, o: SymbolValue) -> SymbolValue {
        match (self, o) {
            (SymbolValue::Unit(a), SymbolValue::Unit(b)) => SymbolValue::Unit((a + b) % 4),
            _ => SymbolValue::Zero,
        }
    }
}

impl fmt::Display for SymbolValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymbolValue::Zero => "0",
            SymbolValue::Unit(0) => "1",
            SymbolValue::Unit(1) => "i",
            SymbolValue::Unit(2) => "-1",
            SymbolValue::Unit(_) => "-i",
        })
    }
}

fn check_euler_modulus(pi: GaussInt) -> Result<()> {
    if pi.norm() == 2 {
        return Err(Error::RamifiedPrime(pi));
    }
    if !is_gaussian_prime(pi) {
        return Err(Error::NotPrime(pi));
    }
    Ok(())
}

fn unit_residue(r: GaussInt, pi: GaussInt) -> SymbolValue {
    (0..4)
        .find(|&k| mod_reduce(r - GaussInt::unit(k as i64), pi).unwrap().is_zero())
        .map(SymbolValue::Unit)
        .expect("Euler power is a unit mod π")
}

/// Quartic symbol from the Euler criterion `α^{(Nπ−1)/4} mod π`.
pub fn quartic_symbol_euler(alpha: GaussInt, pi: GaussInt) -> Result<SymbolValue> {
    check_euler_modulus(pi)?;
    let a = mod_reduce(alpha, pi)?;
    if a.is_zero() {
        return Ok(SymbolValue::Zero);
    }
    let r = mod_pow(a, (pi.norm() - 1) / 4, pi)?;
    Ok(unit_residue(r, pi))
}

/// Quadratic symbol from the Euler criterion `α^{(Nπ−1)/2} mod π`.
pub fn quadratic_symbol_euler(alpha: GaussInt, pi: GaussInt) -> Result<SymbolValue> {
    check_euler_modulus(pi)?;
    let a = mod_reduce(alpha, pi)?;
    if a.is_zero() {
        return Ok(SymbolValue::Zero);
    }
    let r = mod_pow(a, (pi.norm() - 1) / 2, pi)?;
    Ok(unit_residue(r, pi))
}

/// Factor the modulus and multiply Euler-criterion symbols over its primes.
pub fn quartic_symbol_by_factoring(alpha: GaussInt, gamma: GaussInt) -> Result<SymbolValue> {
    check_odd_modulus(gamma)?;
    let f = factor(gamma)?;
    let mut acc = SymbolValue::ONE;
    for (p, e) in f.factors {
        acc = acc * quartic_symbol_euler(alpha, p)?.pow(e as u64);
    }
    Ok(acc)
}

fn check_odd_modulus(gamma: GaussInt) -> Result<()> {
    if gamma.is_zero() {
        return Err(Error::ZeroModulus);
    }
    if !gamma.is_odd() {
        return Err(Error::EvenModulus(gamma));
    }
    Ok(())
}

/// `(λ/γ)` and `(i/γ)` exponents indexed by `(re mod 16, im mod 16)` of primary `γ`.
fn supplement_table() -> &'static [(u8, u8); 256] {
    static TABLE: OnceLock<[(u8, u8); 256]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [(0u8, 0u8); 256];
        for re in 0..16i64 {
            for im in 0..16i64 {
                let z = GaussInt::new(re, im);
                if !z.is_primary() {
                    continue;
                }
                let d = lambda_digits(z, 6).expect("primary");
                let (a3, a4, a5, a6) = (d[0] as i64, d[1] as i64, d[2] as i64, d[3] as i64);
                let base_l = -a4 + 2 * a6;
                let base_i = 2 * (a4 + a5);
                let (l, i) = if a3 == 0 { (base_l, base_i) } else { (base_l + 2, base_i + 1) };
                t[(re * 16 + im) as usize] = (l.rem_euclid(4) as u8, i.rem_euclid(4) as u8);
            }
        }
        t
    })
}

/// Exponents of `(λ/γ)₄` and `(i/γ)₄` for primary `γ`.
#[inline]
pub fn supplement_exponents(gamma: GaussInt) -> (u8, u8) {
    debug_assert!(gamma.is_primary());
    supplement_table()[((gamma.re & 15) * 16 + (gamma.im & 15)) as usize]
}

/// Unit exponent `u` with `i^u · z` primary, for odd `z`.
#[inline]
fn unit_to_primary(re: i64, im: i64) -> u8 {
    if im & 1 == 0 {
        if (re - 1 - im) & 3 == 0 {
            0
        } else {
            2
        }
    } else if (-im - 1 - re) & 3 == 0 {
        1
    } else {
        3
    }
}

/// Remove `λ^k` from nonzero `z`: `λ² = 2i`, so `z / λ^{2m} = (−i)^m z / 2^m`.
#[inline]
fn split_lambda(z: GaussInt) -> (GaussInt, u32) {
    let t = z.re.trailing_zeros().min(z.im.trailing_zeros());
    let both_odd = ((z.re >> t) & (z.im >> t)) & 1 == 1;
    let k = 2 * t + u32::from(both_odd);
    let m = k / 2;
    let (re, im) = (z.re >> m, z.im >> m);
    let (mut re, mut im) = match m % 4 {
        0 => (re, im),
        1 => (im, -re),
        2 => (-re, -im),
        _ => (-im, re),
    };
    if k % 2 == 1 {
        let (r, i) = ((re + im) / 2, (im - re) / 2);
        re = r;
        im = i;
    }
    (GaussInt::new(re, im), k)
}

#[inline]
fn norm_is_5_mod_8(z: GaussInt) -> bool {
    let n = (z.re.wrapping_mul(z.re)).wrapping_add(z.im.wrapping_mul(z.im));
    n & 7 == 5
}

/// Multiplicatively extended quartic symbol `(α/γ)₄` for odd `γ`, computed by
/// reciprocity without factoring `γ`.
pub fn quartic_symbol(alpha: GaussInt, gamma: GaussInt) -> Result<SymbolValue> {
    check_odd_modulus(gamma)?;
    let mut g = gamma.mul_unit(unit_to_primary(gamma.re, gamma.im) as i64);
    let mut a = mod_reduce(alpha, g)?;
    let mut acc: u32 = 0;
    loop {
        if g == GaussInt::ONE {
            return Ok(SymbolValue::Unit((acc & 3) as u8));
        }
        if a.is_zero() {
            return Ok(SymbolValue::Zero);
        }
        let (odd, k) = split_lambda(a);
        let u = unit_to_primary(odd.re, odd.im);
        let p = odd.mul_unit(u as i64);
        let (lx, ix) = supplement_exponents(g);
        // odd = i^{-u} p
        acc = acc.wrapping_add(k * lx as u32).wrapping_add((4 - u as u32) * ix as u32);
        if p == GaussInt::ONE {
            return Ok(SymbolValue::Unit((acc & 3) as u8));
        }
        if norm_is_5_mod_8(p) && norm_is_5_mod_8(g) {
            acc = acc.wrapping_add(2);
        }
        a = mod_reduce(g, p)?;
        g = p;
    }
}

/// Quadratic symbol `(α/γ)₂ = (α/γ)₄²`.
pub fn quadratic_symbol(alpha: GaussInt, gamma: GaussInt) -> Result<SymbolValue> {
    Ok(quartic_symbol(alpha, gamma)?.pow(2))
}

/// Reciprocity parity `C(α,γ) = (Nα−1)/4 · (Nγ−1)/4 mod 2` of primary elements.
pub fn c_parity(alpha: GaussInt, gamma: GaussInt) -> Result<u8> {
    for z in [alpha, gamma] {
        if !z.is_primary() {
            return Err(Error::NotPrimary(z));
        }
    }
    Ok(u8::from(norm_is_5_mod_8(alpha) && norm_is_5_mod_8(gamma)))
}

/// `(−1)^{C(α,γ)}` as ±1.
pub fn c_sign(alpha: GaussInt, gamma: GaussInt) -> Result<f64> {
    Ok(if c_parity(alpha, gamma)? == 1 { -1.0 } else { 1.0 })
}

/// Grössencharakter factor `(c̄/|c|)^ℓ = exp(−iℓ·arg c)`.
pub fn grossencharakter(c: GaussInt, ell: i64) -> Result<Complex64> {
    if c.is_zero() {
        return Err(Error::ZeroInput);
    }
    if ell == 0 || (c.im == 0 && c.re > 0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    Ok(Complex64::from_polar(1.0, -(ell as f64) * c.arg()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussint::primary_associate;
    use proptest::prelude::*;

    fn g(re: i64, im: i64) -> GaussInt {
        GaussInt::new(re, im)
    }

    fn primary_primes(bound: i64) -> Vec<GaussInt> {
        let mut out = vec![];
        for re in -bound..=bound {
            for im in -bound..=bound {
                let z = g(re, im);
                if z.is_primary() && z.norm() > 1 && is_gaussian_prime(z) {
                    out.push(z);
                }
            }
        }
        out
    }

    #[test]
    fn euler_examples() {
        let p = g(-1, 2);
        assert_eq!(quartic_symbol_euler(g(-3, 6), p).unwrap(), SymbolValue::Zero);
        assert_eq!(quartic_symbol_euler(GaussInt::I, p).unwrap(), SymbolValue::Unit(1));
        assert_eq!(quartic_symbol_euler(GaussInt::LAMBDA, p).unwrap(), SymbolValue::Unit(2));
        assert!(matches!(quartic_symbol_euler(GaussInt::ONE, GaussInt::LAMBDA), Err(Error::RamifiedPrime(_))));
        assert!(matches!(quartic_symbol_euler(GaussInt::ONE, g(5, 0)), Err(Error::NotPrime(_))));
    }

    #[test]
    fn fast_examples() {
        assert_eq!(quartic_symbol(g(7, 3), GaussInt::ONE).unwrap(), SymbolValue::ONE);
        assert_eq!(quartic_symbol(GaussInt::LAMBDA, g(-1, 2)).unwrap(), SymbolValue::Unit(2));
        assert_eq!(quartic_symbol(GaussInt::I, g(-1, 2)).unwrap(), SymbolValue::Unit(1));
        assert_eq!(quadratic_symbol(g(7, 3), GaussInt::ONE).unwrap(), SymbolValue::ONE);
        assert_eq!(quadratic_symbol(GaussInt::I, g(-1, 2)).unwrap(), SymbolValue::Unit(2));
        assert!(matches!(quartic_symbol(GaussInt::ONE, g(2, 0)), Err(Error::EvenModulus(_))));
    }

    #[test]
    fn parity_and_character_examples() {
        assert_eq!(c_parity(GaussInt::ONE, g(-1, 2)).unwrap(), 0);
        assert_eq!(c_parity(g(-1, 2), g(-1, -2)).unwrap(), 1);
        assert_eq!(c_parity(g(-1, 2), g(-3, 0)).unwrap(), 0);
        assert!(c_parity(g(2, 1), GaussInt::ONE).is_err());
        assert_eq!(grossencharakter(g(5, 0), 7).unwrap(), Complex64::new(1.0, 0.0));
        let w = grossencharakter(g(-1, 2), 4).unwrap();
        assert!((w - Complex64::new(-7.0 / 25.0, -24.0 / 25.0)).norm() < 1e-14);
        assert_eq!(grossencharakter(g(3, 8), 0).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn parity_matches_definition() {
        for a in primary_primes(12) {
            for c in primary_primes(12) {
                let exact = ((a.norm() - 1) / 4 * ((c.norm() - 1) / 4)) % 2;
                assert_eq!(c_parity(a, c).unwrap() as u128, exact);
            }
        }
    }

    #[test]
    fn split_lambda_matches_repeated_division() {
        for re in -64..=64 {
            for im in -64..=64 {
                let z = g(re, im);
                if z.is_zero() {
                    continue;
                }
                let d = primary_associate(z).unwrap();
                let (odd, k) = split_lambda(z);
                assert_eq!(k, d.lambda_exp, "{z}");
                assert_eq!(odd.mul_unit(unit_to_primary(odd.re, odd.im) as i64), d.primary_part, "{z}");
            }
        }
    }

    #[test]
    fn supplement_laws_match_euler() {
        for p in primary_primes(45) {
            let (lx, ix) = supplement_exponents(p);
            assert_eq!(quartic_symbol_euler(GaussInt::LAMBDA, p).unwrap(), SymbolValue::Unit(lx), "{p}");
            assert_eq!(quartic_symbol_euler(GaussInt::I, p).unwrap(), SymbolValue::Unit(ix), "{p}");
            assert_eq!(ix as u128, ((p.norm() - 1) / 4) % 4);
        }
    }

    #[test]
    fn reciprocity_exhaustive_small() {
        let ps: Vec<_> = (-18i64..=18)
            .flat_map(|re| (-18i64..=18).map(move |im| g(re, im)))
            .filter(|z| z.is_primary() && z.norm() > 1 && z.norm() <= 300)
            .collect();
        for &a in &ps {
            for &c in &ps {
                if crate::gaussint::gcd(a, c) != GaussInt::ONE {
                    continue;
                }
                let lhs = quartic_symbol_by_factoring(a, c).unwrap();
                let rhs = quartic_symbol_by_factoring(c, a).unwrap();
                let sign = SymbolValue::unit(2 * c_parity(a, c).unwrap() as i64);
                assert_eq!(lhs, sign * rhs, "{a} {c}");
            }
        }
    }

    #[test]
    fn quadratic_reciprocity_is_sign_free() {
        let elems: Vec<_> = (-15i64..=15)
            .flat_map(|re| (-15i64..=15).map(move |im| g(re, im)))
            .filter(|z| z.is_primary() && z.norm() > 1 && z.norm() <= 200)
            .collect();
        for &m in &elems {
            for &c in &elems {
                if crate::gaussint::gcd(m, c) != GaussInt::ONE {
                    continue;
                }
                let s = quadratic_symbol(m, c).unwrap() * quadratic_symbol(c, m).unwrap();
                assert_eq!(s, SymbolValue::ONE, "{m} {c}");
            }
        }
    }

    #[test]
    fn quadratic_euler_agrees_with_square() {
        for p in primary_primes(20) {
            for re in -6..=6 {
                for im in -6..=6 {
                    let a = g(re, im);
                    assert_eq!(quadratic_symbol_euler(a, p).unwrap(), quartic_symbol_euler(a, p).unwrap().pow(2));
                }
            }
        }
    }

    fn odd_strategy() -> impl Strategy<Value = GaussInt> {
        (-700i64..700, -700i64..700).prop_map(|(a, b)| g(2 * a + 1, 2 * b))
    }

    proptest! {
        #[test]
        fn fast_equals_factored(a in -2000i64..2000, b in -2000i64..2000, c in odd_strategy()) {
            let alpha = g(a, b);
            prop_assert_eq!(quartic_symbol(alpha, c).unwrap(), quartic_symbol_by_factoring(alpha, c).unwrap());
        }

        #[test]
        fn multiplicative_in_numerator(a in -500i64..500, b in -500i64..500, x in -500i64..500, y in -500i64..500, c in odd_strategy()) {
            let (p, q) = (g(a, b), g(x, y));
            prop_assert_eq!(quartic_symbol(p * q, c).unwrap(), quartic_symbol(p, c).unwrap() * quartic_symbol(q, c).unwrap());
        }

        #[test]
        fn multiplicative_in_denominator(a in -500i64..500, b in -500i64..500, c in odd_strategy(), d in odd_strategy()) {
            let alpha = g(a, b);
            prop_assert_eq!(quartic_symbol(alpha, c * d).unwrap(), quartic_symbol(alpha, c).unwrap() * quartic_symbol(alpha, d).unwrap());
        }

        #[test]
        fn periodic_in_numerator(a in -500i64..500, b in -500i64..500, t in -50i64..50, s in -50i64..50, c in odd_strategy()) {
            let alpha = g(a, b);
            prop_assert_eq!(quartic_symbol(alpha + g(t, s) * c, c).unwrap(), quartic_symbol(alpha, c).unwrap());
        }

        #[test]
        fn large_operands(a in any::<i64>(), b in any::<i64>(), x in -(1i64 << 38)..(1i64 << 38), y in -(1i64 << 38)..(1i64 << 38),
                          u in -(1i64 << 20)..(1i64 << 20), v in -(1i64 << 20)..(1i64 << 20)) {
            let c = g(2 * x + 1, 2 * y);
            let d = g(2 * u + 1, 2 * v);
            let alpha = g(a, b);
            prop_assert_eq!(quartic_symbol(alpha, c * d).unwrap(), quartic_symbol(alpha, c).unwrap() * quartic_symbol(alpha, d).unwrap());
        }
    }
}
