//! Exact arithmetic in the Gaussian integers.
//!
//! Components are `i64`; every product is formed in `i128`, so norms up to
//! 2^126 are exact. Operations whose result would not fit report
//! [`Error::Overflow`] (or panic for the operator traits). Reductions on
//! operands below 2^31 run entirely in `i64`.

mod arith;
mod factor;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use arith::{moebius, von_mangoldt};
pub use factor::{
    factor, factor_rational, factor_with, is_gaussian_prime, is_prime_u128, is_prime_u64,
    sqrt_minus_one_mod, split_prime, FactorConfig, Factorization,
};

/// A Gaussian integer `re + im·i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct GaussInt {
    pub re: i64,
    pub im: i64,
}

const SMALL: i64 = 1 << 30;

impl GaussInt {
    pub const ZERO: GaussInt = GaussInt::new(0, 0);
    pub const ONE: GaussInt = GaussInt::new(1, 0);
    pub const I: GaussInt = GaussInt::new(0, 1);
    /// The ramified prime `1 + i`.
    pub const LAMBDA: GaussInt = GaussInt::new(1, 1);

    pub const fn new(re: i64, im: i64) -> Self {
        GaussInt { re, im }
    }

    /// `i^k` for any integer `k`.
    pub fn unit(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => GaussInt::new(1, 0),
            1 => GaussInt::new(0, 1),
            2 => GaussInt::new(-1, 0),
            _ => GaussInt::new(0, -1),
        }
    }

    pub fn norm(self) -> u128 {
        let (a, b) = (self.re as i128, self.im as i128);
        (a * a + b * b) as u128
    }

    /// Norm as `u64`; panics if it does not fit.
    pub fn norm_u64(self) -> u64 {
        u64::try_from(self.norm()).expect("norm exceeds u64")
    }

    pub fn conj(self) -> Self {
        GaussInt::new(self.re, -self.im)
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn is_unit(self) -> bool {
        self.norm() == 1
    }

    /// True when `1 + i` does not divide `self`.
    pub fn is_odd(self) -> bool {
        (self.re ^ self.im) & 1 == 1
    }

    /// `i^k · self`.
    pub fn mul_unit(self, k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => self,
            1 => GaussInt::new(-self.im, self.re),
            2 => GaussInt::new(-self.re, -self.im),
            _ => GaussInt::new(self.im, -self.re),
        }
    }

    pub fn checked_add(self, o: Self) -> Option<Self> {
        Some(GaussInt::new(self.re.checked_add(o.re)?, self.im.checked_add(o.im)?))
    }

    pub fn checked_sub(self, o: Self) -> Option<Self> {
        Some(GaussInt::new(self.re.checked_sub(o.re)?, self.im.checked_sub(o.im)?))
    }

    pub fn checked_mul(self, o: Self) -> Option<Self> {
        let (a, b, c, d) = (self.re as i128, self.im as i128, o.re as i128, o.im as i128);
        let re = a * c - b * d;
        let im = a * d + b * c;
        Some(GaussInt::new(i64::try_from(re).ok()?, i64::try_from(im).ok()?))
    }

    pub fn checked_pow(self, mut e: u32) -> Option<Self> {
        let mut base = self;
        let mut acc = GaussInt::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(base)?;
            }
        }
        Some(acc)
    }

    pub fn pow(self, e: u32) -> Self {
        self.checked_pow(e).expect("GaussInt::pow overflow")
    }

    /// Exact quotient `self / d` when `d` divides `self`.
    pub fn div_exact(self, d: GaussInt) -> Option<GaussInt> {
        if d.is_zero() {
            return None;
        }
        let n = d.norm() as i128;
        let (a, b, c, e) = (self.re as i128, self.im as i128, d.re as i128, -(d.im as i128));
        let re = a * c - b * e;
        let im = a * e + b * c;
        if re % n != 0 || im % n != 0 {
            return None;
        }
        Some(GaussInt::new(i64::try_from(re / n).ok()?, i64::try_from(im / n).ok()?))
    }

    pub fn divides(self, z: GaussInt) -> bool {
        if self.is_zero() {
            return z.is_zero();
        }
        z.div_exact(self).is_some()
    }

    /// Congruent to 1 modulo `(1+i)^3`.
    pub fn is_primary(self) -> bool {
        self.im & 1 == 0 && (self.re - 1 - self.im) & 3 == 0
    }

    /// Residue class mod 4 of a primary element.
    pub fn class(self) -> Option<BetaClass> {
        BetaClass::of(self)
    }

    /// Associate in the first quadrant (`re > 0, im ≥ 0`), zero maps to zero.
    pub fn first_quadrant(self) -> GaussInt {
        let mut z = self;
        if z.is_zero() {
            return z;
        }
        while !(z.re > 0 && z.im >= 0) {
            z = z.mul_unit(1);
        }
        z
    }

    /// Lexicographic key used for deterministic tie-breaking.
    pub fn sort_key(self) -> (u128, i64, i64) {
        (self.norm(), self.re, self.im)
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re as f64, self.im as f64)
    }

    pub fn arg(self) -> f64 {
        (self.im as f64).atan2(self.re as f64)
    }
}

impl fmt::Display for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im < 0 {
            write!(f, "{}-{}i", self.re, self.im.unsigned_abs())
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl fmt::Debug for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Ord for GaussInt {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for GaussInt {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Parse error for Gaussian-integer literals such as `-1+2i`, `3`, `2i`, `1-i`.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid Gaussian integer literal '{0}'")]
pub struct ParseGaussIntError(pub String);

impl FromStr for GaussInt {
    type Err = ParseGaussIntError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let err = || ParseGaussIntError(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(err());
        }
        let Some(body) = t.strip_suffix('i') else {
            return t.parse::<i64>().map(|re| GaussInt::new(re, 0)).map_err(|_| err());
        };
        // split at the last sign that is not in leading position
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(k, _)| k)
            .last();
        let (re_part, im_part) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let re = re_part.parse::<i64>().map_err(|_| err())?;
        let im = match im_part {
            "" | "+" => 1,
            "-" => -1,
            other => other.parse::<i64>().map_err(|_| err())?,
        };
        Ok(GaussInt::new(re, im))
    }
}

impl Add for GaussInt {
    type Output = GaussInt;
    fn add(self, o: GaussInt) -> GaussInt {
        self.checked_add(o).expect("GaussInt addition overflow")
    }
}

impl Sub for GaussInt {
    type Output = GaussInt;
    fn sub(self, o: GaussInt) -> GaussInt {
        self.checked_sub(o).expect("GaussInt subtraction overflow")
    }
}

impl Neg for GaussInt {
    type Output = GaussInt;
    fn neg(self) -> GaussInt {
        GaussInt::new(-self.re, -self.im)
    }
}

impl Mul for GaussInt {
    type Output = GaussInt;
    fn mul(self, o: GaussInt) -> GaussInt {
        self.checked_mul(o).expect("GaussInt multiplication overflow")
    }
}

impl From<i64> for GaussInt {
    fn from(re: i64) -> Self {
        GaussInt::new(re, 0)
    }
}

/// Residue class mod 4 of a primary element: `1` or `1 + λ³`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BetaClass {
    One,
    OnePlusLambda3,
}

impl BetaClass {
    pub const ALL: [BetaClass; 2] = [BetaClass::One, BetaClass::OnePlusLambda3];

    pub fn of(z: GaussInt) -> Option<BetaClass> {
        if !z.is_primary() {
            return None;
        }
        if z.re.rem_euclid(4) == 1 && z.im.rem_euclid(4) == 0 {
            Some(BetaClass::One)
        } else {
            Some(BetaClass::OnePlusLambda3)
        }
    }

    /// `1` or `1 + λ³ = −1 + 2i`.
    pub fn representative(self) -> GaussInt {
        match self {
            BetaClass::One => GaussInt::ONE,
            BetaClass::OnePlusLambda3 => GaussInt::new(-1, 2),
        }
    }

    /// Representative norm: 1 or 5.
    pub fn norm(self) -> u128 {
        self.representative().norm()
    }

    pub fn mul(self, o: BetaClass) -> BetaClass {
        if self == o {
            BetaClass::One
        } else {
            BetaClass::OnePlusLambda3
        }
    }
}

impl fmt::Display for BetaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BetaClass::One => f.write_str("1"),
            BetaClass::OnePlusLambda3 => f.write_str("1+l3"),
        }
    }
}

impl FromStr for BetaClass {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "1" | "one" => Ok(BetaClass::One),
            "1+l3" | "1+λ3" | "1+λ³" | "-1+2i" => Ok(BetaClass::OnePlusLambda3),
            other => Err(format!("invalid beta class '{other}' (expected 1 or 1+l3)")),
        }
    }
}

/// `z = i^{-unit_exp} · λ^{lambda_exp} · primary_part`, equivalently
/// `i^{unit_exp} · z / λ^{lambda_exp}` is primary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimaryDecomp {
    pub unit_exp: u8,
    pub lambda_exp: u32,
    pub primary_part: GaussInt,
}

impl PrimaryDecomp {
    pub fn reconstruct(&self) -> GaussInt {
        let mut z = self.primary_part.mul_unit(-(self.unit_exp as i64));
        for _ in 0..self.lambda_exp {
            z = z * GaussInt::LAMBDA;
        }
        z
    }
}

/// Divide out `λ` as often as possible.
pub(crate) fn strip_lambda(mut z: GaussInt) -> (GaussInt, u32) {
    let mut k = 0;
    while !z.is_zero() && !z.is_odd() {
        // (a+bi)/(1+i) = ((a+b) + (b-a)i)/2
        let re = (z.re as i128 + z.im as i128) / 2;
        let im = (z.im as i128 - z.re as i128) / 2;
        z = GaussInt::new(re as i64, im as i64);
        k += 1;
    }
    (z, k)
}

/// Exponent `k` with `i^k · z` primary, for odd `z`.
pub(crate) fn primary_unit_exp(z: GaussInt) -> u8 {
    debug_assert!(z.is_odd());
    (0..4u8)
        .find(|&k| z.mul_unit(k as i64).is_primary())
        .expect("odd element has a primary associate")
}

/// Split off units and powers of `λ`, leaving the primary generator.
pub fn primary_associate(z: GaussInt) -> Result<PrimaryDecomp> {
    if z.is_zero() {
        return Err(Error::ZeroInput);
    }
    let (odd, lambda_exp) = strip_lambda(z);
    let unit_exp = primary_unit_exp(odd);
    Ok(PrimaryDecomp { unit_exp, lambda_exp, primary_part: odd.mul_unit(unit_exp as i64) })
}

/// λ-adic digits `a_3, …, a_count` of a primary element:
/// `γ ≡ 1 + Σ_{j=3}^{count} a_j λ^j (mod λ^{count+1})`.
pub fn lambda_digits(gamma: GaussInt, count: usize) -> Result<Vec<u8>> {
    if !gamma.is_primary() {
        return Err(Error::NotPrimary(gamma));
    }
    let mut x = gamma - GaussInt::ONE;
    let mut digits = Vec::with_capacity(count.saturating_sub(2));
    for j in 0..=count {
        let d = if x.is_odd() { 1 } else { 0 };
        if j >= 3 {
            digits.push(d);
        }
        if d == 1 {
            x = x - GaussInt::ONE;
        }
        x = strip_one_lambda(x);
    }
    Ok(digits)
}

fn strip_one_lambda(z: GaussInt) -> GaussInt {
    debug_assert!(!z.is_odd());
    let re = (z.re as i128 + z.im as i128) / 2;
    let im = (z.im as i128 - z.re as i128) / 2;
    GaussInt::new(re as i64, im as i64)
}

#[inline]
fn round_div_i64(x: i64, n: i64) -> (i64, bool) {
    // floor((2x + n) / 2n), tie when x/n is a half-integer
    let num = 2 * x + n;
    let den = 2 * n;
    (num.div_euclid(den), num.rem_euclid(den) == 0)
}

#[inline]
fn round_div_i128(x: i128, n: i128) -> (i128, bool) {
    let num = 2 * x + n;
    let den = 2 * n;
    (num.div_euclid(den), num.rem_euclid(den) == 0)
}

#[inline]
pub(crate) fn reduce_small(z: GaussInt, m: GaussInt) -> GaussInt {
    let n = m.re * m.re + m.im * m.im;
    let xr = z.re * m.re + z.im * m.im;
    let xi = z.im * m.re - z.re * m.im;
    let (qr, tr) = round_div_i64(xr, n);
    let (qi, ti) = round_div_i64(xi, n);
    let r = GaussInt::new(z.re - (qr * m.re - qi * m.im), z.im - (qr * m.im + qi * m.re));
    if !(tr || ti) {
        return r;
    }
    pick_tie(z, m, [qr as i128, qi as i128], tr, ti)
}

fn pick_tie(z: GaussInt, m: GaussInt, q: [i128; 2], tr: bool, ti: bool) -> GaussInt {
    let mut best: Option<GaussInt> = None;
    for dr in 0..=(tr as i128) {
        for di in 0..=(ti as i128) {
            let (qr, qi) = (q[0] - dr, q[1] - di);
            let re = z.re as i128 - (qr * m.re as i128 - qi * m.im as i128);
            let im = z.im as i128 - (qr * m.im as i128 + qi * m.re as i128);
            let r = GaussInt::new(re as i64, im as i64);
            if best.is_none_or(|b| r.sort_key() < b.sort_key()) {
                best = Some(r);
            }
        }
    }
    best.unwrap()
}

/// Canonical residue of `z` modulo `m`: the representative of minimal norm,
/// ties broken by lexicographic `(re, im)`.
pub fn mod_reduce(z: GaussInt, m: GaussInt) -> Result<GaussInt> {
    if m.is_zero() {
        return Err(Error::ZeroModulus);
    }
    if z.re.abs() < SMALL && z.im.abs() < SMALL && m.re.abs() < SMALL && m.im.abs() < SMALL {
        return Ok(reduce_small(z, m));
    }
    let (a, b, c, d) = (z.re as i128, z.im as i128, m.re as i128, m.im as i128);
    let n = c.checked_mul(c).and_then(|x| x.checked_add(d.checked_mul(d)?));
    let n = n.ok_or(Error::Overflow("mod_reduce"))?;
    let xr = a.checked_mul(c).and_then(|x| x.checked_add(b.checked_mul(d)?));
    let xi = b.checked_mul(c).and_then(|x| x.checked_sub(a.checked_mul(d)?));
    let (xr, xi) = xr.zip(xi).ok_or(Error::Overflow("mod_reduce"))?;
    let (qr, tr) = round_div_i128(xr, n);
    let (qi, ti) = round_div_i128(xi, n);
    if tr || ti {
        return Ok(pick_tie(z, m, [qr, qi], tr, ti));
    }
    let re = a - (qr * c - qi * d);
    let im = b - (qr * d + qi * c);
    Ok(GaussInt::new(re as i64, im as i64))
}

/// Product reduced modulo `m`, formed without intermediate overflow for
/// operands already reduced modulo `m`.
pub fn mul_mod(x: GaussInt, y: GaussInt, m: GaussInt) -> Result<GaussInt> {
    match x.checked_mul(y) {
        Some(p) => mod_reduce(p, m),
        None => {
            // operands near 2^63: reduce via i128 directly
            let (a, b, c, d) = (x.re as i128, x.im as i128, y.re as i128, y.im as i128);
            let re = a.checked_mul(c).and_then(|t| t.checked_sub(b.checked_mul(d)?));
            let im = a.checked_mul(d).and_then(|t| t.checked_add(b.checked_mul(c)?));
            let (re, im) = re.zip(im).ok_or(Error::Overflow("mul_mod"))?;
            reduce_wide(re, im, m)
        }
    }
}

fn reduce_wide(re: i128, im: i128, m: GaussInt) -> Result<GaussInt> {
    // quotient by rounding in f64 first, then exact correction through mod_reduce
    let n = m.norm() as f64;
    let zr = (re as f64 * m.re as f64 + im as f64 * m.im as f64) / n;
    let zi = (im as f64 * m.re as f64 - re as f64 * m.im as f64) / n;
    let (qr, qi) = (zr.round() as i128, zi.round() as i128);
    let r_re = re - (qr * m.re as i128 - qi * m.im as i128);
    let r_im = im - (qr * m.im as i128 + qi * m.re as i128);
    let r = GaussInt::new(
        i64::try_from(r_re).map_err(|_| Error::Overflow("mul_mod"))?,
        i64::try_from(r_im).map_err(|_| Error::Overflow("mul_mod"))?,
    );
    mod_reduce(r, m)
}

/// `b^e mod m` as a canonical residue.
pub fn mod_pow(b: GaussInt, mut e: u128, m: GaussInt) -> Result<GaussInt> {
    if m.is_zero() {
        return Err(Error::ZeroModulus);
    }
    let mut base = mod_reduce(b, m)?;
    let mut acc = mod_reduce(GaussInt::ONE, m)?;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, m)?;
        }
        e >>= 1;
        if e > 0 {
            base = mul_mod(base, base, m)?;
        }
    }
    Ok(acc)
}

/// Greatest common divisor, normalised to the first-quadrant associate.
pub fn gcd(a: GaussInt, b: GaussInt) -> GaussInt {
    let (mut x, mut y) = (a, b);
    while !y.is_zero() {
        let r = mod_reduce(x, y).expect("nonzero modulus");
        x = y;
        y = r;
    }
    x.first_quadrant()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(re: i64, im: i64) -> GaussInt {
        GaussInt::new(re, im)
    }

    /// Brute force over the four unit multiples.
    fn primary_unit_oracle(z: GaussInt) -> u8 {
        (0..4u8)
            .find(|&k| {
                let w = z.mul_unit(k as i64) - GaussInt::ONE;
                w.div_exact(g(-2, 2)).is_some()
            })
            .unwrap()
    }

    #[test]
    fn primary_associate_examples() {
        let d = primary_associate(GaussInt::ONE).unwrap();
        assert_eq!((d.unit_exp, d.lambda_exp, d.primary_part), (0, 0, GaussInt::ONE));
        let d = primary_associate(g(2, 1)).unwrap();
        assert_eq!(primary_unit_oracle(g(2, 1)), 1);
        assert_eq!((d.unit_exp, d.lambda_exp, d.primary_part), (1, 0, g(-1, 2)));
        let d = primary_associate(g(3, 0)).unwrap();
        assert_eq!((d.unit_exp, d.lambda_exp, d.primary_part), (2, 0, g(-3, 0)));
        assert!(matches!(primary_associate(GaussInt::ZERO), Err(Error::ZeroInput)));
    }

    #[test]
    fn primary_test_matches_lambda_cubed_divisibility() {
        for re in -20..=20 {
            for im in -20..=20 {
                let z = g(re, im);
                let oracle = (z - GaussInt::ONE).div_exact(g(-2, 2)).is_some();
                assert_eq!(z.is_primary(), oracle, "{z}");
            }
        }
    }

    #[test]
    fn lambda_digit_examples() {
        assert_eq!(lambda_digits(GaussInt::ONE, 6).unwrap(), vec![0, 0, 0, 0]);
        assert_eq!(lambda_digits(g(-1, 2), 6).unwrap(), vec![1, 0, 0, 0]);
        let five = lambda_digits(g(5, 0), 8).unwrap();
        assert_eq!(five[0], 0);
        // (5-1)/λ³ = -1-i, whose λ-adic digits continue the expansion from λ^3
        assert_eq!(g(4, 0).div_exact(g(-2, 2)), Some(g(-1, -1)));
        let tail = lambda_digits_of_any(g(-1, -1), 5);
        assert_eq!(&five[..], &tail[..]);
        assert!(lambda_digits(g(2, 1), 6).is_err());
    }

    // digits d_0.. of an arbitrary element (test helper)
    fn lambda_digits_of_any(mut x: GaussInt, count: usize) -> Vec<u8> {
        let mut out = vec![];
        for _ in 0..=count {
            let d = x.is_odd() as u8;
            out.push(d);
            if d == 1 {
                x = x - GaussInt::ONE;
            }
            x = strip_one_lambda(x);
        }
        out
    }

    #[test]
    fn digits_reconstruct_modulo_lambda_power() {
        for re in -31..=31 {
            for im in -31..=31 {
                let z = g(re, im);
                if !z.is_primary() {
                    continue;
                }
                let digits = lambda_digits(z, 10).unwrap();
                let mut acc = GaussInt::ONE;
                let mut lp = GaussInt::LAMBDA.pow(3);
                for &d in &digits {
                    if d == 1 {
                        acc = acc + lp;
                    }
                    lp = lp * GaussInt::LAMBDA;
                }
                assert!(GaussInt::LAMBDA.pow(11).divides(z - acc), "{z}");
            }
        }
    }

    #[test]
    fn mod_pow_examples() {
        let m = g(-1, 2);
        assert_eq!(mod_pow(g(3, 7), 0, m).unwrap(), GaussInt::ONE);
        assert_eq!(mod_pow(GaussInt::I, 1, m).unwrap(), GaussInt::I);
        // 2+i = (-i)(-1+2i), so 1+i ≡ -1
        assert_eq!(g(2, 1), g(0, -1) * m);
        let r = mod_pow(GaussInt::LAMBDA, 1, m).unwrap();
        assert!(m.divides(r - g(-1, 0)));
        assert!(matches!(mod_pow(m, 3, GaussInt::ZERO), Err(Error::ZeroModulus)));
    }

    #[test]
    fn canonical_residue_is_minimal_norm() {
        let moduli = [g(-1, 2), g(3, 0), g(4, 1), g(2, 2), g(0, 4), g(7, -3)];
        for m in moduli {
            for re in -15..=15 {
                for im in -15..=15 {
                    let z = g(re, im);
                    let r = mod_reduce(z, m).unwrap();
                    assert!(m.divides(z - r));
                    // brute force the coset neighbourhood
                    for a in -3..=3 {
                        for b in -3..=3 {
                            let other = r + g(a, b) * m;
                            assert!(r.sort_key() <= other.sort_key() || other.norm() > r.norm());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn parse_and_display() {
        for s in ["-1+2i", "1+1i", "3", "0-1i", "5-7i"] {
            let z: GaussInt = s.parse().unwrap();
            let back: GaussInt = z.to_string().parse().unwrap();
            assert_eq!(z, back);
        }
        assert_eq!("1+i".parse::<GaussInt>().unwrap(), g(1, 1));
        assert_eq!("-i".parse::<GaussInt>().unwrap(), g(0, -1));
        assert_eq!("2i".parse::<GaussInt>().unwrap(), g(0, 2));
        assert_eq!("-3".parse::<GaussInt>().unwrap(), g(-3, 0));
        assert!("1+2j".parse::<GaussInt>().is_err());
        assert!("".parse::<GaussInt>().is_err());
    }

    #[test]
    fn beta_class_group_law() {
        let l3 = BetaClass::OnePlusLambda3.representative();
        let sq = l3 * l3;
        assert!(g(4, 0).divides(sq - GaussInt::ONE));
        assert_eq!(BetaClass::of(g(5, 0)), Some(BetaClass::One));
        assert_eq!(BetaClass::of(g(-1, 2)), Some(BetaClass::OnePlusLambda3));
        assert_eq!(BetaClass::of(g(-3, 0)), Some(BetaClass::One));
        assert_eq!(BetaClass::of(g(2, 1)), None);
    }

    fn primary_strategy() -> impl Strategy<Value = GaussInt> {
        (-500i64..500, -500i64..500).prop_map(|(a, b)| {
            let z = g(2 * a + 1, 2 * b);
            z.mul_unit(primary_unit_exp(z) as i64)
        })
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(a in -100_000i64..100_000, b in -100_000i64..100_000,
                                  c in -100_000i64..100_000, d in -100_000i64..100_000) {
            let (x, y) = (g(a, b), g(c, d));
            prop_assert_eq!((x * y).norm(), x.norm() * y.norm());
            prop_assert_eq!(x.conj().conj(), x);
        }

        #[test]
        fn primary_associate_reconstructs(a in -10_000i64..10_000, b in -10_000i64..10_000) {
            prop_assume!(a != 0 || b != 0);
            let z = g(a, b);
            let d = primary_associate(z).unwrap();
            prop_assert_eq!(d.reconstruct(), z);
            prop_assert!(d.primary_part.is_primary());
            let again = primary_associate(d.primary_part).unwrap();
            prop_assert_eq!(again.unit_exp, 0);
        }

        #[test]
        fn class_is_multiplicative(x in primary_strategy(), y in primary_strategy()) {
            let cx = x.class().unwrap();
            let cy = y.class().unwrap();
            prop_assert_eq!((x * y).class().unwrap(), cx.mul(cy));
        }

        #[test]
        fn gcd_divides_both(a in -5000i64..5000, b in -5000i64..5000, c in -5000i64..5000, d in -5000i64..5000) {
            let (x, y) = (g(a, b), g(c, d));
            prop_assume!(!x.is_zero() || !y.is_zero());
            let h = gcd(x, y);
            prop_assert!(h.divides(x) && h.divides(y));
        }
    }
}
