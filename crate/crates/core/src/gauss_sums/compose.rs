//! `g₄(ν, c)` for arbitrary odd `c` from prime values.
//!
//! Non-primary moduli are moved onto their primary associate
//! (`g₄(ν, u·c₀) = g₄(ν·ū, c₀)`). Coprime prime-power factors combine by
//! twisted multiplicativity, a coprime part of `ν` comes out as a conjugated
//! symbol, and prime powers are read off the local table.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_complex::Complex64;
use rayon::prelude::*;

use super::cache::{GaussSumCache, GaussSumRecord};
use super::complex::ComplexVal;
use super::direct::{g4_direct_capped, DEFAULT_DIRECT_CAP};
use super::fast::g4_prime_fast_pair;
use crate::error::{Error, Result};
use crate::gaussint::{factor, is_prime_u64, primary_associate, Factorization, GaussInt};
use crate::reduce::Precision;
use crate::symbols::{quartic_symbol, SymbolValue};

/// Where prime values may come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PrimeMode {
    /// Compute missing values with the fast evaluator.
    #[default]
    Compute,
    /// Use stored values only; fall back to direct sums below the direct cap.
    CacheOnly,
}

/// Degree of a primary prime: 1 for split primes, 2 for inert ones.
pub fn prime_degree(pi: GaussInt) -> Result<u8> {
    let n = pi.norm();
    if n <= u64::MAX as u128 && is_prime_u64(n as u64) {
        if n == 2 {
            return Err(Error::RamifiedPrime(pi));
        }
        return Ok(1);
    }
    if pi.im == 0 && pi.re < 0 && (-pi.re) % 4 == 3 && is_prime_u64((-pi.re) as u64) {
        return Ok(2);
    }
    Err(Error::NotPrime(pi))
}

/// Prime-value provider and composer for `g₄(ν, c)`.
pub struct GaussSumEngine {
    cache: Option<Arc<GaussSumCache>>,
    memo: RwLock<HashMap<GaussInt, ComplexVal>>,
    mode: PrimeMode,
    precision: Precision,
    direct_cap: u128,
}

impl Default for GaussSumEngine {
    fn default() -> Self {
        Self::new()
    }
}

impl GaussSumEngine {
    pub fn new() -> Self {
        GaussSumEngine {
            cache: None,
            memo: RwLock::new(HashMap::new()),
            mode: PrimeMode::Compute,
            precision: Precision::Double,
            direct_cap: DEFAULT_DIRECT_CAP,
        }
    }

    pub fn with_cache(cache: Arc<GaussSumCache>, mode: PrimeMode) -> Self {
        GaussSumEngine { cache: Some(cache), mode, ..Self::new() }
    }

    pub fn precision(mut self, precision: Precision) -> Self {
        self.precision = precision;
        self
    }

    pub fn direct_cap(mut self, cap: u128) -> Self {
        self.direct_cap = cap;
        self
    }

    pub fn cache(&self) -> Option<&Arc<GaussSumCache>> {
        self.cache.as_ref()
    }

    fn lookup(&self, pi: GaussInt) -> Option<ComplexVal> {
        if let Some(v) = self.memo.read().unwrap().get(&pi) {
            return Some(*v);
        }
        let rec = self.cache.as_ref()?.get(pi)?;
        let v = rec.g4_normalized.scale((pi.norm() as f64).sqrt());
        self.memo.write().unwrap().insert(pi, v);
        Some(v)
    }

    fn store(&self, pi: GaussInt, v: ComplexVal) -> Result<()> {
        self.memo.write().unwrap().insert(pi, v);
        if let Some(cache) = &self.cache {
            let rec = GaussSumRecord::from_value(pi, v)?;
            if rec.checks == GaussSumRecord::ALL_CHECKS {
                cache.put(&rec)?;
            } else {
                log::warn!("identity checks failed for g4({pi}); value not persisted");
            }
        }
        Ok(())
    }

    fn compute_split(&self, pi: GaussInt) -> Result<(ComplexVal, ComplexVal)> {
        match self.mode {
            PrimeMode::Compute => g4_prime_fast_pair(pi, self.precision),
            PrimeMode::CacheOnly => {
                if pi.norm() > self.direct_cap {
                    return Err(Error::PrimeValueUnavailable(pi));
                }
                let a = g4_direct_capped(GaussInt::ONE, pi, self.direct_cap)?;
                let b = g4_direct_capped(GaussInt::ONE, pi.conj(), self.direct_cap)?;
                Ok((a, b))
            }
        }
    }

    /// `g₄(π) = g₄(1, π)` for a primary prime.
    pub fn g4_prime(&self, pi: GaussInt) -> Result<ComplexVal> {
        if !pi.is_primary() {
            return Err(Error::NotPrimary(pi));
        }
        if prime_degree(pi)? == 2 {
            return Ok(ComplexVal::real(super::checks::inert_g4((-pi.re) as u64)));
        }
        if let Some(v) = self.lookup(pi) {
            return Ok(v);
        }
        let (a, b) = self.compute_split(pi)?;
        self.store(pi, a)?;
        self.store(pi.conj(), b)?;
        Ok(a)
    }

    /// `g₂(π) = g₂(1, π)`: `(−1/π)₄ √p` at split primes, `p` at inert ones.
    pub fn g2_prime(&self, pi: GaussInt) -> Result<ComplexVal> {
        if !pi.is_primary() {
            return Err(Error::NotPrimary(pi));
        }
        match prime_degree(pi)? {
            2 => Ok(ComplexVal::real(-pi.re as f64)),
            _ => {
                let s = quartic_symbol(GaussInt::new(-1, 0), pi)?.to_real();
                Ok(ComplexVal::rounded(Complex64::new(s * (pi.norm() as f64).sqrt(), 0.0)))
            }
        }
    }

    /// Fill the prime table for many primes at once; conjugate pairs share one pass.
    pub fn prefetch(&self, primes: &[GaussInt]) -> Result<()> {
        let mut todo: Vec<GaussInt> = Vec::new();
        {
            let memo = self.memo.read().unwrap();
            for &pi in primes {
                if !pi.is_primary() || prime_degree(pi)? != 1 || memo.contains_key(&pi) {
                    continue;
                }
                let rep = if pi.im > 0 { pi } else { pi.conj() };
                todo.push(rep);
            }
        }
        todo.sort();
        todo.dedup();
        let todo: Vec<GaussInt> = todo.into_iter().filter(|&pi| self.lookup(pi).is_none() || self.lookup(pi.conj()).is_none()).collect();
        let values: Vec<Result<(ComplexVal, ComplexVal)>> = todo.par_iter().map(|&pi| self.compute_split(pi)).collect();
        for (pi, v) in todo.into_iter().zip(values) {
            let (a, b) = v?;
            self.store(pi, a)?;
            self.store(pi.conj(), b)?;
        }
        Ok(())
    }

    /// `g₄(ν, c)` for odd `c`.
    pub fn g4(&self, nu: GaussInt, c: GaussInt) -> Result<ComplexVal> {
        if c.is_zero() {
            return Err(Error::ZeroModulus);
        }
        if !c.is_odd() {
            return Err(Error::EvenModulus(c));
        }
        let d = primary_associate(c)?;
        let f = factor(d.primary_part)?;
        self.g4_compose(nu.mul_unit(d.unit_exp as i64), &f)
    }

    /// `g₄(ν, c)` for primary `c` given by its factorization.
    pub fn g4_compose(&self, nu: GaussInt, c_fact: &Factorization) -> Result<ComplexVal> {
        if c_fact.lambda_exp > 0 {
            return Err(Error::EvenModulus(c_fact.reconstruct().unwrap_or(GaussInt::ZERO)));
        }
        if c_fact.unit_exp != 0 {
            let c = c_fact.reconstruct().ok_or(Error::Overflow("g4_compose"))?;
            return Err(Error::NotPrimary(c));
        }
        let powers: Vec<GaussInt> = c_fact
            .factors
            .iter()
            .map(|&(p, e)| p.checked_pow(e).ok_or(Error::Overflow("g4_compose")))
            .collect::<Result<_>>()?;
        let mut locals = Vec::with_capacity(powers.len());
        for &(p, e) in &c_fact.factors {
            let v = self.local(nu, p, e)?;
            if v.is_exact_zero() {
                return Ok(ComplexVal::ZERO);
            }
            locals.push(v);
        }
        let mut twist = SymbolValue::ONE;
        for j in 0..powers.len() {
            for k in j + 1..powers.len() {
                twist = twist * quartic_symbol(powers[j], powers[k])? * quartic_symbol(powers[k], powers[j])?;
            }
        }
        let mut acc = ComplexVal::exact(twist.to_complex());
        for v in locals {
            acc = acc * v;
        }
        Ok(acc)
    }

    /// `g₄(ν, π^ℓ)` for a primary prime `π`.
    pub fn local(&self, nu: GaussInt, pi: GaussInt, ell: u32) -> Result<ComplexVal> {
        if ell == 0 {
            return Ok(ComplexVal::ONE);
        }
        let (k, unit_part) = split_off(nu, pi, ell);
        let shift = match unit_part {
            Some(r) => quartic_symbol(r, pi)?.pow(ell as u64).conj(),
            None => SymbolValue::ONE,
        };
        let n = pi.norm() as f64;
        let value = match k {
            Some(k) if ell == k + 1 => {
                let nk = n.powi(k as i32);
                match k % 4 {
                    0 => self.g4_prime(pi)?.scale(nk),
                    1 => self.g2_prime(pi)?.scale(nk),
                    2 => {
                        let m1 = quartic_symbol(GaussInt::new(-1, 0), pi)?.to_complex();
                        self.g4_prime(pi)?.conj().mul_exact_unit(m1).scale(nk)
                    }
                    _ => ComplexVal::real(-nk),
                }
            }
            Some(k) if k < ell => ComplexVal::ZERO,
            _ if ell % 4 == 0 => ComplexVal::real(n.powi(ell as i32) - n.powi(ell as i32 - 1)),
            _ => ComplexVal::ZERO,
        };
        if value.is_exact_zero() {
            return Ok(value);
        }
        Ok(value.mul_exact_unit(shift.to_complex()))
    }

    /// `g̃₄(ν, c) = N(c)^{−1/2} g₄(ν, c)`.
    pub fn g4_normalized(&self, nu: GaussInt, c: GaussInt) -> Result<ComplexVal> {
        let v = self.g4(nu, c)?;
        Ok(v.scale(1.0 / (c.norm() as f64).sqrt()))
    }

    /// `g̃₄(π)` for a primary prime.
    pub fn g4_tilde_prime(&self, pi: GaussInt) -> Result<ComplexVal> {
        Ok(self.g4_prime(pi)?.scale(1.0 / (pi.norm() as f64).sqrt()))
    }
}

/// Write `ν = π^k ν′` with `π ∤ ν′`, capping `k` at `ell`; `k = None` means
/// `π^ell | ν`, where only `ν mod π^ell = 0` matters.
fn split_off(nu: GaussInt, pi: GaussInt, ell: u32) -> (Option<u32>, Option<GaussInt>) {
    let mut v = nu;
    let mut k = 0;
    while k < ell {
        if v.is_zero() {
            return (None, None);
        }
        match v.div_exact(pi) {
            Some(q) => {
                v = q;
                k += 1;
            }
            None => return (Some(k), Some(v)),
        }
    }
    (None, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss_sums::direct::g4_direct;
    use crate::gaussint::gcd;
    use proptest::prelude::*;

    fn g(re: i64, im: i64) -> GaussInt {
        GaussInt::new(re, im)
    }

    fn check(engine: &GaussSumEngine, nu: GaussInt, c: GaussInt) {
        let a = engine.g4(nu, c).unwrap();
        let b = g4_direct(nu, c).unwrap();
        let scale = (c.norm() as f64).sqrt();
        assert!((a.value - b.value).norm() <= a.err + b.err + 1e-9 * scale, "g4({nu},{c}): {:?} vs {:?}", a, b);
    }

    #[test]
    fn prime_power_table_against_direct() {
        let engine = GaussSumEngine::new();
        for pi in [g(-1, 2), g(-1, -2), g(3, 2), g(-3, 0), g(1, 4)] {
            for ell in 1..=3u32 {
                let c = pi.pow(ell);
                if c.norm() > 30_000 {
                    continue;
                }
                for k in 0..=4u32 {
                    for r in [GaussInt::ONE, g(2, 1), g(0, 1), g(-1, 0)] {
                        if gcd(r, pi) != GaussInt::ONE {
                            continue;
                        }
                        let nu = r * pi.pow(k);
                        check(&engine, nu, c);
                    }
                }
                check(&engine, GaussInt::ZERO, c);
            }
        }
    }

    #[test]
    fn fourth_power_modulus_branch() {
        let engine = GaussSumEngine::new();
        let pi = g(-1, 2);
        let c = pi.pow(4);
        check(&engine, GaussInt::ZERO, c);
        check(&engine, pi.pow(4), c);
        check(&engine, pi.pow(3), c);
        check(&engine, GaussInt::ONE, c);
    }

    #[test]
    fn composite_examples() {
        let engine = GaussSumEngine::new();
        // norm 45
        check(&engine, GaussInt::ONE, g(-1, 2) * g(-3, 0));
        check(&engine, g(2, 3), g(-1, 2) * g(-1, -2) * g(3, 2));
        check(&engine, g(-1, 2), g(-1, 2) * g(3, 2));
        // non-primary modulus
        check(&engine, g(4, 1), g(2, 1) * g(7, 0));
        check(&engine, GaussInt::ONE, GaussInt::I);
        let z = engine.g4(g(-1, 2), g(-1, 2) * g(3, 2)).unwrap();
        assert!(z.is_exact_zero());
    }

    #[test]
    fn squareroot_cancellation_small() {
        let engine = GaussSumEngine::new();
        for re in -40..=40 {
            for im in -40..=40 {
                let c = g(re, im);
                if !c.is_primary() || c.norm() > 1600 {
                    continue;
                }
                let v = engine.g4(GaussInt::ONE, c).unwrap();
                let sqf = factor(c).unwrap().is_squarefree();
                let target = if sqf { (c.norm() as f64).sqrt() } else { 0.0 };
                assert!((v.norm() - target).abs() <= v.err + 1e-10 * target.max(1.0), "{c}");
            }
        }
    }

    fn primary(a: i64, b: i64) -> GaussInt {
        let z = g(2 * a + 1, 2 * b);
        z.mul_unit(crate::gaussint::primary_associate(z).unwrap().unit_exp as i64)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn composed_equals_direct(a in -20i64..20, b in -20i64..20, x in -10i64..10, y in -10i64..10) {
            let c = primary(a, b);
            prop_assume!(c.norm() <= 5000);
            let engine = GaussSumEngine::new();
            check(&engine, g(x, y), c);
        }
    }
}
