use num_complex::Complex64;

use super::series::DirichletSeriesTrunc;
use crate::analytic::gchar;
use crate::error::{Error, Result};
use crate::gauss_sums::ComplexVal;
use crate::gaussint::{factor, BetaClass, GaussInt};
use crate::symbols::quartic_symbol;

/// `1` iff the primary class has norm `≡ 5 (mod 8)`.
pub(crate) fn class_bit(b: BetaClass) -> u8 {
    u8::from(b == BetaClass::OnePlusLambda3)
}

/// `C(x, y) mod 2` from the classes of `x` and `y`.
pub(crate) fn c_bit(x: BetaClass, y: BetaClass) -> u8 {
    class_bit(x) & class_bit(y)
}

pub(crate) fn class_of(z: GaussInt) -> Result<BetaClass> {
    z.class().ok_or(Error::NotPrimary(z))
}

/// Prime factors of a squarefree primary element, ascending.
pub(crate) fn squarefree_primes(alpha: GaussInt) -> Result<Vec<GaussInt>> {
    let f = factor(alpha)?;
    if f.unit_exp != 0 || f.lambda_exp != 0 {
        return Err(Error::NotPrimary(alpha));
    }
    if !f.is_squarefree() {
        return Err(Error::NotSquarefree(alpha));
    }
    Ok(f.factors.into_iter().map(|(p, _)| p).collect())
}

/// Every divisor `d` of `α` as `(d, prime factors of d)`.
pub(crate) fn divisors(primes: &[GaussInt]) -> Vec<(GaussInt, Vec<GaussInt>)> {
    let mut out = vec![(GaussInt::ONE, vec![])];
    for &p in primes {
        let extra: Vec<_> = out
            .iter()
            .map(|(d, ps)| {
                let mut ps = ps.clone();
                ps.push(p);
                (*d * p, ps)
            })
            .collect();
        out.extend(extra);
    }
    out
}

/// Exponent `k` of `(−1/d)₄ = i^k`.
pub(crate) fn minus_one_exp(d: GaussInt) -> Result<u8> {
    Ok(quartic_symbol(-GaussInt::ONE, d)?.exponent().expect("unit symbol"))
}

/// One monomial `i^unit (m̄/|m|)^{4ℓ} N(m)^{3−4s}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaTerm {
    pub m: GaussInt,
    pub unit: u8,
}

/// `Δ_β(s, ℓ; α) = Π_{π | α} (1 − (−1)^{C(π,β)+C(π,πβ)} N(π)^{3−4s} (−1/π)₄ (π̄/|π|)^{4ℓ})`,
/// stored as its expanded sum over `m | α`.
#[derive(Clone, Debug)]
pub struct DeltaPoly {
    pub beta: BetaClass,
    pub ell: i64,
    pub alpha: GaussInt,
    pub terms: Vec<DeltaTerm>,
}

fn factor_unit(pi: GaussInt, beta: BetaClass) -> Result<u8> {
    let cp = class_of(pi)?;
    let sign = c_bit(cp, beta) + c_bit(cp, cp.mul(beta));
    // leading minus, the reciprocity sign and (−1/π)₄
    Ok((2 + 2 * sign + minus_one_exp(pi)?) % 4)
}

impl DeltaPoly {
    /// Sum form: the coefficient of `m` is `μ(m)` times the product of the
    /// per-prime signs, with `(−1/m)₄` taken as a single symbol.
    pub fn new(beta: BetaClass, ell: i64, alpha: GaussInt) -> Result<Self> {
        let primes = squarefree_primes(alpha)?;
        let mut terms = Vec::new();
        for (m, ps) in divisors(&primes) {
            let mut unit = 2 * (ps.len() as u32 % 2);
            for &p in &ps {
                let cp = class_of(p)?;
                unit += 2 * u32::from(c_bit(cp, beta) + c_bit(cp, cp.mul(beta)));
            }
            unit += minus_one_exp(m)? as u32;
            terms.push(DeltaTerm { m, unit: (unit % 4) as u8 });
        }
        terms.sort_by_key(|t| t.m.sort_key());
        Ok(DeltaPoly { beta, ell, alpha, terms })
    }

    /// Expansion of the product of binomials, one prime at a time.
    pub fn product_expansion(beta: BetaClass, alpha: GaussInt) -> Result<Vec<DeltaTerm>> {
        let mut terms = vec![DeltaTerm { m: GaussInt::ONE, unit: 0 }];
        for p in squarefree_primes(alpha)? {
            let u = factor_unit(p, beta)?;
            let extra: Vec<_> = terms.iter().map(|t| DeltaTerm { m: t.m * p, unit: (t.unit + u) % 4 }).collect();
            terms.extend(extra);
        }
        terms.sort_by_key(|t| t.m.sort_key());
        Ok(terms)
    }

    /// The sum form and the product form agree term by term.
    pub fn symbolic_check(&self) -> Result<bool> {
        Ok(Self::product_expansion(self.beta, self.alpha)? == self.terms)
    }

    /// `Σ_m q_m N(m)³ (N(m)⁴)^{−s}` as a series.
    pub fn to_series(&self, n_max: u64) -> Result<DirichletSeriesTrunc> {
        let mut s = DirichletSeriesTrunc::zero(n_max);
        for t in &self.terms {
            let n = t.m.norm();
            let Some(n4) = n.checked_pow(4).filter(|&v| v <= n_max as u128) else { continue };
            let c = gchar(t.m, 4 * self.ell)?.mul_exact_unit(GaussInt::unit(t.unit as i64).to_complex()).scale((n as f64).powi(3));
            s.add_at(n4 as u64, c);
        }
        Ok(s)
    }

    /// Value at a real point `s`.
    pub fn eval_real(&self, s: f64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let n = t.m.norm() as f64;
            let q = GaussInt::unit(t.unit as i64).to_complex() * gchar(t.m, 4 * self.ell)?.value;
            acc += q * n.powf(3.0 - 4.0 * s);
        }
        Ok(acc)
    }
}

/// `ComplexVal` helper for exact unit powers `i^k`.
pub(crate) fn unit_val(k: u32) -> ComplexVal {
    ComplexVal::exact(GaussInt::unit(k as i64).to_complex())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: i64, im: i64) -> GaussInt {
        GaussInt::new(re, im)
    }

    #[test]
    fn product_equals_sum_symbolically() {
        for alpha in crate::sieve::primary_factored_upto(2000, true) {
            for beta in BetaClass::ALL {
                let d = DeltaPoly::new(beta, 1, alpha.c).unwrap();
                assert!(d.symbolic_check().unwrap(), "{}", alpha.c);
                assert_eq!(d.terms.len(), 1 << alpha.factors.len());
            }
        }
    }

    #[test]
    fn single_prime_value() {
        // α = −3 is class One, so Δ = 1 − (−1/−3)₄ · 9^{3−4s}
        let d = DeltaPoly::new(BetaClass::One, 0, g(-3, 0)).unwrap();
        let v = d.eval_real(1.0).unwrap();
        let pi = g(-3, 0);
        let u = u32::from(minus_one_exp(pi).unwrap());
        let want = Complex64::new(1.0, 0.0) - GaussInt::unit(u as i64).to_complex() * 9f64.powf(-1.0);
        assert!((v - want).norm() < 1e-14);
        let s = d.to_series(10_000).unwrap();
        assert_eq!(s.coeff(1).value, Complex64::new(1.0, 0.0));
        assert!((s.coeff(6561).value + GaussInt::unit(u as i64).to_complex() * 729.0).norm() < 1e-9);
        assert!(DeltaPoly::new(BetaClass::One, 0, g(-3, 0) * g(-3, 0)).is_err());
    }

    #[test]
    fn divisor_enumeration() {
        let ps = squarefree_primes(g(-1, 2) * g(3, 2) * g(-3, 0)).unwrap();
        let ds = divisors(&ps);
        assert_eq!(ds.len(), 8);
        assert!(ds.iter().all(|(d, _)| d.is_primary()));
    }
}
