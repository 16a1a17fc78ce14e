//! The identity battery: reciprocity, supplementary laws, the prime
//! evaluations, square-root cancellation, moment reduction and twisted
//! multiplicativity, each checked over a whole range.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::gauss_sums::checks::{inert_g4, square_target};
use crate::gauss_sums::moments::direct_power;
use crate::gauss_sums::{g2_direct, g4_direct, moment_reduce, ComplexVal, GaussSumEngine};
use crate::gaussint::{factor, gcd, GaussInt};
use crate::sieve::{primary_elements_upto, primary_primes_upto, rational_primes_upto};
use crate::symbols::{c_parity, quartic_symbol, quartic_symbol_by_factoring, supplement_exponents, SymbolValue};

/// Outcome of one named check over a range of inputs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    /// Worst residual, normalized as the check defines.
    pub max_error: f64,
    pub first_failure: Option<String>,
}

impl CheckReport {
    pub fn pass(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }

    fn collect(name: &str, outcomes: impl IntoIterator<Item = (f64, bool, String)>) -> Self {
        let mut r = CheckReport { name: name.to_string(), cases: 0, failures: 0, max_error: 0.0, first_failure: None };
        for (err, ok, what) in outcomes {
            r.cases += 1;
            if err.is_finite() {
                r.max_error = r.max_error.max(err);
            }
            if !ok {
                r.failures += 1;
                r.first_failure.get_or_insert(what);
            }
        }
        r
    }
}

fn nonunit_primaries(max_norm: u128) -> Vec<GaussInt> {
    primary_elements_upto(max_norm).into_iter().filter(|z| *z != GaussInt::ONE).collect()
}

/// `(α/γ)₄ = (−1)^{C(α,γ)} (γ/α)₄` for every coprime pair of primary
/// non-units with norms up to `max_norm`.
pub fn check_reciprocity(max_norm: u128) -> Result<CheckReport> {
    let elems = nonunit_primaries(max_norm);
    let rows: Vec<Vec<(f64, bool, String)>> = elems
        .par_iter()
        .map(|&a| {
            let mut out = Vec::new();
            for &g in &elems {
                if !gcd(a, g).is_unit() {
                    continue;
                }
                let lhs = quartic_symbol(a, g)?;
                let rhs = quartic_symbol(g, a)? * SymbolValue::unit(2 * c_parity(a, g)? as i64);
                let ok = lhs == rhs;
                out.push((if ok { 0.0 } else { 1.0 }, ok, format!("α={a} γ={g}")));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(CheckReport::collect("reciprocity", rows.into_iter().flatten()))
}

/// `(λ/γ)₄` and `(i/γ)₄` from the digit formulas against the Euler criterion
/// over the factorization of `γ`.
pub fn check_supplements(max_norm: u128) -> Result<CheckReport> {
    let elems = nonunit_primaries(max_norm);
    let rows: Vec<(f64, bool, String)> = elems
        .par_iter()
        .map(|&g| {
            let (l, i) = supplement_exponents(g);
            let el = quartic_symbol_by_factoring(GaussInt::LAMBDA, g)?;
            let ei = quartic_symbol_by_factoring(GaussInt::I, g)?;
            let ok = el == SymbolValue::Unit(l) && ei == SymbolValue::Unit(i);
            Ok((if ok { 0.0 } else { 1.0 }, ok, format!("γ={g}")))
        })
        .collect::<Result<_>>()?;
    Ok(CheckReport::collect("supplements", rows))
}

/// Primary degree-one primes with `N(π) ≤ p_max` and the inert `−p`, `p ≤ p_max`.
pub fn primes_by_degree(p_max: u64) -> (Vec<GaussInt>, Vec<GaussInt>) {
    let split = primary_primes_upto(p_max as u128, None).filter(|p| p.im != 0).collect();
    let inert = rational_primes_upto(p_max).into_iter().filter(|p| p % 4 == 3).map(|p| GaussInt::new(-(p as i64), 0)).collect();
    (split, inert)
}

/// The prime evaluations for degree-one primes `N(π) ≤ p_max`:
/// `g⁴ = π³π̄` (`10⁻⁶p²`), `g² = −√p π` (`10⁻⁶p`), `|g| = √p` (`10⁻⁶√p`),
/// `g₂ = (−1/π)₄√p` (`10⁻⁶√p`); inert `−p`: `g₄ = (−1)^{(p+1)/4} p`, `g₂ = p`.
/// Residuals are reported relative to the tolerance scale.
pub fn check_prime_evaluations(engine: &GaussSumEngine, p_max: u64) -> Result<Vec<CheckReport>> {
    let (split, inert) = primes_by_degree(p_max);
    engine.prefetch(&split)?;
    let rows: Vec<[(f64, bool, String); 4]> = split
        .par_iter()
        .map(|&pi| {
            let p = pi.norm() as f64;
            let z = pi.to_complex();
            let g = engine.g4_prime(pi)?.value;
            let g2 = engine.g2_prime(pi)?.value;
            let m1 = quartic_symbol(-GaussInt::ONE, pi)?.to_real();
            let e4 = (g * g * g * g - z * z * z * z.conj()).norm() / (p * p);
            let e2 = (g * g - square_target(pi)).norm() / p;
            let em = (g.norm() - p.sqrt()).abs() / p.sqrt();
            let eq = (g2 - Complex64::new(m1 * p.sqrt(), 0.0)).norm() / p.sqrt();
            let tag = format!("π={pi}");
            Ok([(e4, e4 <= 1e-6, tag.clone()), (e2, e2 <= 1e-6, tag.clone()), (em, em <= 1e-6, tag.clone()), (eq, eq <= 1e-6, tag)])
        })
        .collect::<Result<_>>()?;
    let column = |j: usize, name: &str| CheckReport::collect(name, rows.iter().map(|r| r[j].clone()));
    let mut out = vec![column(0, "fourthpower"), column(1, "squarepower"), column(2, "sqrootcancel"), column(3, "quad2")];
    let inert_rows: Vec<(f64, bool, String)> = inert
        .iter()
        .map(|&q| {
            let p = -q.re;
            let g4 = engine.g4_prime(q)?.value;
            let g2 = engine.g2_prime(q)?.value;
            let want = inert_g4(p as u64);
            let err = ((g4.re - want).abs() + g4.im.abs()).max((g2.re - p as f64).abs() + g2.im.abs()) / p as f64;
            Ok((err, err <= 1e-9, format!("π={q}")))
        })
        .collect::<Result<_>>()?;
    out.push(CheckReport::collect("degree2", inert_rows));
    Ok(out)
}

/// `|g₄(1, c)| = μ²(c)√N(c)` for every primary `c` with `N(c) ≤ max_norm`.
pub fn check_sqrootcancel(engine: &GaussSumEngine, max_norm: u128) -> Result<CheckReport> {
    let elems = primary_elements_upto(max_norm);
    let primes: Vec<GaussInt> = elems.iter().copied().filter(|&c| crate::gaussint::is_gaussian_prime(c)).collect();
    engine.prefetch(&primes)?;
    let rows: Vec<(f64, bool, String)> = elems
        .par_iter()
        .map(|&c| {
            let f = factor(c)?;
            let v = engine.g4_compose(GaussInt::ONE, &f)?;
            let n = (c.norm() as f64).sqrt();
            let want = if f.is_squarefree() { n } else { 0.0 };
            let err = (v.norm() - want).abs() / n;
            Ok((err, err <= 1e-9 + v.err / n, format!("c={c}")))
        })
        .collect::<Result<_>>()?;
    Ok(CheckReport::collect("sqrootcancel_composite", rows))
}

/// `g̃₄(π)^k` by reduction against repeated multiplication for `0 < |k| ≤ k_max`
/// and every degree-one prime with `N(π) ≤ max_norm`; relative error `≤ tol`.
pub fn check_momentcases(engine: &GaussSumEngine, max_norm: u64, k_max: i64, tol: f64) -> Result<CheckReport> {
    let (split, _) = primes_by_degree(max_norm);
    engine.prefetch(&split)?;
    let rows: Vec<Vec<(f64, bool, String)>> = split
        .par_iter()
        .map(|&pi| {
            let g = engine.g4_tilde_prime(pi)?;
            let mut out = Vec::new();
            for k in (-k_max..=k_max).filter(|&k| k != 0) {
                let a = moment_reduce(pi, k, g)?;
                let b = direct_power(g, k);
                let err = (a.value - b.value).norm();
                out.push((err, err <= tol, format!("π={pi} k={k}")));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(CheckReport::collect("momentcases", rows.into_iter().flatten()))
}

/// Random coprime primary non-unit pairs `(c, c′)` with `N(cc′) ≤ max_norm`
/// and shifts `ν`.
pub fn random_coprime_pairs(count: usize, max_norm: u128, seed: u64) -> Vec<(GaussInt, GaussInt, GaussInt)> {
    let elems = nonunit_primaries(max_norm / 5);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let c = elems[rng.gen_range(0..elems.len())];
        let room = max_norm / c.norm();
        let fits: Vec<GaussInt> = elems.iter().copied().filter(|d| d.norm() <= room).collect();
        if fits.is_empty() {
            continue;
        }
        let d = fits[rng.gen_range(0..fits.len())];
        if !gcd(c, d).is_unit() {
            continue;
        }
        let nu = loop {
            let z = GaussInt::new(rng.gen_range(-12..=12), rng.gen_range(-12..=12));
            if !z.is_zero() {
                break z;
            }
        };
        out.push((c, d, nu));
    }
    out
}

/// Twisted multiplicativity against direct sums, relative to `max(|lhs|, √N(cc′))`:
/// `g₄(ν, cc′) = (c/c′)₄(c′/c)₄ g₄(ν, c) g₄(ν, c′)` and
/// `g₄(ν, cc′) = (−1)^{C(c′,c)} g₄(ν c′², c) g₄(ν, c′)`.
pub fn check_twisted_multiplicativity(count: usize, max_norm: u128, seed: u64, tol: f64) -> Result<Vec<CheckReport>> {
    let pairs = random_coprime_pairs(count, max_norm, seed);
    let rows: Vec<[(f64, bool, String); 2]> = pairs
        .par_iter()
        .map(|&(c, d, nu)| {
            let whole = g4_direct(nu, c * d)?;
            let scale = whole.norm().max(((c * d).norm() as f64).sqrt());
            let twist = quartic_symbol(c, d)? * quartic_symbol(d, c)?;
            let rel2 = (g4_direct(nu, c)? * g4_direct(nu, d)?).mul_exact_unit(twist.to_complex());
            let sign = if c_parity(d, c)? == 1 { -1.0 } else { 1.0 };
            let rel3 = (g4_direct(nu * d * d, c)? * g4_direct(nu, d)?).scale(sign);
            let err = |v: ComplexVal| (v.value - whole.value).norm() / scale;
            let tag = format!("ν={nu} c={c} c'={d}");
            let (e2, e3) = (err(rel2), err(rel3));
            Ok([(e2, e2 <= tol, tag.clone()), (e3, e3 <= tol, tag)])
        })
        .collect::<Result<_>>()?;
    Ok(vec![
        CheckReport::collect("rel2", rows.iter().map(|r| r[0].clone())),
        CheckReport::collect("rel3", rows.iter().map(|r| r[1].clone())),
    ])
}

/// `g₂(1, π) = (−1/π)₄√p` by direct summation for degree-one `N(π) ≤ max_norm`.
pub fn check_quad2_direct(max_norm: u64) -> Result<CheckReport> {
    let (split, _) = primes_by_degree(max_norm);
    let rows: Vec<(f64, bool, String)> = split
        .par_iter()
        .map(|&pi| {
            let p = pi.norm() as f64;
            let m1 = quartic_symbol(-GaussInt::ONE, pi)?.to_real();
            let v = g2_direct(GaussInt::ONE, pi)?;
            let err = (v.value - Complex64::new(m1 * p.sqrt(), 0.0)).norm() / p.sqrt();
            Ok((err, err <= 1e-6, format!("π={pi}")))
        })
        .collect::<Result<_>>()?;
    Ok(CheckReport::collect("quad2_direct", rows))
}

/// Ranges for [`identity_battery`].
#[derive(Clone, Debug)]
pub struct BatteryConfig {
    pub reciprocity_norm: u128,
    pub supplement_norm: u128,
    pub prime_max: u64,
    pub sqrootcancel_norm: u128,
    pub moment_norm: u64,
    pub moment_k: i64,
    pub pairs: usize,
    pub pair_norm: u128,
    pub seed: u64,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        BatteryConfig {
            reciprocity_norm: 300,
            supplement_norm: 10_000,
            prime_max: 100_000,
            sqrootcancel_norm: 10_000,
            moment_norm: 10_000,
            moment_k: 8,
            pairs: 500,
            pair_norm: 10_000,
            seed: 1,
        }
    }
}

/// reciprocity, supplements, fourthpower, squarepower, sqrootcancel, quad2,
/// degree2, composite sqrootcancel, momentcases, rel2, rel3.
pub fn identity_battery(engine: &GaussSumEngine, cfg: &BatteryConfig) -> Result<Vec<CheckReport>> {
    let mut out = vec![check_reciprocity(cfg.reciprocity_norm)?, check_supplements(cfg.supplement_norm)?];
    out.extend(check_prime_evaluations(engine, cfg.prime_max)?);
    out.push(check_sqrootcancel(engine, cfg.sqrootcancel_norm)?);
    out.push(check_momentcases(engine, cfg.moment_norm, cfg.moment_k, 1e-8)?);
    out.extend(check_twisted_multiplicativity(cfg.pairs, cfg.pair_norm, cfg.seed, 1e-8)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_battery_passes() {
        let engine = GaussSumEngine::new();
        let cfg = BatteryConfig {
            reciprocity_norm: 60,
            supplement_norm: 500,
            prime_max: 2000,
            sqrootcancel_norm: 500,
            moment_norm: 500,
            moment_k: 8,
            pairs: 40,
            pair_norm: 800,
            seed: 3,
        };
        for r in identity_battery(&engine, &cfg).unwrap() {
            assert!(r.pass(), "{r:?}");
        }
        assert!(check_quad2_direct(300).unwrap().pass());
    }

    #[test]
    fn pairs_respect_bounds() {
        for (c, d, nu) in random_coprime_pairs(50, 2000, 5) {
            assert!((c * d).norm() <= 2000);
            assert!(c.is_primary() && d.is_primary() && !nu.is_zero());
            assert!(gcd(c, d).is_unit());
        }
    }

    #[test]
    fn degree_split() {
        let (s, i) = primes_by_degree(30);
        assert!(s.iter().all(|p| p.norm() <= 30 && p.norm() % 4 == 1));
        assert_eq!(i.iter().map(|p| -p.re).collect::<Vec<_>>(), vec![3, 7, 11, 19, 23]);
    }
}
