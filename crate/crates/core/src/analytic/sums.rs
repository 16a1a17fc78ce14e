use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rows::ExperimentRow;
use super::{gchar, SmoothWeight};
use crate::error::{Error, Result};
use crate::gauss_sums::complex::sum_vals;
use crate::gauss_sums::{moment_reduce, prime_degree, ComplexVal, GaussSumEngine};
use crate::gaussint::{factor, BetaClass, GaussInt};
use crate::sieve::{primary_elements_upto, primary_primes_in_range};

const PREFETCH_BATCH: usize = 4096;

fn prime_term(engine: &GaussSumEngine, pi: GaussInt, ell: i64, weight: f64) -> Result<ComplexVal> {
    if weight == 0.0 {
        return Ok(ComplexVal::ZERO);
    }
    let n = pi.norm() as f64;
    Ok((engine.g4_tilde_prime(pi)? * gchar(pi, ell)?).scale(weight * n.ln()))
}

fn prime_terms(engine: &GaussSumEngine, primes: &[GaussInt], ell: i64, w: impl Fn(GaussInt) -> f64 + Sync) -> Result<Vec<ComplexVal>> {
    engine.prefetch(primes)?;
    primes.par_iter().map(|&pi| prime_term(engine, pi, ell, w(pi))).collect()
}

/// `H_β(X, ℓ) = Σ_{c ≡ β (4)} g̃₄(c)(c̄/|c|)^ℓ Λ(c) R(N(c)/X)`.
///
/// Only primes are visited: `g̃₄` vanishes on higher prime powers.
pub fn h_sum(engine: &GaussSumEngine, x: f64, ell: i64, beta: BetaClass, r: &SmoothWeight) -> Result<ComplexVal> {
    let (lo, hi) = r.norm_range(x);
    let primes = primary_primes_in_range(lo, hi, Some(beta));
    let terms = prime_terms(engine, &primes, ell, |pi| r.eval(pi.norm() as f64 / x))?;
    Ok(sum_vals(&terms))
}

/// `F_β(x, ℓ; α) = Σ_{c ≡ β (4), α | c} g̃₄(c)(c̄/|c|)^ℓ R(N(c)/x)` for primary `α`.
/// A non-squarefree `α` gives 0, since every such `c` is non-squarefree.
pub fn f_sum(engine: &GaussSumEngine, x: f64, ell: i64, beta: BetaClass, alpha: GaussInt, r: &SmoothWeight) -> Result<ComplexVal> {
    if !alpha.is_primary() {
        return Err(Error::NotPrimary(alpha));
    }
    let na = alpha.norm();
    let (lo, hi) = r.norm_range(x);
    let mut cs = Vec::new();
    for c1 in primary_elements_upto(hi / na) {
        let c = alpha * c1;
        let n = c.norm();
        if n >= lo && c.class() == Some(beta) {
            cs.push(c);
        }
    }
    let terms: Vec<ComplexVal> = cs
        .par_iter()
        .map(|&c| {
            let w = r.eval(c.norm() as f64 / x);
            let f = factor(c)?;
            if w == 0.0 || !f.is_squarefree() {
                return Ok(ComplexVal::ZERO);
            }
            let g = engine.g4_compose(GaussInt::ONE, &f)?.scale(1.0 / (c.norm() as f64).sqrt());
            Ok((g * gchar(c, ell)?).scale(w))
        })
        .collect::<Result<_>>()?;
    Ok(sum_vals(&terms))
}

/// `n` points from `lo` to `hi` inclusive, equally spaced in `log X`.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => {
            let q = (hi / lo).ln() / (n - 1) as f64;
            (0..n).map(|j| if j + 1 == n { hi } else { lo * (q * j as f64).exp() }).collect()
        }
    }
}

/// Sharp-cutoff sums `S(X) = Σ_{N(c) ≤ X, c ≡ β (4)} g̃₄(c)(c̄/|c|)^ℓ Λ(c)`
/// on an increasing grid, with `S(X)/X^{3/4}`. Each prime is visited once.
pub fn conjecture_scan(engine: &GaussSumEngine, grid: &[f64], ell: i64, beta: BetaClass) -> Result<Vec<ExperimentRow>> {
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Precondition("grid must be increasing".into()));
    }
    let mut rows = Vec::with_capacity(grid.len());
    let mut running = ComplexVal::ZERO;
    let mut prev: u128 = 0;
    for &x in grid {
        let hi = x.floor() as u128;
        if hi > prev {
            let primes = primary_primes_in_range(prev + 1, hi, Some(beta));
            let mut seg = Vec::with_capacity(primes.len());
            for batch in primes.chunks(PREFETCH_BATCH) {
                seg.extend(prime_terms(engine, batch, ell, |_| 1.0)?);
            }
            running = running + sum_vals(&seg);
            prev = hi;
        }
        let normalized = running.value / x.powf(0.75);
        rows.push(ExperimentRow { x, ell, beta, u: None, value: running, normalized: Some(normalized) });
    }
    Ok(rows)
}

/// `Σ g̃₄(π)^k` over primary primes with `N(π) ≤ X`, by two routes.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct MomentPair {
    pub x: f64,
    pub k: i64,
    pub primes: usize,
    /// Repeated multiplication.
    pub direct: ComplexVal,
    /// Closed forms: the moment reduction at split primes, `g̃₄(−p) = ±1` at inert ones.
    pub reduced: ComplexVal,
    /// Largest termwise discrepancy relative to its error budget.
    pub worst_ratio: f64,
}

impl MomentPair {
    pub fn agree(&self) -> bool {
        (self.direct.value - self.reduced.value).norm() <= self.direct.err + self.reduced.err && self.worst_ratio <= 1.0
    }

    pub fn discrepancy(&self) -> f64 {
        (self.direct.value - self.reduced.value).norm()
    }
}

/// Weyl moment of the normalized prime Gauss sums.
pub fn weyl_moment(engine: &GaussSumEngine, x: f64, k: i64) -> Result<MomentPair> {
    if k == 0 {
        return Err(Error::Precondition("moment exponent must be nonzero".into()));
    }
    let primes = primary_primes_in_range(0, x.floor() as u128, None);
    engine.prefetch(&primes)?;
    let pairs: Vec<(ComplexVal, ComplexVal)> = primes
        .par_iter()
        .map(|&pi| {
            let g = engine.g4_tilde_prime(pi)?;
            let direct = g.powi(k as i32);
            let reduced = if prime_degree(pi)? == 2 {
                let p = (-pi.re) as u64;
                let s = if ((p + 1) / 4) % 2 == 0 || k % 2 == 0 { 1.0 } else { -1.0 };
                ComplexVal::real(s)
            } else {
                moment_reduce(pi, k, g)?
            };
            Ok((direct, reduced))
        })
        .collect::<Result<_>>()?;
    let worst_ratio = pairs
        .iter()
        .map(|(a, b)| {
            let d = (a.value - b.value).norm();
            let budget = a.err + b.err;
            if d == 0.0 {
                0.0
            } else if budget == 0.0 {
                f64::INFINITY
            } else {
                d / budget
            }
        })
        .fold(0.0, f64::max);
    let (ds, rs): (Vec<ComplexVal>, Vec<ComplexVal>) = pairs.into_iter().unzip();
    Ok(MomentPair { x, k, primes: primes.len(), direct: sum_vals(&ds), reduced: sum_vals(&rs), worst_ratio })
}

/// `Σ (π̄/|π|)^ℓ` over the given primes.
pub fn grossen_sum(primes: &[GaussInt], ell: i64) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for &p in primes {
        acc += crate::symbols::grossencharakter(p, ell)?;
    }
    Ok(acc)
}
