use rayon::prelude::*;

use crate::analytic::gchar;
use crate::error::{Error, Result};
use crate::gauss_sums::{ComplexVal, GaussSumEngine};
use crate::gaussint::{BetaClass, GaussInt};
use crate::sieve::{primary_factored_upto, Factored};

/// `Σ_{n ≤ N_max} a_n n^{−s}` with `a_n` carrying error bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct DirichletSeriesTrunc {
    pub n_max: u64,
    coeffs: Vec<ComplexVal>,
}

impl DirichletSeriesTrunc {
    pub fn zero(n_max: u64) -> Self {
        DirichletSeriesTrunc { n_max, coeffs: vec![ComplexVal::ZERO; n_max as usize + 1] }
    }

    /// The constant series `1`.
    pub fn one(n_max: u64) -> Self {
        let mut s = Self::zero(n_max);
        if n_max >= 1 {
            s.coeffs[1] = ComplexVal::ONE;
        }
        s
    }

    pub fn coeff(&self, n: u64) -> ComplexVal {
        self.coeffs.get(n as usize).copied().unwrap_or(ComplexVal::ZERO)
    }

    pub fn add_at(&mut self, n: u64, v: ComplexVal) {
        if n >= 1 && n <= self.n_max {
            let slot = &mut self.coeffs[n as usize];
            *slot = *slot + v;
        }
    }

    /// Indices with a coefficient that is not an exact zero.
    pub fn support(&self) -> impl Iterator<Item = (u64, ComplexVal)> + '_ {
        self.coeffs.iter().enumerate().skip(1).filter(|(_, c)| !c.is_exact_zero()).map(|(n, c)| (n as u64, *c))
    }

    /// Dirichlet convolution, truncated at the smaller cutoff.
    pub fn mul(&self, other: &Self) -> Self {
        let n_max = self.n_max.min(other.n_max);
        let mut out = Self::zero(n_max);
        let right: Vec<(u64, ComplexVal)> = other.support().collect();
        for (i, a) in self.support() {
            for &(j, b) in &right {
                match i.checked_mul(j) {
                    Some(n) if n <= n_max => out.add_at(n, a * b),
                    _ => break,
                }
            }
        }
        out
    }

    /// Multiply by `k^{−s}`: `a_n` moves to index `k·n`.
    pub fn dilate(&self, k: u64) -> Self {
        assert!(k >= 1, "dilation factor must be positive");
        let mut out = Self::zero(self.n_max);
        for (n, a) in self.support() {
            match n.checked_mul(k) {
                Some(m) if m <= self.n_max => out.coeffs[m as usize] = a,
                _ => break,
            }
        }
        out
    }

    pub fn scale(&self, c: ComplexVal) -> Self {
        let mut out = Self::zero(self.n_max);
        for (n, a) in self.support() {
            out.coeffs[n as usize] = a * c;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let n_max = self.n_max.min(other.n_max);
        let mut out = Self::zero(n_max);
        for n in 1..=n_max {
            out.coeffs[n as usize] = self.coeff(n) + other.coeff(n);
        }
        out
    }

    /// `(max_n |a_n − b_n|, max_n (err_a + err_b), max_n max(|a_n|, |b_n|))`.
    pub fn compare(&self, other: &Self) -> (f64, f64, f64) {
        let n_max = self.n_max.min(other.n_max);
        let (mut disc, mut err, mut scale) = (0.0f64, 0.0f64, 0.0f64);
        for n in 1..=n_max {
            let (a, b) = (self.coeff(n), other.coeff(n));
            disc = disc.max((a.value - b.value).norm());
            err = err.max(a.err + b.err);
            scale = scale.max(a.norm()).max(b.norm());
        }
        (disc, err, scale)
    }

    /// `Σ a_n n^{−s}` for real `s`.
    pub fn eval_real(&self, s: f64) -> ComplexVal {
        let terms: Vec<ComplexVal> = self.support().map(|(n, a)| a.scale((n as f64).powf(-s))).collect();
        crate::gauss_sums::complex::sum_vals(&terms)
    }
}

/// Divisibility condition on the moduli `c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    All,
    /// `α | c`, for squarefree primary `α`.
    Divisible(GaussInt),
    /// `(c, α) = 1`.
    Coprime(GaussInt),
}

/// Builds `ψ^{(4)}` truncations from one shared table of factored moduli.
pub struct SeriesBuilder<'a> {
    engine: &'a GaussSumEngine,
    n_max: u64,
    elems: Vec<Factored>,
}

fn prime_set(z: GaussInt) -> Result<Vec<GaussInt>> {
    let f = crate::gaussint::factor(z)?;
    if f.unit_exp != 0 || f.lambda_exp != 0 {
        return Err(Error::NotPrimary(z));
    }
    if !f.is_squarefree() {
        return Err(Error::NotSquarefree(z));
    }
    Ok(f.factors.into_iter().map(|(p, _)| p).collect())
}

impl<'a> SeriesBuilder<'a> {
    pub fn new(engine: &'a GaussSumEngine, n_max: u64) -> Self {
        let elems = primary_factored_upto(n_max as u128, false);
        let primes: Vec<GaussInt> = elems.iter().filter(|f| f.factors.len() == 1 && f.factors[0].1 == 1).map(|f| f.c).collect();
        if let Err(e) = engine.prefetch(&primes) {
            log::warn!("prefetch failed: {e}");
        }
        SeriesBuilder { engine, n_max, elems }
    }

    pub fn engine(&self) -> &'a GaussSumEngine {
        self.engine
    }

    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    /// `Σ_{c ≡ β (4), level} g₄(ν, c)(c̄/|c|)^ℓ N(c)^{−s}`.
    pub fn psi(&self, beta: BetaClass, nu: GaussInt, ell: i64, level: Level) -> Result<DirichletSeriesTrunc> {
        if nu.is_zero() {
            return Err(Error::ZeroInput);
        }
        let (alpha_primes, divisible) = match level {
            Level::All => (vec![], true),
            Level::Divisible(a) => (prime_set(a)?, true),
            Level::Coprime(a) => (prime_set(a)?, false),
        };
        let selected: Vec<&Factored> = self
            .elems
            .iter()
            .filter(|f| f.c.class() == Some(beta))
            .filter(|f| {
                let has = |p: &GaussInt| f.factors.iter().any(|(q, _)| q == p);
                if divisible {
                    alpha_primes.iter().all(has)
                } else {
                    !alpha_primes.iter().any(has)
                }
            })
            .collect();
        let values: Vec<(u64, ComplexVal)> = selected
            .par_iter()
            .map(|f| {
                let g = self.engine.g4_compose(nu, &f.as_factorization())?;
                let v = if g.is_exact_zero() { g } else { g * gchar(f.c, ell)? };
                Ok((f.c.norm() as u64, v))
            })
            .collect::<Result<_>>()?;
        let mut s = DirichletSeriesTrunc::zero(self.n_max);
        for (n, v) in values {
            s.add_at(n, v);
        }
        Ok(s)
    }
}

/// `ψ^{(4)}_β(s, ν, ℓ; α)` (`Level::Divisible`) or `ψ^{(4)}_{β⋆}` (`Level::Coprime`).
pub fn psi_series(engine: &GaussSumEngine, beta: BetaClass, nu: GaussInt, ell: i64, level: Level, n_max: u64) -> Result<DirichletSeriesTrunc> {
    SeriesBuilder::new(engine, n_max).psi(beta, nu, ell, level)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss_sums::g4_direct;
    use num_complex::Complex64;

    fn g(re: i64, im: i64) -> GaussInt {
        GaussInt::new(re, im)
    }

    fn series(pairs: &[(u64, f64)], n_max: u64) -> DirichletSeriesTrunc {
        let mut s = DirichletSeriesTrunc::zero(n_max);
        for &(n, v) in pairs {
            s.add_at(n, ComplexVal::real(v));
        }
        s
    }

    #[test]
    fn algebra() {
        // ζ-like truncation squared gives the divisor function
        let ones = series(&(1..=30).map(|n| (n, 1.0)).collect::<Vec<_>>(), 30);
        let d = ones.mul(&ones);
        for n in 1..=30u64 {
            let tau = (1..=n).filter(|k| n % k == 0).count() as f64;
            assert_eq!(d.coeff(n).value.re, tau);
        }
        let s = series(&[(1, 1.0), (2, 3.0), (5, -1.0)], 20);
        let dil = s.dilate(4);
        assert_eq!(dil.coeff(4).value.re, 1.0);
        assert_eq!(dil.coeff(8).value.re, 3.0);
        assert_eq!(dil.coeff(20).value.re, -1.0);
        assert!(dil.coeff(1).is_exact_zero());
        assert_eq!(s.dilate(7).coeff(14).value.re, 3.0);
        assert!(s.dilate(7).coeff(35).is_exact_zero());
        let sc = s.scale(ComplexVal::exact(Complex64::new(0.0, 2.0)));
        assert_eq!(sc.coeff(2).value, Complex64::new(0.0, 6.0));
        assert_eq!(s.add(&s).coeff(5).value.re, -2.0);
        assert_eq!(s.mul(&DirichletSeriesTrunc::one(20)).compare(&s).0, 0.0);
    }

    #[test]
    fn psi_examples() {
        let e = GaussSumEngine::new();
        let b = SeriesBuilder::new(&e, 200);
        let one = b.psi(BetaClass::One, GaussInt::ONE, 0, Level::All).unwrap();
        assert_eq!(one.coeff(1).value, Complex64::new(1.0, 0.0));
        assert!(one.coeff(5).is_exact_zero());
        let other = b.psi(BetaClass::OnePlusLambda3, GaussInt::ONE, 0, Level::All).unwrap();
        let want = g4_direct(GaussInt::ONE, g(-1, 2)).unwrap().value + g4_direct(GaussInt::ONE, g(-1, -2)).unwrap().value;
        assert!((other.coeff(5).value - want).norm() < 1e-12);

        let alpha = g(-1, 2);
        let lev = b.psi(BetaClass::OnePlusLambda3, g(2, 1), 1, Level::Divisible(alpha)).unwrap();
        for (n, _) in lev.support() {
            let witnessed = crate::sieve::primary_elements_upto(n as u128)
                .into_iter()
                .any(|c| c.norm() == n as u128 && alpha.divides(c));
            assert!(witnessed, "{n}");
        }
        assert!(b.psi(BetaClass::One, GaussInt::ZERO, 0, Level::All).is_err());
        assert!(b.psi(BetaClass::One, GaussInt::ONE, 0, Level::Divisible(g(-3, -4))).is_err());
    }

    #[test]
    fn coefficients_match_direct_sums() {
        let e = GaussSumEngine::new();
        let b = SeriesBuilder::new(&e, 120);
        for nu in [GaussInt::ONE, g(3, 1), g(-3, 0), g(0, 5)] {
            for beta in BetaClass::ALL {
                let s = b.psi(beta, nu, 2, Level::All).unwrap();
                let mut want = vec![Complex64::new(0.0, 0.0); 121];
                for c in crate::sieve::primary_elements_upto(120) {
                    if c.class() == Some(beta) {
                        let v = g4_direct(nu, c).unwrap().value * crate::symbols::grossencharakter(c, 2).unwrap();
                        want[c.norm() as usize] += v;
                    }
                }
                for n in 1..=120u64 {
                    assert!((s.coeff(n).value - want[n as usize]).norm() < 1e-9, "{nu} {beta} {n}");
                }
            }
        }
    }

    #[test]
    fn levels_are_filters() {
        let e = GaussSumEngine::new();
        let b = SeriesBuilder::new(&e, 300);
        let alpha = g(3, 2);
        let all = b.psi(BetaClass::One, g(1, 1), 0, Level::All).unwrap();
        let div = b.psi(BetaClass::One, g(1, 1), 0, Level::Divisible(alpha)).unwrap();
        let cop = b.psi(BetaClass::One, g(1, 1), 0, Level::Coprime(alpha)).unwrap();
        let (d, _, _) = all.compare(&div.add(&cop));
        assert!(d < 1e-12);
    }
}
