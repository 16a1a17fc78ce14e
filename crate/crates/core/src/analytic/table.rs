use std::collections::HashMap;

use rayon::prelude::*;

use super::gchar;
use crate::error::Result;
use crate::gauss_sums::{ComplexVal, GaussSumEngine};
use crate::gaussint::{BetaClass, GaussInt};
use crate::sieve::primary_factored_upto;

/// A squarefree primary `c` with `g̃₄(c)(c̄/|c|)^ℓ`.
#[derive(Clone, Debug)]
pub struct TwistEntry {
    pub c: GaussInt,
    pub norm: u128,
    pub class: BetaClass,
    /// Prime factors of `c`, ascending.
    pub primes: Vec<GaussInt>,
    pub value: ComplexVal,
}

impl TwistEntry {
    pub fn is_prime(&self) -> bool {
        self.primes.len() == 1
    }

    /// `d | c` for squarefree `d` given by its prime factors.
    pub fn divisible_by(&self, d_primes: &[GaussInt]) -> bool {
        d_primes.iter().all(|p| self.primes.binary_search_by_key(&p.sort_key(), |q| q.sort_key()).is_ok())
    }
}

/// `g̃₄(c)(c̄/|c|)^ℓ` for every squarefree primary `c` with `N(c) ≤ max_norm`,
/// in norm order. Non-squarefree `c` are absent because `g̃₄(c) = 0` there.
pub struct TwistedTable {
    pub ell: i64,
    pub max_norm: u128,
    pub entries: Vec<TwistEntry>,
    index: HashMap<GaussInt, usize>,
}

impl TwistedTable {
    pub fn build(engine: &GaussSumEngine, max_norm: u128, ell: i64) -> Result<Self> {
        let factored = primary_factored_upto(max_norm, true);
        let primes: Vec<GaussInt> = factored.iter().filter(|f| f.factors.len() == 1).map(|f| f.c).collect();
        engine.prefetch(&primes)?;
        let entries: Vec<TwistEntry> = factored
            .par_iter()
            .map(|f| {
                let norm = f.c.norm();
                let g = engine.g4_compose(GaussInt::ONE, &f.as_factorization())?.scale(1.0 / (norm as f64).sqrt());
                Ok(TwistEntry {
                    c: f.c,
                    norm,
                    class: f.c.class().expect("primary"),
                    primes: f.factors.iter().map(|&(p, _)| p).collect(),
                    value: g * gchar(f.c, ell)?,
                })
            })
            .collect::<Result<_>>()?;
        let index = entries.iter().enumerate().map(|(j, e)| (e.c, j)).collect();
        Ok(TwistedTable { ell, max_norm, entries, index })
    }

    pub fn get(&self, c: GaussInt) -> Option<&TwistEntry> {
        self.index.get(&c).map(|&j| &self.entries[j])
    }

    /// Entries with norm in `[lo, hi]`.
    pub fn norm_slice(&self, lo: u128, hi: u128) -> &[TwistEntry] {
        let a = self.entries.partition_point(|e| e.norm < lo);
        let b = self.entries.partition_point(|e| e.norm <= hi);
        &self.entries[a..b.max(a)]
    }
}
