//! Enumeration of primary elements and primes of `Z[i]` by norm.
//!
//! Everything is emitted in `(norm, re, im)` order.

use rayon::prelude::*;

use crate::gaussint::{split_prime, BetaClass, GaussInt};

const SHARD: u64 = 1 << 16;

/// Rational primes `≤ n` by the sieve of Eratosthenes.
pub fn rational_primes_upto(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for p in 2..=n {
        if composite[p] {
            continue;
        }
        out.push(p as u64);
        let mut m = p * p;
        while m <= n {
            composite[m] = true;
            m += p;
        }
    }
    out
}

fn class_ok(z: GaussInt, class: Option<BetaClass>) -> bool {
    class.is_none_or(|c| z.class() == Some(c))
}

/// Primary primes with norm in `[lo, hi]`, built from rational primes in
/// parallel shards and merged deterministically.
pub fn primary_primes_in_range(lo: u128, hi: u128, class: Option<BetaClass>) -> Vec<GaussInt> {
    if hi < 2 || lo > hi {
        return Vec::new();
    }
    let hi64 = u64::try_from(hi).expect("norm bound fits u64");
    let lo64 = lo.max(2) as u64;
    let primes = rational_primes_upto(hi64);
    let split: Vec<u64> = primes.iter().copied().filter(|&p| p % 4 == 1 && p >= lo64).collect();
    let shards: Vec<&[u64]> = split.chunks(SHARD as usize).collect();
    let parts: Vec<Vec<GaussInt>> = shards
        .par_iter()
        .map(|chunk| {
            let mut v = Vec::with_capacity(2 * chunk.len());
            for &p in chunk.iter() {
                let pi = split_prime(p as u128).expect("p ≡ 1 mod 4 splits");
                for z in [pi.conj(), pi] {
                    if class_ok(z, class) {
                        v.push(z);
                    }
                }
            }
            v
        })
        .collect();
    let mut out: Vec<GaussInt> = parts.into_iter().flatten().collect();
    for &p in primes.iter().filter(|&&p| p % 4 == 3) {
        let n = p as u128 * p as u128;
        if n > hi {
            break;
        }
        let z = GaussInt::new(-(p as i64), 0);
        if n >= lo && class_ok(z, class) {
            out.push(z);
        }
    }
    out.sort_unstable_by_key(|z| z.sort_key());
    out
}

/// Ordered list of primary primes up to a norm bound.
pub struct PrimeStream {
    items: std::vec::IntoIter<GaussInt>,
    pub bound: u128,
    pub class: Option<BetaClass>,
}

impl Iterator for PrimeStream {
    type Item = GaussInt;
    fn next(&mut self) -> Option<GaussInt> {
        self.items.next()
    }
}

/// Every primary prime `π ≠ λ` with `N(π) ≤ x`, optionally in one class mod 4.
pub fn primary_primes_upto(x: u128, class: Option<BetaClass>) -> PrimeStream {
    PrimeStream { items: primary_primes_in_range(0, x, class).into_iter(), bound: x, class }
}

/// All primary elements with `N(c) ≤ b`, by lattice scan.
pub fn primary_elements_upto(b: u128) -> Vec<GaussInt> {
    let r = (b as f64).sqrt() as i64 + 1;
    let mut out = Vec::new();
    for re in -r..=r {
        for im in (-r..=r).filter(|im| im & 1 == 0) {
            let z = GaussInt::new(re, im);
            if z.is_primary() && z.norm() <= b {
                out.push(z);
            }
        }
    }
    out.sort_unstable_by_key(|z| z.sort_key());
    out
}

/// Prime powers `π^k` with `N(π^k) ≤ x` and their weight `Λ = log N(π)`.
pub fn lambda_support_upto(x: u128, class: Option<BetaClass>) -> Vec<(GaussInt, f64)> {
    let mut out = Vec::new();
    for pi in primary_primes_upto(x, None) {
        let w = (pi.norm() as f64).ln();
        let mut z = pi;
        loop {
            if class_ok(z, class) {
                out.push((z, w));
            }
            match z.checked_mul(pi) {
                Some(n) if n.norm() <= x => z = n,
                _ => break,
            }
        }
    }
    out.sort_unstable_by_key(|(z, _)| z.sort_key());
    out
}

/// A primary element with its prime factorization (primary primes, ascending).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factored {
    pub c: GaussInt,
    pub factors: Vec<(GaussInt, u32)>,
}

impl Factored {
    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn moebius(&self) -> i8 {
        if !self.is_squarefree() {
            0
        } else if self.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn as_factorization(&self) -> crate::gaussint::Factorization {
        crate::gaussint::Factorization { unit_exp: 0, lambda_exp: 0, factors: self.factors.clone() }
    }
}

/// Every primary element with `N(c) ≤ b` together with its factorization,
/// generated multiplicatively from the primes.
pub fn primary_factored_upto(b: u128, squarefree_only: bool) -> Vec<Factored> {
    let primes: Vec<GaussInt> = primary_primes_upto(b, None).collect();
    let mut out = vec![Factored { c: GaussInt::ONE, factors: vec![] }];
    let mut stack: Vec<(usize, GaussInt, u128, Vec<(GaussInt, u32)>)> = vec![(0, GaussInt::ONE, 1, vec![])];
    while let Some((start, c, n, fac)) = stack.pop() {
        for (j, &p) in primes.iter().enumerate().skip(start) {
            let np = p.norm();
            if n * np > b {
                break;
            }
            let (mut pe, mut ne, mut e) = (p, np, 1u32);
            loop {
                let mut f = fac.clone();
                f.push((p, e));
                let z = c * pe;
                out.push(Factored { c: z, factors: f.clone() });
                stack.push((j + 1, z, n * ne, f));
                if squarefree_only || n * ne * np > b {
                    break;
                }
                pe = pe * p;
                ne *= np;
                e += 1;
            }
        }
    }
    for f in &mut out {
        f.factors.sort_by_key(|(p, _)| p.sort_key());
    }
    out.sort_unstable_by_key(|f| f.c.sort_key());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussint::{factor, is_gaussian_prime};

    fn g(re: i64, im: i64) -> GaussInt {
        GaussInt::new(re, im)
    }

    fn lattice_primes(x: u128, class: Option<BetaClass>) -> Vec<GaussInt> {
        primary_elements_upto(x)
            .into_iter()
            .filter(|&z| z.norm() > 1 && is_gaussian_prime(z) && class_ok(z, class))
            .collect()
    }

    #[test]
    fn examples() {
        assert_eq!(primary_primes_upto(5, None).collect::<Vec<_>>(), vec![g(-1, -2), g(-1, 2)]);
        assert_eq!(primary_primes_upto(9, None).collect::<Vec<_>>(), vec![g(-1, -2), g(-1, 2), g(-3, 0)]);
        assert!(primary_primes_upto(5, Some(BetaClass::One)).next().is_none());
        assert_eq!(primary_elements_upto(1), vec![GaussInt::ONE]);
        assert_eq!(primary_elements_upto(5), vec![GaussInt::ONE, g(-1, -2), g(-1, 2)]);
        assert_eq!(primary_elements_upto(9), vec![GaussInt::ONE, g(-1, -2), g(-1, 2), g(-3, 0)]);
        let ls = lambda_support_upto(25, None);
        assert!(ls.contains(&(g(-3, -4), 5f64.ln())));
        assert!(ls.iter().all(|(z, _)| z.is_odd()));
        let ls5 = lambda_support_upto(5, None);
        assert_eq!(ls5, vec![(g(-1, -2), 5f64.ln()), (g(-1, 2), 5f64.ln())]);
    }

    #[test]
    fn streams_match_lattice_scan() {
        for class in [None, Some(BetaClass::One), Some(BetaClass::OnePlusLambda3)] {
            let a: Vec<_> = primary_primes_upto(10_000, class).collect();
            assert_eq!(a, lattice_primes(10_000, class));
        }
        let scan = (-110i64..=110)
            .flat_map(|re| (-110i64..=110).map(move |im| g(re, im)))
            .filter(|z| z.is_primary() && z.norm() <= 10_000)
            .count();
        assert_eq!(primary_elements_upto(10_000).len(), scan);
    }

    #[test]
    fn range_shards_concatenate() {
        let all = primary_primes_in_range(0, 20_000, None);
        let mut parts = primary_primes_in_range(0, 7_000, None);
        parts.extend(primary_primes_in_range(7_001, 20_000, None));
        assert_eq!(all, parts);
    }

    #[test]
    fn factored_table_matches_factor() {
        let table = primary_factored_upto(3000, false);
        assert_eq!(table.iter().map(|f| f.c).collect::<Vec<_>>(), primary_elements_upto(3000));
        for f in &table {
            assert_eq!(factor(f.c).unwrap().factors, f.factors, "{}", f.c);
        }
        let sqf = primary_factored_upto(3000, true);
        assert_eq!(sqf.len(), table.iter().filter(|f| f.is_squarefree()).count());
    }
}
