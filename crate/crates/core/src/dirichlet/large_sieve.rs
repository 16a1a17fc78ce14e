use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussint::GaussInt;
use crate::sieve::primary_factored_upto;
use crate::symbols::quadratic_symbol;

/// Coefficient families tried against the quadratic large sieve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SieveFamily {
    /// `a_n = 1`.
    AllOnes,
    /// `a_n = (n/m₀)₂` for a modulus `m₀` in range, which maximises one row.
    CharacterAligned,
    /// Independent uniform phases.
    RandomUnit,
}

impl SieveFamily {
    pub const ALL: [SieveFamily; 3] = [SieveFamily::AllOnes, SieveFamily::CharacterAligned, SieveFamily::RandomUnit];
}

impl fmt::Display for SieveFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SieveFamily::AllOnes => "ones",
            SieveFamily::CharacterAligned => "aligned",
            SieveFamily::RandomUnit => "random",
        })
    }
}

impl FromStr for SieveFamily {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "ones" => Ok(SieveFamily::AllOnes),
            "aligned" => Ok(SieveFamily::CharacterAligned),
            "random" => Ok(SieveFamily::RandomUnit),
            other => Err(format!("unknown family '{other}' (ones|aligned|random)")),
        }
    }
}

/// `LHS = Σ_m |Σ_n a_n (n/m)₂|²` over squarefree primary `m, n` against
/// `(M + N)·Σ|a_n|²`, maximised over trials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SieveCell {
    pub m: u64,
    pub n: u64,
    pub family: SieveFamily,
    pub moduli: usize,
    pub support: usize,
    pub lhs: f64,
    pub mass: f64,
    pub ratio: f64,
}

/// `log₂` growth of the ratio between two cells.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SieveSlope {
    pub family: SieveFamily,
    pub from: (u64, u64),
    pub to: (u64, u64),
    pub slope: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LargeSieveReport {
    pub cells: Vec<SieveCell>,
    /// `M = N` doubled together.
    pub diagonal: Vec<SieveSlope>,
    /// `M` doubled at fixed `N`.
    pub fixed_n: Vec<SieveSlope>,
}

impl LargeSieveReport {
    pub fn max_diagonal_slope(&self) -> f64 {
        self.diagonal.iter().map(|s| s.slope).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_fixed_n_slope(&self) -> f64 {
        self.fixed_n.iter().map(|s| s.slope).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn cell(&self, m: u64, n: u64, family: SieveFamily) -> Option<&SieveCell> {
        self.cells.iter().find(|c| c.m == m && c.n == n && c.family == family)
    }
}

fn squarefree_primary(bound: u64) -> Vec<(GaussInt, u64)> {
    primary_factored_upto(bound as u128, true).into_iter().map(|f| (f.c, f.c.norm() as u64)).collect()
}

fn coefficients(family: SieveFamily, trial: usize, seed: u64, ns: &[(GaussInt, u64)], moduli: &[(GaussInt, u64)]) -> Result<Vec<Complex64>> {
    match family {
        SieveFamily::AllOnes => Ok(vec![Complex64::new(1.0, 0.0); ns.len()]),
        SieveFamily::CharacterAligned => {
            let nontrivial: Vec<GaussInt> = moduli.iter().map(|&(m, _)| m).filter(|m| *m != GaussInt::ONE).collect();
            let Some(&m0) = nontrivial.get(trial % nontrivial.len().max(1)) else {
                return Ok(vec![Complex64::new(1.0, 0.0); ns.len()]);
            };
            ns.iter().map(|&(n, _)| Ok(quadratic_symbol(n, m0)?.to_complex())).collect()
        }
        SieveFamily::RandomUnit => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial as u64));
            Ok(ns.iter().map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))).collect())
        }
    }
}

/// Every `(M, N)` pair from the two grids for every family.
pub fn large_sieve_grid(ms: &[u64], ns: &[u64], families: &[SieveFamily], trials: usize, seed: u64) -> Result<LargeSieveReport> {
    if ms.is_empty() || ns.is_empty() || trials == 0 {
        return Err(Error::Precondition("empty sieve grid".into()));
    }
    let mut ms = ms.to_vec();
    let mut nsg = ns.to_vec();
    ms.sort_unstable();
    ms.dedup();
    nsg.sort_unstable();
    nsg.dedup();
    let moduli = squarefree_primary(*ms.last().unwrap());
    let elems = squarefree_primary(*nsg.last().unwrap());
    // chi[j][k] = (n_k / m_j)₂ ∈ {−1, 0, 1}
    let chi: Vec<Vec<i8>> = moduli
        .par_iter()
        .map(|&(m, _)| {
            elems.iter().map(|&(n, _)| Ok(quadratic_symbol(n, m)?.to_real() as i8)).collect::<Result<Vec<i8>>>()
        })
        .collect::<Result<_>>()?;
    let n_cut: Vec<usize> = nsg.iter().map(|&b| elems.partition_point(|e| e.1 <= b)).collect();
    let m_cut: Vec<usize> = ms.iter().map(|&b| moduli.partition_point(|e| e.1 <= b)).collect();

    let mut cells = Vec::new();
    for &family in families {
        let runs = if family == SieveFamily::AllOnes { 1 } else { trials };
        let mut best = vec![vec![(0.0f64, 0.0f64, f64::NEG_INFINITY); nsg.len()]; ms.len()];
        for trial in 0..runs {
            let a = coefficients(family, trial, seed, &elems, &moduli)?;
            let mass: Vec<f64> = n_cut.iter().map(|&c| a[..c].iter().map(|z| z.norm_sqr()).sum()).collect();
            // row[j][t] = |Σ_{k < n_cut[t]} a_k χ[j][k]|²
            let rows: Vec<Vec<f64>> = chi
                .par_iter()
                .map(|row| {
                    let mut out = Vec::with_capacity(n_cut.len());
                    let mut acc = Complex64::new(0.0, 0.0);
                    let mut k = 0;
                    for &cut in &n_cut {
                        while k < cut {
                            acc += a[k] * row[k] as f64;
                            k += 1;
                        }
                        out.push(acc.norm_sqr());
                    }
                    out
                })
                .collect();
            for (mi, &mc) in m_cut.iter().enumerate() {
                for t in 0..nsg.len() {
                    let lhs: f64 = rows[..mc].iter().map(|r| r[t]).sum();
                    let ratio = lhs / ((ms[mi] + nsg[t]) as f64 * mass[t]);
                    if ratio > best[mi][t].2 {
                        best[mi][t] = (lhs, mass[t], ratio);
                    }
                }
            }
        }
        for (mi, &m) in ms.iter().enumerate() {
            for (t, &n) in nsg.iter().enumerate() {
                let (lhs, mass, ratio) = best[mi][t];
                cells.push(SieveCell { m, n, family, moduli: m_cut[mi], support: n_cut[t], lhs, mass, ratio });
            }
        }
    }

    let find = |m: u64, n: u64, f: SieveFamily| cells.iter().find(|c| c.m == m && c.n == n && c.family == f).map(|c| c.ratio);
    let mut diagonal = Vec::new();
    let mut fixed_n = Vec::new();
    for &family in families {
        for &m in &ms {
            if let (Some(r0), Some(r1)) = (find(m, m, family), find(2 * m, 2 * m, family)) {
                diagonal.push(SieveSlope { family, from: (m, m), to: (2 * m, 2 * m), slope: (r1 / r0).log2() });
            }
            for &n in &nsg {
                if let (Some(r0), Some(r1)) = (find(m, n, family), find(2 * m, n, family)) {
                    fixed_n.push(SieveSlope { family, from: (m, n), to: (2 * m, n), slope: (r1 / r0).log2() });
                }
            }
        }
    }
    Ok(LargeSieveReport { cells, diagonal, fixed_n })
}

/// A single cell.
pub fn large_sieve_ratio(m: u64, n: u64, family: SieveFamily, trials: usize, seed: u64) -> Result<SieveCell> {
    let r = large_sieve_grid(&[m], &[n], &[family], trials, seed)?;
    Ok(r.cells.into_iter().next().expect("one cell"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_coefficient_counts_moduli() {
        for family in SieveFamily::ALL {
            let c = large_sieve_ratio(100, 1, family, 3, 1).unwrap();
            let count = primary_factored_upto(100, true).len();
            assert_eq!(c.moduli, count);
            assert!((c.lhs - count as f64).abs() < 1e-9);
            assert!(c.ratio <= 1.0);
        }
    }

    #[test]
    fn brute_force_cell() {
        let c = large_sieve_ratio(60, 80, SieveFamily::AllOnes, 1, 0).unwrap();
        let ms = primary_factored_upto(60, true);
        let ns = primary_factored_upto(80, true);
        let mut lhs = 0.0;
        for m in &ms {
            let s: f64 = ns.iter().map(|n| quadratic_symbol(n.c, m.c).unwrap().to_real()).sum();
            lhs += s * s;
        }
        assert!((c.lhs - lhs).abs() < 1e-9);
        assert!((c.ratio - lhs / (140.0 * ns.len() as f64)).abs() < 1e-12);
    }

    #[test]
    fn seeded_runs_repeat() {
        let a = large_sieve_grid(&[50, 100], &[50, 100], &[SieveFamily::RandomUnit], 2, 9).unwrap();
        let b = large_sieve_grid(&[50, 100], &[50, 100], &[SieveFamily::RandomUnit], 2, 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.diagonal.len(), 1);
        assert_eq!(a.fixed_n.len(), 2);
    }
}
