use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gauss_sums::complex::{sum_vals, EPS};
use crate::gauss_sums::direct::residue_rectangle;
use crate::gauss_sums::ComplexVal;
use crate::gaussint::{BetaClass, GaussInt};
use crate::sieve::primary_elements_upto;
use crate::symbols::{quartic_symbol, SymbolValue};

/// Largest `b` accepted by [`gamma_ramified`]; the sum has `2^b` terms.
pub const GAMMA_MAX_B: u32 = 24;

/// `i^a λ^b`.
pub fn ramified_element(a: u8, b: u32) -> GaussInt {
    GaussInt::LAMBDA.pow(b).mul_unit(a as i64)
}

/// `Γ_β(ν, i^a λ^b) = Σ_{h ≡ β (4), h mod λ^{b+4}} (i^a λ^b / h)₄ ě(hν / (i^a λ^{b+4}))`.
pub fn gamma_ramified(beta: BetaClass, nu: GaussInt, a: u8, b: u32) -> Result<ComplexVal> {
    if b > GAMMA_MAX_B {
        return Err(Error::Precondition(format!("b = {b} exceeds {GAMMA_MAX_B}")));
    }
    if nu.is_zero() {
        return Err(Error::ZeroInput);
    }
    let top = ramified_element(a, b);
    let m = ramified_element(a, b + 4);
    let nm = 1i128 << (b + 4);
    let (width, height) = residue_rectangle(GaussInt::LAMBDA.pow(b));
    let rep = beta.representative();
    let mut terms = Vec::with_capacity((width * height) as usize);
    for y in 0..height {
        for x in 0..width {
            let h = rep + GaussInt::new(4 * x, 4 * y);
            let s = quartic_symbol(top, h)?;
            if s.is_zero() {
                continue;
            }
            let z = h * nu;
            // 2·Re(z·m̄)
            let re = z.re as i128 * m.re as i128 + z.im as i128 * m.im as i128;
            let t = (2 * re).rem_euclid(nm) as f64;
            let (sin, cos) = (TAU * t / nm as f64).sin_cos();
            terms.push(ComplexVal::new(s.to_complex() * Complex64::new(cos, sin), 4.0 * EPS));
        }
    }
    Ok(sum_vals(&terms))
}

/// Largest `|Γ_β(i^j λ^k, i^a λ^b)|` inside and outside `2 ≤ b ≤ k+5`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GammaSupport {
    pub k: u32,
    pub evaluated: usize,
    pub sup_inside: f64,
    pub sup_outside: f64,
    /// Outside values that exceed their error bound.
    pub violations: usize,
}

/// Scan every `j, a`, both `β` and `2 ≤ b ≤ k + extra`.
pub fn gamma_support_scan(k: u32, extra: u32) -> Result<GammaSupport> {
    let mut out = GammaSupport { k, evaluated: 0, sup_inside: 0.0, sup_outside: 0.0, violations: 0 };
    for j in 0..4u8 {
        for beta in BetaClass::ALL {
            for a in 0..4u8 {
                for b in 2..=k + extra {
                    let v = gamma_ramified(beta, ramified_element(j, k), a, b)?;
                    out.evaluated += 1;
                    if b <= k + 5 {
                        out.sup_inside = out.sup_inside.max(v.norm());
                    } else {
                        out.sup_outside = out.sup_outside.max(v.norm());
                        if v.norm() > v.err {
                            out.violations += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Agreement of `Γ_β(ν ν′, i^aλ^b) = conj((i^aλ^b/ν′)₄) Γ_{β·ν′}(ν, i^aλ^b)`
/// over random `ν = i^jλ^k` (`k ≤ 3`), primary `N(ν′) ≤ 200` and `2 ≤ b ≤ k+5`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GammaTransformReport {
    pub tuples: usize,
    pub failures: usize,
    pub max_discrepancy: f64,
}

pub fn gamma_transform_check(tuples: usize, seed: u64) -> Result<GammaTransformReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let primaries = primary_elements_upto(200);
    let mut out = GammaTransformReport { tuples, failures: 0, max_discrepancy: 0.0 };
    for _ in 0..tuples {
        let np = primaries[rng.gen_range(0..primaries.len())];
        let (j, k) = (rng.gen_range(0..4u8), rng.gen_range(0..=3u32));
        let a = rng.gen_range(0..4u8);
        let b = rng.gen_range(2..=k + 5);
        let beta = BetaClass::ALL[rng.gen_range(0..2)];
        let lhs = gamma_ramified(beta, ramified_element(j, k) * np, a, b)?;
        let sym = if np == GaussInt::ONE { SymbolValue::ONE } else { quartic_symbol(ramified_element(a, b), np)? };
        let class = np.class().expect("primary");
        let rhs = gamma_ramified(beta.mul(class), ramified_element(j, k), a, b)?.mul_exact_unit(sym.conj().to_complex());
        let d = (lhs.value - rhs.value).norm();
        out.max_discrepancy = out.max_discrepancy.max(d);
        if d > lhs.err + rhs.err {
            out.failures += 1;
        }
    }
    Ok(out)
}
