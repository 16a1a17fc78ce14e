//! Closed-form identities at primes, used as validation gates.

use num_complex::Complex64;

use super::cache::GaussSumRecord;
use super::complex::ComplexVal;
use crate::gaussint::GaussInt;
use crate::symbols::SymbolValue;

/// Residuals of the prime identities for a split prime `π` with `N(π) = p`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct PrimeResiduals {
    /// `|g⁴ − π³π̄|`
    pub fourth_power: f64,
    /// `|g² + √p π|`
    pub square_power: f64,
    /// `||g| − √p|`
    pub modulus: f64,
}

/// The square formula for `g₄(π) = Σ (d/π)₄ ě(d/π)`: `g₄(π)² = −√p·π`.
///
/// The form `−(−1/π)₄ √p π` belongs to the sum `Σ χ_π(t) e(t/p)`; the two sums
/// differ by `χ_π(2a)` with `π = a + bi`, and `χ_π(2a)² = (2/p) = (−1/π)₄`.
pub fn square_target(pi: GaussInt) -> Complex64 {
    -(pi.norm() as f64).sqrt() * pi.to_complex()
}

/// `−(−1/π)₄ √p π`, the square formula for the `e(t/p)` normalization.
pub fn square_target_rational_character(pi: GaussInt, minus_one: SymbolValue) -> Complex64 {
    -minus_one.to_complex() * (pi.norm() as f64).sqrt() * pi.to_complex()
}

/// `g₄(−p)` for an inert prime `p ≡ 3 (mod 4)`: `(−1)^{(p+1)/4} p` (Stickelberger).
pub fn inert_g4(p: u64) -> f64 {
    if (p + 1) / 4 % 2 == 0 {
        p as f64
    } else {
        -(p as f64)
    }
}

pub fn prime_residuals(pi: GaussInt, g4: Complex64, _minus_one: SymbolValue) -> PrimeResiduals {
    let p = pi.norm() as f64;
    let z = pi.to_complex();
    let target4 = z * z * z * z.conj();
    let g2 = g4 * g4;
    PrimeResiduals {
        fourth_power: (g2 * g2 - target4).norm(),
        square_power: (g2 - square_target(pi)).norm(),
        modulus: (g4.norm() - p.sqrt()).abs(),
    }
}

impl PrimeResiduals {
    /// Check flags at tolerances `10⁻⁶p²`, `10⁻⁶p`, `10⁻⁶√p`.
    pub fn flags(&self, p: f64) -> u8 {
        let mut f = 0;
        if self.fourth_power <= 1e-6 * p * p {
            f |= GaussSumRecord::FOURTH_POWER;
        }
        if self.square_power <= 1e-6 * p {
            f |= GaussSumRecord::SQUARE_POWER;
        }
        if self.modulus <= 1e-6 * p.sqrt() {
            f |= GaussSumRecord::SQRT_CANCEL;
        }
        f
    }
}

pub fn prime_check_flags(pi: GaussInt, g4: ComplexVal, minus_one: SymbolValue) -> u8 {
    prime_residuals(pi, g4.value, minus_one).flags(pi.norm() as f64)
}
