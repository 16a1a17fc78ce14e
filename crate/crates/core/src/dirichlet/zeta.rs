use num_complex::Complex64;

use crate::analytic::gchar;
use crate::error::Result;
use crate::gauss_sums::complex::{sum_vals, EPS};
use crate::gauss_sums::ComplexVal;
use crate::sieve::primary_elements_upto;

/// `Σ_{m primary, N(m) ≤ n_max} (m̄/|m|)^{4ℓ} N(m)^{−s}`.
pub fn hecke_zeta_partial(s: Complex64, ell: i64, n_max: u128) -> Result<ComplexVal> {
    let terms: Vec<ComplexVal> = primary_elements_upto(n_max)
        .into_iter()
        .map(|m| {
            let n = m.norm() as f64;
            let w = (-s * n.ln()).exp();
            Ok(gchar(m, 4 * ell)? * ComplexVal::new(w, 8.0 * EPS * w.norm() * (1.0 + s.norm() * n.ln())))
        })
        .collect::<Result<_>>()?;
    Ok(sum_vals(&terms))
}

/// `ζ(2)·L(2, χ₋₄)·3/4`, the value of the ℓ = 0 series at `s = 2`.
pub fn hecke_zeta_trivial_at_two() -> f64 {
    const CATALAN: f64 = 0.915_965_594_177_219_015;
    std::f64::consts::PI.powi(2) / 6.0 * CATALAN * 0.75
}
