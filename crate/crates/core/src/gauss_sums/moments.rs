//! Powers of normalized prime Gauss sums.

use num_complex::Complex64;

use super::complex::ComplexVal;
use crate::error::{Error, Result};
use crate::gaussint::GaussInt;
use crate::symbols::grossencharakter;

/// `g̃₄(π)^k` from the fourth-power and square formulas: a Grössencharakter
/// power times at most one copy of `g̃₄(π)`. Only degree-one primes qualify.
///
/// With `g̃₄(π)² = −π/|π| = −(π̄/|π|)^{−1}` and `k = 4m + r`:
/// `g̃^k = (π̄/|π|)^{−2m} · {1, g̃, −(π̄/|π|)^{−1}, −(π̄/|π|)^{−1} g̃}`.
pub fn moment_reduce(pi: GaussInt, k: i64, g_tilde: ComplexVal) -> Result<ComplexVal> {
    if k == 0 {
        return Err(Error::Precondition("moment exponent must be nonzero".into()));
    }
    if !pi.is_primary() {
        return Err(Error::NotPrimary(pi));
    }
    if super::compose::prime_degree(pi)? != 1 {
        return Err(Error::WrongPrimeType { pi, expected: 1 });
    }
    let r = k.rem_euclid(4);
    let m = (k - r) / 4;
    let base = ComplexVal::rounded(grossencharakter(pi, -2 * m)?);
    let twist = || ComplexVal::rounded(-grossencharakter(pi, -1).unwrap());
    Ok(match r {
        0 => base,
        1 => base * g_tilde,
        2 => base * twist(),
        _ => base * twist() * g_tilde,
    })
}

/// `g̃^k` by repeated multiplication, the reference route.
pub fn direct_power(g_tilde: ComplexVal, k: i64) -> ComplexVal {
    g_tilde.powi(k as i32)
}

pub fn unit_complex(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss_sums::direct::g4_direct;

    fn tilde(pi: GaussInt) -> ComplexVal {
        g4_direct(GaussInt::ONE, pi).unwrap().scale(1.0 / (pi.norm() as f64).sqrt())
    }

    #[test]
    fn examples() {
        let pi = GaussInt::new(-1, 2);
        let g = tilde(pi);
        let four = moment_reduce(pi, 4, g).unwrap();
        let expect = grossencharakter(pi, -2).unwrap();
        assert!((four.value - expect).norm() < 1e-14);
        let two = moment_reduce(pi, 2, g).unwrap();
        assert!((two.value + Complex64::new(-1.0, 2.0) / 5f64.sqrt()).norm() < 1e-14);
        let one = moment_reduce(pi, 1, g).unwrap();
        assert!((one.value - g.value).norm() < 1e-15);
        assert!(matches!(moment_reduce(GaussInt::new(-3, 0), 1, g), Err(Error::WrongPrimeType { .. })));
    }

    #[test]
    fn agrees_with_repeated_multiplication() {
        for pi in [GaussInt::new(-1, 2), GaussInt::new(3, 2), GaussInt::new(1, 4), GaussInt::new(5, 4), GaussInt::new(-1, -10)] {
            let g = tilde(pi);
            for k in (-8..=8).filter(|&k| k != 0) {
                let a = moment_reduce(pi, k, g).unwrap();
                let b = direct_power(g, k);
                assert!((a.value - b.value).norm() < 1e-10, "{pi} {k}");
            }
        }
    }
}

/// The reduction with the rational-character square formula,
/// `g̃² = −(−1/π)₄ (π̄/|π|)^{−1}`; differs from [`moment_reduce`] by `(−1/π)₄`
/// for odd `k mod 4` classes 2 and 3.
pub fn moment_reduce_rational_character(pi: GaussInt, k: i64, g_tilde: ComplexVal) -> Result<ComplexVal> {
    let v = moment_reduce(pi, k, g_tilde)?;
    let r = k.rem_euclid(4);
    if r >= 2 {
        let m1 = crate::symbols::quartic_symbol(GaussInt::new(-1, 0), pi)?.to_complex();
        return Ok(v.mul_exact_unit(m1));
    }
    Ok(v)
}
