use super::factor::factor;
use super::GaussInt;
use crate::error::{Error, Result};

/// Möbius function on primary elements.
pub fn moebius(c: GaussInt) -> Result<i8> {
    if !c.is_primary() {
        return Err(Error::NotPrimary(c));
    }
    let f = factor(c)?;
    if f.factors.iter().any(|&(_, e)| e > 1) {
        return Ok(0);
    }
    Ok(if f.factors.len() % 2 == 0 { 1 } else { -1 })
}

/// Von Mangoldt function on primary elements: `log N(π)` on prime powers, else 0.
pub fn von_mangoldt(c: GaussInt) -> Result<f64> {
    if !c.is_primary() {
        return Err(Error::NotPrimary(c));
    }
    let f = factor(c)?;
    Ok(match f.factors.as_slice() {
        [(p, _)] => (p.norm() as f64).ln(),
        _ => 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: i64, im: i64) -> GaussInt {
        GaussInt::new(re, im)
    }

    #[test]
    fn examples() {
        assert_eq!(moebius(g(-1, 2)).unwrap(), -1);
        assert!((von_mangoldt(g(-1, 2)).unwrap() - 5f64.ln()).abs() < 1e-15);
        assert_eq!(moebius(g(5, 0)).unwrap(), 1);
        assert!((von_mangoldt(g(-3, 0)).unwrap() - 9f64.ln()).abs() < 1e-15);
        assert_eq!(moebius(GaussInt::ONE).unwrap(), 1);
        assert_eq!(von_mangoldt(GaussInt::ONE).unwrap(), 0.0);
        assert_eq!(moebius(g(-3, 4)).unwrap(), 0);
        assert!(moebius(g(2, 1)).is_err());
    }

    #[test]
    fn squarefree_iff_moebius_nonzero() {
        for re in -40..=40 {
            for im in -40..=40 {
                let c = g(re, im);
                if !c.is_primary() {
                    continue;
                }
                let f = factor(c).unwrap();
                let sqf = f.lambda_exp == 0 && f.factors.iter().all(|&(_, e)| e == 1);
                assert_eq!(moebius(c).unwrap() != 0, sqf, "{c}");
            }
        }
    }
}
