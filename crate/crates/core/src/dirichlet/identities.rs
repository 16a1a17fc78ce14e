use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::delta::{c_bit, class_of, divisors, minus_one_exp, squarefree_primes, unit_val, DeltaPoly};
use super::series::{DirichletSeriesTrunc, Level, SeriesBuilder};
use crate::analytic::gchar;
use crate::error::{Error, Result};
use crate::gaussint::{gcd, BetaClass, GaussInt};

/// The three rearrangements of `ψ^{(4)}` under a level condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Identity {
    /// Pull `α` out of `c ≡ 0 (α)`.
    Id1,
    /// Remove the coprimality condition on `ψ_{β⋆}(s, α²ν, ℓ; α)`.
    Id2,
    /// `id1` followed by `id2`.
    Id3,
}

impl Identity {
    pub const ALL: [Identity; 3] = [Identity::Id1, Identity::Id2, Identity::Id3];
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Identity::Id1 => "id1",
            Identity::Id2 => "id2",
            Identity::Id3 => "id3",
        })
    }
}

impl FromStr for Identity {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "id1" | "1" => Ok(Identity::Id1),
            "id2" | "2" => Ok(Identity::Id2),
            "id3" | "3" => Ok(Identity::Id3),
            other => Err(format!("unknown identity '{other}'")),
        }
    }
}

/// Outcome of a coefficientwise comparison of both sides.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: Identity,
    pub alpha: GaussInt,
    pub nu: GaussInt,
    pub ell: i64,
    pub beta: BetaClass,
    #[serde(rename = "N_max")]
    pub n_max: u64,
    pub max_discrepancy: f64,
    pub err_budget: f64,
    /// Largest coefficient magnitude on either side.
    pub scale: f64,
    pub pass: bool,
}

/// Relative slack applied on top of the propagated error bound.
pub const IDENTITY_REL_TOL: f64 = 1e-8;

fn sign(bit: u8) -> u32 {
    2 * u32::from(bit & 1)
}

/// `(lhs, rhs)` for one identity.
pub fn identity_sides(
    builder: &SeriesBuilder<'_>,
    which: Identity,
    alpha: GaussInt,
    nu: GaussInt,
    ell: i64,
    beta: BetaClass,
) -> Result<(DirichletSeriesTrunc, DirichletSeriesTrunc)> {
    let primes = squarefree_primes(alpha)?;
    if !gcd(alpha, nu).is_unit() {
        return Err(Error::Precondition(format!("({alpha}, {nu}) is not 1")));
    }
    let engine_g4 = |v: GaussInt, c: GaussInt| builder.engine().g4(v, c);
    let n_max = builder.n_max();
    let ca = class_of(alpha)?;
    let na = alpha.norm() as u64;
    let alpha2 = alpha * alpha;
    let delta = || DeltaPoly::new(beta, ell, alpha)?.to_series(n_max);
    match which {
        Identity::Id1 => {
            let lhs = builder.psi(beta, nu, ell, Level::Divisible(alpha))?;
            let k = unit_val(sign(c_bit(ca, ca.mul(beta)))) * engine_g4(nu, alpha)? * gchar(alpha, ell)?;
            let inner = builder.psi(ca.mul(beta), nu * alpha2, ell, Level::Coprime(alpha))?;
            Ok((lhs, inner.dilate(na).scale(k)))
        }
        Identity::Id2 => {
            let lhs = builder.psi(beta, alpha2 * nu, ell, Level::Coprime(alpha))?.mul(&delta()?);
            let mut rhs = DirichletSeriesTrunc::zero(n_max);
            for (d, ps) in divisors(&primes) {
                let nd = d.norm() as u64;
                let Some(nd3) = nd.checked_pow(3).filter(|&v| v <= n_max) else { continue };
                let cd = class_of(d)?;
                let q = alpha.div_exact(d).expect("d | α");
                let nu_d = nu * q * q;
                let unit = sign(ps.len() as u8) + sign(c_bit(cd, cd.mul(beta))) + minus_one_exp(d)? as u32;
                let k = unit_val(unit) * engine_g4(nu_d, d)?.conj() * gchar(d, 3 * ell)?;
                let k = k.scale((nd * nd) as f64);
                let term = builder.psi(cd.mul(beta), nu_d, ell, Level::All)?.dilate(nd3).scale(k);
                rhs = rhs.add(&term);
            }
            Ok((lhs, rhs))
        }
        Identity::Id3 => {
            let lhs = builder.psi(beta, nu, ell, Level::Divisible(alpha))?.mul(&delta()?);
            let outer = unit_val(sign(c_bit(ca, ca.mul(beta)))) * gchar(alpha, ell)?;
            let cab = ca.mul(beta);
            let mut inner = DirichletSeriesTrunc::zero(n_max);
            for (d, ps) in divisors(&primes) {
                let nd = d.norm() as u64;
                let Some(nd3) = nd.checked_pow(3).filter(|&v| v.saturating_mul(na) <= n_max) else { continue };
                let cd = class_of(d)?;
                let q = alpha.div_exact(d).expect("d | α");
                let unit = sign(ps.len() as u8)
                    + sign(c_bit(cd, cd.mul(cab)) + c_bit(cd, cd.mul(ca)))
                    + minus_one_exp(d)? as u32;
                let k = unit_val(unit) * engine_g4(nu, q)? * gchar(d, 3 * ell)?;
                let k = k.scale((nd * nd * nd) as f64);
                let term = builder.psi(cd.mul(cab), nu * q * q, ell, Level::All)?.dilate(nd3).scale(k);
                inner = inner.add(&term);
            }
            Ok((lhs, inner.dilate(na).scale(outer)))
        }
    }
}

/// Compare both sides of `which` coefficientwise up to the builder's cutoff.
pub fn check_identity(
    builder: &SeriesBuilder<'_>,
    which: Identity,
    alpha: GaussInt,
    nu: GaussInt,
    ell: i64,
    beta: BetaClass,
) -> Result<IdentityReport> {
    let (lhs, rhs) = identity_sides(builder, which, alpha, nu, ell, beta)?;
    let (max_discrepancy, err_budget, scale) = lhs.compare(&rhs);
    let pass = max_discrepancy <= err_budget.max(IDENTITY_REL_TOL * scale.max(1.0));
    Ok(IdentityReport { identity: which, alpha, nu, ell, beta, n_max: builder.n_max(), max_discrepancy, err_budget, scale, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss_sums::GaussSumEngine;

    fn g(re: i64, im: i64) -> GaussInt {
        GaussInt::new(re, im)
    }

    #[test]
    fn identities_hold_on_small_levels() {
        let e = GaussSumEngine::new();
        let b = SeriesBuilder::new(&e, 1500);
        for alpha in [GaussInt::ONE, g(-1, 2), g(-3, 0), g(3, 2), g(-1, 2) * g(-1, -2)] {
            for nu in [GaussInt::ONE, g(1, 1), g(2, 3)] {
                if !gcd(alpha, nu).is_unit() {
                    continue;
                }
                for ell in [0, 1, -4] {
                    for beta in BetaClass::ALL {
                        for which in Identity::ALL {
                            let r = check_identity(&b, which, alpha, nu, ell, beta).unwrap();
                            assert!(r.pass, "{r:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn report_json_fields() {
        let e = GaussSumEngine::new();
        let b = SeriesBuilder::new(&e, 200);
        let r = check_identity(&b, Identity::Id1, g(-1, 2), GaussInt::ONE, 0, BetaClass::One).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        for key in ["identity", "alpha", "nu", "ell", "beta", "N_max", "max_discrepancy", "err_budget", "pass"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert!(check_identity(&b, Identity::Id1, g(-1, 2), g(-1, 2), 0, BetaClass::One).is_err());
    }
}
