use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::delta::{c_bit, class_bit, class_of, divisors, minus_one_exp, squarefree_primes, DeltaPoly};
use crate::error::Result;
use crate::gaussint::{BetaClass, GaussInt};

/// One `d | α` contribution to the residue at `s = 5/4`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidueTerm {
    pub d: GaussInt,
    /// Class of the residue of `ψ` that this term multiplies.
    pub label: BetaClass,
    pub coeff: Complex64,
}

/// Coefficients of the residues `r_γ` in `Res_{s=5/4} ψ_β(s, 1, 0; α)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidueCombo {
    pub alpha: GaussInt,
    pub beta: BetaClass,
    pub delta_at_pole: Complex64,
    pub terms: Vec<ResidueTerm>,
}

/// Exponent of `N(α)` in the bound checked by [`ResidueCombo::within_bound`].
pub const RESIDUE_DECAY: f64 = 0.9;

impl ResidueCombo {
    /// `Σ_d |coeff_d|`, which never undercounts cancellation across labels.
    pub fn l1(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.norm()).sum()
    }

    /// Coefficient per label after merging terms.
    pub fn combined(&self) -> Vec<(BetaClass, Complex64)> {
        BetaClass::ALL
            .iter()
            .map(|&b| (b, self.terms.iter().filter(|t| t.label == b).map(|t| t.coeff).sum()))
            .filter(|(_, z): &(BetaClass, Complex64)| z.norm() > 0.0)
            .collect()
    }

    pub fn bound(&self) -> f64 {
        4.0 * (self.alpha.norm() as f64).powf(-RESIDUE_DECAY)
    }

    pub fn within_bound(&self) -> bool {
        self.l1() <= self.bound()
    }
}

/// Expand the residue of `ψ_β(s, 1, 0; α)` through the level-lowering identity.
pub fn residue_combo(alpha: GaussInt, beta: BetaClass) -> Result<ResidueCombo> {
    let primes = squarefree_primes(alpha)?;
    let ca = class_of(alpha)?;
    let delta_at_pole = DeltaPoly::new(beta, 0, alpha)?.eval_real(1.25)?;
    let na = alpha.norm() as f64;
    let outer = if c_bit(ca, ca.mul(beta)) == 1 { -1.0 } else { 1.0 } / (delta_at_pole * na);
    let mut terms = Vec::with_capacity(1 << primes.len());
    for (d, ps) in divisors(&primes) {
        let cd = class_of(d)?;
        let cdab = cd.mul(ca).mul(beta);
        let mut unit = 2 * (ps.len() as u32 % 2) + 2 * u32::from(c_bit(cd, cdab) + c_bit(cd, cd.mul(ca)));
        unit += minus_one_exp(d)? as u32;
        let quotient_class = cd.mul(ca);
        let label = quotient_class.mul(cdab);
        if quotient_class == BetaClass::OnePlusLambda3 {
            unit += 2 * u32::from(class_bit(cdab));
        }
        let u = GaussInt::unit((unit % 4) as i64).to_complex();
        terms.push(ResidueTerm { d, label, coeff: outer * u / d.norm() as f64 });
    }
    Ok(ResidueCombo { alpha, beta, delta_at_pole, terms })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_collapse_and_bound_holds() {
        for f in crate::sieve::primary_factored_upto(3000, true) {
            for beta in BetaClass::ALL {
                let r = residue_combo(f.c, beta).unwrap();
                assert!(r.terms.iter().all(|t| t.label == beta));
                assert!(r.within_bound(), "{} {beta}: {} > {}", f.c, r.l1(), r.bound());
                let merged: f64 = r.combined().iter().map(|(_, z)| z.norm()).sum();
                assert!(merged <= r.l1() + 1e-15);
            }
        }
    }

    #[test]
    fn trivial_level() {
        let r = residue_combo(GaussInt::ONE, BetaClass::One).unwrap();
        assert_eq!(r.terms.len(), 1);
        assert_eq!(r.terms[0].coeff, Complex64::new(1.0, 0.0));
    }
}
