//! Prime sums of normalized quartic Gauss sums: smoothed and sharp sums,
//! Weyl moments, and the pieces of Vaughan's identity.

mod rows;
mod sums;
mod table;
mod vaughan;
mod weight;

pub use rows::{read_csv, read_json, write_csv, write_json, ExperimentRow, ROW_SCHEMA};
pub use sums::{conjecture_scan, f_sum, geometric_grid, grossen_sum, h_sum, weyl_moment, MomentPair};
pub use table::{TwistEntry, TwistedTable};
pub use vaughan::{
    adaptive_simpson, sigma_bound_check, type2_bilinear, type2_weight_bound, vaughan_check, vaughan_sigma, vaughan_sums, SigmaBoundReport,
    TypeTwo, VaughanPiece, VaughanReport, VaughanSums,
};
pub use weight::SmoothWeight;

use crate::error::Result;
use crate::gauss_sums::complex::EPS;
use crate::gauss_sums::ComplexVal;
use crate::gaussint::GaussInt;
use crate::symbols::grossencharakter;

/// `(c̄/|c|)^ℓ` with a phase error that grows with `|ℓ|`.
pub(crate) fn gchar(c: GaussInt, ell: i64) -> Result<ComplexVal> {
    let v = grossencharakter(c, ell)?;
    if ell == 0 {
        return Ok(ComplexVal::exact(v));
    }
    Ok(ComplexVal::new(v, 4.0 * (ell.unsigned_abs() as f64 + 2.0) * EPS))
}
