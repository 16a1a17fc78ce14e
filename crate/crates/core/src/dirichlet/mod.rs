//! Truncated Dirichlet series of Gauss sums, the identities between them, the
//! ramified local sums, the Hecke zeta function and the quadratic large sieve.

pub mod delta;
pub mod gamma;
pub mod identities;
pub mod large_sieve;
pub mod residue;
pub mod series;
pub mod zeta;

pub use delta::{DeltaPoly, DeltaTerm};
pub use gamma::{gamma_ramified, gamma_support_scan, gamma_transform_check, ramified_element, GammaSupport, GammaTransformReport, GAMMA_MAX_B};
pub use identities::{check_identity, identity_sides, Identity, IdentityReport, IDENTITY_REL_TOL};
pub use large_sieve::{large_sieve_grid, large_sieve_ratio, LargeSieveReport, SieveCell, SieveFamily, SieveSlope};
pub use residue::{residue_combo, ResidueCombo, ResidueTerm, RESIDUE_DECAY};
pub use series::{psi_series, DirichletSeriesTrunc, Level, SeriesBuilder};
pub use zeta::{hecke_zeta_partial, hecke_zeta_trivial_at_two};
