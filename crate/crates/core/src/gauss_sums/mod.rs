//! Quartic and quadratic Gauss sums over `Z[i]`.

pub mod cache;
pub mod checks;
pub mod complex;
pub mod compose;
pub mod direct;
pub mod fast;
pub mod moments;

pub use cache::{GaussSumCache, GaussSumRecord};
pub use checks::{prime_residuals, PrimeResiduals};
pub use complex::ComplexVal;
pub use compose::{prime_degree, GaussSumEngine, PrimeMode};
pub use direct::{g2_direct, g4_direct};
pub use fast::{g4_prime_fast, g4_prime_fast_pair};
pub use moments::moment_reduce;
