//! Deterministic floating-point reductions.
//!
//! Results never depend on thread count: parallel callers split work into
//! fixed-size chunks and combine the chunk results with [`pairwise`].

use num_complex::Complex64;

const LEAF: usize = 64;

/// Pairwise (cascade) summation; error grows like `O(ε log n)`.
pub fn pairwise(xs: &[Complex64]) -> Complex64 {
    if xs.len() <= LEAF {
        return xs.iter().fold(Complex64::new(0.0, 0.0), |a, &b| a + b);
    }
    let mid = xs.len() / 2;
    pairwise(&xs[..mid]) + pairwise(&xs[mid..])
}

pub fn pairwise_real(xs: &[f64]) -> f64 {
    if xs.len() <= LEAF {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_real(&xs[..mid]) + pairwise_real(&xs[mid..])
}

/// Knuth's error-free transformation: `a + b = s + e` exactly.
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Running compensated sum of complex terms.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    hi: Complex64,
    lo: Complex64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        let (re, er) = two_sum(self.hi.re, z.re);
        let (im, ei) = two_sum(self.hi.im, z.im);
        self.hi = Complex64::new(re, im);
        self.lo += Complex64::new(er, ei);
    }

    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.hi);
        self.lo += other.lo;
    }

    pub fn value(&self) -> Complex64 {
        self.hi + self.lo
    }
}

/// Sum in a fixed order with the requested precision.
pub fn sum_with(xs: &[Complex64], precision: Precision) -> Complex64 {
    match precision {
        Precision::Double => pairwise(xs),
        Precision::Compensated => {
            let mut acc = CompensatedSum::new();
            for &x in xs {
                acc.add(x);
            }
            acc.value()
        }
    }
}

/// Accumulation mode for long character sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub enum Precision {
    #[default]
    Double,
    /// Error-free TwoSum accumulation; roughly double-double accuracy for sums.
    Compensated,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_beats_naive_on_ill_conditioned_input() {
        let xs: Vec<Complex64> = (0..100_000).map(|k| Complex64::new(0.1, (k % 7) as f64 * 1e-3)).collect();
        let exact_re = 10_000.0;
        let pw = pairwise(&xs);
        assert!((pw.re - exact_re).abs() < 1e-9);
        let comp = sum_with(&xs, Precision::Compensated);
        assert!((comp.re - exact_re).abs() < 1e-10);
    }

    #[test]
    fn two_sum_is_exact() {
        let (s, e) = two_sum(1.0, 1e-17);
        assert_eq!(s, 1.0);
        assert_eq!(e, 1e-17);
    }
}
