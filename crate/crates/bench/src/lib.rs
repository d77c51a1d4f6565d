//! Fixtures shared by the benchmarks.

use spectrunc::{Radius, Truncation};

/// The closed ball truncation with integer `Λ²`.
pub fn ball(d: usize, lambda_sq: i64) -> Truncation {
    Truncation::ball(d, Radius::squared(lambda_sq).expect("nonnegative")).expect("valid truncation")
}
