//! Fixed inputs for the benchmarks.

use pseudosum::cyclic::Permutation;
use pseudosum::Distribution;

/// A dense law on `[0:n)` with weights `1, 2, ..., n`.
pub fn ramp(n: usize) -> Distribution {
    let total = (n * (n + 1) / 2) as f64;
    Distribution::new((1..=n).map(|k| k as f64 / total).collect()).expect("ramp is a distribution")
}

/// The relabeling `k -> (k * step) % n`, a permutation whenever `gcd(step, n) = 1`.
pub fn stride(n: usize, step: usize) -> Permutation {
    Permutation::new((0..n).map(|k| (k * step) % n).collect()).expect("step coprime to n")
}
