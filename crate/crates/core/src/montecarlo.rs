//! Seeded simulation of i.i.d. pseudo-sums.
//!
//! Trial `i` draws its uniforms from ChaCha8 stream `i` under the configured
//! seed, so each trial's randomness depends only on `(seed, i)`. Histograms
//! are integer counts merged by addition, which makes the output independent
//! of how trials are split across workers.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dist::Distribution;
use crate::error::{check_dim, Error, Result};
use crate::lut::LutTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub seed: u64,
    pub trials: usize,
    /// Number of summands per trial.
    pub m: usize,
}

impl SimConfig {
    pub fn new(seed: u64, trials: usize, m: usize) -> Result<Self> {
        if trials == 0 || m == 0 {
            return Err(Error::Input(format!(
                "trials and m must be at least 1, got trials = {trials}, m = {m}"
            )));
        }
        Ok(Self { seed, trials, m })
    }
}

/// Uniform on `[0, 1)` with 53 random mantissa bits.
pub fn unit_f64(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// The RNG stream owned by one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Inverse-CDF sampling: the smallest `k` whose cumulative mass exceeds `u`.
pub fn sample_index(p: &Distribution, u: f64) -> Result<usize> {
    if !(0.0..1.0).contains(&u) {
        return Err(Error::Input(format!("u must lie in [0, 1), got {u}")));
    }
    let mut acc = 0.0;
    for (k, &v) in p.probs().iter().enumerate() {
        acc += v;
        if acc > u {
            return Ok(k);
        }
    }
    // Rounding left the total just below u: take the last atom.
    Ok(p.probs().iter().rposition(|&v| v > 0.0).unwrap_or(p.n() - 1))
}

/// Histogram of `X_1 ⊕ ... ⊕ X_m` (left fold) over `cfg.trials` trials.
pub fn empirical_counts(
    table: &LutTable,
    p: &Distribution,
    cfg: &SimConfig,
    workers: Option<usize>,
) -> Result<Vec<u64>> {
    let n = table.n();
    check_dim(n, p.n())?;
    let cfg = SimConfig::new(cfg.seed, cfg.trials, cfg.m)?;
    let cdf: Vec<f64> = p
        .probs()
        .iter()
        .scan(0.0, |acc, v| {
            *acc += v;
            Some(*acc)
        })
        .collect();
    let last = p.probs().iter().rposition(|&v| v > 0.0).unwrap_or(n - 1);
    let draw = |rng: &mut ChaCha8Rng| {
        let u = unit_f64(rng);
        cdf.iter().position(|&c| c > u).unwrap_or(last)
    };
    let run = || {
        (0..cfg.trials as u64)
            .into_par_iter()
            .fold(
                || vec![0u64; n],
                |mut hist, trial| {
                    let mut rng = trial_rng(cfg.seed, trial);
                    let mut acc = draw(&mut rng);
                    for _ in 1..cfg.m {
                        acc = table.at(acc, draw(&mut rng));
                    }
                    hist[acc] += 1;
                    hist
                },
            )
            .reduce(
                || vec![0u64; n],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            )
    };
    match workers {
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| Error::Input(format!("cannot start worker pool: {e}")))?;
            Ok(pool.install(run))
        }
        None => Ok(run()),
    }
}

/// Empirical law of the `m`-fold pseudo-sum.
pub fn empirical_fold(table: &LutTable, p: &Distribution, cfg: &SimConfig) -> Result<Distribution> {
    empirical_fold_with_workers(table, p, cfg, None)
}

/// [`empirical_fold`] on a dedicated pool of `workers` threads (`None` uses
/// the global pool). The result does not depend on `workers`.
pub fn empirical_fold_with_workers(
    table: &LutTable,
    p: &Distribution,
    cfg: &SimConfig,
    workers: Option<usize>,
) -> Result<Distribution> {
    let counts = empirical_counts(table, p, cfg, workers)?;
    let total = cfg.trials as f64;
    Ok(Distribution::from_raw(
        counts.into_iter().map(|c| c as f64 / total).collect(),
    ))
}
