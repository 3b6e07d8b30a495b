//! Probability vectors on an alphabet and their pseudo-convolution.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::lut::LutTable;

/// Largest deviation of the total mass from 1 accepted (then renormalized)
/// by [`Distribution::new`].
pub const CONSTRUCTION_TOL: f64 = 1e-9;
/// Default tolerance of fixed-point tests.
pub const DEFAULT_STABLE_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_DOUBLINGS: usize = 64;

// Grid used to bucket iterates when looking for a recurrence.
const RECURRENCE_QUANTUM: f64 = 1e-10;
// Consecutive sub-tolerance doubling steps required before a limit is accepted.
const SETTLE_STEPS: usize = 2;

/// A probability vector `p_k = Pr(X = x_k)` over alphabet indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    p: Vec<f64>,
}

impl Distribution {
    /// Validates and renormalizes `p`. Entries must be finite and
    /// non-negative and sum to one within [`CONSTRUCTION_TOL`].
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::Validity("distribution must have at least one entry".into()));
        }
        if let Some((k, v)) = p.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < 0.0) {
            return Err(Error::Validity(format!(
                "probability p[{k}] = {v} is negative or not finite"
            )));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > CONSTRUCTION_TOL {
            return Err(Error::Validity(format!(
                "probabilities sum to {total}, not 1 (tolerance {CONSTRUCTION_TOL:e})"
            )));
        }
        Ok(Self {
            p: p.into_iter().map(|v| v / total).collect(),
        })
    }

    /// Wraps a vector already known to be a probability vector up to rounding.
    pub(crate) fn from_raw(p: Vec<f64>) -> Self {
        debug_assert!(!p.is_empty());
        Self { p }
    }

    pub fn point(n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::Input(format!("point {k} out of range for size {n}")));
        }
        let mut p = vec![0.0; n];
        p[k] = 1.0;
        Ok(Self { p })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Input("size must be positive".into()));
        }
        Ok(Self {
            p: vec![1.0 / n as f64; n],
        })
    }

    /// Uniform law on a set of indices (duplicates ignored).
    pub fn uniform_on(n: usize, support: &[usize]) -> Result<Self> {
        let mut p = vec![0.0; n];
        for &k in support {
            if k >= n {
                return Err(Error::Input(format!("support point {k} out of range for size {n}")));
            }
            p[k] = 1.0;
        }
        let count = p.iter().filter(|&&v| v > 0.0).count();
        if count == 0 {
            return Err(Error::Input("support must be nonempty".into()));
        }
        p.iter_mut().for_each(|v| *v /= count as f64);
        Ok(Self { p })
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn prob(&self, k: usize) -> f64 {
        self.p[k]
    }

    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    pub fn into_probs(self) -> Vec<f64> {
        self.p
    }

    /// Indices carrying positive mass.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n()).filter(|&k| self.p[k] > 0.0).collect()
    }

    /// Index of the unique atom, when the law is a point mass within `tol`.
    pub fn as_point(&self, tol: f64) -> Option<usize> {
        let (k, &v) = self
            .p
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))?;
        (v >= 1.0 - tol).then_some(k)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: DistFile = serde_json::from_str(text)?;
        if raw.n != raw.p.len() {
            return Err(Error::Validity(format!(
                "\"n\" is {} but \"p\" has {} entries",
                raw.n,
                raw.p.len()
            )));
        }
        Self::new(raw.p)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(DistFile {
            n: self.n(),
            p: self.p.clone(),
        })
        .expect("distribution serializes")
    }
}

#[derive(Serialize, Deserialize)]
struct DistFile {
    n: usize,
    p: Vec<f64>,
}

/// Law of `X ⊕ Y` for independent `X ~ p`, `Y ~ q`.
pub fn convolve(table: &LutTable, p: &Distribution, q: &Distribution) -> Result<Distribution> {
    let n = table.n();
    check_dim(n, p.n())?;
    check_dim(n, q.n())?;
    let mut r = vec![0.0; n];
    if table.is_symmetric() {
        // Pairs are visited as {i, j} with both orders summed first, so the
        // result is bitwise symmetric in (p, q).
        for i in 0..n {
            let (pi, qi) = (p.p[i], q.p[i]);
            if pi == 0.0 && qi == 0.0 {
                continue;
            }
            r[table.at(i, i)] += pi * qi;
            for j in i + 1..n {
                let term = pi * q.p[j] + p.p[j] * qi;
                if term != 0.0 {
                    r[table.at(i, j)] += term;
                }
            }
        }
    } else {
        for i in 0..n {
            let pi = p.p[i];
            if pi == 0.0 {
                continue;
            }
            for j in 0..n {
                let qj = q.p[j];
                if qj != 0.0 {
                    r[table.at(i, j)] += pi * qj;
                }
            }
        }
    }
    Ok(Distribution::from_raw(r))
}

/// Law of the `m`-fold i.i.d. pseudo-sum, by binary doubling.
///
/// `m = 0` yields the point mass at the identity when the table has one.
pub fn power(table: &LutTable, p: &Distribution, m: usize) -> Result<Distribution> {
    check_dim(table.n(), p.n())?;
    table.require_associative("power")?;
    if m == 0 {
        return match table.find_identity() {
            Some(e) => Distribution::point(table.n(), e),
            None => Err(Error::Input(
                "m = 0 needs an identity element and the table has none".into(),
            )),
        };
    }
    let mut acc: Option<Distribution> = None;
    let mut base = p.clone();
    let mut m = m;
    loop {
        if m & 1 == 1 {
            acc = Some(match acc {
                None => base.clone(),
                Some(a) => convolve(table, &a, &base)?,
            });
        }
        m >>= 1;
        if m == 0 {
            break;
        }
        base = convolve(table, &base, &base)?;
    }
    Ok(acc.expect("m >= 1 sets at least one bit"))
}

/// Half the l1 distance.
pub fn tv_distance(p: &Distribution, q: &Distribution) -> Result<f64> {
    check_dim(p.n(), q.n())?;
    let d: f64 = p.p.iter().zip(&q.p).map(|(a, b)| (a - b).abs()).sum();
    Ok((0.5 * d).clamp(0.0, 1.0))
}

/// `ξ₁ ⊕ ξ₂` has the law of `ξ` within `tol` in total variation.
pub fn is_stable(table: &LutTable, p: &Distribution, tol: f64) -> Result<bool> {
    Ok(tv_distance(&convolve(table, p, p)?, p)? <= tol)
}

/// Outcome of [`limit`].
#[derive(Debug, Clone, PartialEq)]
pub enum LimitResult {
    /// The pseudo-sums converge; `doublings` is `k` with `limit = law(S_{2^k})`.
    Converged { limit: Distribution, doublings: usize },
    /// The pseudo-sums keep moving. `period` is the smallest `r` with
    /// `S_{m+r} ≈ S_m` along the detected orbit, if one was found.
    Cycle { period: Option<usize> },
    MaxIterations,
}

/// Looks for the limit of `S_m = X_1 ⊕ ... ⊕ X_m` as `m → ∞`.
///
/// Iterates `q_{k+1} = q_k ⊕ q_k` (so `q_k` is the law of `S_{2^k}`). Once
/// consecutive iterates agree within `tol` the candidate is probed with one
/// more summand: a genuine limit `ξ` of the full sequence satisfies
/// `ξ ⊕ X = ξ`, while an odd/even oscillation fails that test and is
/// reported as [`LimitResult::Cycle`]. A recurring iterate without
/// convergence is also a cycle.
pub fn limit(
    table: &LutTable,
    p: &Distribution,
    tol: f64,
    max_doublings: usize,
) -> Result<LimitResult> {
    check_dim(table.n(), p.n())?;
    table.require_associative("limit")?;
    if !(tol > 0.0) {
        return Err(Error::Input(format!("tolerance must be positive, got {tol}")));
    }
    if max_doublings == 0 {
        return Err(Error::Input("max_doublings must be at least 1".into()));
    }

    let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut history: Vec<Distribution> = Vec::new();
    seen.insert(quantize(p), 0);
    history.push(p.clone());

    let mut q = p.clone();
    let mut settled = 0;
    for k in 0..max_doublings {
        let next = convolve(table, &q, &q)?;
        if tv_distance(&next, &q)? <= tol {
            settled += 1;
            if settled == SETTLE_STEPS || k + 1 == max_doublings {
                let probe = tv_distance(&convolve(table, &q, p)?, &q)?;
                if probe <= tol {
                    return Ok(LimitResult::Converged {
                        limit: q,
                        doublings: k,
                    });
                }
                let period = period_hint(table, &q, p, tol)?;
                return Ok(LimitResult::Cycle { period });
            }
        } else {
            settled = 0;
            let key = quantize(&next);
            if let Some(&idx) = seen.get(&key) {
                if tv_distance(&history[idx], &next)? <= tol {
                    let period = period_hint(table, &next, p, tol)?;
                    return Ok(LimitResult::Cycle { period });
                }
            }
            seen.insert(key, history.len());
            history.push(next.clone());
        }
        q = next;
    }
    Ok(LimitResult::MaxIterations)
}

fn quantize(p: &Distribution) -> Vec<i64> {
    p.p.iter()
        .map(|v| (v / RECURRENCE_QUANTUM).round() as i64)
        .collect()
}

fn period_hint(
    table: &LutTable,
    q: &Distribution,
    p: &Distribution,
    tol: f64,
) -> Result<Option<usize>> {
    let tol = tol.max(1e-9);
    let mut x = q.clone();
    for r in 1..=2 * table.n() {
        x = convolve(table, &x, p)?;
        if tv_distance(&x, q)? <= tol {
            return Ok(Some(r));
        }
    }
    Ok(None)
}
